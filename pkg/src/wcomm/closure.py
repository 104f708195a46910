"""Subalgebras of A^L generated by given vectors, enumerated by term size.

Every element carries the first term found for it: smaller terms first, ties
broken by operation order and then by the (lexicographic) order of the child
elements.  This is the canonical witness used throughout the package.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .config import CapExceeded, get_limits
from .terms import App

_CHUNK = 1 << 22  # entries of A per batch
_CODE_TABLE_MAX = 1 << 24  # entries of a precomputed operation table on codes


def _decode(codes, n, length):
    """Rows for base-``n`` codes (coordinate j has weight n**j)."""
    codes = np.asarray(codes, dtype=np.int64)
    return (codes[:, None] // n ** np.arange(length, dtype=np.int64)) % n


@functools.lru_cache(maxsize=8)
def _code_table(a, name, length):
    """The operation ``name`` of ``a**length`` acting on codes."""
    table = a.tables[name]
    arity = table.ndim
    n = a.size
    count = n ** length
    rows = _decode(np.arange(count), n, length)
    dtype = np.int16 if count < 2 ** 15 else np.int32
    out = np.zeros((count,) * arity, dtype=dtype)
    weights = n ** np.arange(length, dtype=np.int64)
    if arity == 1:
        return (table[rows] @ weights).astype(dtype)
    step = max(1, (1 << 22) // count)
    for lo in range(0, count, step):
        hi = min(count, lo + step)
        acc = np.zeros((hi - lo, count), dtype=np.int64)
        for j in range(length):
            acc += table[rows[lo:hi, j][:, None], rows[None, :, j]] * weights[j]
        out[lo:hi] = acc
    return out


def _compositions(total, parts):
    """Ordered ways to write ``total`` as ``parts`` positive integers, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class Closure:
    """The subalgebra of ``a**L`` generated by ``gens``.

    ``gens`` is a list of ``(Var, vector)``.  Iterate with :meth:`run`, which stops
    early when ``stop(vectors) -> index or None`` fires on a freshly added batch.
    After a full run ``complete`` is True and ``vectors`` is closed.
    """

    def __init__(self, a, gens, limit=None, length=None, work=None):
        self.a = a
        self.limit = limit if limit is not None else get_limits().max_free
        self.work_limit = work if work is not None else get_limits().max_work
        self.work = 0
        self.length = len(gens[0][1]) if gens else (length or 1)
        self.dtype = np.uint8 if a.size <= 256 else np.int32
        bits = max(1, int(a.size - 1).bit_length())
        self._per_code = max(1, 62 // bits)
        self._bits = bits
        # small coordinate spaces: vectors are keyed by their base-n code and
        # unary/binary operations act on codes through precomputed tables
        space = a.size ** self.length
        self._coded = space <= _CODE_TABLE_MAX
        self._seen = np.zeros(space, dtype=bool) if self._coded else None
        self._code_ops = {name: arity in (1, 2) and space ** 2 <= _CODE_TABLE_MAX
                          for name, arity in a.signature.operations} if self._coded else {}
        self._codes = np.zeros(64, dtype=np.int64)
        self._buf = np.zeros((64, self.length), dtype=self.dtype)
        self.prov = []  # (App op name or Var, child indices)
        self.sizes = []
        self.levels = {}
        self.index = {}
        self.complete = False
        self.found = None
        self._terms = {}
        self._ops = [(name, arity, a.tables[name]) for name, arity in a.signature.operations]
        rows, prov = [], []
        for v, vec in gens:
            rows.append(np.asarray(vec))
            prov.append((v, ()))
        for name, arity, table in self._ops:
            if arity == 0:
                rows.append(np.full(self.length, int(table)))
                prov.append((name, ()))
        self._level = 1
        self._pending_first = (np.array(rows, dtype=self.dtype).reshape(-1, self.length), prov)

    # -- keys -------------------------------------------------------------
    def _keys(self, rows):
        rows = rows.astype(np.int64)
        if self._coded:
            return rows @ (self.a.size ** np.arange(self.length, dtype=np.int64))
        if self.length <= self._per_code:
            return rows @ (np.int64(1) << (self._bits * np.arange(self.length, dtype=np.int64)))
        k = -(-self.length // self._per_code)
        pad = k * self._per_code - self.length
        if pad:
            rows = np.concatenate([rows, np.zeros((len(rows), pad), dtype=np.int64)], axis=1)
        packed = rows.reshape(len(rows), k, self._per_code) @ (
            np.int64(1) << (self._bits * np.arange(self._per_code, dtype=np.int64)))
        packed = np.ascontiguousarray(packed)
        return packed.view(np.dtype((np.void, 8 * k))).ravel()

    @staticmethod
    def _hashable(key):
        return key.tobytes() if isinstance(key, np.void) else int(key)

    def _add(self, rows, provs, size, keys=None):
        """Add the not-yet-seen rows (first occurrence wins); return new indices.

        In coded mode ``rows`` may be None when ``keys`` (the codes) are given.
        """
        if keys is None:
            if not len(rows):
                return []
            keys = self._keys(rows)
        if self._coded:
            fresh = np.flatnonzero(~self._seen[keys])
            if not len(fresh):
                return []
            _, first = np.unique(keys[fresh], return_index=True)
            first = np.sort(fresh[first])
            self._seen[keys[first]] = True
            return self._append(first, keys[first], provs, size, _decode(keys[first], self.a.size, self.length))
        else:
            _, first = np.unique(keys, return_index=True)
            first.sort()
        keep = [i for i in first if self._hashable(keys[i]) not in self.index]
        return self._append(keep, keys[keep], provs, size, rows[keep])

    def _append(self, picked, keys, provs, size, new_rows):
        if not len(picked):
            return []
        n0 = len(self.prov)
        n1 = n0 + len(picked)
        new_idx = list(range(n0, n1))
        for idx, i, k in zip(new_idx, picked, keys):
            self.index[self._hashable(k)] = idx
            self.prov.append(provs(int(i)))
        self.sizes.extend([size] * len(picked))
        if n1 > len(self._buf):
            cap = max(n1, 2 * len(self._buf))
            grown = np.zeros((cap, self.length), dtype=self.dtype)
            grown[:n0] = self._buf[:n0]
            self._buf = grown
            codes = np.zeros(cap, dtype=np.int64)
            codes[:n0] = self._codes[:n0]
            self._codes = codes
        self._buf[n0:n1] = new_rows
        if self._coded:
            self._codes[n0:n1] = keys
        self.levels.setdefault(size, []).extend(new_idx)
        if len(self.prov) > self.limit:
            raise CapExceeded("closure", len(self.prov), self.limit)
        return new_idx

    @property
    def vectors(self):
        return self._buf[:len(self.prov)]

    def lookup(self, vec):
        key = self._keys(np.asarray(vec).reshape(1, -1))[0]
        return self.index.get(self._hashable(key))

    # -- enumeration ------------------------------------------------------
    def run(self, stop=None, max_term_size=None):
        """Enumerate levels until closed, ``stop`` fires, or ``max_term_size`` is passed.

        Returns the index found by ``stop`` (or None).  Raises CapExceeded past the limit.
        A run interrupted by ``stop`` cannot be resumed.
        """
        if self.found is not None:
            raise RuntimeError("closure was interrupted by a stop condition")
        if self._pending_first is not None:
            rows, prov = self._pending_first
            self._pending_first = None
            new = self._add(rows, lambda i: prov[i], 1)
            if stop is not None and (hit := self._check(stop, new)) is not None:
                return hit
        max_arity = max((r for _, r, _ in self._ops), default=0)
        while True:
            s = self._level + 1
            s_max = max(self.sizes, default=1)
            if max_arity == 0 or s > 1 + max_arity * s_max:
                self.complete = True
                return None
            if max_term_size is not None and s > max_term_size:
                return None
            self._level = s
            for name, arity, table in self._ops:
                if arity == 0:
                    continue
                for comp in _compositions(s - 1, arity):
                    groups = [self.levels.get(c, []) for c in comp]
                    if any(not g for g in groups):
                        continue
                    for new in self._apply(name, table, groups, s):
                        if stop is not None and (hit := self._check(stop, new)) is not None:
                            return hit

    def _spend(self, candidates, per):
        self.work += candidates * per
        if self.work > self.work_limit:
            raise CapExceeded("closure work (table lookups)", self.work, self.work_limit)

    def _apply(self, name, table, groups, size):
        groups = [np.asarray(g) for g in groups]
        if self._code_ops.get(name):
            yield from self._apply_coded(name, groups, size)
            return
        counts = [len(g) for g in groups]
        total = int(np.prod(counts))
        step = max(1, _CHUNK // max(1, self.length))
        for start in range(0, total, step):
            flat = np.arange(start, min(total, start + step))
            self._spend(len(flat), self.length)
            picks = [g[i] for g, i in zip(groups, np.unravel_index(flat, counts))]
            rows = table[tuple(self.vectors[p] for p in picks)]
            yield self._add(rows, lambda i, picks=picks: (name, tuple(int(p[i]) for p in picks)), size)

    def _apply_coded(self, name, groups, size):
        ct = _code_table(self.a, name, self.length)
        if len(groups) == 1:
            (g,) = groups
            self._spend(len(g), 1)
            yield self._add(None, lambda i: (name, (int(g[i]),)), size, keys=ct[self._codes[g]].astype(np.int64))
            return
        g1, g2 = groups
        c2 = self._codes[g2]
        step = max(1, _CHUNK // len(g2))
        for lo in range(0, len(g1), step):
            h1 = g1[lo:lo + step]
            self._spend(len(h1) * len(g2), 1)
            keys = ct[self._codes[h1][:, None], c2[None, :]].ravel().astype(np.int64)
            n2 = len(g2)
            yield self._add(None, lambda i, h1=h1: (name, (int(h1[i // n2]), int(g2[i % n2]))), size, keys=keys)

    def _check(self, stop, new):
        if not new:
            return None
        hit = stop(self.vectors[new])
        if hit is None:
            return None
        self.found = new[hit]
        return self.found

    def run_all(self):
        self.run()
        return self

    # -- witnesses ---------------------------------------------------------
    def term(self, idx):
        if idx in self._terms:
            return self._terms[idx]
        head, children = self.prov[idx]
        if not isinstance(head, str):
            t = head
        else:
            t = App(head, tuple(self.term(c) for c in children))
        self._terms[idx] = t
        return t

    def __len__(self):
        return len(self.prov)


def assignment_grid(n, g):
    """All g-tuples over range(n), lexicographic, shape (n**g, g)."""
    return np.array(list(itertools.product(range(n), repeat=g)), dtype=np.int64).reshape(n ** g, g)
