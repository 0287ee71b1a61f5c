"""Vectorised evaluation over every model of a fixed size.

A ``Family`` stands for all models on worlds w0..w{n-1} over a given
signature.  Models are numbered by a mixed-radix index (relation bits,
then valuation bits, then nominal choices) and evaluated in chunks with
numpy, one bitmask of true worlds per model.  This is what makes the
exhaustive bound-4 sweeps affordable; the pointwise evaluator in
``checker`` stays the reference implementation and the two are
cross-checked in the tests.
"""
from __future__ import annotations

from typing import Iterator, Optional

import numpy as np

from .formula import (
    Announce, Diamond, Exists, Formula, Neg, Nominal, Or, Prop, Remove, Top, expand,
)
from .kripke import Model, PointedModel

CHUNK = 1 << 20


class Family:
    def __init__(self, n: int, props=(), labels=("r",), nominals=()):
        if not 1 <= n <= 8:
            raise ValueError("families support 1..8 worlds")
        self.n = n
        self.props = list(props)
        self.labels = list(labels)
        self.nominals = list(nominals)
        self.worlds = [f"w{i}" for i in range(n)]
        self.rel_bits = n * n * len(self.labels)
        self.val_bits = n * len(self.props)
        self.nom_radix = (n + 1) ** len(self.nominals)
        self.size = (1 << self.rel_bits) * (1 << self.val_bits) * self.nom_radix
        self.full = (1 << n) - 1

    # -- decoding ------------------------------------------------------

    def _decode(self, idx: np.ndarray) -> dict:
        n = self.n
        rowmask = np.int64((1 << n) - 1)
        rel = idx & np.int64((1 << self.rel_bits) - 1)
        rest = idx >> np.int64(self.rel_bits)
        vals = rest & np.int64((1 << self.val_bits) - 1)
        nomcode = rest >> np.int64(self.val_bits)
        succ = {}
        for li, lbl in enumerate(self.labels):
            base = li * n * n
            succ[lbl] = [((rel >> np.int64(base + s * n)) & rowmask).astype(np.uint8)
                         for s in range(n)]
        val = {}
        for pi, p in enumerate(self.props):
            val[p] = ((vals >> np.int64(pi * n)) & rowmask).astype(np.uint8)
        nom = {}
        for ni, name in enumerate(self.nominals):
            choice = nomcode % (n + 1)
            nomcode = nomcode // (n + 1)
            nom[name] = np.where(choice < n, np.left_shift(1, np.minimum(choice, n - 1)),
                                 0).astype(np.uint8)
        return {"succ": succ, "val": val, "nom": nom, "count": len(idx)}

    def model(self, i: int) -> Model:
        d = self._decode(np.array([i], dtype=np.int64))
        ws = self.worlds
        rels = {}
        for lbl in self.labels:
            rels[lbl] = frozenset((ws[s], ws[t]) for s in range(self.n)
                                  for t in range(self.n) if int(d["succ"][lbl][s][0]) >> t & 1)
        val = {p: frozenset(ws[t] for t in range(self.n) if int(d["val"][p][0]) >> t & 1)
               for p in self.props}
        noms = {}
        for name in self.nominals:
            bits = int(d["nom"][name][0])
            noms[name] = ws[bits.bit_length() - 1] if bits else None
        return Model(frozenset(ws), rels, val, noms)

    def models(self) -> Iterator[Model]:
        for i in range(self.size):
            yield self.model(i)

    # -- evaluation ----------------------------------------------------

    def chunks(self, chunk: int = CHUNK) -> Iterator[tuple]:
        for start in range(0, self.size, chunk):
            idx = np.arange(start, min(self.size, start + chunk), dtype=np.int64)
            yield start, self._decode(idx)

    def extents(self, f: Formula, chunk: int = CHUNK) -> Iterator[tuple]:
        """Yields (start index, array of truth-set bitmasks) per chunk."""
        core = expand(f)
        for start, d in self.chunks(chunk):
            yield start, _Vec(d, self.n).ext(core)

    def all_extents(self, f: Formula) -> np.ndarray:
        return np.concatenate([e for _, e in self.extents(f)])

    def first_failure(self, f: Formula) -> Optional[PointedModel]:
        for start, ext in self.extents(f):
            bad = np.nonzero(ext != self.full)[0]
            if len(bad):
                i = int(bad[0])
                missing = self.full & ~int(ext[i])
                point = (missing & -missing).bit_length() - 1
                return PointedModel(self.model(start + i), self.worlds[point])
        return None


class _Vec:
    def __init__(self, d: dict, n: int):
        self.d = d
        self.n = n
        self.memo: dict = {}
        self.live_all = np.full(d["count"], (1 << n) - 1, dtype=np.uint8)

    def ext(self, f: Formula) -> np.ndarray:
        return self._ext(f, self.live_all, ("all",))

    def _ext(self, f, live, key):
        mk = (id(f), key)
        hit = self.memo.get(mk)
        if hit is not None:
            return hit[1]
        out = self._node(f, live, key)
        self.memo[mk] = (f, out)
        return out

    def _node(self, f, live, key):
        d = self.d
        if isinstance(f, Prop):
            v = d["val"].get(f.name)
            return np.zeros_like(live) if v is None else v & live
        if isinstance(f, Nominal):
            v = d["nom"].get(f.name)
            return np.zeros_like(live) if v is None else v & live
        if isinstance(f, Top):
            return live
        if isinstance(f, Neg):
            return live & ~self._ext(f.sub, live, key)
        if isinstance(f, Or):
            return self._ext(f.left, live, key) | self._ext(f.right, live, key)
        if isinstance(f, Diamond):
            sub = self._ext(f.sub, live, key)
            rows = d["succ"].get(f.label)
            out = np.zeros_like(live)
            if rows is None:
                return out
            for s in range(self.n):
                hit = (rows[s] & sub) != 0
                out |= hit.astype(np.uint8) << np.uint8(s)
            return out & live
        if isinstance(f, Remove):
            pre = self._ext(f.pre, live, key)
            out = np.zeros_like(live)
            for t in range(self.n):
                bit = np.uint8(1 << t)
                sel = (pre & bit) != 0
                if not sel.any():
                    continue
                sub_live = live & ~bit
                post = self._ext(f.post, sub_live, key + (("rm", t),))
                out |= np.where(sel, post, np.uint8(0))
            return out
        if isinstance(f, Announce):
            pre = self._ext(f.pre, live, key)
            return self._ext(f.post, pre, key + (("ann", id(f.pre)),))
        if isinstance(f, Exists):
            sub = self._ext(f.sub, live, key)
            return np.where(sub != 0, live, np.uint8(0))
        raise TypeError(f"unexpected node {f!r}")
