"""Filtered discrete-Morse reduction of a simplicial complex.

Elementary collapses ``(a, b)`` (``a`` a free face of the maximal cell ``b``)
are performed greedily; when none is available the highest-dimensional
remaining cell is declared critical and removed.  Pairs only match cells of
equal filtration level, so the restriction of the matching to every sublevel
complex F_m is again a valid Morse matching of F_m.

Chains move between the complex and its Morse complex through

* ``project``: the flow, a chain map onto critical cells;
* ``lift``: a chain map back, turning a Morse cycle into an honest cycle.

All incidences are +-1, so both maps run over the integers; GF(2) results are
reduced mod 2 afterwards.
"""
from __future__ import annotations

import numba
import numpy as np

from .complex import SimplicialComplex


@numba.njit(cache=True)
def _reduce_kernel(face_ptr, face_idx, cof_ptr, cof_idx, level):  # pragma: no cover - jit
    n = len(level)
    cnt = np.empty(n, np.int64)
    for i in range(n):
        cnt[i] = cof_ptr[i + 1] - cof_ptr[i]
    alive = np.ones(n, np.bool_)
    in_stack = np.ones(n, np.bool_)
    stack = np.empty(n, np.int64)
    for i in range(n):
        stack[i] = n - 1 - i
    top = n
    pa = np.empty(n // 2 + 1, np.int64)
    pb = np.empty(n // 2 + 1, np.int64)
    npairs = 0
    crit = np.empty(n, np.int64)
    ncrit = 0
    scan = n - 1
    remaining = n
    while remaining > 0:
        if top == 0:
            while not alive[scan]:
                scan -= 1
            c = scan
            alive[c] = False
            remaining -= 1
            crit[ncrit] = c
            ncrit += 1
            for j in range(face_ptr[c], face_ptr[c + 1]):
                f = face_idx[j]
                cnt[f] -= 1
                if not in_stack[f]:
                    stack[top] = f
                    top += 1
                    in_stack[f] = True
                if cnt[f] == 0:
                    for jj in range(face_ptr[f], face_ptr[f + 1]):
                        g = face_idx[jj]
                        if alive[g] and not in_stack[g]:
                            stack[top] = g
                            top += 1
                            in_stack[g] = True
            continue
        top -= 1
        t = stack[top]
        in_stack[t] = False
        if not alive[t] or cnt[t] != 1:
            continue
        s = -1
        for j in range(cof_ptr[t], cof_ptr[t + 1]):
            if alive[cof_idx[j]]:
                s = cof_idx[j]
                break
        if cnt[s] != 0 or level[s] != level[t]:
            continue
        alive[t] = False
        alive[s] = False
        remaining -= 2
        pa[npairs] = t
        pb[npairs] = s
        npairs += 1
        for rep in range(2):
            x = s if rep == 0 else t
            for j in range(face_ptr[x], face_ptr[x + 1]):
                f = face_idx[j]
                if not alive[f]:
                    continue
                cnt[f] -= 1
                if not in_stack[f]:
                    stack[top] = f
                    top += 1
                    in_stack[f] = True
                if cnt[f] == 0:
                    for jj in range(face_ptr[f], face_ptr[f + 1]):
                        g = face_idx[jj]
                        if alive[g] and not in_stack[g]:
                            stack[top] = g
                            top += 1
                            in_stack[g] = True
    return pa[:npairs], pb[:npairs], crit[:ncrit]


@numba.njit(cache=True)
def _project_kernel(coef, pa, pb, lam, face_ptr, face_idx, modulus):  # pragma: no cover - jit
    for t in range(len(pa)):
        a = pa[t]
        c = coef[a]
        if c == 0:
            continue
        f = c * lam[t]
        b = pb[t]
        sign = 1
        for j in range(face_ptr[b], face_ptr[b + 1]):
            x = face_idx[j]
            coef[x] -= f * sign
            if modulus:
                coef[x] %= modulus
            sign = -sign
    return coef


@numba.njit(cache=True)
def _lift_kernel(z, bd, pa, pb, lam, face_ptr, face_idx, modulus):  # pragma: no cover - jit
    for t in range(len(pa)):
        a = pa[t]
        v = bd[a]
        if v == 0:
            continue
        y = -v * lam[t]
        if modulus:
            y %= modulus
        b = pb[t]
        z[b] += y
        if modulus:
            z[b] %= modulus
        sign = 1
        for j in range(face_ptr[b], face_ptr[b + 1]):
            x = face_idx[j]
            bd[x] += y * sign
            if modulus:
                bd[x] %= modulus
            sign = -sign
    return z


class FilteredReduction:
    """Morse reduction of a complex filtered by integer cell levels.

    ``levels[k]`` gives the level of each k-simplex (must be monotone along
    faces); the sublevel complex ``F_m`` is the set of cells of level ``<= m``.
    """

    def __init__(self, K: SimplicialComplex, levels: list[np.ndarray] | None = None):
        self.complex = K
        self.dim = K.dim
        off = K.offsets()
        self.offsets = off
        n = int(off[-1])
        self.n = n
        if levels is None:
            lev = np.zeros(n, dtype=np.int64)
        else:
            lev = np.concatenate([np.asarray(l, dtype=np.int64) for l in levels]) if n else np.zeros(0, np.int64)
        self.level = lev
        cnt = np.zeros(n, dtype=np.int64)
        chunks = []
        for k in range(1, K.dim + 1):
            cnt[off[k]:off[k + 1]] = k + 1
            chunks.append((K.faces(k) + off[k - 1]).ravel())
        self.face_ptr = np.concatenate([[0], np.cumsum(cnt)]).astype(np.int64)
        self.face_idx = np.concatenate(chunks).astype(np.int64) if chunks else np.zeros(0, np.int64)
        owner = np.repeat(np.arange(n, dtype=np.int64), cnt)
        order = np.argsort(self.face_idx, kind="stable")
        cof_idx = owner[order]
        cof_cnt = np.bincount(self.face_idx, minlength=n) if n else np.zeros(0, np.int64)
        cof_ptr = np.concatenate([[0], np.cumsum(cof_cnt)]).astype(np.int64)
        if n:
            pa, pb, crit = _reduce_kernel(self.face_ptr, self.face_idx, cof_ptr, cof_idx, lev)
        else:
            pa = pb = crit = np.zeros(0, np.int64)
        self.dims = np.searchsorted(off, np.arange(n), side="right") - 1
        pdim = self.dims[pa] if len(pa) else np.zeros(0, np.int64)
        self._pairs = {}
        for k in range(K.dim):
            sel = pdim == k
            a, b = pa[sel].copy(), pb[sel].copy()
            # incidence of a in the boundary of b is (-1)^(position of a)
            faces = self.face_idx[self.face_ptr[b][:, None] + np.arange(k + 2)]
            pos = np.argmax(faces == a[:, None], axis=1)
            self._pairs[k] = (a, b, np.where(pos % 2 == 0, 1, -1).astype(np.int64))
        crit = np.sort(crit)
        self.critical = {k: crit[(crit >= off[k]) & (crit < off[k + 1])] for k in range(K.dim + 1)}
        self._mbd: dict[int, dict] = {}

    # ------------------------------------------------------------------
    def critical_cells(self, k: int, level: int | None = None) -> np.ndarray:
        """Global ids of critical k-cells (sorted), optionally restricted to F_level."""
        c = self.critical.get(k, np.zeros(0, np.int64))
        if level is not None:
            c = c[self.level[c] <= level]
        return c

    def _empty_pairs(self):
        z = np.zeros(0, np.int64)
        return z, z, z

    def project(self, k: int, coef: np.ndarray, modulus: int = 0) -> np.ndarray:
        """Flow a global k-chain (int coefficient array of length n) to critical cells."""
        coef = np.array(coef, dtype=np.int64, copy=True)
        pa, pb, lam = self._pairs.get(k, self._empty_pairs())
        coef = _project_kernel(coef, pa, pb, lam, self.face_ptr, self.face_idx, modulus)
        # drop cells that were matched downward
        pa_d, pb_d, _ = self._pairs.get(k - 1, self._empty_pairs())
        coef[pb_d] = 0
        if modulus:
            coef %= modulus
        return coef

    def boundary_global(self, k: int, coef: np.ndarray, modulus: int = 0) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        if k == 0:
            return out
        lo, hi = self.offsets[k], self.offsets[k + 1]
        idx = np.nonzero(coef[lo:hi])[0] + lo
        for i in range(k + 1):
            faces = self.face_idx[self.face_ptr[idx] + i]
            np.add.at(out, faces, coef[idx] * (-1) ** i)
        if modulus:
            out %= modulus
        return out

    def lift(self, k: int, coef: np.ndarray, modulus: int = 0) -> np.ndarray:
        """Turn a Morse k-cycle (global array supported on critical cells) into a cycle."""
        z = np.array(coef, dtype=np.int64, copy=True)
        if k == 0:
            return z
        bd = self.boundary_global(k, z, modulus)
        pa, pb, lam = self._pairs.get(k - 1, self._empty_pairs())
        return _lift_kernel(z, bd, pa, pb, lam, self.face_ptr, self.face_idx, modulus)

    def morse_boundary(self, k: int) -> dict[int, dict[int, int]]:
        """Integer Morse boundary: critical k-cell -> {critical (k-1)-cell: coeff}."""
        if k not in self._mbd:
            out = {}
            for c in self.critical_cells(k):
                if k == 0:
                    out[int(c)] = {}
                    continue
                v = np.zeros(self.n, dtype=np.int64)
                v[c] = 1
                img = self.project(k - 1, self.boundary_global(k, v))
                nz = np.nonzero(img)[0]
                out[int(c)] = {int(i): int(img[i]) for i in nz}
            self._mbd[k] = out
        return self._mbd[k]
