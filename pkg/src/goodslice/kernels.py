"""Modular hot loops: F_p rank and batched polynomial evaluation.

Two interchangeable backends share one signature:

* ``numba`` -- ``@njit`` compiled loops (default when numba imports)
* ``numpy`` -- vectorised fallback

Set ``GOODSLICE_NUMBA=0`` to force the numpy path.  All primes are below
2**31 so every product of two residues fits in int64.
"""

from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("GOODSLICE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError("numba disabled by GOODSLICE_NUMBA")
    from numba import njit
except ImportError:  # pragma: no cover - depends on environment
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


# -- numpy reference path -----------------------------------------------------


def rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = m[r] * inv % p
        below = m[r + 1 :, c].copy()
        rows = np.nonzero(below)[0]
        if rows.size:
            idx = r + 1 + rows
            m[idx] = (m[idx] - (below[rows, None] * m[r][None, :]) % p) % p
        r += 1
    return r


def eval_mod_p_numpy(exps: np.ndarray, coeffs: np.ndarray, offsets: np.ndarray, point: np.ndarray, p: int) -> np.ndarray:
    nterms, nvars = exps.shape
    out = np.zeros(len(offsets) - 1, dtype=np.int64)
    if nterms == 0:
        return out
    maxe = int(exps.max()) if exps.size else 0
    # table[e, i] = point[i]**e mod p
    table = np.ones((maxe + 1, nvars), dtype=np.int64)
    pt = np.asarray(point, dtype=np.int64) % p
    for e in range(1, maxe + 1):
        table[e] = table[e - 1] * pt % p
    vals = np.asarray(coeffs, dtype=np.int64) % p
    cols = np.arange(nvars)
    for i in range(nvars):
        vals = vals * table[exps[:, i], cols[i]] % p
    for k in range(len(offsets) - 1):
        seg = vals[offsets[k] : offsets[k + 1]]
        acc = 0
        for v in seg.tolist():
            acc = (acc + v) % p
        out[k] = acc
    return out


# -- numba path ---------------------------------------------------------------

if njit is not None:

    @njit(cache=True, nogil=True)
    def _rank_mod_p_nb(a, p):
        m = a.copy()
        nrows, ncols = m.shape
        for i in range(nrows):
            for j in range(ncols):
                m[i, j] %= p
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if m[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    tmp = m[r, j]
                    m[r, j] = m[piv, j]
                    m[piv, j] = tmp
            # modular inverse by Fermat
            base = m[r, c]
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            for j in range(c, ncols):
                m[r, j] = m[r, j] * inv % p
            for i in range(r + 1, nrows):
                f = m[i, c]
                if f != 0:
                    for j in range(c, ncols):
                        m[i, j] = (m[i, j] - f * m[r, j]) % p
            r += 1
        return r

    @njit(cache=True, nogil=True)
    def _eval_mod_p_nb(exps, coeffs, offsets, point, p):
        nterms, nvars = exps.shape
        npolys = offsets.shape[0] - 1
        out = np.zeros(npolys, dtype=np.int64)
        maxe = 0
        for t in range(nterms):
            for i in range(nvars):
                if exps[t, i] > maxe:
                    maxe = exps[t, i]
        table = np.ones((maxe + 1, nvars), dtype=np.int64)
        for i in range(nvars):
            x = point[i] % p
            for e in range(1, maxe + 1):
                table[e, i] = table[e - 1, i] * x % p
        for k in range(npolys):
            acc = 0
            for t in range(offsets[k], offsets[k + 1]):
                v = coeffs[t] % p
                for i in range(nvars):
                    e = exps[t, i]
                    if e != 0:
                        v = v * table[e, i] % p
                acc = (acc + v) % p
            out[k] = acc
        return out


def rank_mod_p(a: np.ndarray, p: int, backend: str | None = None) -> int:
    """Rank of an integer matrix over F_p."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    if (backend or BACKEND) == "numba" and njit is not None:
        return int(_rank_mod_p_nb(a, np.int64(p)))
    return rank_mod_p_numpy(a, p)


def eval_mod_p(exps: np.ndarray, coeffs: np.ndarray, offsets: np.ndarray, point: np.ndarray, p: int,
               backend: str | None = None) -> np.ndarray:
    """Evaluate a batch of polynomials packed as (exps, coeffs, offsets) at ``point`` mod p.

    Polynomial k owns rows ``offsets[k]:offsets[k+1]`` of ``exps``/``coeffs``.
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    point = np.ascontiguousarray(point, dtype=np.int64)
    if exps.ndim != 2:
        exps = exps.reshape(0, len(point))
    if (backend or BACKEND) == "numba" and njit is not None:
        return _eval_mod_p_nb(exps, coeffs, offsets, point, np.int64(p))
    return eval_mod_p_numpy(exps, coeffs, offsets, point, p)
