"""Hot numeric kernels: divisor-sum sieves and the eta-product convolution.

Both kernels exist in two variants with identical results: a numba
``@njit`` version and a pure-numpy fallback.  The numba path is used when
numba imports successfully and the environment variable ``TAUFORMS_JIT``
is not set to ``0``.  ``benchmarks/bench_kernels.py`` compares the two.

Everything here works on int64 residues; exact big-integer results are
recovered by CRT in :func:`tau_numbers`.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised indirectly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("TAUFORMS_JIT", "1") != "0"

# Four 31-bit primes.  Their product (~2.1e37) exceeds twice the Deligne
# bound d(n) * n^5.5 for every n <= 1e6, so signed CRT reconstruction of
# tau(n) is exact there; _MAX_PREC keeps us inside that window.
_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579)
_MAX_PREC = 1_000_000


def jacobi_terms(prec: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponents and coefficients of prod(1-q^n)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    exps, coeffs = [], []
    k = 0
    while k * (k + 1) // 2 < prec:
        exps.append(k * (k + 1) // 2)
        coeffs.append((1 - 2 * (k & 1)) * (2 * k + 1))
        k += 1
    return np.array(exps, dtype=np.int64), np.array(coeffs, dtype=np.int64)


def _eta24_modp_numpy(prec, p, exps, coeffs):
    res = np.zeros(prec, dtype=np.int64)
    res[exps] = coeffs % p
    for _ in range(7):
        acc = np.zeros(prec, dtype=np.int64)
        for e, c in zip(exps.tolist(), coeffs.tolist()):
            if e == 0:
                acc += c * res
            else:
                acc[e:] += c * res[: prec - e]
        res = acc % p
    return res


if _HAVE_NUMBA:

    @njit(cache=True)
    def _eta24_modp_njit(prec, p, exps, coeffs):  # pragma: no cover - jitted
        res = np.zeros(prec, dtype=np.int64)
        nt = exps.shape[0]
        for i in range(nt):
            res[exps[i]] = coeffs[i] % p
        for _ in range(7):
            acc = np.zeros(prec, dtype=np.int64)
            for i in range(nt):
                e = exps[i]
                c = coeffs[i]
                # |c| < 2**11 and res[j] < 2**31, so each product stays
                # below 2**42 and the sum of <2**11 of them below 2**53.
                for j in range(prec - e):
                    acc[e + j] += c * res[j]
            for j in range(prec):
                acc[j] %= p
            res = acc
        return res


def eta24_modp(prec: int, p: int) -> np.ndarray:
    """Coefficients of prod(1-q^n)^24 mod p, as the 8th power of the cube."""
    exps, coeffs = jacobi_terms(prec)
    if USE_NUMBA:
        return _eta24_modp_njit(prec, p, exps, coeffs)
    return _eta24_modp_numpy(prec, p, exps, coeffs)


def tau_numbers(nmax: int) -> list[int]:
    """Exact tau(1..nmax) as Python ints, via CRT over the mod-p kernels.

    Entry 0 of the returned list is unused (set to 0).
    """
    if nmax < 1:
        return [0]
    if nmax > _MAX_PREC:
        raise ValueError(f"tau table limited to {_MAX_PREC} (CRT width)")
    residues = [eta24_modp(nmax, p).tolist() for p in _PRIMES]
    modulus = 1
    for p in _PRIMES:
        modulus *= p
    recomb = []
    for p in _PRIMES:
        mi = modulus // p
        recomb.append(mi * pow(mi, -1, p))
    half = modulus // 2
    out = [0] * (nmax + 1)
    for i in range(nmax):
        x = sum(b * col[i] for b, col in zip(recomb, residues)) % modulus
        out[i + 1] = x - modulus if x > half else x
    return out


def _sigma_range_numpy(a, nmax):
    out = np.zeros(nmax + 1, dtype=np.int64)
    for d in range(1, nmax + 1):
        out[d::d] += d**a
    return out


if _HAVE_NUMBA:

    @njit(cache=True)
    def _sigma_range_njit(a, nmax):  # pragma: no cover - jitted
        out = np.zeros(nmax + 1, dtype=np.int64)
        for d in range(1, nmax + 1):
            dp = d**a
            for j in range(d, nmax + 1, d):
                out[j] += dp
        return out


def sigma_range(a: int, nmax: int) -> np.ndarray:
    """sigma_a(n) for n = 0..nmax (entry 0 is 0); values must fit int64."""
    if a not in (1, 3):
        raise ValueError("sieve only built for sigma_1 and sigma_3")
    if nmax > _MAX_PREC + 100:
        raise ValueError("sigma sieve range exceeds int64 safety bound")
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    if USE_NUMBA:
        return _sigma_range_njit(a, nmax)
    return _sigma_range_numpy(a, nmax)
