"""Classical level-1 modular forms and exact decomposition in the monomial basis.

The basis of weight k is the set of monomials E4^a E6^b with 4a+6b = k;
``in_basis`` solves for the coordinates of a form on its first dim(M_k)
coefficients and then checks every remaining known coefficient, so a
successful decomposition doubles as a modularity certificate at the
truncation level.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from functools import lru_cache

from . import _kernels
from .arith import ONE, ZERO, InconsistentSystem, Rat, as_rat, bernoulli, rat_str, solve_exact
from .qseries import QSeries, delta_series


def sigma(a: int, n: int) -> int:
    """Divisor power sum over d | n."""
    if n < 1:
        raise ValueError("sigma is defined for n >= 1")
    if a < 1:
        raise ValueError("sigma exponent must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**a
            e = n // d
            if e != d:
                total += e**a
        d += 1
    return total


class NotModularError(ValueError):
    """Raised when a series fails to decompose in the modular basis."""


@dataclass(frozen=True)
class Form:
    """A q-series tagged with its weight.

    ``quasimodular`` marks the ring generated by E2: such objects may be
    multiplied and differentiated but are rejected by every operation that
    requires honest modularity.
    """

    weight: int
    series: QSeries
    is_cusp: bool = False
    quasimodular: bool = False

    def __post_init__(self):
        if self.weight < 0 or self.weight % 2:
            raise ValueError(f"weight must be a nonnegative even integer, got {self.weight}")
        if self.weight == 2 and not self.quasimodular:
            raise ValueError("weight 2 carries no modular forms; only quasimodular E2 lives there")
        if self.is_cusp and self.series[0] != 0:
            raise ValueError("cusp forms have vanishing constant term")

    @property
    def prec(self) -> int:
        return self.series.prec

    def __getitem__(self, n: int) -> Rat:
        return self.series[n]

    def __add__(self, other: "Form") -> "Form":
        if self.weight != other.weight:
            raise ValueError(f"weight mismatch {self.weight} vs {other.weight}")
        return Form(
            self.weight,
            self.series + other.series,
            is_cusp=self.is_cusp and other.is_cusp,
            quasimodular=self.quasimodular or other.quasimodular,
        )

    def __sub__(self, other: "Form") -> "Form":
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, Form):
            return Form(
                self.weight + other.weight,
                self.series * other.series,
                is_cusp=self.is_cusp or other.is_cusp,
                quasimodular=self.quasimodular or other.quasimodular,
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Form":
        c = as_rat(c)
        return Form(
            self.weight,
            self.series.scale(c),
            is_cusp=self.is_cusp or c == 0,
            quasimodular=self.quasimodular,
        )

    def __pow__(self, e: int) -> "Form":
        if e < 0:
            raise ValueError("negative powers are not supported")
        return Form(
            self.weight * e,
            self.series**e,
            is_cusp=self.is_cusp and e > 0,
            quasimodular=self.quasimodular and e > 0,
        )

    def derive(self, j: int = 1) -> "Form":
        """D^j of the series; the result is quasimodular of weight + 2j."""
        if j == 0:
            return self
        return Form(self.weight + 2 * j, self.series.derive(j), is_cusp=False, quasimodular=True)


@lru_cache(maxsize=None)
def eisenstein(k: int, prec: int) -> Form:
    """Normalized weight-k Eisenstein series 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k % 2 or k < 4:
        raise ValueError(f"Eisenstein weight must be even and >= 4 (for weight 2 use e2), got {k}")
    c = Rat(-2 * k) / bernoulli(k)
    return Form(k, QSeries([ONE] + [c * sigma(k - 1, n) for n in range(1, prec)]))


@lru_cache(maxsize=None)
def e2(prec: int) -> Form:
    """The quasimodular series of weight 2: 1 - 24 sum sigma_1(n) q^n."""
    return Form(2, QSeries([ONE] + [Rat(-24 * sigma(1, n)) for n in range(1, prec)]), quasimodular=True)


@lru_cache(maxsize=None)
def one(prec: int) -> Form:
    """The constant 1 as the weight-0 form."""
    return Form(0, QSeries.one(prec))


@lru_cache(maxsize=None)
def delta(prec: int) -> Form:
    """The discriminant cusp form of weight 12."""
    return Form(12, delta_series(prec), is_cusp=True)


# ---------------------------------------------------------------------------
# Shared Ramanujan tau table.


class _TauCache:
    def __init__(self):
        self._lock = threading.Lock()
        self._table: list[int] = [0]

    def ensure(self, nmax: int) -> list[int]:
        if len(self._table) <= nmax:
            with self._lock:
                if len(self._table) <= nmax:
                    self._table = _kernels.tau_numbers(nmax)
        return self._table

    def value(self, n: int) -> int:
        if n < 1:
            raise ValueError("tau(n) needs n >= 1")
        if n >= len(self._table):
            raise ValueError(
                f"tau table too short: have {len(self._table) - 1} entries, "
                f"need at least {n}; call tau_table({n}) first"
            )
        return self._table[n]


_tau_cache = _TauCache()


def tau_table(nmax: int) -> list[int]:
    """Prepare (and return) the shared tau table up to tau(nmax)."""
    return _tau_cache.ensure(nmax)


def tau(n: int) -> int:
    """tau(n) from the prepared table; errors if the table is too short."""
    return _tau_cache.value(n)


# ---------------------------------------------------------------------------
# Dimensions and the monomial basis.


def dim_mk(k: int) -> int:
    """dim M_k at level 1."""
    if k < 0 or k % 2:
        return 0
    if k == 0:
        return 1
    if k == 2:
        return 0
    return k // 12 if k % 12 == 2 else k // 12 + 1


def dim_sk(k: int) -> int:
    """dim S_k at level 1 (cusp forms)."""
    if k < 4:
        return 0
    return dim_mk(k) - 1


@lru_cache(maxsize=None)
def mk_basis(k: int, prec: int) -> tuple[Form, ...]:
    """All monomials E4^a E6^b of weight k, a descending."""
    if k % 2 or k < 4:
        raise ValueError(f"monomial basis needs even weight >= 4, got {k}")
    out = []
    for a, b in _monomial_exponents(k):
        out.append(eisenstein(4, prec) ** a * eisenstein(6, prec) ** b)
    return tuple(out)


@dataclass(frozen=True)
class BasisCoords:
    """Exact coordinates of a weight-k form on the E4^a E6^b monomials."""

    weight: int
    coords: tuple[tuple[tuple[int, int], Rat], ...]  # ((a, b), coefficient), a descending

    def coeff(self, a: int, b: int) -> Rat:
        for (aa, bb), c in self.coords:
            if (aa, bb) == (a, b):
                return c
        return ZERO

    def as_dict(self) -> dict:
        return {ab: c for ab, c in self.coords}

    def reconstruct(self, prec: int) -> Form:
        total = None
        for (a, b), c in self.coords:
            term = (eisenstein(4, prec) ** a * eisenstein(6, prec) ** b).scale(c)
            total = term if total is None else total + term
        if total is None:
            raise ValueError("empty coordinate list")
        return Form(self.weight, total.series)

    def to_json(self) -> str:
        return json.dumps(
            {
                "weight": self.weight,
                "terms": [{"a": a, "b": b, "coeff": rat_str(c)} for (a, b), c in self.coords],
            }
        )


def _monomial_exponents(k: int) -> list[tuple[int, int]]:
    out = []
    for b in range(k // 6 + 1):
        rem = k - 6 * b
        if rem >= 0 and rem % 4 == 0:
            out.append((rem // 4, b))
    return out


def in_basis(f: Form) -> BasisCoords:
    """Exact decomposition of f over the weight-f monomials.

    The linear system is solved on the leading coefficients and verified on
    every remaining known coefficient; any mismatch (for example a
    quasimodular input) raises :class:`NotModularError`.
    """
    if f.quasimodular:
        raise NotModularError("not modular of this weight: input carries the quasimodular marker")
    if f.weight < 4 or f.weight % 2:
        raise NotModularError(f"not modular of this weight: weight {f.weight} has no modular forms")
    exponents = _monomial_exponents(f.weight)
    dim = len(exponents)
    if f.prec < dim + 5:
        raise ValueError(f"precision {f.prec} too low to certify a weight-{f.weight} decomposition (need {dim + 5})")
    basis = mk_basis(f.weight, f.prec)
    columns = [list(b.series.coeffs) for b in basis]
    try:
        sol = solve_exact(columns, list(f.series.coeffs))
    except InconsistentSystem as exc:
        raise NotModularError(f"not modular of this weight: {exc}") from exc
    return BasisCoords(f.weight, tuple(zip(exponents, sol)))


@lru_cache(maxsize=None)
def _e12_delta_matrix(prec: int) -> tuple[BasisCoords, BasisCoords]:
    return in_basis(eisenstein(12, prec)), in_basis(delta(prec))


def e12_delta_coords(f: Form) -> tuple[Rat, Rat]:
    """Coordinates of a weight-12 form on {E12, Delta}."""
    if f.weight != 12:
        raise ValueError("E12/Delta coordinates only exist in weight 12")
    coords = in_basis(f)
    e12c, deltac = _e12_delta_matrix(f.prec)
    cols = [[e12c.coeff(3, 0), e12c.coeff(0, 2)], [deltac.coeff(3, 0), deltac.coeff(0, 2)]]
    target = [coords.coeff(3, 0), coords.coeff(0, 2)]
    x = solve_exact(cols, target)
    return x[0], x[1]
