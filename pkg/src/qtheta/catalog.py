"""Named catalog of the mock theta functions and their series variants.

Every function is registered once with its defining sum and, for the starred
(|q|>1 continued) variant, the character expansion plus whatever rewritings
exist: terminating forms, double-sum surgery forms, phase-carrying forms.
All variants of one id agree coefficient-by-coefficient at any common
truncation; the identity registry in ``identities`` turns that statement into
runnable checks.

The second half of the module evaluates starred functions at roots of unity
by several independent routes:

* ``eichler``  - the exact radial (Abel) limit through the finite
  Bernoulli-weighted character sum;
* ``qseries``  - exact evaluation of a q-series form at the root: terminating
  sums, geometrically collapsing sums, or group-terminating double sums.
  The Le-type rewritings of the order-5 functions and the double-sum form of
  the order-7 function evaluate at roots to exactly half the radial limit
  (their tails contribute a second copy in the limit); the published factor
  is applied and separately asserted by the test suite;
* ``surgery``  - the surgery double sums, which group-terminate at roots and
  give the radial value directly;
* ``radial``   - an independent numeric extrapolation along the radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import chars
from .chars import false_theta_radial_limit, false_theta_radial_numeric
from .cyclo import CycloNumber, _context
from .errors import (DivergenceError, DomainError, UnknownIdError,
                     UnsupportedMethodError)
from .report import VerificationReport
from .series import (Monomial, QSeries, pochhammer, pochhammer_inverse,
                     q_binomial_rows, series_inverse, substitute_sign)


def _zeta_in(order: int, power: int) -> CycloNumber:
    """Root of unity kept at the stated field order (no gcd reduction)."""
    ctx = _context(order)
    return CycloNumber(order, ctx.power(power % order), 1)


# phase constants of the order-3 phase-carrying functions, fixed inside the
# 12th cyclotomic field
_E_2PI3 = _zeta_in(12, 4)    # e^(2 pi i/3)
_E_PI3 = _zeta_in(12, 2)     # e^(pi i/3)
_E_M2PI3 = _zeta_in(12, 8)   # e^(-2 pi i/3)
_E_MPI3 = _zeta_in(12, 10)   # e^(-pi i/3)


def _mono(power, coeff=1) -> Monomial:
    return Monomial.q(Fraction(power), coeff)


def _geom_inv(e: int, t: int, coeff=1) -> QSeries:
    """1/(1 - coeff q^e) truncated at t (integer exponents)."""
    if e <= 0:
        raise DomainError("geometric factor needs a positive exponent")
    out: dict = {}
    j, c = 0, 1
    while j * e < t:
        if c:
            out[j * e] = c
        c = c * coeff
        j += 1
    k = coeff.order if isinstance(coeff, CycloNumber) else 1
    return QSeries.make(1, t, out, k)


def _lin_factor(e: int, t: int, coeff=1) -> QSeries:
    """(1 - coeff q^e) truncated at t."""
    out = {0: 1}
    if e < t and coeff:
        out[e] = -coeff
    k = coeff.order if isinstance(coeff, CycloNumber) else 1
    return QSeries.make(1, t, out, k)


@dataclass
class NamedFunction:
    id: str
    order_label: str
    variants: dict = field(default_factory=dict)  # name -> callable(T) -> QSeries
    coefficient_field_order: int = 1
    # character expansion data (starred functions): (character id, D, shift)
    character: Optional[tuple[str, int, int]] = None

    def generator(self, variant: Optional[str] = None) -> Callable[[int], QSeries]:
        name = variant or "defining"
        try:
            return self.variants[name]
        except KeyError:
            raise UnknownIdError(
                f"function {self.id!r} has no variant {name!r} "
                f"(has: {', '.join(sorted(self.variants))})") from None


_functions: dict[str, NamedFunction] = {}


def register_function(fn: NamedFunction) -> NamedFunction:
    _functions[fn.id] = fn
    return fn


def get_function(fn_id: str) -> NamedFunction:
    try:
        return _functions[fn_id]
    except KeyError:
        raise UnknownIdError(f"unknown function id: {fn_id!r} "
                             f"(known: {', '.join(sorted(_functions))})") from None


def function_ids() -> list[str]:
    return sorted(_functions)


def expand(fn_id: str, truncation: int, variant: Optional[str] = None) -> QSeries:
    """Series of a catalogued function to the requested truncation, taken in
    the function's natural fractional variable."""
    return get_function(fn_id).generator(variant)(truncation)


# ---------------------------------------------------------------------------
# Formal generators
# ---------------------------------------------------------------------------

def _sum_terms(t: int, lead: Callable[[int], int], term: Callable[[int, int], QSeries],
               start: int = 0, base=None) -> QSeries:
    """sum_(n>=start) term(n, t) while lead(n) < t."""
    total = QSeries.zero(1, t) if base is None else base
    n = start
    while lead(n) < t:
        total = total + term(n, t)
        n += 1
    return total


def _chi0(t):
    return _sum_terms(t, lambda n: n, lambda n, T: pochhammer_inverse(
        _mono(n + 1), 1, n, T).shift(_mono(n)).truncate(T))


def _chi1(t):
    return _sum_terms(t, lambda n: n, lambda n, T: pochhammer_inverse(
        _mono(n + 1), 1, n + 1, T).shift(_mono(n)).truncate(T))


def _chi0_star(t):
    def term(n, T):
        s = pochhammer_inverse(_mono(n + 1), 1, n, T)
        return s.shift(_mono(Fraction(3 * n * n - n, 2), -1 if n % 2 else 1)).truncate(T)
    return QSeries.constant(2, 1, t) - _sum_terms(t, lambda n: (3 * n * n - n) // 2, term)


def _chi1_star(t):
    def term(n, T):
        s = pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(Fraction(3 * n * (n + 1), 2), -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: 3 * n * (n + 1) // 2, term)


def _false_theta(char_id: str, denom: int, shift: int):
    def gen(t):
        return chars.eichler_tilde_series(chars.get_character(char_id), denom, shift, t * denom)
    return gen


def _chi0_star_le_product(t):
    return _sum_terms(
        t, lambda m: 2 * m + 1,
        lambda m, T: pochhammer(_mono(m + 1), 1, m, T).shift(_mono(2 * m + 1)).truncate(T),
        base=QSeries.one(1, t))


def _chi0_star_le_sum(t):
    return _sum_terms(t, lambda n: n, lambda n, T: pochhammer(
        _mono(n) if n else _mono(0, 0), 1, n, T).shift(_mono(n)).truncate(T))


def _chi1_star_le(t):
    return _sum_terms(t, lambda n: n, lambda n, T: pochhammer(
        _mono(n + 1), 1, n, T).shift(_mono(n)).truncate(T))


def _double_sum(t: int, kmin_exp: Callable[[int], int], exponent: Callable[[int, int], int],
                sign_of_n: bool = True, step: int = 1, scale: int = 1,
                constant: int = 1, outer_sign: int = 1) -> QSeries:
    """constant + outer_sign * sum_(k>=n>=0) (-1)^n [k n]_(q^step) q^(exponent(k,n)),
    accumulated on raw dicts for speed."""
    total = {0: constant} if constant else {}
    rows = q_binomial_rows(t, step)
    row = next(rows)
    k = 0
    while kmin_exp(k) < t:
        for n in range(0, k + 1):
            e0 = exponent(k, n)
            if e0 >= t:
                continue
            sgn = outer_sign * (-1 if (n % 2 and sign_of_n) else 1)
            for e, c in row[n].items():
                ee = e0 + e
                if ee < t:
                    s = total.get(ee, 0) + sgn * c
                    if s:
                        total[ee] = s
                    else:
                        total.pop(ee, None)
        k += 1
        row = next(rows)
    return QSeries.make(1, t, total)


def _chi0_star_surgery(t):
    return _double_sum(t, lambda k: k * (k + 1) + 1,
                       lambda k, n: k * (k + 1) + n * (3 * n + 5) // 2 + k * n + 1)


def _phi3_star_surgery(t):
    return _double_sum(t, lambda k: k * k + 1,
                       lambda k, n: n * (2 * n + 3) + k * k + 1, step=2)


def _F0_star_double(t):
    return _double_sum(t, lambda k: 2 * k + 1,
                       lambda k, n: (n + 2) * k - n * (n + 1) // 2 + 1, outer_sign=-1)


def _F0_star_surgery(t):
    return _double_sum(t, lambda k: (k + 1) ** 2 + k,
                       lambda k, n: k + n * (n - 1) // 2 + (k + n + 1) ** 2, outer_sign=-1)


def _phi3(t):
    return _sum_terms(t, lambda n: n * n, lambda n, T: pochhammer_inverse(
        _mono(2, -1), 2, n, T).shift(_mono(n * n)).truncate(T))


def _phi3_star(t):
    total = QSeries.zero(1, t)
    inv = QSeries.one(1, t)
    for n in range(t):
        if n:
            inv = inv * _geom_inv(2 * n, t, -1)
        total = total + inv.shift(_mono(n)).truncate(t)
    return total


def _phi3_star_finite(t):
    total = QSeries.one(1, t)
    num = QSeries.one(1, t)
    for n in range(t):
        if n:
            num = num * _lin_factor(n, t, 1 if n % 2 else -1)
        total = total + num.shift(_mono(n + 1)).truncate(t)
    return total


def _nu3(t):
    return _sum_terms(t, lambda n: n * (n + 1), lambda n, T: pochhammer_inverse(
        _mono(1, -1), 2, n + 1, T).shift(_mono(n * (n + 1))).truncate(T))


def _nu3_star(t):
    total = QSeries.zero(1, t)
    inv = _geom_inv(1, t, -1)
    for n in range(t):
        if n:
            inv = inv * _geom_inv(2 * n + 1, t, -1)
        total = total + inv.shift(_mono(n)).truncate(t)
    return total


def _nu3_star_finite(t):
    return _sum_terms(t, lambda n: 2 * n, lambda n, T: pochhammer(
        _mono(2), 4, n, T).shift(_mono(2 * n)).truncate(T))


def _f3(t):
    def term(n, T):
        inv = pochhammer_inverse(_mono(1, -1), 1, n, T)
        return (inv * inv).shift(_mono(n * n)).truncate(T)
    return _sum_terms(t, lambda n: n * n, term)


def _f3_fine(t):
    total = QSeries.constant(2, 1, t)
    inv = QSeries.one(1, t)
    for n in range(t):
        if n:
            inv = inv * _geom_inv(n, t, -1)
        total = total - inv.shift(_mono(n, -1 if n % 2 else 1)).truncate(t)
    return total


def _f3_star(t):
    return QSeries.constant(2, 1, t) - _sum_terms(
        t, lambda n: n * (n - 1) // 2,
        lambda n, T: pochhammer_inverse(_mono(1, -1), 1, n, T).shift(
            _mono(Fraction(n * (n - 1), 2), -1 if n % 2 else 1)).truncate(T))


def _f3_star_false(t):
    return chars.eichler_tilde_series(chars.get_character("psi6_1"), 24, -1, 24 * t) * 2


def _omega3(t):
    def term(n, T):
        inv = pochhammer_inverse(_mono(1), 2, n + 1, T)
        return (inv * inv).shift(_mono(2 * n * (n + 1))).truncate(T)
    return _sum_terms(t, lambda n: 2 * n * (n + 1), term)


def _omega3_fine(t):
    total = QSeries.zero(1, t)
    inv = _geom_inv(1, t)
    for n in range(t):
        if n:
            inv = inv * _geom_inv(2 * n + 1, t)
        total = total + inv.shift(_mono(n)).truncate(t)
    return total


def _omega3_star(t):
    return _sum_terms(t, lambda n: n * (n + 1), lambda n, T: pochhammer_inverse(
        _mono(1), 2, n + 1, T).shift(_mono(n * (n + 1), -1 if n % 2 else 1)).truncate(T))


def _chi3(t):
    total = QSeries.zero(1, t)
    prod = QSeries.one(1, t)
    n = 0
    while n * n < t:
        if n > 0:
            factor = QSeries.make(1, t, {e: c for e, c in ((0, 1), (n, -1), (2 * n, 1))
                                         if e < t})
            prod = prod * series_inverse(factor)
        total = total + prod.shift(_mono(n * n)).truncate(t)
        n += 1
    return total


def _chi3_fine(t):
    total = QSeries.constant(CycloNumber.one(12), 1, t)
    inv = QSeries.one(1, t)
    for n in range(1, t):
        inv = inv * _geom_inv(n, t, -_E_2PI3)
        phase = _E_2PI3 * _coeff_root_pow(_E_PI3, n)
        total = total + inv.shift(Monomial(-phase, n, 1)).truncate(t)
    return total


def _chi3_star(t):
    def term(n, T):
        inv = pochhammer_inverse(Monomial(_E_PI3, 1, 1), 1, n, T)
        phase = _E_2PI3 * _coeff_root_pow(_E_MPI3, n)
        return inv.shift(Monomial(-phase, n * (n - 1) // 2, 1)).truncate(T)
    return QSeries.constant(1, 1, t) + _sum_terms(t, lambda n: n * (n - 1) // 2, term, start=1)


def _chi3_star_false(t):
    chi = chars.get_character("psi6_1")
    coeffs = {}
    n = 0
    while n * n - 1 < 24 * t:
        c = chi(n)
        if c:
            val = (1 + _coeff_root_pow(_E_M2PI3, n)) * c
            if val:
                coeffs[n * n - 1] = val
        n += 1
    return QSeries.make(24, 24 * t, coeffs, 12)


def _rho3(t):
    total = QSeries.zero(1, t)
    prod = QSeries.one(1, t)
    n = 0
    while 2 * n * (n + 1) < t:
        e = 2 * n + 1
        factor = QSeries.make(1, t, {x: c for x, c in ((0, 1), (e, 1), (2 * e, 1)) if x < t})
        prod = prod * series_inverse(factor)
        total = total + prod.shift(_mono(2 * n * (n + 1))).truncate(t)
        n += 1
    return total


def _rho3_fine(t):
    total = QSeries.zero(1, t)
    inv = _geom_inv(1, t, _E_2PI3)
    for n in range(t):
        if n:
            inv = inv * _geom_inv(2 * n + 1, t, _E_2PI3)
        total = total + inv.shift(Monomial(_coeff_root_pow(_E_M2PI3, n), n, 1)).truncate(t)
    return total


def _rho3_star(t):
    def term(n, T):
        inv = pochhammer_inverse(Monomial(_E_M2PI3, 1, 1), 2, n + 1, T)
        return inv.shift(Monomial(_coeff_root_pow(_E_MPI3, n), n * (n + 1), 1)).truncate(T)
    return _sum_terms(t, lambda n: n * (n + 1), term)


def _rho3_star_false(t):
    chi = chars.get_character("psi6_1p2")
    coeffs = {}
    n = 0
    while n * n - 1 < 3 * t:
        c = chi(n)
        if c:
            val = _coeff_root_pow(_E_2PI3, 1 - n) * c
            if val:
                coeffs[n * n - 1] = val
        n += 1
    return QSeries.make(3, 3 * t, coeffs, 12)


def _coeff_root_pow(z: CycloNumber, k: int) -> CycloNumber:
    k %= 12
    out = _zeta_in(12, 0)
    for _ in range(k):
        out = out * z
    return out


def _F0(t):
    return _sum_terms(t, lambda n: n * n, lambda n, T: pochhammer_inverse(
        _mono(n + 1), 1, n, T).shift(_mono(n * n)).truncate(T))


def _F0_star(t):
    return _sum_terms(t, lambda n: n * (n + 1) // 2, lambda n, T: pochhammer_inverse(
        _mono(n + 1), 1, n, T).shift(
            _mono(Fraction(n * (n + 1), 2), -1 if n % 2 else 1)).truncate(T))


def _F1(t):
    return _sum_terms(t, lambda n: n * n, lambda n, T: pochhammer_inverse(
        _mono(n), 1, n, T).shift(_mono(n * n)).truncate(T), start=1)


def _F1_star(t):
    return _sum_terms(t, lambda n: n * (n - 1) // 2, lambda n, T: pochhammer_inverse(
        _mono(n), 1, n, T).shift(
            _mono(Fraction(n * (n - 1), 2), -1 if n % 2 else 1)).truncate(T), start=1)


def _F2(t):
    return _sum_terms(t, lambda n: n * (n + 1), lambda n, T: pochhammer_inverse(
        _mono(n + 1), 1, n + 1, T).shift(_mono(n * (n + 1))).truncate(T))


def _F2_star(t):
    return -_sum_terms(t, lambda n: n * (n + 3) // 2, lambda n, T: pochhammer_inverse(
        _mono(n + 1), 1, n + 1, T).shift(
            _mono(Fraction(n * (n + 3), 2), -1 if n % 2 else 1)).truncate(T))


def _phi6(t):
    def term(n, T):
        s = pochhammer(_mono(1), 2, n, T) * pochhammer_inverse(_mono(1, -1), 1, 2 * n, T)
        return s.shift(_mono(n * n, -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: n * n, term)


def _phi6_star(t):
    total = QSeries.zero(1, t)
    run = QSeries.one(1, t)
    for n in range(t):
        if n:
            run = run * _lin_factor(2 * n - 1, t) * _geom_inv(2 * n - 1, t, -1) \
                * _geom_inv(2 * n, t, -1)
        total = total + run.shift(_mono(n)).truncate(t)
    return total


def _psi6(t):
    def term(n, T):
        s = pochhammer(_mono(1), 2, n, T) * pochhammer_inverse(_mono(1, -1), 1, 2 * n + 1, T)
        return s.shift(_mono((n + 1) ** 2, -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: (n + 1) ** 2, term)


def _psi6_star(t):
    total = QSeries.zero(1, t)
    run = _geom_inv(1, t, -1)
    for n in range(t):
        if n:
            run = run * _lin_factor(2 * n - 1, t) * _geom_inv(2 * n, t, -1) \
                * _geom_inv(2 * n + 1, t, -1)
        total = total + run.shift(_mono(n)).truncate(t)
    return total


def _rho6(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 1, n, T) * pochhammer_inverse(_mono(1), 2, n + 1, T)
        return s.shift(_mono(Fraction(n * (n + 1), 2))).truncate(T)
    return _sum_terms(t, lambda n: n * (n + 1) // 2, term)


def _rho6_star(t):
    total = QSeries.zero(1, t)
    run = _geom_inv(1, t)
    for n in range(t):
        if n:
            run = run * _lin_factor(n, t, -1) * _geom_inv(2 * n + 1, t)
        total = total + run.shift(_mono(n, -1 if n % 2 else 1)).truncate(t)
    return total


def _Phi10(t):
    return _sum_terms(t, lambda n: n * (n + 1) // 2, lambda n, T: pochhammer_inverse(
        _mono(1), 2, n + 1, T).shift(_mono(Fraction(n * (n + 1), 2))).truncate(T))


def _Phi10_star(t):
    return _sum_terms(t, lambda n: n * (n + 3) // 2, lambda n, T: pochhammer_inverse(
        _mono(1), 2, n + 1, T).shift(
            _mono(Fraction(n * (n + 3), 2), -1 if n % 2 else 1)).truncate(T))


def _Psi10(t):
    return _sum_terms(t, lambda n: (n + 1) * (n + 2) // 2, lambda n, T: pochhammer_inverse(
        _mono(1), 2, n + 1, T).shift(_mono(Fraction((n + 1) * (n + 2), 2))).truncate(T))


def _Psi10_star(t):
    return _sum_terms(t, lambda n: n * (n + 1) // 2, lambda n, T: pochhammer_inverse(
        _mono(1), 2, n + 1, T).shift(
            _mono(Fraction(n * (n + 1), 2), -1 if n % 2 else 1)).truncate(T))


def _X10(t):
    return _sum_terms(t, lambda n: n * n, lambda n, T: pochhammer_inverse(
        _mono(1, -1), 1, 2 * n, T).shift(_mono(n * n, -1 if n % 2 else 1)).truncate(T))


def _X10_star(t):
    return _sum_terms(t, lambda n: n * (n + 1), lambda n, T: pochhammer_inverse(
        _mono(1, -1), 1, 2 * n, T).shift(_mono(n * (n + 1), -1 if n % 2 else 1)).truncate(T))


def _chi10(t):
    return _sum_terms(t, lambda n: (n + 1) ** 2, lambda n, T: pochhammer_inverse(
        _mono(1, -1), 1, 2 * n + 1, T).shift(_mono((n + 1) ** 2, -1 if n % 2 else 1)).truncate(T))


def _chi10_star(t):
    return _sum_terms(t, lambda n: n * (n + 1), lambda n, T: pochhammer_inverse(
        _mono(1, -1), 1, 2 * n + 1, T).shift(_mono(n * (n + 1), -1 if n % 2 else 1)).truncate(T))


def _D5(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 1, n, T) * pochhammer_inverse(_mono(1), 2, n + 1, T)
        return s.shift(_mono(n)).truncate(T)
    return _sum_terms(t, lambda n: n, term)


def _D5_star(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 1, n, T) * pochhammer_inverse(_mono(1), 2, n + 1, T)
        return s.shift(_mono(Fraction(n * (n + 1), 2), -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: n * (n + 1) // 2, term)


def _D6(t):
    def term(n, T):
        s = pochhammer(_mono(2, -1), 2, n, T) * pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(n)).truncate(T)
    return _sum_terms(t, lambda n: n, term)


def _D6_star(t):
    def term(n, T):
        s = pochhammer(_mono(2, -1), 2, n, T) * pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(Fraction(n * (n + 1), 2), -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: n * (n + 1) // 2, term)


def _I12(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 2, n, T) * pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(2 * n)).truncate(T)
    return _sum_terms(t, lambda n: 2 * n, term)


def _I12_star(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 2, n, T) * pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(Fraction(n * (n + 1), 2), -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: n * (n + 1) // 2, term)


def _I13(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 2, n, T) * pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(n)).truncate(T)
    return _sum_terms(t, lambda n: n, term)


def _I13_star(t):
    def term(n, T):
        s = pochhammer(_mono(1, -1), 2, n, T) * pochhammer_inverse(_mono(n + 1), 1, n + 1, T)
        return s.shift(_mono(Fraction(n * (n + 3), 2), -1 if n % 2 else 1)).truncate(T)
    return _sum_terms(t, lambda n: n * (n + 3) // 2, term)


def _phi3_star_minus(t):
    return substitute_sign(_phi3_star(t))


def _build_functions():
    reg = register_function
    reg(NamedFunction("chi0", "5", {"defining": _chi0}))
    reg(NamedFunction("chi1", "5", {"defining": _chi1}))
    reg(NamedFunction("chi0_star", "5", {
        "defining": _chi0_star,
        "false_theta": _false_theta("chi60_111", 120, -1),
        "le_product": _chi0_star_le_product,
        "le_sum": _chi0_star_le_sum,
        "surgery": _chi0_star_surgery,
    }, character=("chi60_111", 120, -1)))
    reg(NamedFunction("chi1_star", "5", {
        "defining": _chi1_star,
        "false_theta": _false_theta("chi60_112", 120, -49),
        "le": _chi1_star_le,
    }, character=("chi60_112", 120, -49)))

    reg(NamedFunction("phi", "3", {"defining": _phi3}))
    reg(NamedFunction("nu", "3", {"defining": _nu3}))
    reg(NamedFunction("phi_star", "3", {
        "defining": _phi3_star,
        "false_theta": _false_theta("chi24_1", 24, -1),
        "finite": _phi3_star_finite,
        "surgery": _phi3_star_surgery,
    }, character=("chi24_1", 24, -1)))
    reg(NamedFunction("phi_star_minus", "3", {
        "defining": _phi3_star_minus,
        "false_theta": _false_theta("psi6_1", 24, -1),
    }, character=("psi6_1", 24, -1)))
    reg(NamedFunction("nu_star", "3", {
        "defining": _nu3_star,
        "false_theta": _false_theta("chi24_2", 24, -16),
        "finite": _nu3_star_finite,
    }, character=("chi24_2", 24, -16)))
    reg(NamedFunction("f", "3", {"defining": _f3, "fine_form": _f3_fine}))
    reg(NamedFunction("f_star", "3", {
        "defining": _f3_star,
        "false_theta": _f3_star_false,
    }, character=("psi6_1", 24, -1)))  # with overall weight 2
    reg(NamedFunction("omega", "3", {"defining": _omega3, "fine_form": _omega3_fine}))
    reg(NamedFunction("omega_star", "3", {
        "defining": _omega3_star,
        "false_theta": _false_theta("psi6_1p2", 3, -1),
    }, character=("psi6_1p2", 3, -1)))
    reg(NamedFunction("chi3", "3", {"defining": _chi3, "fine_form": _chi3_fine},
                      coefficient_field_order=12))
    reg(NamedFunction("chi3_star", "3", {
        "defining": _chi3_star,
        "false_theta": _chi3_star_false,
    }, coefficient_field_order=12))
    reg(NamedFunction("rho3", "3", {"defining": _rho3, "fine_form": _rho3_fine},
                      coefficient_field_order=12))
    reg(NamedFunction("rho3_star", "3", {
        "defining": _rho3_star,
        "false_theta": _rho3_star_false,
    }, coefficient_field_order=12))

    reg(NamedFunction("F0", "7", {"defining": _F0}))
    reg(NamedFunction("F1", "7", {"defining": _F1}))
    reg(NamedFunction("F2", "7", {"defining": _F2}))
    reg(NamedFunction("F0_star", "7", {
        "defining": _F0_star,
        "false_theta": _false_theta("chi84_111", 168, -1),
        "double_sum": _F0_star_double,
        "surgery": _F0_star_surgery,
    }, character=("chi84_111", 168, -1)))
    reg(NamedFunction("F1_star", "7", {
        "defining": _F1_star,
        "false_theta": _false_theta("chi84_112", 168, -25),
    }, character=("chi84_112", 168, -25)))
    reg(NamedFunction("F2_star", "7", {
        "defining": _F2_star,
        "false_theta": _false_theta("chi84_113", 168, -121),
    }, character=("chi84_113", 168, -121)))

    reg(NamedFunction("phi6", "6", {"defining": _phi6}))
    reg(NamedFunction("psi6", "6", {"defining": _psi6}))
    reg(NamedFunction("rho6", "6", {"defining": _rho6}))
    reg(NamedFunction("phi6_star", "6", {
        "defining": _phi6_star,
        "false_theta": _false_theta("psi12_1p5", 24, -1),
    }, character=("psi12_1p5", 24, -1)))
    reg(NamedFunction("psi6_star", "6", {
        "defining": _psi6_star,
        "false_theta": _false_theta("psi12_3", 24, -9),
    }, character=("psi12_3", 24, -9)))
    reg(NamedFunction("rho6_star", "6", {
        "defining": _rho6_star,
        "false_theta": _false_theta("psi24_6", 48, -36),
    }, character=("psi24_6", 48, -36)))

    reg(NamedFunction("Phi10", "10", {"defining": _Phi10}))
    reg(NamedFunction("Psi10", "10", {"defining": _Psi10}))
    reg(NamedFunction("X10", "10", {"defining": _X10}))
    reg(NamedFunction("chi10", "10", {"defining": _chi10}))
    reg(NamedFunction("Phi10_star", "10", {
        "defining": _Phi10_star,
        "false_theta": _false_theta("psi10_2p3", 5, -4),
    }, character=("psi10_2p3", 5, -4)))
    reg(NamedFunction("Psi10_star", "10", {
        "defining": _Psi10_star,
        "false_theta": _false_theta("psi10_1p4", 5, -1),
    }, character=("psi10_1p4", 5, -1)))
    reg(NamedFunction("X10_star", "10", {
        "defining": _X10_star,
        "false_theta": _false_theta("psi10_1", 40, -1),
    }, character=("psi10_1", 40, -1)))
    reg(NamedFunction("chi10_star", "10", {
        "defining": _chi10_star,
        "false_theta": _false_theta("psi10_3", 40, -9),
    }, character=("psi10_3", 40, -9)))

    reg(NamedFunction("D5", "2?", {"defining": _D5}))
    reg(NamedFunction("D6", "4?", {"defining": _D6}))
    reg(NamedFunction("I12", "8?", {"defining": _I12}))
    reg(NamedFunction("I13", "8?", {"defining": _I13}))
    reg(NamedFunction("D5_star", "2?", {
        "defining": _D5_star,
        "false_theta": _false_theta("psi4_1", 4, -1),
    }, character=("psi4_1", 4, -1)))
    reg(NamedFunction("D6_star", "4?", {
        "defining": _D6_star,
        "false_theta": _false_theta("psi8_1p3", 4, -1),
    }, character=("psi8_1p3", 4, -1)))
    reg(NamedFunction("I12_star", "8?", {
        "defining": _I12_star,
        "false_theta": _false_theta("psi16_1p7", 16, -1),
    }, character=("psi16_1p7", 16, -1)))
    reg(NamedFunction("I13_star", "8?", {
        "defining": _I13_star,
        "false_theta": _false_theta("psi16_3p5", 16, -9),
    }, character=("psi16_3p5", 16, -9)))


_build_functions()


# ---------------------------------------------------------------------------
# Root-of-unity evaluation
# ---------------------------------------------------------------------------

def _z(m: int, e: int) -> CycloNumber:
    return CycloNumber.root_of_unity(m, e % m)


class _FractionSum:
    """Accumulates sum a_0/d_0 + a_1/d_1 + ... where the denominator only ever
    extends multiplicatively; a single inversion happens at the end."""

    def __init__(self):
        self.num = CycloNumber.zero()
        self.den = CycloNumber.one()

    def extend_den(self, f: CycloNumber):
        if not f:
            raise DivergenceError("denominator factor vanishes at this root of unity")
        self.num = self.num * f
        self.den = self.den * f

    def add(self, a: CycloNumber):
        self.num = self.num + a

    def value(self) -> CycloNumber:
        return self.num * self.den.inv()


def _terminating_product_sum(m: int, j: int, *, numerator_factor, denominator_factor,
                             term_monomial, constant: int = 0,
                             cap: Optional[int] = None) -> CycloNumber:
    """Evaluate constant + sum_n term_monomial(n) * NUM_n / DEN_n at zeta_m^j
    where both NUM and DEN extend multiplicatively with n.

    ``numerator_factor(n)`` / ``denominator_factor(n)`` return lists of pairs
    (e, sign) describing the new factors (1 + sign * zeta^(j e)) entering at
    step n; once a numerator factor vanishes the tail is identically zero.
    A vanishing denominator factor makes the sum undefined at this root."""
    cap = cap or 10 * m + 40
    acc = _FractionSum()
    if constant:
        acc.add(CycloNumber.from_rational(constant))
    num = CycloNumber.one()
    for n in range(cap):
        for e, sign in numerator_factor(n):
            num = num * (1 + sign * _z(m, j * e))
        if not num:
            return acc.value()
        for e, sign in denominator_factor(n):
            acc.extend_den(1 + sign * _z(m, j * e))
        acc.add(num * term_monomial(n))
    raise DivergenceError(f"no terminating factor within cap {cap} terms")


def _collapse_sum(m: int, j: int, *, den_factor, term_numerator) -> CycloNumber:
    """Evaluate sum_n term_numerator(n) / DEN_n at zeta_m^j where DEN extends
    multiplicatively and the terms repeat with an exact ratio of modulus < 1
    after a full period of factors; the sum then collapses to
    (t_0 + ... + t_(p-1)) / (1 - ratio)."""
    r = m // math.gcd(m, j)
    candidates = [r, 2 * r, 4 * r]
    need = 2 * candidates[-1]
    nums: list[CycloNumber] = []
    facs: list[CycloNumber] = []
    dens: list[CycloNumber] = []
    den = CycloNumber.one()
    for n in range(need):
        f = CycloNumber.one()
        for e, sign in den_factor(n):
            f = f * (1 + sign * _z(m, j * e))
        if not f:
            raise DivergenceError("denominator factor vanishes at this root of unity")
        den = den * f
        nums.append(term_numerator(n))
        facs.append(f)
        dens.append(den)
    for p in candidates:
        if not any(nums[:p]):
            continue
        a0 = next(i for i in range(p) if nums[i])
        # ratio c = t_(a0+p)/t_a0 written as the pair A/B to avoid inversions
        A = nums[a0 + p] * dens[a0]
        B = dens[a0 + p] * nums[a0]
        if not all((nums[n + p] * dens[n]) * B == (nums[n] * dens[n + p]) * A
                   for n in range(p)):
            continue
        if abs(complex((A * B.inv()).to_complex(64))) >= 1:
            raise DivergenceError("periodic term ratio does not contract")
        # head numerator over the common denominator dens[p-1], by suffix products
        head_num = CycloNumber.zero()
        suffix = CycloNumber.one()
        for n in range(p - 1, -1, -1):
            head_num = head_num + nums[n] * suffix
            suffix = suffix * facs[n]
        return head_num * B * (dens[p - 1] * (B - A)).inv()
    raise DivergenceError("no exact geometric period found")


def _grouped_sum_at_root(m: int, j: int, inner, *, step: int = 1,
                         constant: int = 1) -> CycloNumber:
    """Sum over the outer index of a double sum whose inner groups vanish
    identically beyond a finite outer index at this root of unity.

    ``inner(k, row)`` receives the row of Gaussian binomials [k n] evaluated
    at the root (base zeta^(j*step)) and returns the k-th group.  Groups are
    accumulated until a run of 2R consecutive exact zeros appears (R = order
    of the evaluation point); a hard cap reports nontermination.
    """
    r = m // math.gcd(m, j)
    zero_run_needed = 2 * r
    cap = 12 * r + 24
    w_step = (j * step) % m
    total = CycloNumber.from_rational(constant) if constant else CycloNumber.zero()
    row: list[CycloNumber] = [CycloNumber.one()]
    run = 0
    k = 0
    while k < cap:
        v = inner(k, row)
        if v:
            total = total + v
            run = 0
        else:
            run += 1
            if run >= zero_run_needed:
                return total
        # extend the binomial row: [k+1 n] = [k n-1] + w^n [k n]
        new = [CycloNumber.one()]
        for n in range(1, k + 1):
            new.append(row[n - 1] + _z(m, w_step * n) * row[n])
        new.append(CycloNumber.one())
        row = new
        k += 1
    raise DivergenceError(f"double sum groups did not vanish within {cap} outer terms")


# per-function exact q-series routes ----------------------------------------

def _neg_pow(n: int) -> int:
    return -1 if n % 2 else 1


def _chi0_star_le_sum_at_root(m: int, j: int) -> CycloNumber:
    r = m // math.gcd(m, j)
    total = CycloNumber.zero()
    for n in range(r):
        term = _z(m, j * n)
        for i in range(n, 2 * n):
            term = term * (1 - _z(m, j * i))
            if not term:
                break
        total = total + term
    return total


def _chi1_star_le_at_root(m: int, j: int) -> CycloNumber:
    r = m // math.gcd(m, j)
    total = CycloNumber.zero()
    for n in range(r):
        term = _z(m, j * n)
        for i in range(n + 1, 2 * n + 1):
            term = term * (1 - _z(m, j * i))
            if not term:
                break
        total = total + term
    return total


def _phi3_star_finite_at_root(m: int, j: int) -> CycloNumber:
    # 1 + sum_n q^(n+1) (q; -q)_n, where (q; -q)_n gains (1 - (-1)^(n-1) q^n)
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(n, _neg_pow(n))] if n else [],
        denominator_factor=lambda n: [],
        term_monomial=lambda n: _z(m, j * (n + 1)),
        constant=1)


def _nu3_star_finite_at_root(m: int, j: int) -> CycloNumber:
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(4 * n - 2, -1)] if n else [],
        denominator_factor=lambda n: [],
        term_monomial=lambda n: _z(m, j * 2 * n))


def _omega3_star_at_root(m: int, j: int) -> CycloNumber:
    return _collapse_sum(
        m, j,
        den_factor=lambda n: [(2 * n + 1, -1)],
        term_numerator=lambda n: _neg_pow(n) * _z(m, j * n * (n + 1)))


def _Psi10_star_at_root(m: int, j: int) -> CycloNumber:
    return _collapse_sum(
        m, j,
        den_factor=lambda n: [(2 * n + 1, -1)],
        term_numerator=lambda n: _neg_pow(n) * _z(m, j * (n * (n + 1) // 2)))


def _X10_star_at_root(m: int, j: int) -> CycloNumber:
    def attempt_collapse():
        return _collapse_sum(
            m, j,
            den_factor=lambda n: [(2 * n - 1, 1), (2 * n, 1)] if n else [],
            term_numerator=lambda n: _neg_pow(n) * _z(m, j * n * (n + 1)))

    def grouped():
        def inner(k: int, row: list[CycloNumber]) -> CycloNumber:
            acc = CycloNumber.zero()
            for n in range(1, (k + 1) // 2 + 1):
                mm = k - 2 * n + 1
                acc = acc + _neg_pow(n + mm) * row[mm] * _z(m, j * (n * (n + 1) + mm))
            return acc
        return _grouped_sum_at_root(m, j, inner, constant=1)

    try:
        return attempt_collapse()
    except DivergenceError:
        return grouped()


def _rho6_star_at_root(m: int, j: int) -> CycloNumber:
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(n, 1)] if n else [],
        denominator_factor=lambda n: [(2 * n + 1, -1)],
        term_monomial=lambda n: _neg_pow(n) * _z(m, j * n))


def _D5_star_at_root(m: int, j: int) -> CycloNumber:
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(n, 1)] if n else [],
        denominator_factor=lambda n: [(2 * n + 1, -1)],
        term_monomial=lambda n: _neg_pow(n) * _z(m, j * (n * (n + 1) // 2)))


def _D6_star_at_root(m: int, j: int) -> CycloNumber:
    # (q^(n+1))_(n+1) is rewritten as (q)_(2n+1)/(q)_n so that both products
    # extend; the (q)_n part joins the numerator
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(2 * n, 1), (n, -1)] if n else [],
        denominator_factor=lambda n: ([(1, -1)] if n == 0 else [(2 * n, -1), (2 * n + 1, -1)]),
        term_monomial=lambda n: _neg_pow(n) * _z(m, j * (n * (n + 1) // 2)))


def _I12_star_at_root(m: int, j: int) -> CycloNumber:
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(2 * n - 1, 1), (n, -1)] if n else [],
        denominator_factor=lambda n: ([(1, -1)] if n == 0 else [(2 * n, -1), (2 * n + 1, -1)]),
        term_monomial=lambda n: _neg_pow(n) * _z(m, j * (n * (n + 1) // 2)))


def _phi6_star_at_root(m: int, j: int) -> CycloNumber:
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(2 * n - 1, -1)] if n else [],
        denominator_factor=lambda n: [(2 * n - 1, 1), (2 * n, 1)] if n else [],
        term_monomial=lambda n: _z(m, j * n))


def _psi6_star_at_root(m: int, j: int) -> CycloNumber:
    return _terminating_product_sum(
        m, j,
        numerator_factor=lambda n: [(2 * n - 1, -1)] if n else [],
        denominator_factor=lambda n: ([(1, 1)] if n == 0 else [(2 * n, 1), (2 * n + 1, 1)]),
        term_monomial=lambda n: _z(m, j * n))


def _chi0_star_surgery_at_root(m: int, j: int) -> CycloNumber:
    def inner(k: int, row: list[CycloNumber]) -> CycloNumber:
        acc = CycloNumber.zero()
        for n in range(k + 1):
            e = k * (k + 1) + n * (3 * n + 5) // 2 + k * n + 1
            acc = acc + _neg_pow(n) * row[n] * _z(m, j * e)
        return acc
    return _grouped_sum_at_root(m, j, inner, constant=1)


def _phi3_star_surgery_at_root(m: int, j: int) -> CycloNumber:
    def inner(k: int, row: list[CycloNumber]) -> CycloNumber:
        acc = CycloNumber.zero()
        for n in range(k + 1):
            e = n * (2 * n + 3) + k * k + 1
            acc = acc + _neg_pow(n) * row[n] * _z(m, j * e)
        return acc
    return _grouped_sum_at_root(m, j, inner, step=2, constant=1)


def _F0_star_surgery_at_root(m: int, j: int) -> CycloNumber:
    def inner(k: int, row: list[CycloNumber]) -> CycloNumber:
        acc = CycloNumber.zero()
        for n in range(k + 1):
            e = k + n * (n - 1) // 2 + (k + n + 1) ** 2
            acc = acc - _neg_pow(n) * row[n] * _z(m, j * e)
        return acc
    return _grouped_sum_at_root(m, j, inner, constant=1)


def _F0_star_double_at_root(m: int, j: int) -> CycloNumber:
    def inner(k: int, row: list[CycloNumber]) -> CycloNumber:
        acc = CycloNumber.zero()
        for n in range(k + 1):
            e = (n + 2) * k - n * (n + 1) // 2 + 1
            acc = acc - _neg_pow(n) * row[n] * _z(m, j * e)
        return acc
    return _grouped_sum_at_root(m, j, inner, constant=1)


#: q-series routes at roots of unity; each entry is (callable, scale) where
#: the radial limit equals scale * (value of the q-series form at the root)
_QSERIES_AT_ROOT: dict[str, tuple] = {
    "chi0_star": (_chi0_star_le_sum_at_root, 2),
    "chi1_star": (_chi1_star_le_at_root, 2),
    "phi_star": (_phi3_star_finite_at_root, 1),
    "nu_star": (_nu3_star_finite_at_root, 1),
    "omega_star": (_omega3_star_at_root, 1),
    "phi6_star": (_phi6_star_at_root, 1),
    "psi6_star": (_psi6_star_at_root, 1),
    "rho6_star": (_rho6_star_at_root, 1),
    "Psi10_star": (_Psi10_star_at_root, 1),
    "X10_star": (_X10_star_at_root, 1),
    "D5_star": (_D5_star_at_root, 1),
    "D6_star": (_D6_star_at_root, 1),
    "I12_star": (_I12_star_at_root, 1),
    "F0_star": (_F0_star_double_at_root, 2),
}

_SURGERY_AT_ROOT: dict[str, Callable] = {
    "chi0_star": _chi0_star_surgery_at_root,
    "phi_star": _phi3_star_surgery_at_root,
    "F0_star": _F0_star_surgery_at_root,
}


def value_at_root(fn_id: str, root_order: int, root_power: int = 1,
                  method: str = "eichler"):
    """Value of a starred function at q = zeta_(root_order)^(root_power).

    Methods: "eichler" (exact Bernoulli-sum radial limit), "qseries" (exact
    evaluation of a terminating/collapsing/group-terminating series form),
    "surgery" (exact evaluation of the surgery double sum), "radial"
    (independent numeric extrapolation, returns a complex number).
    """
    fn = get_function(fn_id)
    if method in ("eichler", "radial"):
        if fn.character is None:
            raise UnsupportedMethodError(f"{fn_id} has no character expansion")
        char_id, denom, shift = fn.character
        chi = chars.get_character(char_id)
        weight = 2 if fn_id == "f_star" else 1
        if method == "eichler":
            v = false_theta_radial_limit(chi, denom, shift, root_order, root_power)
            return v * weight if weight != 1 else v
        v = false_theta_radial_numeric(chi, denom, shift, root_order, root_power)
        return v * weight if weight != 1 else v
    if method == "qseries":
        entry = _QSERIES_AT_ROOT.get(fn_id)
        if entry is None:
            raise UnsupportedMethodError(f"{fn_id} has no exact q-series route at roots")
        evaluator, scale = entry
        v = evaluator(root_order, root_power)
        return v * scale if scale != 1 else v
    if method == "surgery":
        evaluator = _SURGERY_AT_ROOT.get(fn_id)
        if evaluator is None:
            raise UnsupportedMethodError(f"{fn_id} has no surgery form")
        return evaluator(root_order, root_power)
    raise UnsupportedMethodError(f"unknown evaluation method {method!r}")


# ---------------------------------------------------------------------------
# Colored Jones values of the trefoil at roots of unity
# ---------------------------------------------------------------------------

def jones_trefoil(form: str, n_val: int) -> CycloNumber:
    """Value of the normalized N-colored Jones polynomial of the right-handed
    trefoil at q = e^(2 pi i/N), by either the cyclotomic-expansion sum or the
    single-sum geometric form; both terminate at k = N."""
    if n_val < 1:
        raise DomainError("N must be positive")
    m = n_val
    if form == "cyclotomic":
        total = CycloNumber.zero()
        prod = CycloNumber.one()
        for k in range(m):
            if k:
                prod = prod * (1 - _z(m, 1 - n_val + (k - 1))) * (1 - _z(m, 1 + n_val + (k - 1)))
            if not prod:
                break
            total = total + _z(m, -k * (k + 2)) * prod
        return total
    if form == "geometric":
        total = CycloNumber.zero()
        prod = CycloNumber.one()
        for k in range(m):
            if k:
                prod = prod * (1 - _z(m, 1 - n_val + (k - 1)))
            if not prod:
                break
            total = total + _z(m, -k * n_val) * prod
        return _z(m, 1 - n_val) * total
    raise DomainError(f"unknown Jones form {form!r} (use 'cyclotomic' or 'geometric')")


# ---------------------------------------------------------------------------
# Bailey machinery
# ---------------------------------------------------------------------------

@dataclass
class BaileyPair:
    """Finite stretch of a Bailey pair relative to x, held as exact series."""

    x: Monomial
    alpha: list
    beta: list
    length: int
    truncation: int


def _xq(x: Monomial) -> Monomial:
    return Monomial(x.coeff, x.num + x.den, x.den)


def beta_from_alpha(x: Monomial, alpha: list, truncation: int) -> BaileyPair:
    """Complete a pair from its alpha side:
    beta_n = sum_(k<=n) alpha_k / ((q)_(n-k) (x q)_(n+k))."""
    xq = _xq(x)
    beta = []
    for n in range(len(alpha)):
        total = QSeries.zero(1, truncation)
        for k in range(n + 1):
            a = alpha[k]
            if isinstance(a, (int, Fraction)):
                if not a:
                    continue
                a = QSeries.constant(a, 1, truncation)
            term = a * pochhammer_inverse(_mono(1), 1, n - k, truncation) \
                * pochhammer_inverse(xq, 1, n + k, truncation)
            total = total + term
        beta.append(total.truncate(truncation))
    return BaileyPair(x, list(alpha), beta, len(alpha), truncation)


def verify_bailey_pair(pair: BaileyPair) -> VerificationReport:
    """Recheck the defining relation for all stored n."""
    recomputed = beta_from_alpha(pair.x, pair.alpha, pair.truncation)
    worst = None
    for n, (b1, b2) in enumerate(zip(pair.beta, recomputed.beta)):
        b1s = b1 if isinstance(b1, QSeries) else QSeries.constant(b1, 1, pair.truncation)
        mm = b1s.first_mismatch(b2)
        if mm is not None and (worst is None or mm < worst):
            worst = mm
    return VerificationReport(
        id=f"bailey_pair(x=q^{pair.x.exponent}, length={pair.length})",
        status="pass" if worst is None else "fail",
        truncation=pair.truncation, first_mismatch=worst)


def bailey_reduced_identity(pair: BaileyPair, truncation: int) -> VerificationReport:
    """(1-x) sum_n (q)_n/(x)_n x^n alpha_n (-1)^n q^(n(n-1)/2)
       == sum_n (q)_n x^n beta_n (-1)^n q^(n(n-1)/2)."""
    t = truncation
    ex = pair.x.exponent
    if ex <= 0:
        raise DomainError("the reduced identity needs x with positive exponent")
    needed = 0
    while needed * ex + Fraction(needed * (needed - 1), 2) < t:
        needed += 1
    if needed > pair.length:
        raise DomainError(f"pair too short: need {needed} terms of alpha/beta for T={t}")

    def wrap(v):
        return v if isinstance(v, QSeries) else QSeries.constant(v, 1, t)

    lhs = QSeries.zero(1, t)
    rhs = QSeries.zero(1, t)
    for n in range(needed):
        sign = 1 if n % 2 == 0 else -1
        xpow = coeff_pow_mono(pair.x, n)
        qshift = Monomial.q(Fraction(n * (n - 1), 2))
        common = pochhammer(_mono(1), 1, n, t)
        lt = common * pochhammer_inverse(pair.x, 1, n, t) * wrap(pair.alpha[n])
        rt = common * wrap(pair.beta[n])
        lhs = lhs + (lt.shift(xpow).shift(qshift) * sign).truncate(t)
        rhs = rhs + (rt.shift(xpow).shift(qshift) * sign).truncate(t)
    one_minus_x = QSeries.one(pair.x.den, t * pair.x.den) - QSeries.from_monomial(
        pair.x, t * pair.x.den)
    lhs = (one_minus_x * lhs).truncate(t * pair.x.den) if pair.x.den > 1 else \
        (one_minus_x * lhs)
    mm = lhs.first_mismatch(rhs)
    return VerificationReport(
        id=f"bailey_reduced(x=q^{ex})", status="pass" if mm is None else "fail",
        truncation=t, first_mismatch=mm)


def coeff_pow_mono(x: Monomial, n: int) -> Monomial:
    from .series import coeff_pow
    return Monomial(coeff_pow(x.coeff, n), x.num * n, x.den)


_SURGERY_SERIES_IDS = {
    "chi0_star_surgery": ("chi0_star", "surgery"),
    "phi_star_surgery": ("phi_star", "surgery"),
    "F0_star_surgery": ("F0_star", "surgery"),
}


def surgery_series(series_id: str, truncation: int) -> QSeries:
    """The double-sum series obtained from the surgery presentations, as a
    formal truncated series (their coefficient-wise agreement with the parent
    functions is an identity record; it has no direct proof and is confirmed
    empirically)."""
    try:
        fn_id, variant = _SURGERY_SERIES_IDS[series_id]
    except KeyError:
        raise UnknownIdError(f"unknown surgery series {series_id!r}; known: "
                             + ", ".join(sorted(_SURGERY_SERIES_IDS))) from None
    return expand(fn_id, truncation, variant)


# identity registry lives in a sibling module; re-export its interface
from .identities import (IdentityRecord, identity_ids, verify_all,  # noqa: E402
                         verify_identity, get_identity,
                         verify_fine_andrews_specializations)

