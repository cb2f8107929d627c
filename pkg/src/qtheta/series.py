"""Exact truncated power series in one formal variable q^(1/D).

A QSeries stores sparse coefficients keyed by the exponent numerator n (the
exponent is n/D), a truncation T meaning every exponent numerator n < T is
known, and the order K of the cyclotomic coefficient field (K = 1 keeps plain
rationals).  Values are immutable; every operation returns a new series and
propagates truncation pessimistically.  Negative exponents are rejected unless
a series was built through the Laurent constructor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cyclo import CycloNumber
from .errors import DivergenceError, DomainError, FieldMismatchError
from .report import VerificationReport

Coeff = Union[int, Fraction, CycloNumber]

#: hard guard against nonterminating infinite constructions, per unit of T*D
ITERATION_CAP_FACTOR = 10

#: sentinel accepted by pochhammer-style constructors for n = infinity
INFINITY = None


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _merge_field(ka: int, kb: int) -> int:
    if ka % kb == 0:
        return ka
    if kb % ka == 0:
        return kb
    raise FieldMismatchError(f"coefficient fields of order {ka} and {kb} are incompatible")


def coeff_pow(c: Coeff, k: int) -> Coeff:
    if k < 0:
        if isinstance(c, CycloNumber):
            return coeff_pow(c.inv(), -k)
        f = Fraction(c)
        return coeff_pow(Fraction(f.denominator, f.numerator), -k)
    out: Coeff = 1
    for _ in range(k):
        out = out * c
    return out


@dataclass(frozen=True)
class Monomial:
    """A single term  coeff * q^(num/den)."""

    coeff: Coeff = 1
    num: int = 1
    den: int = 1

    def __post_init__(self):
        if self.den < 1:
            raise DomainError("monomial denominator must be >= 1")
        g = math.gcd(abs(self.num), self.den)
        if g > 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)

    @staticmethod
    def q(power: Union[int, Fraction] = 1, coeff: Coeff = 1) -> "Monomial":
        p = Fraction(power)
        return Monomial(coeff, p.numerator, p.denominator)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.num, self.den)

    def field_order(self) -> int:
        return self.coeff.order if isinstance(self.coeff, CycloNumber) else 1


@dataclass(frozen=True, eq=False)
class QSeries:
    """Sparse exact series; see the module docstring for conventions."""

    denom: int
    trunc: int
    coeffs: dict  # exponent numerator -> nonzero Coeff
    field_order: int = 1
    laurent: bool = False

    def __post_init__(self):
        if self.denom < 1:
            raise DomainError("series denominator must be >= 1")
        for n, c in self.coeffs.items():
            if n >= self.trunc:
                raise DomainError(f"stored exponent {n} not below truncation {self.trunc}")
            if not c:
                raise DomainError("canonical form forbids zero coefficients")
            if n < 0 and not self.laurent:
                raise DomainError("negative exponents need the Laurent constructor")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def make(denom: int, trunc: int, coeffs: dict, field_order: int = 1) -> "QSeries":
        return QSeries(denom, trunc, {n: c for n, c in coeffs.items() if c}, field_order)

    @staticmethod
    def laurent_series(denom: int, trunc: int, coeffs: dict, field_order: int = 1) -> "QSeries":
        return QSeries(denom, trunc, {n: c for n, c in coeffs.items() if c}, field_order, True)

    @staticmethod
    def zero(denom: int = 1, trunc: int = 1) -> "QSeries":
        return QSeries(denom, trunc, {})

    @staticmethod
    def one(denom: int = 1, trunc: int = 1) -> "QSeries":
        return QSeries(denom, trunc, {0: 1} if trunc > 0 else {})

    @staticmethod
    def constant(value: Coeff, denom: int = 1, trunc: int = 1) -> "QSeries":
        k = value.order if isinstance(value, CycloNumber) else 1
        return QSeries.make(denom, trunc, {0: value}, k)

    @staticmethod
    def from_monomial(m: Monomial, trunc: int, denom: Optional[int] = None) -> "QSeries":
        d = denom if denom is not None else m.den
        if d % m.den:
            raise DomainError("monomial denominator does not divide the series denominator")
        n = m.num * (d // m.den)
        coeffs = {n: m.coeff} if n < trunc and m.coeff else {}
        return QSeries(d, trunc, coeffs, m.field_order(), n < 0)

    # -- views ------------------------------------------------------------
    def coefficient(self, exponent: Union[int, Fraction]) -> Coeff:
        e = Fraction(exponent)
        if e >= self.order_q:
            raise DomainError(f"exponent {e} is beyond the truncation of this series")
        if self.denom % e.denominator:
            return 0
        return self.coeffs.get(e.numerator * (self.denom // e.denominator), 0)

    def leading_exponent(self) -> Optional[Fraction]:
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.denom)

    @property
    def order_q(self) -> Fraction:
        """Knowledge horizon in powers of q."""
        return Fraction(self.trunc, self.denom)

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- rescaling -------------------------------------------------------
    def rescale(self, denom: int) -> "QSeries":
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise DomainError("can only rescale to a multiple of the current denominator")
        f = denom // self.denom
        return QSeries(denom, self.trunc * f, {n * f: c for n, c in self.coeffs.items()},
                       self.field_order, self.laurent)

    def truncate(self, trunc: int) -> "QSeries":
        if trunc >= self.trunc:
            return self
        return QSeries(self.denom, trunc, {n: c for n, c in self.coeffs.items() if n < trunc},
                       self.field_order, self.laurent)

    def _unify(self, other: "QSeries") -> tuple["QSeries", "QSeries", int]:
        k = _merge_field(self.field_order, other.field_order)
        d = _lcm(self.denom, other.denom)
        a, b = self.rescale(d), other.rescale(d)
        t = min(a.trunc, b.trunc)
        return a.truncate(t), b.truncate(t), k

    def _scalar(self, value) -> "QSeries":
        return QSeries.constant(value, self.denom, self.trunc)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = self._scalar(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, k = self._unify(other)
        out = dict(a.coeffs)
        for n, c in b.coeffs.items():
            s = out.get(n, 0) + c
            if s:
                out[n] = s
            else:
                out.pop(n, None)
        return QSeries(a.denom, a.trunc, out, k, a.laurent or b.laurent)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.denom, self.trunc, {n: -c for n, c in self.coeffs.items()},
                       self.field_order, self.laurent)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = self._scalar(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            if not other:
                return QSeries.zero(self.denom, self.trunc)
            k = _merge_field(self.field_order,
                             other.order if isinstance(other, CycloNumber) else 1)
            return QSeries(self.denom, self.trunc,
                           {n: c * other for n, c in self.coeffs.items()}, k, self.laurent)
        if isinstance(other, Monomial):
            return self.shift(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, k = self._unify(other)
        # for Laurent inputs the unknown tail of one factor reaches below
        # T through the other factor's most negative exponent
        la = min(a.coeffs, default=0)
        lb = min(b.coeffs, default=0)
        t = min(a.trunc + min(lb, 0), b.trunc + min(la, 0))
        out: dict = {}
        if len(a.coeffs) > len(b.coeffs):
            a, b = b, a
        for n1, c1 in a.coeffs.items():
            for n2, c2 in b.coeffs.items():
                n = n1 + n2
                if n < t:
                    s = out.get(n, 0) + c1 * c2
                    if s:
                        out[n] = s
                    else:
                        out.pop(n, None)
        return QSeries(a.denom, t, out, k, a.laurent or b.laurent)

    __rmul__ = __mul__

    def shift(self, m: Monomial) -> "QSeries":
        """Multiply by a monomial; exact, so the knowledge horizon shifts too."""
        d = _lcm(self.denom, m.den)
        a = self.rescale(d)
        dn = m.num * (d // m.den)
        k = _merge_field(a.field_order, m.field_order())
        coeffs = {}
        for n, c in a.coeffs.items():
            v = c * m.coeff
            if v:
                coeffs[n + dn] = v
        return QSeries(d, a.trunc + dn, coeffs, k,
                       a.laurent or min(coeffs, default=0) < 0)

    # -- comparisons --------------------------------------------------------
    def first_mismatch(self, other: "QSeries") -> Optional[Fraction]:
        """Smallest exponent (in q units) where the two series differ below the
        shared truncation; None when they agree."""
        a, b, _ = self._unify(other)
        for n in sorted(set(a.coeffs) | set(b.coeffs)):
            if a.coeffs.get(n, 0) != b.coeffs.get(n, 0):
                return Fraction(n, a.denom)
        return None

    def agrees_with(self, other: "QSeries") -> bool:
        return self.first_mismatch(other) is None

    # -- serialization --------------------------------------------------------
    def text(self) -> str:
        """Canonical form ``D=<d>; T=<t>; K=<k>; <n>:<coeff> ...``."""
        parts = [f"D={self.denom}; T={self.trunc}; K={self.field_order};"]
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            if self.field_order == 1:
                parts.append(f"{n}:{Fraction(c)}")
            else:
                cc = c if isinstance(c, CycloNumber) else CycloNumber.from_rational(c)
                cc = cc.promote(self.field_order)
                vec = ",".join(str(Fraction(x, cc.den)) for x in cc.num)
                parts.append(f"{n}:[{vec}]")
        return " ".join(parts)

    def __repr__(self):
        head = self.text()
        return f"QSeries({head[:120]}{'...' if len(head) > 120 else ''})"


# ---------------------------------------------------------------------------
# q-calculus building blocks
# ---------------------------------------------------------------------------

def _step_monomial(step) -> Monomial:
    if isinstance(step, Monomial):
        return step
    return Monomial.q(Fraction(step))


def _poch_denominator(z: Monomial, b: Monomial, denom: Optional[int]) -> int:
    d = denom or 1
    d = _lcm(d, z.den)
    return _lcm(d, b.den)


def pochhammer(z: Monomial, step, n, trunc: int, denom: Optional[int] = None) -> QSeries:
    """(z; b)_n = prod_(k=1..n) (1 - z b^(k-1)) with monomial base b.

    ``step`` is either a rational r (base q^r) or a Monomial such as -q.
    ``n`` is a nonnegative integer or INFINITY.  Infinite products require
    growing factor exponents (step exponent > 0), unless z is already beyond
    the truncation or z is the zero monomial.
    """
    b = _step_monomial(step)
    d = _poch_denominator(z, b, denom)
    horizon = Fraction(trunc, d)
    if not z.coeff:
        return QSeries.one(d, trunc)
    if n is INFINITY and b.exponent <= 0 and z.exponent < horizon:
        raise DivergenceError("nonterminating infinite product: factor exponents do not grow")
    out = QSeries.one(d, trunc)
    cap = ITERATION_CAP_FACTOR * trunc * d + 16
    coeff, expo, k = z.coeff, z.exponent, 0
    while n is INFINITY or k < n:
        if expo >= horizon:
            if b.exponent >= 0:
                break  # every remaining factor is 1 modulo the truncation
            k += 1
            coeff, expo = coeff * b.coeff, expo + b.exponent
            continue
        if expo < 0:
            raise DomainError("pochhammer factor with negative exponent")
        factor = QSeries.one(d, trunc) - QSeries.from_monomial(Monomial.q(expo, coeff), trunc, d)
        out = out * factor
        if out.is_zero() and n is INFINITY:
            break
        coeff, expo, k = coeff * b.coeff, expo + b.exponent, k + 1
        if k > cap:
            raise DivergenceError("pochhammer exceeded its iteration cap")
    return out


def pochhammer_inverse(z: Monomial, step, n, trunc: int, denom: Optional[int] = None) -> QSeries:
    """1 / (z; b)_n expanded factor-by-factor through geometric series."""
    b = _step_monomial(step)
    d = _poch_denominator(z, b, denom)
    horizon = Fraction(trunc, d)
    if not z.coeff:
        return QSeries.one(d, trunc)
    if n is INFINITY and b.exponent <= 0 and z.exponent < horizon:
        raise DivergenceError("nonterminating infinite product: factor exponents do not grow")
    out = QSeries.one(d, trunc)
    cap = ITERATION_CAP_FACTOR * trunc * d + 16
    coeff, expo, k = z.coeff, z.exponent, 0
    while n is INFINITY or k < n:
        if expo >= horizon:
            if b.exponent >= 0:
                break
            k += 1
            coeff, expo = coeff * b.coeff, expo + b.exponent
            continue
        if expo < 0:
            raise DomainError("pochhammer factor with negative exponent")
        if expo == 0:
            unit = 1 - coeff
            if not unit:
                raise ZeroDivisionError("factor (1 - 1) is not invertible")
            inv = unit.inv() if isinstance(unit, CycloNumber) else Fraction(1) / Fraction(unit)
            out = out * inv
        else:
            en = expo.numerator * (d // expo.denominator)
            geom: dict = {}
            j, cj = 0, 1
            while j * en < trunc:
                geom[j * en] = cj
                cj = cj * coeff
                j += 1
            kk = coeff.order if isinstance(coeff, CycloNumber) else 1
            out = out * QSeries.make(d, trunc, geom, kk)
        coeff, expo, k = coeff * b.coeff, expo + b.exponent, k + 1
        if k > cap:
            raise DivergenceError("pochhammer_inverse exceeded its iteration cap")
    return out


def series_inverse(a: QSeries) -> QSeries:
    """1/a for a series whose lowest term is a unit constant."""
    if min(a.coeffs, default=0) < 0 or not a.coeffs.get(0, 0):
        raise DomainError("series inverse needs a unit constant term")
    c0 = a.coeffs[0]
    inv0 = c0.inv() if isinstance(c0, CycloNumber) else Fraction(1) / Fraction(c0)
    rest = sorted((n, c) for n, c in a.coeffs.items() if n > 0)
    out: dict = {0: inv0}
    for n in range(1, a.trunc):
        acc = 0
        for m, c in rest:
            if m > n:
                break
            prev = out.get(n - m)
            if prev is not None:
                acc = acc + c * prev
        if acc:
            out[n] = -(inv0 * acc)
    return QSeries(a.denom, a.trunc, {n: c for n, c in out.items() if c}, a.field_order)


def q_binomial(n: int, m: int, trunc: Optional[int] = None) -> QSeries:
    """Gaussian binomial coefficient [n m]_q as an exact polynomial."""
    if m < 0 or m > n:
        raise DomainError(f"q_binomial needs 0 <= m <= n, got ({n}, {m})")
    degree = m * (n - m)
    t = trunc if trunc is not None else degree + 1
    row = _binomial_row(n, t)
    return QSeries.make(1, t, row[m])


def q_binomial_rows(trunc: int, step: int = 1):
    """Yield rows of Gaussian binomials as raw dicts, truncated: row k maps m
    to the coefficient dict of [k m] in the base q^step."""
    row = [{0: 1}]
    while True:
        yield row
        row = _next_binomial_row(row, trunc, step)


def _next_binomial_row(row: list[dict], trunc: int, step: int = 1) -> list[dict]:
    k = len(row)
    new = [dict(row[0])]
    for j in range(1, k):
        merged = dict(row[j - 1])
        for e, c in row[j].items():
            ee = e + step * j
            if ee < trunc:
                s = merged.get(ee, 0) + c
                if s:
                    merged[ee] = s
                else:
                    merged.pop(ee, None)
        new.append(merged)
    new.append({0: 1})
    return new


def _binomial_row(n: int, trunc: int) -> list[dict]:
    gen = q_binomial_rows(trunc)
    row = next(gen)
    for _ in range(n):
        row = next(gen)
    return row


def q_binomial_column(n_start: int, trunc: int):
    """Yield the truncated polynomials [N+m-1 m]_q for m = 0, 1, 2, ... with
    N = n_start, through the column recurrence
    [N+m m] = [N+m-1 m-1] (1 - q^(N+m-1)) / (1 - q^m)."""
    cur = QSeries.one(1, trunc)
    m = 0
    while True:
        yield cur
        m += 1
        e = n_start + m - 1
        coeffs = {0: 1}
        if e < trunc:
            coeffs[e] = coeffs.get(e, 0) - 1
        num = QSeries.make(1, trunc, coeffs)
        cur = cur * num * pochhammer_inverse(Monomial.q(m), 1, 1, trunc)


def substitute_power(a: QSeries, k: Union[int, Fraction]) -> QSeries:
    """q -> q^k with exact rescaling of the knowledge horizon.

    Negative k is allowed only when the caller vouches the series is a
    complete polynomial; the result is a Laurent polynomial whose truncation
    claims knowledge just past its top exponent.
    """
    k = Fraction(k)
    if k == 0:
        raise DomainError("substitution power must be nonzero")
    d = a.denom * k.denominator
    new = {n * k.numerator: c for n, c in a.coeffs.items()}
    if k < 0:
        g = math.gcd(d, math.gcd(*[abs(n) for n in new]) if new else d)
        t = max((n // g for n in new), default=0) + 1
        return QSeries.laurent_series(d // g, t, {n // g: c for n, c in new.items()},
                                      a.field_order)
    t = a.trunc * k.numerator
    g = math.gcd(math.gcd(d, t), math.gcd(*[abs(n) for n in new]) if new else d * t)
    return QSeries(d // g, t // g, {n // g: c for n, c in new.items()},
                   a.field_order, a.laurent)


def substitute_sign(a: QSeries) -> QSeries:
    """q -> -q, realized as q^(1/D) -> zeta_(2D) q^(1/D)."""
    d = a.denom
    if d == 1:
        return QSeries(1, a.trunc, {n: (c if n % 2 == 0 else -c) for n, c in a.coeffs.items()},
                       a.field_order, a.laurent)
    k = _merge_field(a.field_order, 2 * d)
    out = {}
    for n, c in a.coeffs.items():
        v = CycloNumber.root_of_unity(2 * d, n % (2 * d)) * c
        if v:
            out[n] = v
    return QSeries(d, a.trunc, out, k, a.laurent)


# ---------------------------------------------------------------------------
# Classical identity self-tests
# ---------------------------------------------------------------------------

def _report(name: str, lhs: QSeries, rhs: QSeries, trunc) -> VerificationReport:
    mismatch = lhs.first_mismatch(rhs)
    return VerificationReport(
        id=name,
        status="pass" if mismatch is None else "fail",
        truncation=trunc,
        first_mismatch=mismatch,
    )


def selftest_euler(order: int, z: Optional[Monomial] = None) -> VerificationReport:
    """sum_m q^(m(m-1)/2) z^m / (q)_m  ==  (-z; q)_infinity."""
    if order < 1:
        raise DomainError("order must be >= 1")
    z = z or Monomial.q()
    d, t = z.den, order
    lhs = QSeries.zero(d, t)
    inv = QSeries.one(d, t)
    m = 0
    while True:
        lead = Fraction(m * (m - 1), 2) + m * z.exponent
        if lead >= Fraction(t, d):
            break
        if m > 0:
            inv = inv * pochhammer_inverse(Monomial.q(m), 1, 1, t, d)
        lhs = lhs + inv.shift(Monomial.q(lead, coeff_pow(z.coeff, m))).truncate(t)
        m += 1
    rhs = pochhammer(Monomial(-z.coeff, z.num, z.den), 1, INFINITY, t, d)
    return _report(f"euler_identity(order={order}, z=q^{z.exponent})", lhs, rhs, order)


def _laurent_monomial(m: Monomial, trunc: int, denom: int) -> QSeries:
    n = m.exponent.numerator * (denom // m.exponent.denominator)
    if n >= trunc or not m.coeff:
        return QSeries.laurent_series(denom, trunc, {})
    return QSeries.laurent_series(denom, trunc, {n: m.coeff}, m.field_order())


def _poch_allow_negative(z: Monomial, trunc: int, denom: int) -> QSeries:
    """(z; q)_infinity tolerating finitely many negative-exponent factors."""
    if z.exponent > 0 or not z.coeff:
        return pochhammer(z, 1, INFINITY, trunc, denom)
    out = QSeries.laurent_series(denom, trunc, {0: 1})
    expo, coeff = z.exponent, z.coeff
    while expo <= 0:
        out = out * (QSeries.laurent_series(denom, trunc, {0: 1})
                     - _laurent_monomial(Monomial.q(expo, coeff), trunc, denom))
        expo += 1
    return out * pochhammer(Monomial.q(expo, coeff), 1, INFINITY, trunc, denom)


def selftest_triple_product(z: Monomial, order: int) -> VerificationReport:
    """sum_k (-1)^k q^(k^2/2) z^k == (q, q^(1/2)/z, q^(1/2) z; q)_infinity."""
    e = z.exponent
    d, t = _lcm(2, z.den), order
    horizon = Fraction(t, d)

    def lead(k: int) -> Fraction:
        return Fraction(k * k, 2) + k * e

    ks = [0]
    k = 1
    while lead(k) < horizon:
        ks.append(k)
        k += 1
    k = -1
    while lead(k) < horizon:
        ks.append(k)
        k -= 1
    lhs = QSeries.laurent_series(d, t, {})
    for k in ks:
        c = coeff_pow(z.coeff, k)
        lhs = lhs + _laurent_monomial(Monomial.q(lead(k), c if k % 2 == 0 else -c), t, d)
    half = Fraction(1, 2)
    inv_z = Monomial.q(half - e, coeff_pow(z.coeff, -1))
    pos_z = Monomial.q(half + e, z.coeff)
    if inv_z.exponent <= 0 and pos_z.exponent <= 0:
        raise DomainError("triple product factors are unbounded below for this monomial")
    rhs = pochhammer(Monomial.q(1), 1, INFINITY, t, d)
    rhs = rhs * _poch_allow_negative(inv_z, t, d)
    rhs = rhs * _poch_allow_negative(pos_z, t, d)
    return _report(f"triple_product(order={order}, z-exponent={e})", lhs, rhs, order)


def selftest_q_binomial_theorem(n: int, z: Monomial) -> VerificationReport:
    """(-z; q)_N == sum_m q^(m(m-1)/2) [N m]_q z^m, an exact polynomial identity."""
    if n < 0:
        raise DomainError("N must be nonnegative")
    if z.exponent < 0:
        raise DomainError("monomial exponent must be nonnegative")
    degree = Fraction(n * (n - 1), 2) + n * z.exponent
    d = _lcm(z.den, degree.denominator if degree else 1)
    t = (degree.numerator * (d // degree.denominator) if degree else 0) + d + 1
    lhs = pochhammer(Monomial(-z.coeff, z.num, z.den), 1, n, t, d)
    rhs = QSeries.zero(d, t)
    for m in range(n + 1):
        mono = Monomial.q(Fraction(m * (m - 1), 2) + m * z.exponent, coeff_pow(z.coeff, m))
        rhs = rhs + q_binomial(n, m).rescale(d).shift(mono).truncate(t)
    return _report(f"q_binomial_theorem(N={n}, z=q^{z.exponent})", lhs, rhs, t)


def selftest_eta_cubed(order: int) -> VerificationReport:
    """sum_(n>=0) (-1)^n (2n+1) q^((2n+1)^2/8) == q^(1/8) (q)_infinity^3."""
    d, t = 8, order
    lhs = {}
    n = 0
    while (2 * n + 1) ** 2 < t:
        lhs[(2 * n + 1) ** 2] = (2 * n + 1) * (1 if n % 2 == 0 else -1)
        n += 1
    p = pochhammer(Monomial.q(1), 1, INFINITY, t, d)
    rhs = (p * p * p).shift(Monomial.q(Fraction(1, 8))).truncate(t)
    return _report(f"eta_cubed(order={order})", QSeries.make(d, t, lhs), rhs, order)
