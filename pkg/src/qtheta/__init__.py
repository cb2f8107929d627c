"""qtheta: an exact q-series workbench.

Truncated power series with exact rational or cyclotomic coefficients, odd
periodic characters and their theta sums, the catalog of mock theta functions
with the expansions that tie them to quantum invariants of small Seifert
manifolds, exact root-of-unity evaluation, L-values, and the supporting
numeric checks.
"""

__version__ = "0.1.0"

from .cyclo import CycloNumber, cyclotomic_polynomial, euler_phi
from .report import VerificationReport
from .series import INFINITY, Monomial, QSeries, pochhammer, pochhammer_inverse, q_binomial

__all__ = [
    "CycloNumber", "cyclotomic_polynomial", "euler_phi",
    "VerificationReport",
    "INFINITY", "Monomial", "QSeries", "pochhammer", "pochhammer_inverse",
    "q_binomial",
    "__version__",
]
