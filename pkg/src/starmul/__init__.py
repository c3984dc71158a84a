"""Star multiplication of solutions of mu-dependent linear first-order PDE systems.

Solutions V = (V_0, ..., V_{m-1}) of A_mu dV_mu = 0 (mod Z_mu) are identified
with mu-polynomials of degree < m; when Z_mu is compatible with A_mu their
product modulo Z_mu is again a solution.
"""

from starmul.muring import MonicZ, MuPoly, SolutionVec, companion, star_mul, star_pow
from starmul.ratfunc import Chart, RationalFunction
from starmul.system import SystemSpec, TensorPoly, admits_multiplication, residuals, verify_solution

__all__ = [
    "Chart",
    "MonicZ",
    "MuPoly",
    "RationalFunction",
    "SolutionVec",
    "SystemSpec",
    "TensorPoly",
    "admits_multiplication",
    "companion",
    "residuals",
    "star_mul",
    "star_pow",
    "verify_solution",
]
