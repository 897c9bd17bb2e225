"""Exact q-twisted divided-power calculus of negative level.

Subpackages build on each other in this order: ``qarith`` (exact base-ring
arithmetic), ``coordring`` (the coordinate rings and their Frobenius
structure), ``divpow`` (twisted divided-power algebras), ``frobdiv`` (the
divided Frobenius and its coefficient tables), ``diffcalc`` (twisted
differential operators), ``connect`` (twisted connections and level
raising), and ``cli`` (the verification command line).
"""

__version__ = "0.1.0"
