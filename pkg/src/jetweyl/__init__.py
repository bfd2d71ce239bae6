"""jetweyl: exact jet-space calculus for a dispersionless integrable system
and the Lorentzian Einstein-Weyl structures its solutions carry.

Subpackages by theme:

* :mod:`jetweyl.exprcore`   exact symbolic kernel (canonical rational forms)
* :mod:`jetweyl.dsl`        text syntax for expressions and solutions
* :mod:`jetweyl.jets`       total derivatives, the equation system, reduction
* :mod:`jetweyl.fields`     point vector fields, prolongation, Lie brackets
* :mod:`jetweyl.symmetry`   the symmetry families, commutator table, the
                            structure-preserving pseudogroup, orbit dimensions
* :mod:`jetweyl.invariants` differential invariants, invariant derivations,
                            structure coefficients, moduli counting
* :mod:`jetweyl.geometry`   metric/one-form pairs, Weyl connection, Einstein
                            condition, the explicit-solution catalog
* :mod:`jetweyl.equivalence` invariant signatures and equivalence verdicts
* :mod:`jetweyl.cli`        the ``jetweyl`` command-line tool
"""

from .exprcore import Expr, MultiIndex, formal, jet

__version__ = "0.1.0"

__all__ = ["Expr", "MultiIndex", "formal", "jet", "__version__"]
