"""Plectic p-adic invariants of modular elliptic curves.

Core layers, bottom up: p-adic arithmetic (`padic`), real quadratic fields
and their quadratic extensions (`numberfield`), the Bruhat-Tits tree in the
ball model (`bttree`), finite harmonic cochains (`cochain`), the Shapiro
transfer of the two-variable cocycle (`shapiro`), the harmonization solver
(`harmonize`), Riemann-sum double integrals (`integrate`), Tate curves and
p-adic elliptic logarithms (`elliptic`), and the top-level pairing with
homology classes (`homology`).  A FastAPI service (`service`) exposes the
pipeline; the CLI (`cli`) is a thin client of it.
"""

__version__ = "0.1.0"
