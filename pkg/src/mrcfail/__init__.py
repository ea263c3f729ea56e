"""Exact computations around failures of the minimal resolution conjecture for points.

Modules, bottom up: ``exactfield`` (linear algebra over GF(p)),
``multilinear`` (Sym/∧/divided-power bases and structure maps), ``points``
(configurations, Gale duality, canonical module), ``betti`` (Koszul
homology), ``bgg`` (exterior modules and linear complexes), ``mrc``
(parameters and the end-to-end check) and ``cli``.
"""

__version__ = "0.1.0"
