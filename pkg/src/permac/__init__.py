"""Exact-arithmetic engine for periodic Macdonald processes.

Subpackages cover the truncated-series substrate, Macdonald symmetric
functions with exact rational (q, t), the Fock-space vertex-operator
calculus, periodic process partition functions and observable moments,
the stationary Plancherel sampler, and cylindric-partition enumeration
with generalized MacMahon identities.  The test suite machine-verifies
every closed form against independent brute-force expansions.
"""

__version__ = "0.1.0"
