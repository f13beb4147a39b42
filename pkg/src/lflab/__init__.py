"""lflab: high-precision checks for moments of modular-form L-functions.

Submodules
----------
precision    arbitrary-precision substrate (gamma, zeta, Bessel, contexts)
arith        divisor functions and the Ramanujan identity
hecke        holomorphic Hecke eigenforms and harmonic weights
lfun         L-value evaluation (Dirichlet range and completed-L AFE)
kernels      hypergeometric kernels phi_k / Phi_k / psi_k and friends
fastkernels  numpy bulk evaluators for the large divisor sums
smoothsplit  decomposition of unity and the W_{i,j} weight functions
adp          binary additive divisor problem decomposition
specdata     Maass-form fixtures and holomorphic cross-check data
moments      twisted second moment, fourth moment, main-term assembly
appendix     saddle-point evaluator and averaged experiments
cli          command-line verification front end
"""

__version__ = "0.1.0"

from .precision import PrecisionContext  # noqa: F401
