"""Numerical laboratory for persistence probabilities of fractional Brownian
motion and its running integral.

Modules:
    kernels      stable evaluation of dual correlation kernels and covariances
    audit        machine verification of the correlation inequalities and claims
    sampler      exact circulant-embedding path sampling with seeded streams
    persistence  Monte Carlo persistence probabilities and exponent estimation
    cli          reproducible command-line front end
"""

from . import audit, kernels, persistence, sampler

__all__ = ["audit", "kernels", "persistence", "sampler"]
__version__ = "0.1.0"
