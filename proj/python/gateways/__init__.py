"""Non-colliding diffusion and birth-death kernels, Markov link kernels,
Laguerre/Meixner ensembles and exact-identity verification."""

import json as _json

from ._gateways import (  # noqa: F401
    NumericalBudgetError,
    PointMassError,
    __version__,
    bd_free_prob,
    bd_nd_free_prob,
    bd_nd_stat_prob,
    bd_stat_prob,
    besq_density,
    besq_nd_density,
    besq_sample,
    chamber_to_partition,
    cir_density,
    cir_nd_density,
    cir_sample,
    gamma_link_density,
    gamma_moment_poly,
    identity_names,
    laguerre_logdensity,
    laguerre_sample,
    log_gamma,
    log_vandermonde,
    meixner_logpmf,
    meixner_sample,
    neg_binomial_pmf,
    partition_to_chamber,
    poisson_link_pmf,
    poisson_link_sample,
    poisson_link_sigma_pmf,
    poisson_logpmf,
    schur_eval,
    sde_simulate,
    stirling2,
    touchard,
)
from ._gateways import run_verify as _run_verify


def run_verify(n_max=2, identities=(), threads=0):
    """Run the identity-verification suite.

    Returns (all_pass, report) with the report parsed from JSON.
    """
    all_pass, report_json = _run_verify(n_max, list(identities), threads)
    return all_pass, _json.loads(report_json)
