"""Closed-form entanglement spectra and Renyi-family entropies.

Every formula here has an independent truncated-basis counterpart built from
:mod:`mek.fockspace` + :mod:`mek.spectra`; the two routes are compared in the
test suite and by ``mek verify``.

Renyi orders are plain floats with three distinguished limits: 0 (log of the
Schmidt rank), 1 (von Neumann), and ``math.inf`` (single-copy entanglement,
-ln p_max). For the pair-squeezed family the Schmidt rank is countably
infinite, so the order-0 entropy returns ``inf`` rather than a
truncation-dependent number.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._stable import log1mexp, log_cosh, log_tanh, xlnx
from .exceptions import ContractError
from .fockspace import SHParams
from .spectra import DEFAULT_RANK_TOL, EntanglementSpectrum, schmidt_rank

DEFAULT_MU_GRID = (0.5, 1.0, 2.0, 5.0, 10.0, math.inf)


def _check_order(mu: float) -> float:
    mu = float(mu)
    if math.isnan(mu) or mu < 0.0:
        raise ValueError(f"Renyi order must be >= 0, got {mu}")
    return mu


def parse_renyi_order(text: str) -> float:
    """Parse a Renyi order from CLI text; accepts 'inf' for the max-entropy limit."""
    return _check_order(math.inf if text.strip().lower() in ("inf", "infinity") else float(text))


# ---------------------------------------------------------------------------
# pair-squeezed family
# ---------------------------------------------------------------------------

def squeezed_spectrum(r: float, n) -> float:
    """Reduced-state eigenvalue tanh^{2n} r / cosh^2 r, evaluated in log domain.

    ``n`` may be a non-negative integer or an integer array; the log-domain
    evaluation keeps the result finite for extreme r and n.
    """
    if r < 0.0:
        raise ValueError(f"squeezing magnitude must be non-negative, got {r}")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("occupation numbers must be non-negative")
    if r == 0.0:
        result = np.where(n_arr == 0, 1.0, 0.0)
        return float(result) if np.isscalar(n) or n_arr.ndim == 0 else result
    log_p = 2.0 * n_arr * log_tanh(r) - 2.0 * log_cosh(r)
    result = np.exp(log_p)
    return float(result) if np.isscalar(n) or n_arr.ndim == 0 else result


def squeezed_entanglement_spectrum(
    r: float, count: int, rank_tolerance: float = DEFAULT_RANK_TOL
) -> EntanglementSpectrum:
    """First ``count`` closed-form eigenvalues as a spectrum object."""
    if count < 1:
        raise ValueError("count must be positive")
    return EntanglementSpectrum(squeezed_spectrum(r, np.arange(count)), rank_tolerance)


def renyi_squeezed(r: float, mu: float) -> float:
    """Renyi entropy of one mode of a pair-squeezed vacuum state.

    General orders use [ln(1 - tanh^{2 mu} r) + 2 mu ln cosh r] / (mu - 1)
    in a ln(1 - e^x) form that survives large r and large mu; the 0, 1, and
    inf orders dispatch to their closed-form limits.
    """
    if r < 0.0:
        raise ValueError(f"squeezing magnitude must be non-negative, got {r}")
    mu = _check_order(mu)
    if r == 0.0:
        return 0.0
    if mu == 0.0:
        return math.inf  # countably infinite Schmidt rank
    lc = log_cosh(r)
    lt = log_tanh(r)
    if math.isinf(mu):
        return 2.0 * lc
    if mu == 1.0:
        if r > 20.0:
            # sinh^2 r * (-ln tanh r) -> 1/2 - e^{-2r}, already 1/2 to double precision
            return 2.0 * lc + 1.0
        return 2.0 * lc - 2.0 * math.sinh(r) ** 2 * lt
    if r > 300.0:
        # 1 - tanh^{2 mu} r -> 4 mu e^{-2r}, below the underflow threshold of
        # the direct evaluation but trivial in log form
        return (math.log(4.0 * mu) - 2.0 * r + 2.0 * mu * lc) / (mu - 1.0)
    return (log1mexp(2.0 * mu * lt) + 2.0 * mu * lc) / (mu - 1.0)


def von_neumann_limit_check(r: float, epsilon: float) -> float:
    """|S_{1+eps} - S_1| for the squeezed family; shrinks linearly with eps."""
    if r <= 0.0:
        raise ValueError("limit check needs r > 0")
    if not 0.0 < epsilon < 0.1:
        raise ValueError("epsilon must lie in (0, 0.1)")
    return abs(renyi_squeezed(r, 1.0 + epsilon) - renyi_squeezed(r, 1.0))


# ---------------------------------------------------------------------------
# qubit-boson superposition family
# ---------------------------------------------------------------------------

def sh_overlap_constant(params: SHParams) -> float:
    """Branch overlap exp(-2 f.f); equals 1 only for vanishing displacements."""
    return math.exp(-2.0 * params.f_dot_f)


def sh_spectrum(params: SHParams, rank_tolerance: float = DEFAULT_RANK_TOL) -> EntanglementSpectrum:
    """Two-level spectrum {(1 + c)/2, (1 - c)/2} with c the branch overlap."""
    c = sh_overlap_constant(params)
    return EntanglementSpectrum(
        np.array([(1.0 + c) / 2.0, (1.0 - c) / 2.0]), rank_tolerance
    )


def renyi_sh(params: SHParams, mu: float) -> float:
    """Renyi entropy of the qubit reduction of the qubit-boson superposition."""
    mu = _check_order(mu)
    c = sh_overlap_constant(params)
    if c == 1.0:
        return 0.0  # rank 1: separable, entropy vanishes at every order
    p_plus = (1.0 + c) / 2.0
    p_minus = (1.0 - c) / 2.0
    if mu == 0.0:
        return math.log(2.0)
    if math.isinf(mu):
        return math.log(2.0) - math.log1p(c)
    if mu == 1.0:
        return -xlnx(p_plus) - xlnx(p_minus)
    log_hi = mu * math.log(p_plus)
    log_lo = mu * math.log(p_minus) if p_minus > 0.0 else -math.inf
    return (log_hi + math.log1p(math.exp(log_lo - log_hi))) / (1.0 - mu)


# ---------------------------------------------------------------------------
# spectrum-driven entropies (the oracle-facing route)
# ---------------------------------------------------------------------------

def renyi_general(spectrum: EntanglementSpectrum, mu: float) -> float:
    """Renyi entropy of an explicit spectrum; entries below the rank tolerance
    are deemed zero and skipped.

    The power sum is evaluated as a log-sum-exp with max subtraction so deep
    geometric tails neither underflow nor lose the head term.
    """
    mu = _check_order(mu)
    probs = spectrum.probabilities
    total = float(np.sum(probs))
    if abs(total - 1.0) > 1e-8:
        raise ContractError(f"spectrum sums to {total!r}, not normalized")
    kept = probs[probs > spectrum.rank_tolerance]
    if kept.size == 0:
        raise ContractError("no spectrum entries above the rank tolerance")
    if mu == 0.0:
        return math.log(schmidt_rank(spectrum))
    if math.isinf(mu):
        return -math.log(float(np.max(probs)))
    logs = np.log(kept)
    if mu == 1.0:
        return float(-np.sum(kept * logs))
    scaled = mu * logs
    peak = float(np.max(scaled))
    log_power_sum = peak + math.log(float(np.sum(np.exp(scaled - peak))))
    return log_power_sum / (1.0 - mu)


# ---------------------------------------------------------------------------
# bundled report
# ---------------------------------------------------------------------------

@dataclass
class EntropyReport:
    """Entropies of one state across a grid of Renyi orders.

    ``s_mu_grid`` holds (order, entropy) pairs; the named fields are the
    distinguished values: von Neumann, order 2 with its purity e^{-S_2},
    single-copy (order inf), and the log Schmidt rank (order-0 limit).
    """

    s_mu_grid: list
    s_vn: float
    s_2: float
    purity_gamma: float
    sce: float
    schmidt_rank_log: float


def entropy_report_squeezed(r: float, mu_grid=DEFAULT_MU_GRID) -> EntropyReport:
    """Closed-form report for the pair-squeezed family."""
    s_2 = renyi_squeezed(r, 2.0)
    return EntropyReport(
        s_mu_grid=[(mu, renyi_squeezed(r, mu)) for mu in mu_grid],
        s_vn=renyi_squeezed(r, 1.0),
        s_2=s_2,
        purity_gamma=math.exp(-s_2),
        sce=renyi_squeezed(r, math.inf),
        schmidt_rank_log=math.inf if r > 0.0 else 0.0,
    )


def entropy_report_sh(params: SHParams, mu_grid=DEFAULT_MU_GRID) -> EntropyReport:
    """Closed-form report for the qubit-boson superposition family."""
    s_2 = renyi_sh(params, 2.0)
    return EntropyReport(
        s_mu_grid=[(mu, renyi_sh(params, mu)) for mu in mu_grid],
        s_vn=renyi_sh(params, 1.0),
        s_2=s_2,
        purity_gamma=math.exp(-s_2),
        sce=renyi_sh(params, math.inf),
        schmidt_rank_log=renyi_sh(params, 0.0),
    )


def entropy_report_from_spectrum(
    spectrum: EntanglementSpectrum, mu_grid=DEFAULT_MU_GRID
) -> EntropyReport:
    """Report computed from an explicit (typically oracle-derived) spectrum."""
    s_2 = renyi_general(spectrum, 2.0)
    return EntropyReport(
        s_mu_grid=[(mu, renyi_general(spectrum, mu)) for mu in mu_grid],
        s_vn=renyi_general(spectrum, 1.0),
        s_2=s_2,
        purity_gamma=math.exp(-s_2),
        sce=renyi_general(spectrum, math.inf),
        schmidt_rank_log=renyi_general(spectrum, 0.0),
    )
