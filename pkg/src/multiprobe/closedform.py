"""Closed-form fidelities for two-channel probes and classical benchmarks.

These expressions serve two roles: independent oracles for the numeric
Gaussian fidelity, and fast classical-benchmark evaluation.  The two-mode
sub-fidelity F_{vu}(d) is labelled by the target counts (v, u) of the two
local patterns and their Hamming distance d; for channel pairs each class
is unique in d, giving four sub-unit values 01, 02, 11, 12.
"""

from __future__ import annotations

import numpy as np

from .channels import ADDITIVE, PURE_LOSS, ChannelFamily
from .errors import NoClosedFormError


def coherent_loss_fidelity(eta_b: float, eta_t: float, energy: float) -> float:
    """Fidelity of one coherent probe of given energy through eta_b vs eta_t.

    The channel scales the amplitude by sqrt(eta), so two displaced vacua
    with amplitude difference (sqrt(eta_b) - sqrt(eta_t)) * sqrt(energy)
    remain, giving exp(-energy (sqrt(eta_b) - sqrt(eta_t))^2 / 2).
    """
    if energy < 0:
        raise ValueError("energy must be >= 0")
    gap = np.sqrt(eta_b) - np.sqrt(eta_t)
    return float(np.exp(-0.5 * energy * gap * gap))


def vacuum_additive_fidelity(nu_b: float, nu_t: float) -> float:
    """Fidelity of the vacuum probe through additive noise nu_b vs nu_t.

    The outputs are thermal states with mean photon numbers nu_b, nu_t:
    1 / (sqrt((nu_t + 1)(nu_b + 1)) - sqrt(nu_t nu_b)).
    """
    return float(1.0 / (np.sqrt((nu_t + 1.0) * (nu_b + 1.0)) - np.sqrt(nu_t * nu_b)))


# ---------------------------------------------------------------------------
# two-mode squeezed-vacuum sub-fidelities, additive-noise channels


def tmsv_additive_f11(mu: float, nu_b: float, nu_t: float) -> float:
    """F_{11}(d=2) for patterns [1,0] vs [0,1] at finite squeezing mu."""
    theta = 2.0 * nu_b * nu_t + 1.0 + 2.0 * mu * (nu_b + nu_t)
    xi_m = theta - 1.0 - (nu_b - nu_t)
    xi_p = theta - 1.0 + (nu_b - nu_t)
    return float(1.0 / (theta - np.sqrt(xi_m * xi_p)))


def tmsv_additive_f01_limit(nu_b: float, nu_t: float) -> float:
    """Infinite-squeezing F_{01}(d=1) for patterns [0,0] vs [0,1]."""
    return float(2.0 * np.sqrt(2.0 * nu_b * (nu_b + nu_t)) / (3.0 * nu_b + nu_t))


def tmsv_additive_f12_limit(nu_b: float, nu_t: float) -> float:
    """Infinite-squeezing F_{12}(d=1); the 01 form with roles swapped."""
    return tmsv_additive_f01_limit(nu_t, nu_b)


def tmsv_additive_f02_limit(nu_b: float, nu_t: float) -> float:
    """Infinite-squeezing F_{02}(d=2) for patterns [0,0] vs [1,1]."""
    return float(2.0 * np.sqrt(nu_t * nu_b) / (nu_b + nu_t))


# ---------------------------------------------------------------------------
# two-mode squeezed-vacuum sub-fidelities, pure-loss channels


def tmsv_loss_f02(mu: float, eta_b: float, eta_t: float) -> float:
    """F_{02}(d=2) for patterns [0,0] vs [1,1] at finite squeezing mu."""
    ns = mu - 0.5
    k1 = eta_b * eta_t * (eta_t - 1.0) * (eta_b - 1.0)
    k2 = 1.0 - ns * (eta_b + eta_t - 2.0) * (eta_b + eta_t) + 4.0 * ns * ns * k1
    den = 1.0 - ns * (eta_b + eta_t - 2.0) * (eta_t + eta_b)
    return float((2.0 * ns * np.sqrt(k1) + np.sqrt(k2)) / den)


def tmsv_loss_f02_limit(eta_b: float, eta_t: float) -> float:
    """Infinite-squeezing limit of the pure-loss F_{02}; nonzero unless eta=1."""
    num = eta_b * eta_t * (eta_b - 1.0) * (eta_t - 1.0)
    den = (eta_b + eta_t - 2.0) ** 2 * (eta_b + eta_t) ** 2
    return float(4.0 * np.sqrt(num / den))


# ---------------------------------------------------------------------------
# dispatch

_ADDITIVE_LIMITS = {
    (0, 1, 1): tmsv_additive_f01_limit,
    (0, 2, 2): tmsv_additive_f02_limit,
    (1, 2, 1): tmsv_additive_f12_limit,
}


def subfidelity_oracle(
    family: ChannelFamily, v: int, u: int, d: int, mu: float | None = None
) -> float:
    """Closed-form two-mode sub-fidelity F_{vu}(d); mu=None means the
    infinite-squeezing limit.

    Only the displayed closed forms are available; anything else raises
    NoClosedFormError and callers fall back to the numeric fidelity.
    """
    key = (min(v, u), max(v, u), d)
    if key not in {(0, 1, 1), (0, 2, 2), (1, 1, 2), (1, 2, 1)}:
        raise NoClosedFormError(f"no two-mode sub-fidelity class {(v, u, d)}")
    if family.kind == ADDITIVE:
        nu_b, nu_t = family.background.nu, family.target.nu
        if key == (1, 1, 2):
            return 1.0 if mu is None else tmsv_additive_f11(mu, nu_b, nu_t)
        if mu is not None:
            raise NoClosedFormError(
                f"additive-noise class {key} has a closed form only at mu=inf"
            )
        return _ADDITIVE_LIMITS[key](nu_b, nu_t)
    if family.kind == PURE_LOSS:
        eta_b, eta_t = family.background.tau, family.target.tau
        if key != (0, 2, 2):
            raise NoClosedFormError(f"pure-loss class {key} has no displayed closed form")
        return tmsv_loss_f02_limit(eta_b, eta_t) if mu is None else tmsv_loss_f02(mu, eta_b, eta_t)
    raise NoClosedFormError(f"no closed forms for channel kind {family.kind!r}")
