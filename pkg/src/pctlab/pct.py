"""The coordinate-transformation engine.

q = Z(r) with Z'(r) = sqrt(m(r)) maps the variable-mass radial problem
onto a constant-mass one-dimensional problem on the image interval.
This module owns the forward and inverse maps, the mass-induced
deformation potential, the effective angular momentum index for
power-law masses, and the full effective potential W(q) whose
eigenvalues are the target energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ComplexIndexError,
    DomainError,
    UnsupportedBranchError,
    ValidationError,
)
from .model import MassFamily, MassProfile, Parity, QuantumNumbers, ell_d


def q_domain(mass: MassProfile) -> tuple[float, float]:
    """Image of (0, inf) under Z for this mass family.

    Power-law masses with gamma < -2 map onto the negative half-line
    because Z decreases with r there.
    """
    if mass.family is MassFamily.POWER_LAW:
        if mass.gamma > -2.0:
            return (0.0, math.inf)
        return (-math.inf, 0.0)
    if mass.family is MassFamily.INVERSE_SQUARE:
        return (-math.inf, math.inf)
    if mass.family is MassFamily.POSCHL_TELLER:
        return (0.0, math.sqrt(mass.alpha) * math.pi / 2.0)
    return (0.0, math.inf)


def z_of_r(mass: MassProfile, r):
    """Forward map q = Z(r), integration constant fixed to 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("Z(r) requires r > 0")
    a = mass.alpha
    if mass.family is MassFamily.POWER_LAW:
        g = mass.gamma
        return 2.0 * math.sqrt(a) * r ** ((g + 2.0) / 2.0) / (g + 2.0)
    if mass.family is MassFamily.INVERSE_SQUARE:
        return math.sqrt(a) * np.log(r)
    if mass.family is MassFamily.POSCHL_TELLER:
        return math.sqrt(a) * np.arctan(np.sqrt(r))
    return np.log(r + 1.0) / a


def r_of_z(mass: MassProfile, q):
    """Analytic inverse of the forward map on its open image interval."""
    q = np.asarray(q, dtype=float)
    lo, hi = q_domain(mass)
    if np.any(q <= lo) or np.any(q >= hi):
        raise DomainError(f"q outside the open image interval ({lo}, {hi})")
    a = mass.alpha
    if mass.family is MassFamily.POWER_LAW:
        g = mass.gamma
        return ((g + 2.0) * q / (2.0 * math.sqrt(a))) ** (2.0 / (g + 2.0))
    if mass.family is MassFamily.INVERSE_SQUARE:
        return np.exp(q / math.sqrt(a))
    if mass.family is MassFamily.POSCHL_TELLER:
        return np.tan(q / math.sqrt(a)) ** 2
    return np.exp(a * q) - 1.0


@dataclass(frozen=True)
class PctMap:
    """Bundled forward/inverse map with its image interval."""

    mass: MassProfile
    z: Callable
    z_inv: Callable
    q_domain: tuple[float, float]


def pct_map(mass: MassProfile) -> PctMap:
    return PctMap(
        mass=mass,
        z=lambda r: z_of_r(mass, r),
        z_inv=lambda q: r_of_z(mass, q),
        q_domain=q_domain(mass),
    )


def u_d(mass: MassProfile, d: int, r):
    """Mass-induced deformation potential from the analytic derivatives.

    U_d = m''/(8 m^2) - 7 m'^2/(32 m^3) + m'(d-1)/(4 r m^2).
    """
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got d={d}")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("U_d requires r > 0")
    m = mass.m(r)
    m1 = mass.dm(r)
    m2 = mass.d2m(r)
    return m2 / (8.0 * m**2) - 7.0 * m1**2 / (32.0 * m**3) + m1 * (d - 1.0) / (4.0 * r * m**2)


def u_d_power_law(mass: MassProfile, d: int, r):
    """Closed power-law form of the deformation potential, kept as a
    cross-check against the general formula."""
    if mass.family not in (MassFamily.POWER_LAW, MassFamily.INVERSE_SQUARE):
        raise ValidationError("closed form only exists for power-law masses")
    r = np.asarray(r, dtype=float)
    g = mass.gamma
    return -(1.0 / 16.0) * g * (3.0 * g + 12.0 - 8.0 * d) / (2.0 * r**2 * mass.m(r))


def u_tilde_gm2(alpha: float, ell_d_value: float, d: int) -> float:
    """Constant deformation shift for the inverse-square mass.

    Combines the deformation potential with the (here constant)
    centrifugal term: -[(ell_d + 1/2)^2 + d - 1] / (2 alpha).
    """
    if alpha <= 0:
        raise ValidationError("alpha must be > 0")
    return -((ell_d_value + 0.5) ** 2 + d - 1.0) / (2.0 * alpha)


def lambda_eff(
    gamma: float,
    ell: int,
    d: int,
    parity: Optional[Parity] = None,
) -> tuple[float, float]:
    """Effective angular momentum (lambda_tilde, lambda) for power-law mass.

    lambda_tilde = -1/2 + |gamma+2|^-1 sqrt(4 l_d (l_d+1) + (gamma-1)^2
    + 2 gamma (3-d)) and lambda = lambda_tilde + 1/2.  A negative
    radicand means the state has no real index and is reported as an
    error rather than clamped.
    """
    if gamma == -2.0:
        raise UnsupportedBranchError(
            "gamma = -2 has no power-law index; use the inverse-square-mass cases"
        )
    ld = ell_d(ell, d, parity)
    radicand = 4.0 * ld * (ld + 1.0) + (gamma - 1.0) ** 2 + 2.0 * gamma * (3.0 - d)
    if radicand < 0.0:
        raise ComplexIndexError(
            f"index radicand {radicand:.6g} < 0 for gamma={gamma}, ell={ell}, d={d}"
        )
    lam_tilde = -0.5 + math.sqrt(radicand) / abs(gamma + 2.0)
    return lam_tilde, lam_tilde + 0.5


def effective_potential_q(case, qn: QuantumNumbers, q, flag=None):
    """Full effective potential W(q) of the transformed 1-d problem.

    W(q) = l_d(l_d+1) / (2 r(q)^2 m(r(q))) + V_target(r(q)) - U_d(r(q)),
    so the eigenvalues of -(1/2) d^2/dq^2 + W are the target energies.
    """
    from . import spectra  # circular at module level: spectra uses lambda_eff

    mass = case.mass
    r = r_of_z(mass, q)
    ld = qn.ell_d
    centrifugal = ld * (ld + 1.0) / (2.0 * r**2 * mass.m(r))
    v = spectra.target_potential(case, qn, r, flag=flag)
    return centrifugal + v - u_d(mass, qn.d, r)
