"""Domain types and quantum-number bookkeeping.

Units are Hartree-like throughout (hbar = unit mass = 1).  The radial
mass factor m(r) multiplies the unit mass, so energies come out in the
same units for every mass family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


def ell_d(ell: int, d: int, parity: Optional[Parity] = None) -> float:
    """Dimension-shifted angular momentum index.

    For d >= 2 this is ell + (d - 3)/2, exact in binary floating point
    because (d - 3)/2 is a half-integer.  For d = 1 the index is -1
    (even parity) or 0 (odd parity) and must be selected explicitly.
    """
    if d < 1:
        raise ValidationError(f"dimension must be >= 1, got d={d}")
    if ell < 0:
        raise ValidationError(f"angular momentum must be >= 0, got ell={ell}")
    if d == 1:
        if parity is None:
            raise ValidationError("d=1 requires an explicit parity")
        return -1.0 if parity is Parity.EVEN else 0.0
    return ell + (d - 3) / 2


def degeneracy_ladder(n_r: int, ell: int, d: int) -> list[tuple[int, int]]:
    """All (ell - k, d + 2k) pairs sharing one ell_d, k = 0..ell."""
    if d < 2:
        raise ValidationError("degeneracy ladder needs d >= 2")
    if ell < 0 or n_r < 0:
        raise ValidationError("quantum numbers must be non-negative")
    return [(ell - k, d + 2 * k) for k in range(ell + 1)]


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial index, angular momentum and dimension for one state.

    parity is consulted only when d = 1, where the angular channel is
    replaced by the even/odd split.
    """

    n_r: int
    ell: int = 0
    d: int = 3
    parity: Optional[Parity] = None

    def __post_init__(self) -> None:
        if self.n_r < 0:
            raise ValidationError(f"n_r must be >= 0, got {self.n_r}")
        if self.d < 1:
            raise ValidationError(f"d must be >= 1, got {self.d}")
        if self.ell < 0:
            raise ValidationError(f"ell must be >= 0, got {self.ell}")
        if self.d == 1:
            if self.parity is None:
                raise ValidationError("d=1 states require a parity")
            if self.ell != 0:
                raise ValidationError("d=1 states carry no angular momentum")

    @property
    def ell_d(self) -> float:
        return ell_d(self.ell, self.d, self.parity)


class MassFamily(enum.Enum):
    POWER_LAW = "power-law"
    INVERSE_SQUARE = "inverse-square"
    POSCHL_TELLER = "poschl-teller"
    HULTHEN = "hulthen"


@dataclass(frozen=True)
class MassProfile:
    """One of the four analytic radial mass families.

    Carries closed-form m, m' and m'' so downstream code never needs
    numerical differentiation of the mass.
    """

    family: MassFamily
    alpha: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if self.family is MassFamily.POWER_LAW and self.gamma == -2.0:
            raise ValidationError(
                "gamma = -2 is the inverse-square family; use MassProfile.inverse_square"
            )

    @classmethod
    def power_law(cls, alpha: float, gamma: float) -> "MassProfile":
        return cls(MassFamily.POWER_LAW, alpha, gamma)

    @classmethod
    def inverse_square(cls, alpha: float) -> "MassProfile":
        return cls(MassFamily.INVERSE_SQUARE, alpha, -2.0)

    @classmethod
    def poschl_teller(cls, alpha: float) -> "MassProfile":
        return cls(MassFamily.POSCHL_TELLER, alpha)

    @classmethod
    def hulthen(cls, alpha: float) -> "MassProfile":
        return cls(MassFamily.HULTHEN, alpha)

    def m(self, r):
        r = np.asarray(r, dtype=float)
        a = self.alpha
        if self.family is MassFamily.POWER_LAW:
            return a * r ** self.gamma
        if self.family is MassFamily.INVERSE_SQUARE:
            return a / r**2
        if self.family is MassFamily.POSCHL_TELLER:
            return a / (4.0 * r * (1.0 + r) ** 2)
        return 1.0 / (a**2 * (r + 1.0) ** 2)

    def dm(self, r):
        r = np.asarray(r, dtype=float)
        a, g = self.alpha, self.gamma
        if self.family is MassFamily.POWER_LAW:
            return a * g * r ** (g - 1.0)
        if self.family is MassFamily.INVERSE_SQUARE:
            return -2.0 * a / r**3
        if self.family is MassFamily.POSCHL_TELLER:
            return -a * (1.0 + 3.0 * r) / (4.0 * r**2 * (1.0 + r) ** 3)
        return -2.0 / (a**2 * (r + 1.0) ** 3)

    def d2m(self, r):
        r = np.asarray(r, dtype=float)
        a, g = self.alpha, self.gamma
        if self.family is MassFamily.POWER_LAW:
            return a * g * (g - 1.0) * r ** (g - 2.0)
        if self.family is MassFamily.INVERSE_SQUARE:
            return 6.0 * a / r**4
        if self.family is MassFamily.POSCHL_TELLER:
            return a * (6.0 * r**2 + 4.0 * r + 1.0) / (2.0 * r**3 * (1.0 + r) ** 4)
        return 6.0 / (a**2 * (r + 1.0) ** 4)


@dataclass(frozen=True)
class ClosedFormSolution:
    """A bound state in closed form: energy plus evaluable R(r) and phi(q).

    R is normalised so that the integral of R^2 over the case's radial
    domain is 1.  phi is the transformed-coordinate twin scaled so that
    phi(Z(r)) = m(r)^(-1/4) R(r) pointwise whenever the printed formulas
    are mutually consistent (the wavefunction-map tests check exactly
    that).  R has n_r interior nodes, except for the Hulthen family
    whose state index starts at 1 and whose state n_r carries n_r - 1
    nodes.
    """

    energy: float
    R: Callable
    phi: Callable
    normalization_constant: float
    r_domain: tuple[float, float]
    q_domain: tuple[float, float]
    expected_nodes: int
    case_id: str = ""
    flag: str = ""


@dataclass
class VerificationReport:
    """Closed-form vs grid comparison for one state and one flag setting.

    rel_err is abs_err / max(1, |e_closed|): a combined absolute and
    relative measure so states with e_closed near zero (the Morse E = 0
    point) remain checkable.  residual_l2 is the L2 norm of the
    untransformed radial-equation residual divided by the L2 norm of R.
    """

    case_id: str = ""
    n_r: int = 0
    ell: int = 0
    d: int = 3
    flag: str = "-"
    e_closed: float = math.nan
    e_numeric: float = math.nan
    abs_err: float = math.nan
    rel_err: float = math.nan
    residual_l2: float = math.nan
    norm_defect: float = math.nan
    grid_n: int = 0
    passed: bool = False
    error: str = ""
