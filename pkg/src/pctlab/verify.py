"""Independent numerical adjudication of the closed forms.

The transformed equation is discretised on a uniform grid in the mapped
coordinate, where the operator -(1/2) d^2/dq^2 + W(q) is symmetric
tridiagonal with a constant off-diagonal.  Its lowest eigenvalues are
found by Sturm-sequence counting plus bisection and compared against
the closed-form energies.  A second, fully untransformed check
evaluates the radial-equation residual of (E, R) directly in r.

Near a hard wall carrying an inverse-square singularity the plain
three-point scheme converges like h^(2 Lambda), which is useless for
the small-index states this package must verify.  discretize therefore
adds a diagonal-only correction that makes the stencil exact for the
local indicial behaviour t^nu; nu is extracted from W itself (never
from the closed forms), the correction decays like j^-4 away from the
wall, and it vanishes identically at regular endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import NumericalError, PctlabError, ValidationError
from .model import QuantumNumbers, VerificationReport, ell_d
from .pct import effective_potential_q, z_of_r
from .spectra import (
    CaseId,
    CaseSpec,
    Flag,
    POWER_LAW_CASES,
    case_q_window,
    closed_form_energy,
    closed_form_wavefunction,
    _phi_raw,
    resolve_flag,
    target_potential,
)

TAIL_THRESHOLD = 1e-12  # |phi| at auto-selected tail ends, relative to peak


@dataclass(frozen=True)
class Tolerances:
    """Pass/fail thresholds, stated once and overridable everywhere."""

    energy: float = 1e-5       # on abs_err / max(1, |E|)
    norm: float = 1e-8         # on |integral R^2 - 1|
    residual: float = 1e-6     # on ||residual|| / ||R|| at h = 1e-3
    eigen_abs: float = 1e-12   # bisection width, times max(1, |lambda|)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class Grid:
    """Uniform grid with Dirichlet boundaries at q_min and q_max."""

    q_min: float
    q_max: float
    n: int
    left_wall: bool = True
    right_wall: bool = False

    def __post_init__(self) -> None:
        if self.n < 50:
            raise ValidationError(f"grid needs n >= 50 interior points, got {self.n}")
        if not self.q_max > self.q_min:
            raise ValidationError("grid needs q_max > q_min")

    @property
    def h(self) -> float:
        return (self.q_max - self.q_min) / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.q_min + self.h * np.arange(1, self.n + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal operator: diag d_i = 1/h^2 + W(q_i) (plus
    wall corrections), constant off-diagonal -1/(2 h^2)."""

    diag: np.ndarray
    off: float


def _find_tail(phi, start: float, direction: float, peak: float, span0: float) -> float:
    """Walk outward from `start` until |phi| stays below the tail threshold."""
    span = span0
    for _ in range(200):
        qs = start + direction * np.linspace(0.0, span, 2049)[1:]
        vals = np.abs(phi(qs))
        peak = max(peak, float(vals.max()))
        thresh = TAIL_THRESHOLD * peak
        below = vals < thresh
        if below[-1] and below[-64:].all():
            idx = len(vals) - 1
            while idx > 0 and below[idx - 1]:
                idx -= 1
            return float(qs[min(idx + 32, len(qs) - 1)])
        span *= 1.6
        if span > 1e7:
            raise NumericalError(
                "wavefunction tail never decays; flag/parameter combination "
                "appears unbounded"
            )
    raise NumericalError("tail search did not converge")


def build_grid(
    case: CaseSpec,
    qn: QuantumNumbers,
    n: int,
    override: Optional[tuple[float, float]] = None,
    flag: Optional[Flag] = None,
) -> Grid:
    """Choose [q_min, q_max] so the closed-form phi is below 1e-12 of its
    peak at both ends; hard walls are taken at their exact positions.
    An explicit override wins."""
    flag = resolve_flag(case, flag)
    kind_l, kind_r, q_lo, q_hi = case_q_window(case)
    if override is not None:
        lo, hi = float(override[0]), float(override[1])
        return Grid(lo, hi, n, left_wall=(kind_l == "wall"), right_wall=(kind_r == "wall"))

    if kind_l == "wall" and kind_r == "wall":
        return Grid(q_lo, q_hi, n, left_wall=True, right_wall=True)

    phi = _phi_raw(case, qn, flag)
    if kind_l == "wall":
        probe = np.linspace(q_lo, q_lo + 4.0, 513)[1:]
    elif kind_r == "wall":
        probe = np.linspace(q_hi - 4.0, q_hi, 513)[:-1]
    else:
        probe = np.linspace(-4.0, 4.0, 513)
    peak = float(np.abs(phi(probe)).max())
    if peak == 0.0:
        peak = 1e-300

    if kind_l == "wall":
        lo = q_lo
    else:
        anchor = q_hi if kind_r == "wall" else 0.0
        lo = _find_tail(phi, anchor, -1.0, peak, 4.0)
    if kind_r == "wall":
        hi = q_hi
    else:
        anchor = q_lo if kind_l == "wall" else 0.0
        hi = _find_tail(phi, anchor, +1.0, peak, 4.0)
    return Grid(lo, hi, n, left_wall=(kind_l == "wall"), right_wall=(kind_r == "wall"))


def _indicial_corrections(warr_edge, h: float, n: int) -> np.ndarray:
    """Diagonal corrections for one wall, ordered from the wall outward.

    The wall expansion t^2 W(t) = c + b t + O(t^2) is extracted from
    samples at t = h/8, h/4.  The local Frobenius solution of
    -(1/2) phi'' + (c/t^2 + b/t) phi = 0 is t^nu (1 + (b/nu) t) with
    nu = (1 + sqrt(1 + 8c))/2, and each node j receives the diagonal
    shift that makes the three-point stencil exact on that profile; at
    the critical coupling c = -1/8 this pins the principal (log-free)
    boundary behaviour through two orders.  The shifts decay like j^-4
    and vanish identically at regular endpoints.
    """
    s8 = (h / 8.0) ** 2 * warr_edge(h / 8.0)
    s4 = (h / 4.0) ** 2 * warr_edge(h / 4.0)
    c = 2.0 * s8 - s4
    b = (s4 - s8) * 8.0 / h
    if not (np.isfinite(c) and np.isfinite(b)):
        raise NumericalError("could not extract the wall singularity strength")
    if abs(c) < 1e-5:
        c = 0.0
    if c < -0.125:
        if c < -0.125 - 1e-6:
            raise NumericalError(
                f"wall inverse-square strength {c:.6g} below the stability bound -1/8"
            )
        c = -0.125
    nu = 0.5 * (1.0 + math.sqrt(1.0 + 8.0 * c))
    if nu > 25.0:
        # the state vanishes like t^nu: the wall region is unreachable and
        # the plain stencil error there is already below the h^2 floor
        return np.zeros(0)
    if abs(b) < 1e-7 / h:
        slope = 0.0
    else:
        slope = b / nu
    J = min(n // 2, 4096)
    if slope != 0.0:
        # the two-term local model is meaningful while |slope| t < 1/2
        J = min(J, max(int(0.5 / (abs(slope) * h)), 8))
    j = np.arange(0, J + 2, dtype=float)
    t = j * h
    p = t**nu * (1.0 + slope * t)  # p(0) = 0 since nu > 0
    tj = t[1 : J + 1]
    d2_exact = nu * (nu - 1.0) * tj ** (nu - 2.0) + slope * (nu + 1.0) * nu * tj ** (nu - 1.0)
    d2_grid = (p[2 : J + 2] - 2.0 * p[1 : J + 1] + p[: J]) / (h * h)
    delta = (d2_grid - d2_exact) / (2.0 * p[1 : J + 1])
    if c == 0.0 and abs(slope * J * h) < 1e-12:
        return np.zeros(0)
    return delta


def discretize(
    case: CaseSpec,
    qn: QuantumNumbers,
    grid: Grid,
    flag: Optional[Flag] = None,
) -> TridiagonalOperator:
    """Three-point discretisation of -(1/2) d^2/dq^2 + W on the grid."""
    flag = resolve_flag(case, flag)
    h = grid.h
    q = grid.nodes
    try:
        w = np.asarray(effective_potential_q(case, qn, q, flag=flag), dtype=float)
    except PctlabError:
        raise
    if not np.all(np.isfinite(w)):
        bad = q[~np.isfinite(w)][0]
        raise NumericalError(
            f"effective potential not finite at node q={bad!r}; shift the grid"
        )
    diag = 1.0 / h**2 + w

    def w_of(qv):
        return float(effective_potential_q(case, qn, np.array([qv]), flag=flag)[0])

    if grid.left_wall:
        corr = _indicial_corrections(lambda t: w_of(grid.q_min + t), h, grid.n)
        if len(corr):
            diag[: len(corr)] += corr
    if grid.right_wall:
        corr = _indicial_corrections(lambda t: w_of(grid.q_max - t), h, grid.n)
        if len(corr):
            diag[-len(corr):] += corr[::-1]
    return TridiagonalOperator(diag=diag, off=-0.5 / h**2)


def sturm_count(diag: Sequence[float], off: float, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal operator below x.

    Classic sign-count on the LDL^T pivots of (T - x I); zero pivots are
    replaced by a tiny negative value so the count stays well defined.
    """
    off2 = off * off
    pivmin = 2.3e-308 * max(1.0, off2)
    count = 0
    d = math.inf  # first pivot is a_1 - x; off2/inf == 0
    for a in np.asarray(diag, dtype=float):
        d = (a - x) - off2 / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0.0:
            count += 1
    return count


def eigen_lowest(op: TridiagonalOperator, k: int) -> np.ndarray:
    """The k smallest eigenvalues by Sturm counting + bisection.

    Bisection runs to absolute width 1e-12 * max(1, |lambda|) and every
    count tightens the brackets of all still-open targets, so the result
    is deterministic across runs and platforms.
    """
    n = len(op.diag)
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= {n}, got k={k}")
    diag = np.asarray(op.diag, dtype=float)
    off = abs(op.off)

    lo0 = float(diag.min()) - 2.0 * off
    hi0 = lo0 + 1.0
    while sturm_count(diag, op.off, hi0) < k:
        hi0 = lo0 + 2.0 * (hi0 - lo0)
        if not np.isfinite(hi0):
            raise NumericalError("eigenvalue bracket search diverged")

    los = np.full(k, lo0)
    his = np.full(k, hi0)
    tol = DEFAULT_TOLERANCES.eigen_abs
    for i in range(k):
        while his[i] - los[i] > tol * max(1.0, abs(los[i]), abs(his[i])):
            mid = 0.5 * (los[i] + his[i])
            c = sturm_count(diag, op.off, mid)
            for j in range(k):
                if c > j:
                    if mid < his[j]:
                        his[j] = mid
                else:
                    if mid > los[j]:
                        los[j] = mid
    return 0.5 * (los + his)


def _scaled_rel_err(e_numeric: float, e_closed: float) -> float:
    return abs(e_numeric - e_closed) / max(1.0, abs(e_closed))


def residual_norm(
    case: CaseSpec,
    qn: QuantumNumbers,
    h: float = 1e-3,
    flag: Optional[Flag] = None,
    max_points: int = 400_000,
    energy_shift: float = 0.0,
) -> float:
    """Relative L2 residual of (E, R) in the untransformed radial equation.

    Fourth-order stencils differentiate R on a uniform window covering
    the bulk of the state; the mass derivatives are analytic.  Small
    output (the h^4 floor) certifies that the pair genuinely solves the
    radial equation; this route never touches the transformed operator,
    so it catches errors shared by the q-space verification and the
    closed forms.
    """
    flag = resolve_flag(case, flag)
    sol = closed_form_wavefunction(case, qn, flag)
    lo_dom = case.r_domain[0]

    rs = (lo_dom + np.geomspace(1e-8, 1e10, 4096)) if lo_dom > 0 else np.geomspace(1e-8, 1e10, 4096)
    vals = np.abs(sol.R(rs))
    peak = vals.max()
    if peak == 0.0:
        raise NumericalError("R vanished on the probe grid")
    # tight core window: states with power-law tails would otherwise starve
    # the stencil resolution; contributions below 1e-4 of the peak sit under
    # the h^4 floor of the check anyway
    mask = vals >= 1e-4 * peak
    r_a = float(rs[mask].min())
    r_b = float(rs[mask].max())
    r_a = max(r_a, lo_dom + 30.0 * h, 30.0 * h)
    r_b = min(r_b, r_a + (max_points - 1) * h)
    npts = int((r_b - r_a) / h) + 1
    if npts < 64:
        raise NumericalError("residual window is degenerate; reduce h")
    r = np.linspace(r_a, r_a + h * (npts - 1), npts)

    R = sol.R(r)
    m = case.mass.m(r)
    m1 = case.mass.dm(r)
    v = target_potential(case, qn, r, flag=flag)
    e = sol.energy + energy_shift
    ld = qn.ell_d

    c = slice(2, -2)
    d1 = (-R[4:] + 8.0 * R[3:-1] - 8.0 * R[1:-3] + R[:-4]) / (12.0 * h)
    d2 = (-R[4:] + 16.0 * R[3:-1] - 30.0 * R[2:-2] + 16.0 * R[1:-3] - R[:-4]) / (12.0 * h * h)
    resid = (
        d2
        - ld * (ld + 1.0) * R[c] / r[c] ** 2
        + (m1[c] / m[c]) * ((qn.d - 1.0) / (2.0 * r[c]) * R[c] - d1)
        - 2.0 * m[c] * (v[c] - e) * R[c]
    )
    return float(np.sqrt(np.sum(resid**2)) / np.sqrt(np.sum(R[c] ** 2)))


def _norm_defect(sol) -> float:
    """Independent check of the normalization: Simpson on a dense
    log-spaced grid (the normalization itself came from adaptive
    quadrature, so the two routes share no machinery).

    The window is extended until the local tail estimate r R(r)^2 drops
    below 1e-12, which marginally bound states with power-law tails may
    only reach at astronomically large radii; the log grid keeps the
    point density per decade high regardless.
    """
    lo = sol.r_domain[0]
    rs = lo + np.geomspace(1e-10, 1e60, 16384)
    vals = np.abs(sol.R(rs))
    peak = vals.max()
    mask = vals >= 1e-9 * peak
    r_a = float(rs[mask].min())
    i_pk = int(np.argmax(vals))
    tail_est = vals**2 * (rs - lo)
    ok = np.nonzero((tail_est < 1e-10) & (np.arange(len(rs)) > i_pk) & (vals < 1e-5 * peak))[0]
    r_b = float(rs[ok[0]]) if len(ok) else float(rs[-1])
    a0 = max((r_a - lo) * 0.125, 1e-280)
    r = lo + np.geomspace(a0, r_b - lo, 400_001)
    y = sol.R(r) ** 2
    total = integrate.simpson(y, x=r)
    return abs(float(total) - 1.0)


def _flags_to_run(case: CaseSpec, flag) -> list[Optional[Flag]]:
    if flag == "both" or (flag is None and case.flagged):
        if not case.flagged:
            return [None]
        return [Flag.AS_PRINTED, Flag.RE_DERIVED]
    if flag is None:
        return [None]
    return [flag if isinstance(flag, Flag) else Flag(str(flag))]


def verify_energy(
    case: CaseSpec,
    qn: QuantumNumbers,
    n: int = 4000,
    override: Optional[tuple[float, float]] = None,
    flag=None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> list[VerificationReport]:
    """Compare one closed-form level against the grid eigenvalue.

    For flagged cases with flag='both' (or left unset) every flag
    setting is run and reported; numerical breakdown inside one flag
    becomes an error entry rather than an exception.
    """
    reports = []
    for fl in _flags_to_run(case, flag):
        reports.extend(
            _verify_states(case, qn.ell, qn.d, qn.parity, [qn.n_r], n, override, fl, tolerances)
        )
    return reports


def verify_sweep(
    case: CaseSpec,
    nr_values: Iterable[int],
    ell: int = 0,
    d: int = 3,
    parity=None,
    n: int = 4000,
    override: Optional[tuple[float, float]] = None,
    flag=None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> list[VerificationReport]:
    """Verify several radial levels of one (ell, d) channel.

    The channel shares a single discretised operator, so a sweep costs
    one eigensolve regardless of how many levels it reports.
    """
    nr_list = sorted(set(int(v) for v in nr_values))
    reports = []
    for fl in _flags_to_run(case, flag):
        reports.extend(
            _verify_states(case, ell, d, parity, nr_list, n, override, fl, tolerances)
        )
    return reports


def _verify_states(
    case: CaseSpec,
    ell: int,
    d: int,
    parity,
    nr_list: list[int],
    n: int,
    override,
    fl: Optional[Flag],
    tolerances: Tolerances,
) -> list[VerificationReport]:
    flag_name = resolve_flag(case, fl).value if case.flagged else "-"
    base = [
        VerificationReport(case_id=case.case_id.value, n_r=nr, ell=ell, d=d,
                           flag=flag_name, grid_n=n)
        for nr in nr_list
    ]
    try:
        qns = [QuantumNumbers(n_r=nr, ell=ell, d=d, parity=parity) for nr in nr_list]
        for rep, qn in zip(base, qns):
            rep.e_closed = closed_form_energy(case, qn, fl)
        top = QuantumNumbers(n_r=max(nr_list), ell=ell, d=d, parity=parity)
        ranks = [nr - case.index_base for nr in nr_list]
        if min(ranks) < 0:
            raise ValidationError(
                f"n_r below the case index base {case.index_base}"
            )
        grid = build_grid(case, top, n, override=override, flag=fl)
        op = discretize(case, top, grid, flag=fl)
        evals = eigen_lowest(op, max(ranks) + 1)
        for rep, qn, rank in zip(base, qns, ranks):
            rep.e_numeric = float(evals[rank])
            rep.abs_err = abs(rep.e_numeric - rep.e_closed)
            rep.rel_err = _scaled_rel_err(rep.e_numeric, rep.e_closed)
            try:
                sol = closed_form_wavefunction(case, qn, fl)
                rep.residual_l2 = residual_norm(case, qn, flag=fl)
                rep.norm_defect = _norm_defect(sol)
            except PctlabError as exc:
                rep.error = f"wavefunction check failed: {exc}"
            rep.passed = (
                not rep.error
                and rep.rel_err <= tolerances.energy
                and rep.norm_defect <= tolerances.norm
            )
    except PctlabError as exc:
        msg = str(exc)
        for rep in base:
            if not rep.error:
                rep.error = msg
                rep.passed = False
    return base


def check_degeneracy(case: CaseSpec, n_r: int, ell: int, d: int, tol: float = 1e-12) -> bool:
    """True iff closed-form energies agree pairwise along the ladder
    (ell, d) -> (ell-1, d+2) -> ... to `tol` absolute."""
    if case.case_id not in POWER_LAW_CASES:
        raise ValidationError("the degeneracy ladder applies to the power-law cases")
    from .model import degeneracy_ladder

    energies = [
        closed_form_energy(case, QuantumNumbers(n_r=n_r, ell=l2, d=d2))
        for l2, d2 in degeneracy_ladder(n_r, ell, d)
    ]
    return max(energies) - min(energies) <= tol
