"""Witness functions, the dual feasibility LP, and rigorous certification.

A witness is a nonnegative combination

    W(t) = v0 + v1 J0(t) + v196 J0(1.96 t)
         + sum_i w_m[i] * (vertex profile of M_i)
         + sum_i w_t[i] * (vertex-minus-edge profile of T_i)
         - sum_i w_theta[i] * (CT profile i)

with W(0) >= 1 and W(t) >= 0 for all t >= 0.  Such a witness forces the
quadratic inequality

    a d^2 + b d + c + gamma * Gamma >= 0,
    a = -(1 - v196),
    b = v0 + sum alpha(M_i) w_m[i] + sum alpha(T_i) w_t[i] - 5 sum w_theta,
    c = sum w_theta,
    Gamma = v1 + v196 + sum |E(M_i)| w_m + sum |E(T_i)| w_t + sum c_ct w_theta,

for the density d of any periodic set with s(1) <= gamma and
s(1.96) <= 1 + gamma.  At gamma = 0 the admissible densities in [0, 1] lie
below a root of the quadratic (the maximum root when it opens downward, the
smaller one when v196 > 1 and the larger root clears 1); that root is the
certified bound delta_star, and gamma_extract recovers the largest
admissible gamma.

Verification is two-grid and never trusts the solver: W is evaluated on a
dense grid (default step 1e-5) with a Lipschitz bound covering the gaps, the
tail t > tail_start is certified analytically by the witness's constant part
minus envelope-bounded oscillatory terms, and every Bessel evaluation error is
charged against the margin.  The LP itself runs on a coarse grid (step 0.05)
in 80-bit floats with reserved slack so the rounded float64 coefficients still
verify.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bessel import J0_ABS_ERROR, j0_envelope, j0_values
from .errors import DomainError, FeasibilityError, SchemaError
from .registry import (
    CheckResult,
    Registry,
    constraint_rhs_check,
    ct_profile_terms,
    profile_terms,
)
from .simplex import solve_lp
from .torus import GridSet, Spectrum, pair_correlation, pair_correlation_direct

__all__ = [
    "WitnessCoefficients",
    "CertificateReport",
    "FeasibilityResult",
    "CertifyResult",
    "witness_eval",
    "witness_lipschitz",
    "witness_terms",
    "verify_witness",
    "spot_audit",
    "quadratic_root",
    "gamma_extract",
    "solve_feasibility",
    "default_solve_grid",
    "certify_bound",
    "kappa_constraint_audit",
    "write_certificate",
    "load_certificate",
    "verify_certificate_file",
    "CROFT_TARGET_DENSITY",
    "DEFAULT_BUDGET",
]

# Croft-tortoise optimum, frozen from constructions.optimize_croft(1e-4);
# the density any clumpiness constant is measured against.
CROFT_TARGET_DENSITY = 0.2293647316297585

DEFAULT_BUDGET = 15.0
DEFAULT_MARGIN = 3e-3
DEFAULT_GRID_STEP = 1e-5
DEFAULT_TAIL_START = 20.0
DEFAULT_RMAX = 4.0


@dataclass(frozen=True)
class WitnessCoefficients:
    v0: float
    v1: float
    v196: float
    w_m: tuple
    w_t: tuple
    w_theta: tuple
    registry: Registry

    def __post_init__(self):
        object.__setattr__(self, "v0", float(self.v0))
        object.__setattr__(self, "v1", float(self.v1))
        object.__setattr__(self, "v196", float(self.v196))
        object.__setattr__(self, "w_m", tuple(float(x) for x in self.w_m))
        object.__setattr__(self, "w_t", tuple(float(x) for x in self.w_t))
        object.__setattr__(self, "w_theta", tuple(float(x) for x in self.w_theta))
        if len(self.w_m) != len(self.registry.m_graphs):
            raise DomainError("w_m length disagrees with registry")
        if len(self.w_t) != len(self.registry.t_graphs):
            raise DomainError("w_t length disagrees with registry")
        if len(self.w_theta) != len(self.registry.ct_pairs):
            raise DomainError("w_theta length disagrees with registry")
        for v in (self.v0, self.v1, self.v196, *self.w_m, *self.w_t, *self.w_theta):
            if not (v >= 0.0 and math.isfinite(v)):
                raise DomainError("witness coefficients must be finite and >= 0")

    @property
    def budget_sum(self) -> float:
        """Budget-weighted coefficient sum: T and CT weights count twice."""
        return (
            self.v0
            + self.v1
            + self.v196
            + sum(self.w_m)
            + 2.0 * sum(self.w_t)
            + 2.0 * sum(self.w_theta)
        )

    def as_dict(self) -> dict:
        return {
            "v0": self.v0,
            "v1": self.v1,
            "v196": self.v196,
            "w_m": list(self.w_m),
            "w_t": list(self.w_t),
            "w_theta": list(self.w_theta),
        }


def _var_terms(registry: Registry):
    """Per-variable (constant, radii, coeffs) in LP variable order.

    Variable order: v0, v1, v196, w_m..., w_t..., w_theta...; the CT sign
    flip (the witness subtracts CT profiles) is already folded in.
    """
    out = [
        (1.0, np.array([]), np.array([])),       # v0
        (0.0, np.array([1.0]), np.array([1.0])),  # v1
        (0.0, np.array([1.96]), np.array([1.0])),  # v196
    ]
    for g in registry.m_graphs + registry.t_graphs:
        radii, coeffs = profile_terms(g)
        const = float(coeffs[radii == 0.0].sum())
        keep = radii > 0.0
        out.append((const, radii[keep], coeffs[keep]))
    for p in registry.ct_pairs:
        radii, coeffs = ct_profile_terms(p)
        if len(radii) == 0:
            out.append((0.0, np.array([]), np.array([])))
            continue
        const = -float(coeffs[radii == 0.0].sum())
        keep = radii > 0.0
        out.append((const, radii[keep], -coeffs[keep]))
    return out


def _coeff_vector(c: WitnessCoefficients) -> np.ndarray:
    return np.array(
        [c.v0, c.v1, c.v196, *c.w_m, *c.w_t, *c.w_theta], dtype=float
    )


def witness_terms(c: WitnessCoefficients):
    """(constant, radii, coefficients) of W with equal radii merged."""
    x = _coeff_vector(c)
    const = 0.0
    acc = {}
    for xi, (c0, radii, coeffs) in zip(x, _var_terms(c.registry)):
        if xi == 0.0:
            continue
        const += xi * c0
        for r, co in zip(radii, coeffs):
            key = round(float(r), 12)
            acc[key] = acc.get(key, 0.0) + xi * float(co)
    items = sorted(acc.items())
    radii = np.array([r for r, _ in items])
    coeffs = np.array([co for _, co in items])
    return const, radii, coeffs


def witness_eval(c: WitnessCoefficients, t):
    """W(t) for scalar or array t (t >= 0)."""
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    tt = t_arr[None] if scalar else t_arr
    if np.any(tt < 0):
        raise DomainError("witness arguments must be >= 0")
    const, radii, coeffs = witness_terms(c)
    acc = np.full_like(tt, const)
    for r, co in zip(radii, coeffs):
        acc = acc + co * j0_values(r * tt)
    return float(acc[0]) if scalar else acc


def _eval_error(c: WitnessCoefficients) -> float:
    # constant part is exact; each J0 term carries its certified bound
    _, radii, coeffs = witness_terms(c)
    return J0_ABS_ERROR * float(np.abs(coeffs).sum())


def witness_lipschitz(c: WitnessCoefficients, r_max: float = DEFAULT_RMAX) -> float:
    """0.6 * sum |coef_i| r_i over the J0 terms of W: a global |W'| bound.

    Uses sup |J0'| = sup |J1| < 0.6.  Errors out if any registry radius
    exceeds r_max, which would invalidate the documented budget chain.
    """
    if c.registry.max_radius > r_max:
        raise DomainError(
            f"registry radius {c.registry.max_radius} exceeds r_max {r_max}"
        )
    _, radii, coeffs = witness_terms(c)
    return 0.6 * float(np.sum(np.abs(coeffs) * radii))


# ---------------------------------------------------------------------------
# quadratic and gamma
# ---------------------------------------------------------------------------

def quadratic_coefficients(c: WitnessCoefficients):
    reg = c.registry
    a = -(1.0 - c.v196)
    b = (
        c.v0
        + sum(g.alpha * w for g, w in zip(reg.m_graphs, c.w_m))
        + sum(g.alpha * w for g, w in zip(reg.t_graphs, c.w_t))
        - 5.0 * sum(c.w_theta)
    )
    qc = float(sum(c.w_theta))
    return a, b, qc


def quadratic_root(c: WitnessCoefficients):
    """Certified density bound from a d^2 + b d + qc >= 0 (d admissible).

    For v196 < 1 the parabola opens downward and admissible densities sit
    below the maximum root.  For v196 > 1 it opens upward and the bound is
    the *smaller* root, valid only when the larger root exceeds 1 so that
    the whole window (root1, 1] is excluded; otherwise no density bound
    follows and the certificate is degenerate.
    """
    a, b, qc = quadratic_coefficients(c)
    if a == 0.0:
        if b >= 0.0:
            raise DomainError("degenerate certificate: linear part gives no bound")
        return min(1.0, -qc / b), (a, b, qc)
    disc = b * b - 4.0 * a * qc
    if a < 0.0:
        if disc < 0.0:
            raise DomainError("no real root: certificate vacuous")
        delta_star = (-b - math.sqrt(disc)) / (2.0 * a)
        return delta_star, (a, b, qc)
    # a > 0 (v196 > 1)
    if disc <= 0.0:
        raise DomainError("quadratic nonnegative everywhere: no density bound")
    r1 = (-b - math.sqrt(disc)) / (2.0 * a)
    r2 = (-b + math.sqrt(disc)) / (2.0 * a)
    if r1 < 0.0 or r2 <= 1.0:
        raise DomainError(
            "upward quadratic does not exclude (root, 1]: no density bound"
        )
    return r1, (a, b, qc)


def gamma_coefficient(c: WitnessCoefficients) -> float:
    """Exact per-graph assembly of the gamma perturbation weight Gamma."""
    reg = c.registry
    return (
        c.v1
        + c.v196
        + sum(g.n_edges * w for g, w in zip(reg.m_graphs, c.w_m))
        + sum(g.n_edges * w for g, w in zip(reg.t_graphs, c.w_t))
        + sum(p.c_ct * w for p, w in zip(reg.ct_pairs, c.w_theta))
    )


def _quadratic_interval_max(a, b, qc, lo, hi):
    vals = [a * lo * lo + b * lo + qc, a * hi * hi + b * hi + qc]
    if a != 0.0:
        v = -b / (2.0 * a)
        if lo < v < hi:
            vals.append(a * v * v + b * v + qc)
    return max(vals)


def gamma_extract(
    c: WitnessCoefficients,
    epsilon: float,
    target_density: float = CROFT_TARGET_DENSITY,
) -> float:
    """Largest gamma (by bisection) keeping the perturbed quadratic negative
    on [delta_star + epsilon, 1].

    Precondition: delta_star + epsilon < target_density, so the bound still
    separates from the benchmark construction.
    """
    if epsilon <= 0.0:
        raise DomainError("epsilon must be > 0")
    delta_star, (a, b, qc) = quadratic_root(c)
    if delta_star + epsilon >= target_density:
        raise FeasibilityError(
            f"delta_star + epsilon = {delta_star + epsilon} reaches the target "
            f"density {target_density}; no clumpiness constant extractable"
        )
    Gamma = gamma_coefficient(c)
    lo_d, hi_d = delta_star + epsilon, 1.0

    def admissible(gamma):
        return _quadratic_interval_max(a, b, qc, lo_d, hi_d) + gamma * Gamma < 0.0

    if not admissible(0.0):
        raise FeasibilityError("quadratic not negative beyond delta_star + epsilon")
    if Gamma == 0.0:
        return 1.0  # no gamma sensitivity at all; any gamma <= 1 works
    lo, hi = 0.0, 1.0
    while admissible(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            return lo
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if admissible(mid):
            lo = mid
        else:
            hi = mid
    if lo <= 0.0:
        raise FeasibilityError("no positive gamma admissible at this epsilon")
    return lo


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertificateReport:
    w_at_zero: float
    min_grid_value: float
    argmin_t: float
    grid_step: float
    margin: float
    lipschitz_bound: float
    eval_error: float
    tail_floor: float
    tail_start: float
    tail_const: float
    tail_osc: float
    quadratic: tuple
    delta_star: float
    gamma: float
    verdict: str  # "certified" or "failed: <reasons>"

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"


_CHUNK = 1 << 20


def _grid_min(c: WitnessCoefficients, grid_step: float, tail_start: float):
    n_pts = int(math.floor(tail_start / grid_step)) + 1
    const, radii, coeffs = witness_terms(c)
    best = math.inf
    best_t = 0.0
    for start in range(0, n_pts, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_pts), dtype=np.int64)
        ts = idx * grid_step
        acc = np.full_like(ts, const, dtype=float)
        for r, co in zip(radii, coeffs):
            acc += co * j0_values(r * ts)
        i = int(np.argmin(acc))
        if acc[i] < best:
            best = float(acc[i])
            best_t = float(ts[i])
    return best, best_t


def _tail_bound(c: WitnessCoefficients, tail_start: float):
    """(constant part, envelope bound on the oscillatory part at tail_start).

    W(t) >= const - sum |coef| env(r * t) for t >= tail_start, and the
    envelope is nonincreasing, so the value at tail_start floors the tail.
    """
    const, radii, coeffs = witness_terms(c)
    osc = float(
        sum(abs(co) * j0_envelope(r * tail_start) for r, co in zip(radii, coeffs))
    )
    return const, osc


def verify_witness(
    c: WitnessCoefficients,
    grid_step: float = DEFAULT_GRID_STEP,
    margin: float = DEFAULT_MARGIN,
    tail_start: float = DEFAULT_TAIL_START,
    gamma_epsilon: float = 1e-3,
    gamma_target: float = CROFT_TARGET_DENSITY,
) -> CertificateReport:
    """Grid + Lipschitz + tail-envelope verification of W >= 0 and W(0) >= 1.

    Mathematical failures come back as a failed verdict, never exceptions.
    """
    L = witness_lipschitz(c)
    if L > 0 and grid_step > margin / L:
        raise DomainError(
            f"grid_step {grid_step} too coarse: needs <= margin/L = {margin / L}"
        )
    eval_err = _eval_error(c)
    w0 = witness_eval(c, 0.0)
    min_grid, argmin_t = _grid_min(c, grid_step, tail_start)
    tail_const, tail_osc = _tail_bound(c, tail_start)
    tail_floor = tail_const - tail_osc

    reasons = []
    if not w0 >= 1.0 + eval_err:
        reasons.append(f"W(0) = {w0} not certifiably >= 1")
    if not min_grid >= margin:
        reasons.append(f"grid min {min_grid} at t = {argmin_t} below margin {margin}")
    if not margin > L * grid_step / 2.0 + eval_err:
        reasons.append("margin does not cover Lipschitz gap + evaluation error")
    if not tail_floor > 0.0:
        reasons.append(
            f"tail floor {tail_floor} not positive at tail_start {tail_start}"
        )

    delta_star = math.nan
    quad = (math.nan, math.nan, math.nan)
    gamma = 0.0
    try:
        delta_star, quad = quadratic_root(c)
    except DomainError as exc:
        reasons.append(str(exc))

    verdict = "certified" if not reasons else "failed: " + "; ".join(reasons)
    if verdict == "certified":
        try:
            gamma = gamma_extract(c, gamma_epsilon, gamma_target)
        except FeasibilityError:
            gamma = 0.0
    return CertificateReport(
        w_at_zero=w0,
        min_grid_value=min_grid,
        argmin_t=argmin_t,
        grid_step=grid_step,
        margin=margin,
        lipschitz_bound=L,
        eval_error=eval_err,
        tail_floor=tail_floor,
        tail_start=tail_start,
        tail_const=tail_const,
        tail_osc=tail_osc,
        quadratic=quad,
        delta_star=delta_star,
        gamma=gamma,
        verdict=verdict,
    )


def spot_audit(
    c: WitnessCoefficients, grid_step: float, tail_start: float, factor: int = 10
):
    """Re-scan W on a factor-times finer grid; returns (min value, argmin)."""
    return _grid_min(c, grid_step / factor, tail_start)


# ---------------------------------------------------------------------------
# the feasibility LP
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # "feasible" | "infeasible"
    coefficients: WitnessCoefficients | None
    farkas: np.ndarray | None = None
    farkas_valid: bool = False
    iterations: int = 0


def default_solve_grid(tail_start: float = DEFAULT_TAIL_START, step: float = 0.05):
    return np.arange(0.0, tail_start + step / 2, step)


def solve_feasibility(
    registry: Registry,
    delta_plus: float,
    t_grid=None,
    budget: float = DEFAULT_BUDGET,
    *,
    grid_slack: float = 5e-3,
    w0_slack: float = 1e-9,
    tail_constraint_at: float | None = None,
    tail_margin: float = 6e-3,
    minimize_quadratic: bool = False,
) -> FeasibilityResult:
    """Find nonnegative witness coefficients for the density target delta_plus.

    Constraints: W >= grid_slack on the solve grid, W(0) >= 1 + w0_slack,
    the weighted coefficient budget, the quadratic inequality at
    delta_plus, and (optionally) an envelope tail row at tail_constraint_at.
    The grid slack deliberately exceeds the verification margin so the
    rounded-down float64 solution still verifies at a 200x finer step.

    With minimize_quadratic the solver minimizes the quadratic row instead of
    stopping at the first feasible vertex, driving delta_star below the
    target rather than landing on it.
    """
    if not 0.0 < delta_plus < 1.0:
        raise DomainError("delta_plus must lie in (0, 1)")
    if t_grid is None:
        t_grid = default_solve_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    if len(t_grid) < 2 or np.max(np.diff(np.sort(t_grid))) > 0.05 + 1e-12:
        raise DomainError("solve grid must cover the range with step <= 0.05")
    var_terms = _var_terms(registry)
    n = len(var_terms)
    nm, nt, nc = len(registry.m_graphs), len(registry.t_graphs), len(registry.ct_pairs)

    def profile_matrix(ts):
        cols = []
        for const, radii, coeffs in var_terms:
            acc = np.full_like(ts, const, dtype=float)
            for r, co in zip(radii, coeffs):
                acc += co * j0_values(r * ts)
            cols.append(acc)
        return np.column_stack(cols)

    rows = []
    rhs = []
    # W(t) >= grid_slack
    P = profile_matrix(t_grid)
    rows.append(-P)
    rhs.append(np.full(len(t_grid), -grid_slack))
    # W(0) >= 1 + w0_slack
    P0 = profile_matrix(np.array([0.0]))
    rows.append(-P0)
    rhs.append(np.array([-(1.0 + w0_slack)]))
    # coefficient budget (T and CT weights doubled)
    budget_row = np.concatenate(
        [np.ones(3), np.ones(nm), 2.0 * np.ones(nt), 2.0 * np.ones(nc)]
    )
    rows.append(budget_row[None, :])
    rhs.append(np.array([budget - 1e-9]))
    # quadratic inequality at delta_plus
    d = delta_plus
    qrow = np.zeros(n)
    qrow[0] = d
    qrow[2] = d * d
    for i, g in enumerate(registry.m_graphs):
        qrow[3 + i] = g.alpha * d
    for i, g in enumerate(registry.t_graphs):
        qrow[3 + nm + i] = g.alpha * d
    for i in range(nc):
        qrow[3 + nm + nt + i] = 1.0 - 5.0 * d
    rows.append(qrow[None, :])
    rhs.append(np.array([d * d]))
    # optional tail row: constant part must beat the oscillatory envelope
    if tail_constraint_at is not None:
        T = float(tail_constraint_at)
        trow = np.zeros(n)
        for i, (const, radii, coeffs) in enumerate(var_terms):
            env = float(
                sum(abs(co) * j0_envelope(r * T) for r, co in zip(radii, coeffs))
            )
            trow[i] = env - const
        rows.append(trow[None, :])
        rhs.append(np.array([-tail_margin]))

    A = np.vstack(rows)
    b = np.concatenate(rhs)
    objective = np.asarray(qrow, dtype=float) if minimize_quadratic else None
    res = solve_lp(A, b, n, objective=objective)
    if res.status == "infeasible":
        return FeasibilityResult(
            "infeasible", None, res.farkas, res.farkas_valid, res.iterations
        )
    if res.status != "optimal":
        raise FeasibilityError(f"LP solver returned {res.status}")
    x = res.x
    coeffs = WitnessCoefficients(
        v0=x[0],
        v1=x[1],
        v196=x[2],
        w_m=tuple(x[3 : 3 + nm]),
        w_t=tuple(x[3 + nm : 3 + nm + nt]),
        w_theta=tuple(x[3 + nm + nt :]),
        registry=registry,
    )
    return FeasibilityResult("feasible", coeffs, iterations=res.iterations)


@dataclass(frozen=True)
class CertifyResult:
    best_delta: float
    coefficients: WitnessCoefficients
    report: CertificateReport
    attempts: tuple  # (delta_plus, tail_start, outcome) log


def _attempt(registry, delta_plus, *, budget, margin, verify_step, tail_start, max_tail):
    """Solve + verify at one delta_plus; escalate the tail start as needed."""
    T = tail_start
    log = []
    while T <= max_tail:
        # solve-grid rows stay capped at t = 40 (LP size); the envelope tail
        # row at T pushes the constant part up, and the dense verification
        # grid covering [0, T] is sovereign either way
        grid = default_solve_grid(min(T, 40.0))
        res = solve_feasibility(
            registry,
            delta_plus,
            grid,
            budget,
            tail_constraint_at=T,
            tail_margin=2.0 * margin,
        )
        if res.status != "feasible":
            log.append((delta_plus, T, "lp-infeasible"))
            T *= 2.0
            continue
        report = verify_witness(res.coefficients, verify_step, margin, T)
        log.append((delta_plus, T, report.verdict))
        if report.certified:
            return res.coefficients, report, log
        T *= 2.0
    return None, None, log


def certify_bound(
    registry: Registry,
    delta_grid=None,
    *,
    budget: float = DEFAULT_BUDGET,
    margin: float = DEFAULT_MARGIN,
    verify_step: float = DEFAULT_GRID_STEP,
    tail_start: float = DEFAULT_TAIL_START,
    max_tail: float = 640.0,
    bisect_tol: float = 2e-4,
) -> CertifyResult:
    """Smallest delta_plus whose witness passes full verification.

    Runs a bisection over delta_plus (seeded by delta_grid when given);
    every accepted point is a complete solve + independent verification.
    """
    if delta_grid is None:
        lo, hi = 0.05, 0.95
    else:
        lo, hi = float(np.min(delta_grid)), float(np.max(delta_grid))
    attempts = []

    def run(dp):
        coeffs, report, log = _attempt(
            registry,
            dp,
            budget=budget,
            margin=margin,
            verify_step=verify_step,
            tail_start=tail_start,
            max_tail=max_tail,
        )
        attempts.extend(log)
        return coeffs, report

    best = run(hi)
    if best[0] is None:
        raise FeasibilityError(
            f"no certificate even at delta_plus = {hi}; registry too weak"
        )
    best_dp = hi
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        coeffs, report = run(mid)
        if coeffs is not None:
            best = (coeffs, report)
            best_dp = mid
            hi = mid
        else:
            lo = mid
    return CertifyResult(best_dp, best[0], best[1], tuple(attempts))


# ---------------------------------------------------------------------------
# constraint audit against real sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditReport:
    items: tuple  # CheckResult
    ok: bool


def kappa_constraint_audit(
    S: Spectrum,
    registry: Registry,
    r_probes=(1.0, 1.96),
    gridset: GridSet | None = None,
    angle_samples: int = 4096,
    rng_seed: int = 0,
) -> AuditReport:
    """Audit (D), (F2), (A1)/(A2)-style identities, (G), and (CT) if loaded.

    The r-probe rows compare the spectral synthesis against the
    direct-geometry oracle when the originating GridSet is supplied.
    """
    items = []
    dens = S.density
    items.append(
        CheckResult(
            "D: kappa(0) = density^2",
            float(S.kappas[S.ms == 0][0]) if np.any(S.ms == 0) else 0.0,
            dens * dens,
            1e-9,
            bool(abs((S.kappas[S.ms == 0][0] if np.any(S.ms == 0) else 0.0) - dens**2) <= 1e-9),
        )
    )
    total = float(S.kappas.sum()) + S.tail_mass
    items.append(
        CheckResult("F2: sum kappa + tail = density", total, dens, 1e-9,
                    bool(abs(total - dens) <= 1e-9))
    )
    for r in r_probes:
        ev = pair_correlation(S, float(r))
        if gridset is not None:
            direct = pair_correlation_direct(
                gridset, float(r), angle_samples=angle_samples, rng_seed=rng_seed
            )
            tol = ev.rigor_bound + 2e-3  # stratified angular-average allowance
            items.append(
                CheckResult(
                    f"A: synthesis vs direct at r={r}",
                    ev.value,
                    direct,
                    tol,
                    bool(abs(ev.value - direct) <= tol),
                )
            )
    for g in registry.graphs:
        items.append(constraint_rhs_check(S, g))
    for p in registry.ct_pairs:
        radii, coeffs = ct_profile_terms(p)
        ts = S.frequency(S.ms)
        vals = np.zeros_like(ts)
        for r, co in zip(radii, coeffs):
            vals += co * j0_values(r * ts)
        lhs = float(vals @ S.kappas)
        f1 = pair_correlation(S, 1.0)
        rhs = 5.0 * dens - 1.0 - p.c_ct * f1.value
        rigor = (
            S.tail_mass * float(np.abs(coeffs).sum())
            + p.c_ct * f1.rigor_bound
            + J0_ABS_ERROR * len(radii) * float(S.kappas.sum())
            + 1e-10
        )
        items.append(
            CheckResult(f"CT {p.name}", lhs, rhs, rigor, bool(lhs >= rhs - rigor))
        )
    return AuditReport(tuple(items), all(i.ok for i in items))


# ---------------------------------------------------------------------------
# certificate files
# ---------------------------------------------------------------------------

def write_certificate(path, c: WitnessCoefficients, report: CertificateReport):
    doc = {
        "schema_version": 1,
        "kind": "witness_certificate",
        "registry_hash": c.registry.registry_hash,
        "coefficients": c.as_dict(),
        "grid_step": report.grid_step,
        "margin": report.margin,
        "tail_start": report.tail_start,
        "delta_star": report.delta_star,
        "gamma": report.gamma,
        "verdict": report.verdict,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def load_certificate(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    for key in ("schema_version", "kind", "registry_hash", "coefficients",
                "grid_step", "margin", "tail_start", "verdict"):
        if key not in doc:
            raise SchemaError(f"certificate missing field {key!r}")
    if doc["kind"] != "witness_certificate":
        raise SchemaError("not a witness certificate file")
    return doc


def verify_certificate_file(path, registry: Registry):
    """Re-run verification from the file alone; returns (report, reproduced).

    ``reproduced`` is True when the recomputed verdict, delta_star, and gamma
    agree with the stored ones bit-for-bit.
    """
    doc = load_certificate(path)
    if doc["registry_hash"] != registry.registry_hash:
        raise SchemaError("certificate registry hash does not match the registry")
    raw = doc["coefficients"]
    try:
        c = WitnessCoefficients(
            v0=float(raw["v0"]),
            v1=float(raw["v1"]),
            v196=float(raw["v196"]),
            w_m=tuple(raw["w_m"]),
            w_t=tuple(raw["w_t"]),
            w_theta=tuple(raw["w_theta"]),
            registry=registry,
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed coefficients: {exc}") from exc
    report = verify_witness(
        c, float(doc["grid_step"]), float(doc["margin"]), float(doc["tail_start"])
    )
    stored_delta = doc.get("delta_star")
    reproduced = (
        report.verdict == doc["verdict"]
        and (
            (isinstance(stored_delta, float) and math.isnan(stored_delta))
            if math.isnan(report.delta_star)
            else report.delta_star == stored_delta
        )
        and report.gamma == doc.get("gamma")
    )
    return report, reproduced
