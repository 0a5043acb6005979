"""Experiment drivers: simulation specs, CSV emission, sweeps, verification.

This layer glues the physics modules together behind declarative specs so
that the command-line interface stays thin.  Everything here is pure except
the CSV writers, which take an open text file; byte-identical output for
identical specs is a hard requirement (golden tests diff these files), so
all floats are rendered with a fixed 12-significant-digit format.

Barrier conventions: discrete-time runs take the barrier as the magnitude
beta of the staying amplitude (phi = arcsin(beta); the phase i is implicit),
matching how the curves are usually labeled.  Continuous-time runs take it
as the hop attenuation epsilon instead; beta must stay 0 there.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .ctqw import CtqwParams, corrected_gamma, ctqw_runtime, ctqw_success_curve
from .phases import (
    BlockedRegimeError,
    corrected_eta,
    hoyer_residual,
    overlap_angle,
    rotation_angle_sigma,
    runtime_t_star,
    runtime_t_star_exact,
)
from .reduced import (
    build_reduced_operators,
    evolve_reduced,
    project,
    psi_minus_one,
    symmetry_classes,
)
from .walk import WalkParams, evolve, initial_state, step, success_probability

__all__ = [
    "MODES",
    "DEFAULT_MAX_FULL_N",
    "VERIFY_DEFAULT_NS",
    "VERIFY_DEFAULT_PHIS",
    "ExperimentSpec",
    "ExperimentResult",
    "SweepRow",
    "CheckResult",
    "phi_from_beta",
    "run_experiment",
    "summary_line",
    "write_curve_csv",
    "run_sweep",
    "write_sweep_csv",
    "run_verification",
]

MODES = ("dtqw-full", "dtqw-reduced", "ctqw")

# Full-space states above this N cost >16.8M complex amplitudes; default to
# the reduced model beyond it unless the caller raises the cap explicitly.
DEFAULT_MAX_FULL_N = 4096

VERIFY_DEFAULT_NS = (4, 16, 64)
VERIFY_DEFAULT_PHIS = (0.0, 0.3, math.asin(0.8))

_HALF_PI = math.pi / 2
_FLOAT_FMT = ".12g"


def phi_from_beta(beta: float) -> float:
    """Barrier phase for a staying amplitude of magnitude beta."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    return math.asin(beta)


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one simulation run.

    mode selects the engine: dtqw-full (statevector), dtqw-reduced (3x3
    model, same numbers to 1e-10), or ctqw.  corrected means "apply the
    matching correction": the eta phase for discrete modes, the adjusted
    jumping rate for ctqw.  Unset steps/t_max pick windows wide enough to
    contain the first success peak.
    """

    mode: str
    n_vertices: int
    beta: float = 0.0
    corrected: bool = False
    steps: int | None = None
    marked: int = 0
    epsilon: float = 0.0
    gamma: float | None = None
    t_max: float | None = None
    samples: int = 401
    out: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if self.steps is not None and self.steps < 0:
            raise ValueError(f"steps must be non-negative, got {self.steps}")
        if not 0 <= self.marked < self.n_vertices:
            raise ValueError(
                f"marked vertex {self.marked} outside [0, {self.n_vertices})"
            )
        if self.mode == "ctqw":
            self._validate_ctqw()
        else:
            self._validate_dtqw()

    def _validate_dtqw(self) -> None:
        if self.n_vertices < 3:
            raise ValueError(f"need at least 3 vertices, got {self.n_vertices}")
        if self.corrected and self.beta == 1.0:
            raise BlockedRegimeError(
                "beta = 1 blocks every hop; the corrected walk does not exist"
            )
        if self.epsilon != 0.0:
            raise ValueError("epsilon applies to ctqw mode only; use beta")
        if self.gamma is not None:
            raise ValueError("gamma applies to ctqw mode only")
        if self.t_max is not None:
            raise ValueError("t_max applies to ctqw mode only; use steps")

    def _validate_ctqw(self) -> None:
        if self.n_vertices < 2:
            raise ValueError(f"need at least 2 vertices, got {self.n_vertices}")
        if self.beta != 0.0:
            raise ValueError("ctqw mode takes the barrier as epsilon, not beta")
        if self.steps is not None:
            raise ValueError("steps applies to discrete modes only; use t_max/samples")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.gamma is not None and not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.corrected and self.gamma is not None:
            raise ValueError("corrected ctqw chooses gamma itself; drop gamma")
        if self.samples < 2:
            raise ValueError(f"need at least 2 time samples, got {self.samples}")
        if self.t_max is not None and not self.t_max > 0.0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")

    @property
    def phi(self) -> float:
        return phi_from_beta(self.beta)

    @property
    def eta(self) -> float:
        """Coin/oracle phase the discrete run will use."""
        if self.corrected:
            return corrected_eta(self.phi, self.n_vertices)
        return 0.0

    def resolved_steps(self) -> int:
        """Step count, defaulting to a window that contains the first peak."""
        if self.steps is not None:
            return self.steps
        if self.corrected:
            # 1.35x the predicted peak: past the peak, short of the second hump.
            return math.ceil(1.35 * runtime_t_star_exact(self.phi, self.n_vertices))
        # Uncorrected peaks drift later as beta grows; 2.8x the error-free
        # runtime covers the first hump for the mild barriers of interest.
        return math.ceil(2.8 * runtime_t_star_exact(0.0, self.n_vertices))

    def resolved_gamma(self) -> float:
        """Jumping rate a ctqw run will use (1/N unless corrected/overridden)."""
        if self.corrected:
            return corrected_gamma(self.n_vertices, self.epsilon)
        if self.gamma is not None:
            return self.gamma
        return 1.0 / self.n_vertices

    def time_grid(self) -> np.ndarray:
        t_max = self.t_max
        if t_max is None:
            t_max = 1.5 * ctqw_runtime(self.n_vertices)
        return np.linspace(0.0, t_max, self.samples)


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """A run's curve plus the summary quantities the CLI prints.

    x holds step indices (dtqw) or times (ctqw), aligned with probabilities;
    predicted_peak is the phase-matching runtime prediction in the same
    units, or None where no honest prediction exists (uncorrected barriers,
    miscalibrated ctqw rates).
    """

    spec: ExperimentSpec
    x: np.ndarray
    probabilities: np.ndarray
    peak_index: int
    peak_x: float
    peak_probability: float
    predicted_peak: float | None

    def rows(self) -> Iterable[tuple[float, float]]:
        return zip(self.x.tolist(), self.probabilities.tolist())


def _predicted_peak_dtqw(spec: ExperimentSpec) -> float | None:
    if spec.corrected:
        return float(runtime_t_star(spec.phi, spec.n_vertices))
    if spec.beta == 0.0:
        return float(runtime_t_star(0.0, spec.n_vertices))
    return None


def _predicted_peak_ctqw(spec: ExperimentSpec) -> float | None:
    effective = spec.resolved_gamma() * (1.0 - spec.epsilon) * spec.n_vertices
    if abs(effective - 1.0) <= 1e-9:
        return ctqw_runtime(spec.n_vertices)
    return None


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute a spec and package the curve with its summary."""
    if spec.mode == "ctqw":
        params = CtqwParams(
            n_vertices=spec.n_vertices,
            epsilon=spec.epsilon,
            gamma=spec.resolved_gamma(),
            marked=spec.marked,
        )
        x = spec.time_grid()
        probs = ctqw_success_curve(params, x)
        predicted = _predicted_peak_ctqw(spec)
    else:
        steps = spec.resolved_steps()
        if spec.mode == "dtqw-full":
            params = WalkParams(
                n_vertices=spec.n_vertices,
                phi=spec.phi,
                eta=spec.eta,
                marked=spec.marked,
            )
            probs = evolve(params, steps)
        else:
            # The reduced model is marked-agnostic: vertex-transitivity makes
            # every choice of marked vertex give the same curve.
            probs = evolve_reduced(spec.n_vertices, spec.phi, spec.eta, steps)
        x = np.arange(steps + 1)
        predicted = _predicted_peak_dtqw(spec)
    peak_index = int(np.argmax(probs))
    return ExperimentResult(
        spec=spec,
        x=x,
        probabilities=probs,
        peak_index=peak_index,
        peak_x=float(x[peak_index]),
        peak_probability=float(probs[peak_index]),
        predicted_peak=predicted,
    )


def summary_line(result: ExperimentResult) -> str:
    """One human-readable line: where the run peaked vs. where theory says."""
    if result.spec.mode == "ctqw":
        head = (
            f"peak probability {result.peak_probability:.6f}"
            f" at time {result.peak_x:{_FLOAT_FMT}}"
        )
        if result.predicted_peak is None:
            return head + "; no peak-time prediction for a miscalibrated rate"
        return head + f"; predicted peak time {result.predicted_peak:{_FLOAT_FMT}}"
    head = (
        f"peak probability {result.peak_probability:.6f}"
        f" at step {int(result.peak_x)}"
    )
    if result.predicted_peak is None:
        return head + "; no runtime prediction for an uncorrected barrier"
    return head + f"; predicted t* = {int(result.predicted_peak)}"


def write_curve_csv(result: ExperimentResult, out: TextIO) -> None:
    """Emit the curve; identical specs must produce identical bytes."""
    if result.spec.mode == "ctqw":
        out.write("time,probability\n")
        for t, p in result.rows():
            out.write(f"{t:{_FLOAT_FMT}},{p:{_FLOAT_FMT}}\n")
    else:
        out.write("step,probability\n")
        for t, p in result.rows():
            out.write(f"{int(t)},{p:{_FLOAT_FMT}}\n")


@dataclass(frozen=True)
class SweepRow:
    """Summary of one sweep grid point.

    eta is the phase the run actually used (0 when uncorrected); sigma and
    t_star_predicted are the phase-matched predictions for this (N, beta),
    with t_star_predicted None at the blocked point beta = 1.  mode records
    whether the point ran full-space or fell back to the reduced model.
    """

    n_vertices: int
    beta: float
    eta: float
    sigma: float
    t_star_predicted: int | None
    t_star_measured: int
    peak_probability: float
    mode: str


def _sweep_point(
    args: tuple[int, float, bool, int | None, int]
) -> SweepRow:
    # Top-level (picklable) so worker processes can run grid points.
    n, beta, corrected, steps, max_full_n = args
    mode = "dtqw-full" if n <= max_full_n else "dtqw-reduced"
    spec = ExperimentSpec(
        mode=mode, n_vertices=n, beta=beta, corrected=corrected, steps=steps
    )
    result = run_experiment(spec)
    phi = spec.phi
    blocked = phi == _HALF_PI
    return SweepRow(
        n_vertices=n,
        beta=beta,
        eta=spec.eta,
        sigma=rotation_angle_sigma(phi, n),
        t_star_predicted=None if blocked else runtime_t_star(phi, n),
        t_star_measured=result.peak_index,
        peak_probability=result.peak_probability,
        mode=mode,
    )


def run_sweep(
    n_values: Sequence[int],
    beta_values: Sequence[float],
    corrected: bool,
    steps: int | None = None,
    max_full_n: int = DEFAULT_MAX_FULL_N,
    workers: int = 1,
) -> list[SweepRow]:
    """Run the (N, beta) grid, N-major, one row per point.

    Grid points are independent simulations; workers > 1 fans them out to
    processes.  Row order is the grid order regardless of completion order.
    """
    if not n_values or not beta_values:
        raise ValueError("sweep needs at least one N and one beta")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    grid = [
        (n, beta, corrected, steps, max_full_n)
        for n in n_values
        for beta in beta_values
    ]
    if workers == 1:
        return [_sweep_point(point) for point in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, grid))


def write_sweep_csv(rows: Sequence[SweepRow], out: TextIO) -> None:
    out.write(
        "n,beta,eta,sigma,t_star_predicted,t_star_measured,peak_probability,mode\n"
    )
    for row in rows:
        predicted = "" if row.t_star_predicted is None else str(row.t_star_predicted)
        out.write(
            f"{row.n_vertices},{row.beta:{_FLOAT_FMT}},{row.eta:{_FLOAT_FMT}},"
            f"{row.sigma:{_FLOAT_FMT}},{predicted},{row.t_star_measured},"
            f"{row.peak_probability:{_FLOAT_FMT}},{row.mode}\n"
        )


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named verification check (max deviation over its grid)."""

    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation < self.tolerance


def _eta_values(phi: float, n: int) -> list[float]:
    if phi == _HALF_PI:
        return [0.0]
    return [0.0, corrected_eta(phi, n)]


def run_verification(
    n_values: Sequence[int] = VERIFY_DEFAULT_NS,
    phi_values: Sequence[float] = VERIFY_DEFAULT_PHIS,
    steps: int = 200,
    force_eta_zero: bool = False,
) -> list[CheckResult]:
    """Cross-module invariant suite; every check reports its worst deviation.

    Checks, with tolerances:
      reduced-unitarity        max |M^dag M - I| over all 3x3 operators   1e-12
      psi-minus-one-eigenvector  coin_oracle @ psi = -psi, any eta        1e-12
      hoyer-residual           matching defect at the eta in use          1e-12
      symmetry-classes         amplitude spread inside ab/ba/bb classes   1e-10
      projection-residual      full-state component outside the subspace  1e-10
      full-vs-reduced          per-step success-probability difference    1e-10
      norm-conservation        |norm - 1| along full trajectories         1e-10

    force_eta_zero makes the Hoyer check use eta = 0 where the corrected
    phase is required; it exists as a negative control (any phi > 0 in the
    grid then fails) and affects no other check.
    """
    if not n_values or not phi_values:
        raise ValueError("verification needs at least one N and one phi")
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    unitarity = 0.0
    eigenvector = 0.0
    hoyer = 0.0
    symmetry = 0.0
    residual = 0.0
    equivalence = 0.0
    norm_drift = 0.0
    eye = np.eye(3)
    for n in n_values:
        for phi in phi_values:
            for eta in _eta_values(phi, n):
                ops = build_reduced_operators(n, phi, eta)
                for matrix in (ops.shift, ops.coin_oracle, ops.step):
                    unitarity = max(
                        unitarity,
                        float(np.abs(matrix.conj().T @ matrix - eye).max()),
                    )
                psi = psi_minus_one(n)
                eigenvector = max(
                    eigenvector,
                    float(np.abs(ops.coin_oracle @ psi + psi).max()),
                )
                sym, res, equiv, drift = _trajectory_deviations(n, phi, eta, steps)
                symmetry = max(symmetry, sym)
                residual = max(residual, res)
                equivalence = max(equivalence, equiv)
                norm_drift = max(norm_drift, drift)
            if phi != _HALF_PI:
                eta_used = 0.0 if force_eta_zero else corrected_eta(phi, n)
                hoyer = max(
                    hoyer, abs(hoyer_residual(phi, eta_used, overlap_angle(n)))
                )
    return [
        CheckResult("reduced-unitarity", unitarity, 1e-12),
        CheckResult("psi-minus-one-eigenvector", eigenvector, 1e-12),
        CheckResult("hoyer-residual", hoyer, 1e-12),
        CheckResult("symmetry-classes", symmetry, 1e-10),
        CheckResult("projection-residual", residual, 1e-10),
        CheckResult("full-vs-reduced", equivalence, 1e-10),
        CheckResult("norm-conservation", norm_drift, 1e-10),
    ]


def _trajectory_deviations(
    n: int, phi: float, eta: float, steps: int
) -> tuple[float, float, float, float]:
    # One full-space trajectory, checked step by step against everything the
    # 3D reduction promises: class-wise equal amplitudes, no leakage out of
    # the subspace, matching success probabilities, unit norm.
    params = WalkParams(n_vertices=n, phi=phi, eta=eta)
    classes = symmetry_classes(n, params.marked)
    reduced_probs = evolve_reduced(n, phi, eta, steps)
    state = initial_state(params)
    symmetry = 0.0
    residual = 0.0
    equivalence = 0.0
    norm_drift = 0.0
    for t in range(steps + 1):
        if t > 0:
            state = step(state, params)
        for idx in classes:
            block = state[idx]
            symmetry = max(
                symmetry, float(np.abs(block - block.mean()).max())
            )
        _, res = project(state, n, params.marked)
        residual = max(residual, res)
        equivalence = max(
            equivalence,
            abs(success_probability(state, params.marked) - reduced_probs[t]),
        )
        norm_drift = max(norm_drift, abs(float(np.linalg.norm(state)) - 1.0))
    return symmetry, residual, equivalence, norm_drift
