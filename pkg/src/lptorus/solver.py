"""Mild-solution machinery for the viscous Boussinesq system on the torus.

The velocity u (divergence-free, n components) and scalar theta satisfy

    u_t + (u.grad) u + grad P = Lap u + theta a,      div u = 0,
    theta_t + u.grad theta    = Lap theta,

which the solver treats through the Duhamel (integral) form

    u     = e^{tL} u0  - int_0^t e^{(t-s)L} P div(u (x) u) ds
                       + int_0^t e^{(t-s)L} P (theta a) ds
    theta = e^{tL} th0 - int_0^t e^{(t-s)L} div(u theta) ds

with P the Leray projection and the nonlinearities in divergence form (valid
since div u = 0 is enforced spectrally).  Picard iteration starts from the
free evolution and reapplies the map; the smallness certificate instantiates
the abstract coupled fixed point: with the bilinear/linear operator bounds
lambda and eta measured on a sampling ensemble and c* = max(2 eta, 1), the
iteration contracts whenever

    ||(x0, c* y0)|| = ||x0|| + c* ||y0|| < 1 / (16 lambda)

for the free evolutions (x0, y0) of the data, and the solution then obeys
||(x, c* y)|| <= 4 ||(x0, c* y0)||.

Norm regimes:

  thm1.2   u in L~2_T(B^0_{inf,1}) ^ L~2_T(B^{0,1}_{inf,inf}), theta in the
           same pair at p = n/2;
  thm1.3   theta instead in L~2_T(B^0_{p,r}) with p in (n/2, inf);
  thm1.4   weighted sups sup_t t^{1/2} |ln(t/e^2)|^sigma ||.||_p, with
           (sigma, p) = (1, inf) for u and (eps, p) for theta, horizon
           T <= 1, evaluated on a time grid with a logarithmic prefix.

The Duhamel quadrature treats the source as piecewise linear on each panel
and integrates the heat multiplier exactly, so it is exact for sources
linear in time at any stiffness and second-order accurate otherwise.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field as dataclass_field

import numpy as np

from .besov import (
    INF,
    BesovSpec,
    FieldTrajectory,
    besov_norm,
    block_time_lp,
    log_weight,
    lp_norm,
    sequence_norm,
    time_norm,
)
from .cutoffs import CutoffPair, build_cutoffs
from .ensembles import random_field
from .spectral import (
    Field,
    Grid,
    embed_spectrum,
    heat_stack,
    project_divergence_free,
    restrict_spectrum,
)

REGIMES = ("thm1.2", "thm1.3", "thm1.4")


@dataclass(frozen=True)
class SolverConfig:
    """Horizon, discretization, regime and operator constants for one run."""

    horizon: float
    steps: int = 64
    substeps: int = 1
    max_iterations: int = 25
    tol: float = 1e-8
    buoyancy: tuple[float, ...] = (0.0, 1.0)
    regime: str = "thm1.2"
    p: float | None = None
    r: float | None = None
    eps: float | None = None
    lambda_: float | None = None
    eta: float | None = None
    constant_trials: int = 6
    constant_seed: int = 1234
    oracle_refine: int = 10
    divergence_guard: float = 10.0

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.steps < 1 or self.substeps < 1:
            raise ValueError("steps and substeps must be >= 1")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        a = np.asarray(self.buoyancy, dtype=float)
        if not np.linalg.norm(a) > 0:
            raise ValueError("buoyancy direction must be nonzero")
        if self.regime == "thm1.3":
            if self.p is None or self.r is None:
                raise ValueError("thm1.3 needs exponents p and r")
        if self.regime == "thm1.4":
            if self.p is None or self.eps is None:
                raise ValueError("thm1.4 needs exponent p and eps")
            if self.eps <= 0:
                raise ValueError("eps must be positive")
            if self.horizon > 1:
                raise ValueError("the weighted-norm regime requires T <= 1")

    def validate_grid(self, grid: Grid) -> None:
        if len(self.buoyancy) != grid.dim:
            raise ValueError("buoyancy direction has the wrong dimension")
        if self.regime in ("thm1.3", "thm1.4"):
            if not (grid.dim / 2.0 < self.p < INF):
                raise ValueError(
                    f"regime {self.regime} needs p in (n/2, inf), got {self.p}"
                )


def time_grid(config: SolverConfig) -> np.ndarray:
    """Uniform panels on [0, T]; a log prefix resolves t -> 0 for thm1.4."""
    base = np.linspace(0.0, config.horizon, config.steps * config.substeps + 1)
    if config.regime != "thm1.4":
        return base
    prefix = config.horizon * np.geomspace(1e-4, 1.0, 33)[:-1]
    merged = np.unique(np.concatenate([base, prefix]))
    keep = np.concatenate([[True], np.diff(merged) > 1e-12 * config.horizon])
    return merged[keep]


# ---------------------------------------------------------------------------
# Duhamel quadrature


def _panel_weights(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """g1 = int_0^1 e^{-xu} du and g2 = int_0^1 u e^{-xu} du, stably."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-2
    xs = np.where(small, x, 0.0)
    g1_s = 1.0 - xs / 2 + xs**2 / 6 - xs**3 / 24 + xs**4 / 120
    g2_s = 0.5 - xs / 3 + xs**2 / 8 - xs**3 / 30 + xs**4 / 144
    xb = np.where(small, 1.0, x)
    g1_b = -np.expm1(-xb) / xb
    g2_b = (1.0 - np.exp(-xb) * (1.0 + xb)) / xb**2
    return np.where(small, g1_s, g1_b), np.where(small, g2_s, g2_b)


def _duhamel_stack(times: np.ndarray, source: np.ndarray, grid: Grid) -> np.ndarray:
    """int_0^{t_j} e^{(t_j - s) Lap} source(s) ds on every sample time.

    ``source`` is a spectral stack (len(times), m, N, ..., N); the source is
    taken piecewise linear between samples and the per-panel multiplier
    integrals are evaluated in closed form.
    """
    out = np.zeros_like(source)
    acc = np.zeros_like(source[0])
    k2 = grid.k_sq
    for j in range(1, len(times)):
        dt = times[j] - times[j - 1]
        x = k2 * dt
        g1, g2 = _panel_weights(x)
        acc = np.exp(-x) * acc + dt * (
            source[j] * (g1 - g2) + source[j - 1] * g2
        )
        out[j] = acc
    return out


def _stack_of(traj: FieldTrajectory) -> np.ndarray:
    return np.stack([f.spectral for f in traj.fields])


def _traj_of(grid: Grid, times: np.ndarray, stack: np.ndarray) -> FieldTrajectory:
    fields = tuple(Field.from_spectral(grid, stack[i]) for i in range(len(times)))
    return FieldTrajectory(times, fields)


def duhamel_integral(
    source: FieldTrajectory, t_grid: np.ndarray | None = None
) -> FieldTrajectory:
    """Heat-semigroup Duhamel integral of a sampled source.

    The source must be sampled from t = 0; ``t_grid`` selects output times
    and must consist of sample times of the source.
    """
    times = source.times
    if times[0] != 0.0:
        raise ValueError("the Duhamel integral needs the source sampled from t = 0")
    stack = _duhamel_stack(times, _stack_of(source), source.grid)
    if t_grid is None:
        return _traj_of(source.grid, times, stack)
    t_grid = np.asarray(t_grid, dtype=float)
    idx = []
    for t in t_grid:
        j = int(np.argmin(np.abs(times - t)))
        if abs(times[j] - t) > 1e-12 * max(1.0, times[-1]):
            raise ValueError(f"t = {t} is not contained in the source sampling")
        idx.append(j)
    return _traj_of(source.grid, times[idx], stack[idx])


# ---------------------------------------------------------------------------
# Boussinesq right-hand side


def _comp(arr: np.ndarray, sel, n: int) -> np.ndarray:
    """Index the component axis, which sits ahead of the n spatial axes."""
    return arr[(Ellipsis, sel) + (slice(None),) * n]


def _nonlinear_sources(
    u_hat: np.ndarray, th_hat: np.ndarray, grid: Grid, buoyancy: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Spectral sources (-P div(u x u) + P(theta a), -div(u theta)).

    Inputs carry arbitrary leading axes before the component axis; products
    are dealiased on the doubled grid in one batch.
    """
    n = grid.dim
    axes = tuple(range(-n, 0))
    n2 = 2 * grid.points
    state = np.concatenate([u_hat, th_hat], axis=-n - 1)
    phys = np.fft.ifftn(
        embed_spectrum(state, n, grid.points, n2) * n2**n, axes=axes
    ).real
    u_phys = _comp(phys, slice(None, n), n)
    th_phys = _comp(phys, slice(n, None), n)
    rows = [_comp(u_phys, slice(i, i + 1), n) * u_phys for i in range(n)]
    rows.append(th_phys * u_phys)
    prod_phys = np.concatenate(rows, axis=-n - 1)
    prod_hat = restrict_spectrum(
        np.fft.fftn(prod_phys, axes=axes) / n2**n, n, grid.points
    )
    ik = 1j * grid.k_mesh_deriv
    flux_u = np.stack(
        [
            -sum(ik[j] * _comp(prod_hat, i * n + j, n) for j in range(n))
            for i in range(n)
        ],
        axis=-n - 1,
    )
    nl_u = flux_u + buoyancy.reshape((n,) + (1,) * n) * th_hat
    nl_u = project_divergence_free(nl_u, grid)
    nl_th = -sum(ik[j] * _comp(prod_hat, n * n + j, n) for j in range(n))
    return nl_u, np.expand_dims(nl_th, -n - 1)


def _fixed_point_map(
    times: np.ndarray,
    u_hat: np.ndarray,
    th_hat: np.ndarray,
    u0_hat: np.ndarray,
    th0_hat: np.ndarray,
    grid: Grid,
    buoyancy: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    nl_u, nl_th = _nonlinear_sources(u_hat, th_hat, grid, buoyancy)
    j1 = heat_stack(u0_hat, grid, times) + _duhamel_stack(times, nl_u, grid)
    j2 = heat_stack(th0_hat, grid, times) + _duhamel_stack(times, nl_th, grid)
    return j1, j2


def boussinesq_rhs(
    u: FieldTrajectory,
    theta: FieldTrajectory,
    u0: Field,
    theta0: Field,
    config: SolverConfig,
    div_tol: float = 1e-10,
) -> tuple[FieldTrajectory, FieldTrajectory]:
    """One application of the Duhamel map to iterate trajectories.

    ``u0`` must be spectrally divergence-free (project it first).
    """
    grid = u0.grid
    config.validate_grid(grid)
    div_mag = float(
        np.max(np.abs(np.sum(grid.k_mesh_deriv * u0.spectral, axis=0)))
    )
    scale = float(np.max(np.abs(u0.spectral)))
    if div_mag > div_tol * max(scale, 1e-300):
        raise ValueError(
            "u0 is not divergence-free; apply the Helmholtz projection first"
        )
    a = np.asarray(config.buoyancy, dtype=float)
    j1, j2 = _fixed_point_map(
        u.times, _stack_of(u), _stack_of(theta), u0.spectral, theta0.spectral,
        grid, a,
    )
    return _traj_of(grid, u.times, j1), _traj_of(grid, u.times, j2)


# ---------------------------------------------------------------------------
# regime norms


def _cl_pair_norm(traj: FieldTrajectory, p: float, cutoffs) -> float:
    """||.||_{L~2_T(B^0_{p,1})} + ||.||_{L~2_T(B^{0,1}_{p,inf})}."""
    matrix = block_time_lp(traj, p, cutoffs)
    per_block = np.array(
        [time_norm(matrix[j], traj.times, 2.0) for j in range(matrix.shape[0])]
    )
    qs = np.arange(-1, matrix.shape[0] - 1)
    return float(np.sum(per_block) + np.max((3.0 + qs) * per_block))


def _cl_single_norm(traj, rho, spec: BesovSpec, cutoffs) -> float:
    matrix = block_time_lp(traj, spec.p, cutoffs)
    per_block = np.array(
        [time_norm(matrix[j], traj.times, rho) for j in range(matrix.shape[0])]
    )
    qs = np.arange(-1, matrix.shape[0] - 1)
    return sequence_norm(spec.weights(qs) * per_block, spec.r)


def _weighted_sup_norm(traj: FieldTrajectory, sigma: float, p: float) -> float:
    pos = traj.restrict_positive()
    t = pos.times
    weights = np.sqrt(t) * log_weight(t, sigma)
    return float(
        np.max(weights * np.array([lp_norm(f, p) for f in pos.fields]))
    )


def velocity_norm(
    traj: FieldTrajectory, config: SolverConfig, cutoffs: CutoffPair | None = None
) -> float:
    """Solution-space norm of the velocity in the configured regime."""
    if config.regime == "thm1.4":
        return _weighted_sup_norm(traj, 1.0, INF)
    return _cl_pair_norm(traj, INF, cutoffs or build_cutoffs())


def scalar_norm(
    traj: FieldTrajectory, config: SolverConfig, cutoffs: CutoffPair | None = None
) -> float:
    """Solution-space norm of the scalar in the configured regime."""
    cut = cutoffs or build_cutoffs()
    if config.regime == "thm1.2":
        return _cl_pair_norm(traj, traj.grid.dim / 2.0, cut)
    if config.regime == "thm1.3":
        return _cl_single_norm(traj, 2.0, BesovSpec(0, config.p, config.r), cut)
    return _weighted_sup_norm(traj, config.eps, config.p)


def velocity_data_norm(
    u0: Field, config: SolverConfig, cutoffs: CutoffPair | None = None
) -> float:
    """Initial-data norm of u0 in the regime's data space (the mu_1 scale)."""
    if config.regime == "thm1.4":
        return besov_norm(u0, BesovSpec(-1, INF, INF, 1.0), cutoffs)
    return besov_norm(u0, BesovSpec(-1, INF, 1), cutoffs) + besov_norm(
        u0, BesovSpec(-1, INF, INF, 1.0), cutoffs
    )


def scalar_data_norm(
    theta0: Field, config: SolverConfig, cutoffs: CutoffPair | None = None
) -> float:
    """Initial-data norm of theta0 in the regime's data space (mu_2 scale)."""
    if config.regime == "thm1.2":
        half = theta0.grid.dim / 2.0
        return besov_norm(theta0, BesovSpec(-1, half, 1), cutoffs) + besov_norm(
            theta0, BesovSpec(-1, half, INF, 1.0), cutoffs
        )
    if config.regime == "thm1.3":
        return besov_norm(theta0, BesovSpec(-1, config.p, config.r), cutoffs)
    return besov_norm(theta0, BesovSpec(-1, config.p, INF, config.eps), cutoffs)


# ---------------------------------------------------------------------------
# operator constants and the smallness certificate


def measure_operator_constants(
    grid: Grid, config: SolverConfig, cutoffs: CutoffPair | None = None
) -> dict:
    """Sampled bounds for the two bilinear maps and the buoyancy map.

    Ratios ||B(x, y)|| / (||x|| ||y||) are measured over heat-evolved random
    trajectory pairs in the regime norms; lambda and eta are twice the
    largest observed ratio, following the convention that sampled constants
    get a factor-2 safety margin.
    """
    cut = cutoffs or build_cutoffs()
    config.validate_grid(grid)
    times = time_grid(config)
    rng = np.random.default_rng(config.constant_seed)
    a = np.asarray(config.buoyancy, dtype=float)
    n = grid.dim
    b1 = b2 = lin = 0.0
    for _ in range(config.constant_trials):
        x1 = project_divergence_free(
            random_field(grid, rng, components=n).spectral, grid
        )
        x2 = project_divergence_free(
            random_field(grid, rng, components=n).spectral, grid
        )
        y = random_field(grid, rng).spectral
        x1_t = heat_stack(x1, grid, times)
        x2_t = heat_stack(x2, grid, times)
        y_t = heat_stack(y, grid, times)
        x1_traj = _traj_of(grid, times, x1_t)
        x2_traj = _traj_of(grid, times, x2_t)
        y_traj = _traj_of(grid, times, y_t)
        nx1 = velocity_norm(x1_traj, config, cut)
        nx2 = velocity_norm(x2_traj, config, cut)
        ny = scalar_norm(y_traj, config, cut)

        # B1(x1, x2): -P div(x1 (x) x2)
        nl12 = _tensor_divergence(x1_t, x2_t, grid)
        b1_val = velocity_norm(
            _traj_of(grid, times, _duhamel_stack(times, nl12, grid)), config, cut
        )
        if nx1 * nx2 > 0:
            b1 = max(b1, b1_val / (nx1 * nx2))
        # B2(x1, y): -div(x1 y)
        nl_th = _scalar_flux_divergence(x1_t, y_t, grid)
        b2_val = scalar_norm(
            _traj_of(grid, times, _duhamel_stack(times, nl_th, grid)), config, cut
        )
        if nx1 * ny > 0:
            b2 = max(b2, b2_val / (nx1 * ny))
        # L(y): +P(a y)
        buoy = project_divergence_free(
            a.reshape((n,) + (1,) * n) * y_t, grid
        )
        lin_val = velocity_norm(
            _traj_of(grid, times, _duhamel_stack(times, buoy, grid)), config, cut
        )
        if ny > 0:
            lin = max(lin, lin_val / ny)
    return {
        "lambda": 2.0 * max(b1, b2),
        "eta": 2.0 * lin,
        "b1_max_ratio": b1,
        "b2_max_ratio": b2,
        "linear_max_ratio": lin,
        "trials": config.constant_trials,
        "seed": config.constant_seed,
    }


def _tensor_divergence(u_hat, v_hat, grid: Grid) -> np.ndarray:
    """-P div(u (x) v) as a spectral stack."""
    n = grid.dim
    axes = tuple(range(-n, 0))
    n2 = 2 * grid.points
    up = np.fft.ifftn(embed_spectrum(u_hat, n, grid.points, n2) * n2**n, axes=axes).real
    vp = np.fft.ifftn(embed_spectrum(v_hat, n, grid.points, n2) * n2**n, axes=axes).real
    rows = [_comp(up, slice(i, i + 1), n) * vp for i in range(n)]
    prod = restrict_spectrum(
        np.fft.fftn(np.concatenate(rows, axis=-n - 1), axes=axes) / n2**n,
        n,
        grid.points,
    )
    ik = 1j * grid.k_mesh_deriv
    out = np.stack(
        [
            -sum(ik[j] * _comp(prod, i * n + j, n) for j in range(n))
            for i in range(n)
        ],
        axis=-n - 1,
    )
    return project_divergence_free(out, grid)


def _scalar_flux_divergence(u_hat, th_hat, grid: Grid) -> np.ndarray:
    """-div(u theta) as a spectral stack (theta has one component)."""
    n = grid.dim
    axes = tuple(range(-n, 0))
    n2 = 2 * grid.points
    up = np.fft.ifftn(embed_spectrum(u_hat, n, grid.points, n2) * n2**n, axes=axes).real
    tp = np.fft.ifftn(embed_spectrum(th_hat, n, grid.points, n2) * n2**n, axes=axes).real
    prod = restrict_spectrum(
        np.fft.fftn(tp * up, axes=axes) / n2**n, n, grid.points
    )
    ik = 1j * grid.k_mesh_deriv
    out = -sum(ik[j] * _comp(prod, j, n) for j in range(n))
    return np.expand_dims(out, -n - 1)


@dataclass(frozen=True)
class SmallnessCertificate:
    """The contraction condition ||(x0, c* y0)|| < 1/(16 lambda), evaluated."""

    lambda_: float
    eta: float
    c_star: float
    lhs: float
    rhs: float
    passed: bool
    free_velocity_norm: float
    free_scalar_norm: float
    mu1: float
    mu2: float
    regime: str

    @classmethod
    def evaluate(cls, lambda_, eta, free_u, free_th, mu1, mu2, regime):
        c_star = max(2.0 * eta, 1.0)
        lhs = free_u + c_star * free_th
        rhs = 1.0 / (16.0 * lambda_)
        return cls(
            lambda_=float(lambda_),
            eta=float(eta),
            c_star=float(c_star),
            lhs=float(lhs),
            rhs=float(rhs),
            passed=bool(lhs < rhs),
            free_velocity_norm=float(free_u),
            free_scalar_norm=float(free_th),
            mu1=float(mu1),
            mu2=float(mu2),
            regime=regime,
        )

    def to_dict(self) -> dict:
        return asdict(self)


def smallness_certificate(
    u0: Field,
    theta0: Field,
    config: SolverConfig,
    constants: dict | None = None,
    cutoffs: CutoffPair | None = None,
) -> SmallnessCertificate:
    """Evaluate the contraction condition for the given data and regime.

    ``constants`` may carry pre-measured {"lambda", "eta"}; otherwise they
    are measured (or taken from the config override).
    """
    cut = cutoffs or build_cutoffs()
    grid = u0.grid
    config.validate_grid(grid)
    if constants is None:
        if config.lambda_ is not None and config.eta is not None:
            constants = {"lambda": config.lambda_, "eta": config.eta}
        else:
            constants = measure_operator_constants(grid, config, cut)
    times = time_grid(config)
    free_u = _traj_of(grid, times, heat_stack(u0.spectral, grid, times))
    free_th = _traj_of(grid, times, heat_stack(theta0.spectral, grid, times))
    return SmallnessCertificate.evaluate(
        constants["lambda"],
        constants["eta"],
        velocity_norm(free_u, config, cut),
        scalar_norm(free_th, config, cut),
        velocity_data_norm(u0, config, cut),
        scalar_data_norm(theta0, config, cut),
        config.regime,
    )


# ---------------------------------------------------------------------------
# Picard iteration


@dataclass
class IterationReport:
    """Per-iteration norms and the regime-level bound checks."""

    certificate: SmallnessCertificate
    iterations: list = dataclass_field(default_factory=list)
    converged: bool = False
    diverged: bool = False
    bounds: dict = dataclass_field(default_factory=dict)
    residuals: dict = dataclass_field(default_factory=dict)
    final: dict = dataclass_field(default_factory=dict)

    def contraction_factors(self) -> list:
        return [
            entry["contraction"]
            for entry in self.iterations
            if entry["contraction"] is not None
        ]

    def to_dict(self) -> dict:
        return {
            "certificate": self.certificate.to_dict(),
            "iterations": self.iterations,
            "converged": self.converged,
            "diverged": self.diverged,
            "bounds": self.bounds,
            "residuals": self.residuals,
            "final": self.final,
        }


def picard_solve(
    u0: Field,
    theta0: Field,
    config: SolverConfig,
    cutoffs: CutoffPair | None = None,
) -> tuple[FieldTrajectory, FieldTrajectory, IterationReport]:
    """Iterate the Duhamel map from the free evolution until contraction.

    Runs even when the smallness certificate fails (flagged in the report);
    aborts early if the pair norm grows past ``divergence_guard`` times its
    initial value.
    """
    cut = cutoffs or build_cutoffs()
    grid = u0.grid
    config.validate_grid(grid)
    if theta0.components != 1:
        raise ValueError("theta0 must be a scalar field")
    u0 = Field.from_spectral(grid, project_divergence_free(u0.spectral, grid))
    cert = smallness_certificate(u0, theta0, config, cutoffs=cut)
    a = np.asarray(config.buoyancy, dtype=float)
    times = time_grid(config)

    u_hat = heat_stack(u0.spectral, grid, times)
    th_hat = heat_stack(theta0.spectral, grid, times)
    u_traj = _traj_of(grid, times, u_hat)
    th_traj = _traj_of(grid, times, th_hat)
    u_norm = velocity_norm(u_traj, config, cut)
    th_norm = scalar_norm(th_traj, config, cut)
    pair0 = u_norm + cert.c_star * th_norm

    report = IterationReport(certificate=cert)
    report.iterations.append(
        {
            "iteration": 0,
            "velocity_norm": u_norm,
            "scalar_norm": th_norm,
            "velocity_diff": None,
            "scalar_diff": None,
            "pair_diff": None,
            "contraction": None,
        }
    )

    prev_diff = None
    for k in range(1, config.max_iterations + 1):
        new_u, new_th = _fixed_point_map(
            times, u_hat, th_hat, u0.spectral, theta0.spectral, grid, a
        )
        du = velocity_norm(_traj_of(grid, times, new_u - u_hat), config, cut)
        dth = scalar_norm(_traj_of(grid, times, new_th - th_hat), config, cut)
        u_hat, th_hat = new_u, new_th
        u_traj = _traj_of(grid, times, u_hat)
        th_traj = _traj_of(grid, times, th_hat)
        u_norm = velocity_norm(u_traj, config, cut)
        th_norm = scalar_norm(th_traj, config, cut)
        pair_diff = du + cert.c_star * dth
        contraction = None if prev_diff in (None, 0.0) else pair_diff / prev_diff
        report.iterations.append(
            {
                "iteration": k,
                "velocity_norm": u_norm,
                "scalar_norm": th_norm,
                "velocity_diff": du,
                "scalar_diff": dth,
                "pair_diff": pair_diff,
                "contraction": contraction,
            }
        )
        pair_norm = u_norm + cert.c_star * th_norm
        if pair0 > 0 and pair_norm > config.divergence_guard * pair0:
            report.diverged = True
            break
        scale = max(pair_norm, 1e-300)
        if pair_diff <= config.tol * scale:
            report.converged = True
            break
        prev_diff = pair_diff

    mu1, mu2 = cert.mu1, cert.mu2
    pair_limit = 4.0 * cert.lhs
    pair_final = u_norm + cert.c_star * th_norm
    report.final = {
        "velocity_norm": u_norm,
        "scalar_norm": th_norm,
        "pair_norm": pair_final,
        "iterations": len(report.iterations) - 1,
    }
    report.bounds = {
        "velocity_le_2mu1": bool(u_norm <= 2.0 * mu1 + 1e-300),
        "scalar_le_2mu2": bool(th_norm <= 2.0 * mu2 + 1e-300),
        "pair_le_4_initial": bool(pair_final <= pair_limit + 1e-300),
        "velocity_norm": u_norm,
        "mu1": mu1,
        "scalar_norm": th_norm,
        "mu2": mu2,
        "pair_norm": pair_final,
        "pair_limit": pair_limit,
    }
    report.residuals = residual_check(u_traj, th_traj, u0, theta0, config, cut)
    return u_traj, th_traj, report


def residual_check(
    u: FieldTrajectory,
    theta: FieldTrajectory,
    u0: Field,
    theta0: Field,
    config: SolverConfig,
    cutoffs: CutoffPair | None = None,
) -> dict:
    """Regime-norm distance of (u, theta) from one more Duhamel application."""
    cut = cutoffs or build_cutoffs()
    grid = u0.grid
    a = np.asarray(config.buoyancy, dtype=float)
    u_hat, th_hat = _stack_of(u), _stack_of(theta)
    j1, j2 = _fixed_point_map(
        u.times, u_hat, th_hat, u0.spectral, theta0.spectral, grid, a
    )
    ru = velocity_norm(_traj_of(grid, u.times, u_hat - j1), config, cut)
    rth = scalar_norm(_traj_of(grid, u.times, th_hat - j2), config, cut)
    u_scale = max(velocity_norm(u, config, cut), 1e-300)
    th_scale = max(scalar_norm(theta, config, cut), 1e-300)
    return {
        "velocity_residual": ru,
        "scalar_residual": rth,
        "velocity_residual_rel": ru / u_scale,
        "scalar_residual_rel": rth / max(th_scale, u_scale * 1e-12),
    }


# ---------------------------------------------------------------------------
# independent oracle: first-order exponential integrator at finer steps


def exponential_euler(
    u0: Field,
    theta0: Field,
    config: SolverConfig,
    refine: int | None = None,
) -> tuple[Field, Field]:
    """Integrate to t = T with exact per-step heat multiplier and explicit
    (frozen) nonlinearity; first order in the step size."""
    grid = u0.grid
    config.validate_grid(grid)
    a = np.asarray(config.buoyancy, dtype=float)
    refine = config.oracle_refine if refine is None else refine
    nsteps = config.steps * config.substeps * refine
    dt = config.horizon / nsteps
    x = grid.k_sq * dt
    decay = np.exp(-x)
    g1, _ = _panel_weights(x)
    u_hat = project_divergence_free(u0.spectral.copy(), grid)
    th_hat = theta0.spectral.copy()
    guard = 1e3 * max(
        np.max(np.abs(u_hat)) + np.max(np.abs(th_hat)), 1e-300
    )
    for _ in range(nsteps):
        nl_u, nl_th = _nonlinear_sources(u_hat, th_hat, grid, a)
        u_hat = decay * u_hat + dt * g1 * nl_u
        th_hat = decay * th_hat + dt * g1 * nl_th
        if np.max(np.abs(u_hat)) + np.max(np.abs(th_hat)) > guard:
            raise RuntimeError(
                "oracle integrator is unstable for this data/step combination"
            )
    return Field.from_spectral(grid, u_hat), Field.from_spectral(grid, th_hat)


def oracle_compare(
    u0: Field,
    theta0: Field,
    config: SolverConfig,
    solution: tuple[FieldTrajectory, FieldTrajectory] | None = None,
) -> dict:
    """Relative L2 distance at t = T between the Picard mild solution and the
    independent fine-step exponential integrator."""
    if solution is None:
        u_traj, th_traj, _ = picard_solve(u0, theta0, config)
    else:
        u_traj, th_traj = solution
    u_ref, th_ref = exponential_euler(u0, theta0, config)
    u_end = u_traj.fields[-1]
    th_end = th_traj.fields[-1]

    def rel(a: Field, b: Field) -> float:
        diff = lp_norm(a - b, 2.0)
        scale = max(lp_norm(b, 2.0), 1e-300)
        return diff / scale

    out = {"velocity": rel(u_end, u_ref)}
    if lp_norm(th_ref, 2.0) > 1e-14:
        out["scalar"] = rel(th_end, th_ref)
    out["max"] = max(out.values())
    return out
