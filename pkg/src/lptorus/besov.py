"""Lebesgue, Besov, time-integrated and weighted heat-trace norms.

The Besov norm with regularity s, integrability p, summation exponent r and
logarithmic weight alpha is

    ( sum_{q >= -1} [ 2^{qs} (3+q)^alpha ||block_q f||_p ]^r )^{1/r},

with sup over q when r = inf.  The time-integrated (Chemin-Lerner) variant
takes the L^rho(0, T; L^p) norm of each block *before* summing over shells;
the plain Lebesgue-in-time variant integrates the full Besov norm instead,
and the two are ordered by Minkowski's inequality according to r vs rho.

Weighted heat norms t^{1/2} |ln(t/e^2)|^sigma ||.||_p realize the Kato-style
smallness quantities, and ``heat_characterization_norm`` evaluates the
L^r((0,1), dt/t) trace of t^{|s|/2} |ln(t/e^2)|^sigma ||e^{tD}f||_p, which is
equivalent (within a fixed constant) to the Besov norm of index (s, sigma)
for s < 0.

Lebesgue exponents live in [1, inf]; pass ``float("inf")`` (or ``math.inf``)
for the sup variants.  All quadratures are trapezoidal on the trajectory's
own time grid (log-uniform grids resolve the t -> 0 weights).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .cutoffs import CutoffPair, build_cutoffs
from .dyadic import block_weights, shell_max
from .spectral import Field, Grid, heat_stack

INF = float("inf")


def _check_exponent(name: str, value: float) -> float:
    value = float(value)
    if not value >= 1.0:
        raise ValueError(f"{name} must lie in [1, inf], got {value}")
    return value


@dataclass(frozen=True)
class BesovSpec:
    """Norm parameters (s, p, r, alpha); alpha is the log-weight exponent."""

    s: float
    p: float
    r: float
    alpha: float = 0.0

    def __post_init__(self):
        _check_exponent("p", self.p)
        _check_exponent("r", self.r)
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    def weights(self, qs: np.ndarray) -> np.ndarray:
        return 2.0 ** (qs * self.s) * (3.0 + qs) ** self.alpha


def lp_norm(f: Field, p: float) -> float:
    """Rectangle-rule L^p norm; the max over samples when p = inf.

    Multi-component fields are measured through their pointwise Euclidean
    magnitude.
    """
    p = _check_exponent("p", p)
    mag = f.magnitude()
    if p == INF:
        return float(np.max(mag))
    return float((f.grid.cell_volume * np.sum(mag**p)) ** (1.0 / p))


def sequence_norm(values: np.ndarray, r: float) -> float:
    """l^r norm of a nonnegative sequence (sup when r = inf)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    if r == INF:
        return float(np.max(values))
    return float(np.sum(values**r) ** (1.0 / r))


def block_lp_norms(
    f: Field, p: float, cutoffs: CutoffPair | None = None
) -> np.ndarray:
    """||block_q f||_p for q = -1..shell_max, as one vector."""
    cut = cutoffs or build_cutoffs()
    grid = f.grid
    qm = shell_max(grid, cut)
    out = np.empty(qm + 2)
    for q in range(-1, qm + 1):
        block = Field.from_spectral(
            grid, f.spectral * block_weights(grid, q, cut)
        )
        out[q + 1] = lp_norm(block, p)
    return out


def besov_norm(
    f: Field, spec: BesovSpec, cutoffs: CutoffPair | None = None
) -> float:
    """Besov norm of a band-limited field (shells -1..shell_max)."""
    qs = np.arange(-1, shell_max(f.grid, cutoffs) + 1)
    return sequence_norm(spec.weights(qs) * block_lp_norms(f, spec.p, cutoffs), spec.r)


def intersection_norm(f: Field, specs, cutoffs: CutoffPair | None = None) -> float:
    """Norm of an intersection space: the sum of the member norms."""
    return sum(besov_norm(f, s, cutoffs) for s in specs)


# ---------------------------------------------------------------------------
# trajectories and time-integrated norms


@dataclass(frozen=True)
class FieldTrajectory:
    """Time-sampled field on one grid; times increase within [0, T].

    The initial sample t = 0 is allowed (the Duhamel quadrature needs it);
    norms that weight by negative powers of t reject trajectories containing
    it.
    """

    times: np.ndarray
    fields: tuple[Field, ...]
    T: float = dataclass_field(default=0.0)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "fields", tuple(self.fields))
        if times.size == 0 or len(self.fields) != times.size:
            raise ValueError("need one field per time and at least one sample")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if times[0] < 0:
            raise ValueError("times must be >= 0")
        horizon = float(self.T) if self.T else float(times[-1])
        if times[-1] > horizon * (1 + 1e-12):
            raise ValueError("times exceed the horizon T")
        object.__setattr__(self, "T", horizon)
        grid = self.fields[0].grid
        if any(f.grid != grid for f in self.fields):
            raise ValueError("all fields must share one grid")

    @property
    def grid(self) -> Grid:
        return self.fields[0].grid

    @property
    def components(self) -> int:
        return self.fields[0].components

    def field_at(self, t: float) -> Field:
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > 1e-12 * max(1.0, self.T):
            raise ValueError(f"t = {t} is not a sample time")
        return self.fields[idx]

    def restrict_positive(self) -> "FieldTrajectory":
        if self.times[0] > 0:
            return self
        if self.times.size == 1:
            raise ValueError("trajectory has no positive sample times")
        return FieldTrajectory(self.times[1:], self.fields[1:], self.T)


def heat_trajectory(f: Field, times) -> FieldTrajectory:
    """Free heat evolution of ``f`` sampled at ``times``."""
    times = np.asarray(times, dtype=float)
    stack = heat_stack(f.spectral, f.grid, times)
    fields = tuple(Field.from_spectral(f.grid, stack[i]) for i in range(times.size))
    return FieldTrajectory(times, fields)


def _trapezoid(values: np.ndarray, xs: np.ndarray) -> float:
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(xs)))


def time_norm(values: np.ndarray, times: np.ndarray, rho: float) -> float:
    """L^rho norm over the sampled interval (trapezoid; max when rho = inf)."""
    rho = _check_exponent("rho", rho)
    values = np.asarray(values, dtype=float)
    if rho == INF:
        return float(np.max(values))
    return float(_trapezoid(values**rho, times) ** (1.0 / rho))


def block_time_lp(
    traj: FieldTrajectory, p: float, cutoffs: CutoffPair | None = None
) -> np.ndarray:
    """Matrix ||block_q f(t_i)||_p with shape (shells, samples)."""
    cut = cutoffs or build_cutoffs()
    grid = traj.grid
    qm = shell_max(grid, cut)
    out = np.empty((qm + 2, traj.times.size))
    for q in range(-1, qm + 1):
        w = block_weights(grid, q, cut)
        for i, f in enumerate(traj.fields):
            block = Field.from_spectral(grid, f.spectral * w)
            out[q + 1, i] = lp_norm(block, p)
    return out


def chemin_lerner_norm(
    traj: FieldTrajectory,
    rho: float,
    spec: BesovSpec,
    cutoffs: CutoffPair | None = None,
) -> float:
    """Time-inside-shells norm: l^r over q of ||block_q||_{L^rho_T L^p}."""
    matrix = block_time_lp(traj, spec.p, cutoffs)
    per_block = np.array(
        [time_norm(matrix[j], traj.times, rho) for j in range(matrix.shape[0])]
    )
    qs = np.arange(-1, matrix.shape[0] - 1)
    return sequence_norm(spec.weights(qs) * per_block, spec.r)


def lebesgue_besov_norm(
    traj: FieldTrajectory,
    rho: float,
    spec: BesovSpec,
    cutoffs: CutoffPair | None = None,
) -> float:
    """Shells-inside-time norm: L^rho_T of the pointwise-in-time Besov norm."""
    matrix = block_time_lp(traj, spec.p, cutoffs)
    qs = np.arange(-1, matrix.shape[0] - 1)
    per_time = np.array(
        [
            sequence_norm(spec.weights(qs) * matrix[:, i], spec.r)
            for i in range(matrix.shape[1])
        ]
    )
    return time_norm(per_time, traj.times, rho)


def log_weight(t, sigma: float):
    """|ln(t / e^2)|^sigma, the logarithmic Kato weight."""
    return np.abs(np.log(t) - 2.0) ** sigma


def kato_weighted_norm(
    traj: FieldTrajectory, sigma: float, p: float
) -> float:
    """sup over samples of t^{1/2} |ln(t/e^2)|^sigma ||f(t)||_p.

    Requires every sample time in (0, T] with T <= 1; a t = 0 sample is
    rejected because the weight is only defined there by a limit.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if traj.times[0] <= 0:
        raise ValueError("weighted norm requires all sample times > 0")
    if traj.T > 1 + 1e-12:
        raise ValueError(f"weighted norm requires T <= 1, got T = {traj.T}")
    t = traj.times
    weights = np.sqrt(t) * log_weight(t, sigma)
    norms = np.array([lp_norm(f, p) for f in traj.fields])
    return float(np.max(weights * norms))


def log_time_grid(
    t_min: float = 1e-6, t_max: float = 1.0, per_decade: int = 64
) -> np.ndarray:
    """Log-uniform grid on [t_min, t_max], ``per_decade`` points per decade."""
    decades = math.log10(t_max / t_min)
    count = max(2, int(round(decades * per_decade)) + 1)
    return np.geomspace(t_min, t_max, count)


def heat_characterization_norm(
    f: Field,
    s: float,
    sigma: float,
    p: float,
    r: float,
    times: np.ndarray | None = None,
) -> float:
    """L^r((0,1), dt/t) norm of t^{|s|/2} |ln(t/e^2)|^sigma ||e^{tD}f||_p.

    Only negative regularity s is characterized by the heat flow this way.
    """
    if s >= 0:
        raise ValueError(f"heat characterization requires s < 0, got s = {s}")
    _check_exponent("p", p)
    _check_exponent("r", r)
    if times is None:
        times = log_time_grid()
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0) or np.any(times > 1):
        raise ValueError("time grid must lie inside (0, 1]")
    grid = f.grid
    stack = heat_stack(f.spectral, grid, times)
    axes = tuple(range(-grid.dim, 0))
    phys = np.fft.ifftn(stack * grid.points**grid.dim, axes=axes).real
    if f.components == 1:
        mags = np.abs(phys[:, 0])
    else:
        mags = np.sqrt(np.sum(phys**2, axis=1))
    if p == INF:
        norms = np.max(mags, axis=axes)
    else:
        norms = (grid.cell_volume * np.sum(mags**p, axis=axes)) ** (1.0 / p)
    values = times ** (abs(s) / 2.0) * log_weight(times, sigma) * norms
    if r == INF:
        return float(np.max(values))
    # dt/t = d(ln t): trapezoid in log time
    return float(_trapezoid(values**r, np.log(times)) ** (1.0 / r))


def characterization_ratio(
    f: Field,
    s: float,
    sigma: float,
    p: float,
    r: float,
    times: np.ndarray | None = None,
    cutoffs: CutoffPair | None = None,
) -> float:
    """heat-trace norm / Besov norm for one field (the equivalence ratio)."""
    num = heat_characterization_norm(f, s, sigma, p, r, times)
    den = besov_norm(f, BesovSpec(s, p, r, sigma), cutoffs)
    if den == 0:
        return 0.0 if num == 0 else INF
    return num / den


# ---------------------------------------------------------------------------
# band-limited (Bernstein) derivative/exponent conversion checks


def _multi_indices(dim: int, order: int):
    if dim == 1:
        yield (order,)
        return
    for head in range(order + 1):
        for tail in _multi_indices(dim - 1, order - head):
            yield (head,) + tail


def _derivative(f: Field, alpha: tuple[int, ...]) -> Field:
    grid = f.grid
    mult = np.ones(grid.shape, dtype=complex)
    for axis, power in enumerate(alpha):
        if power:
            mult = mult * (1j * grid.k_mesh_deriv[axis]) ** power
    return Field.from_spectral(grid, f.spectral * mult)


def bernstein_check(
    f: Field,
    a: float,
    b: float,
    order: int,
    scale: float,
    support: str = "ball",
    radii: tuple[float, float] = (0.75, 8.0 / 3.0),
) -> dict:
    """Ratio of sup_{|alpha| = order} ||d^alpha f||_b to its band-limited bound.

    ``support`` declares where the spectrum of ``f`` is supposed to live:
    the ball |k| <= radii[0] * scale or the shell radii[0] * scale <= |k| <=
    radii[1] * scale.  The input is validated against that region.  For the
    ball the bound is scale^{order + n(1/a - 1/b)} ||f||_a; for the shell the
    same quantity with a = b is two-sided.
    """
    a = _check_exponent("a", a)
    b = _check_exponent("b", b)
    if b < a:
        raise ValueError("need a <= b")
    grid = f.grid
    r1, r2 = radii
    if support == "ball":
        bad = grid.k_abs > r1 * scale * (1 + 1e-9)
    elif support == "shell":
        if a != b:
            raise ValueError("the shell (two-sided) case uses a single exponent")
        bad = (grid.k_abs < r1 * scale * (1 - 1e-9)) | (
            grid.k_abs > r2 * scale * (1 + 1e-9)
        )
    else:
        raise ValueError(f"unknown support {support!r}")
    leak = float(np.max(np.abs(f.spectral[..., bad]))) if np.any(bad) else 0.0
    base = float(np.max(np.abs(f.spectral)))
    if leak > 1e-10 * max(base, 1e-300):
        raise ValueError(f"spectrum leaks outside the stated {support}")
    inv_a = 0.0 if a == INF else 1.0 / a
    inv_b = 0.0 if b == INF else 1.0 / b
    denom = scale ** (order + grid.dim * (inv_a - inv_b)) * lp_norm(f, a)
    numer = max(
        lp_norm(_derivative(f, alpha), b) for alpha in _multi_indices(grid.dim, order)
    )
    return {
        "support": support,
        "scale": scale,
        "order": order,
        "ratio": numer / denom if denom > 0 else 0.0,
    }


def embedding_report(
    fields,
    s: float = -1.0,
    eps: float = 0.5,
    p: float = 2.0,
    r_tilde: float = 2.0,
    cutoffs: CutoffPair | None = None,
) -> dict:
    """Empirical constants for the sup-norm sandwich and the shift chain.

    Records, over the given fields, the largest constants in

        ||f||_{B^0_{inf,inf}} <= C ||f||_inf <= C ||f||_{B^0_{inf,1}}
        ||f||_{B^{s,1}_{p,inf}} <= C ||f||_{B^{s+eps}_{p,inf}}
        ||f||_{B^s_{p,r}}       <= C ||f||_{B^{s,1}_{p,inf}}
    """

    def ratio(num, den):
        return num / den if den > 0 else 0.0

    consts = {
        "weak_vs_sup": 0.0,
        "sup_vs_strong": 0.0,
        "log_vs_shift": 0.0,
        "summed_vs_log": 0.0,
    }
    for f in fields:
        sup = lp_norm(f, INF)
        consts["weak_vs_sup"] = max(
            consts["weak_vs_sup"],
            ratio(besov_norm(f, BesovSpec(0, INF, INF), cutoffs), sup),
        )
        consts["sup_vs_strong"] = max(
            consts["sup_vs_strong"],
            ratio(sup, besov_norm(f, BesovSpec(0, INF, 1), cutoffs)),
        )
        consts["log_vs_shift"] = max(
            consts["log_vs_shift"],
            ratio(
                besov_norm(f, BesovSpec(s, p, INF, 1.0), cutoffs),
                besov_norm(f, BesovSpec(s + eps, p, INF), cutoffs),
            ),
        )
        consts["summed_vs_log"] = max(
            consts["summed_vs_log"],
            ratio(
                besov_norm(f, BesovSpec(s, p, r_tilde), cutoffs),
                besov_norm(f, BesovSpec(s, p, INF, 1.0), cutoffs),
            ),
        )
    return consts
