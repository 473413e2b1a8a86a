"""Real fields on the periodic torus and their spectral calculus.

Fields live on a uniform N^n grid over [0, L)^n and are stored in physical
space with a lazily cached Fourier representation.  Transforms use the
amplitude convention: the coefficient stored for wavevector k is the complex
amplitude of exp(i k.x), so a constant field c carries c in its k = 0 slot and
Parseval reads ||f||_2^2 = L^n * sum_k |c_k|^2.

Operators provided here are exact Fourier multipliers:

    gradient / divergence   i k_j           (Nyquist plane zeroed)
    heat_propagate          exp(-|k|^2 t)
    helmholtz_project       delta_ij - k_i k_j / |k|^2   (identity at k = 0)

Quadratic nonlinearities go through ``dealiased_product``, which zero-pads the
spectrum onto a grid of twice the resolution, multiplies in physical space and
truncates back, so the retained coefficients are the exact convolution of the
inputs (the Nyquist plane is dropped to keep the result Hermitian).

Fields are immutable after construction; all operations are pure functions and
safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

TWO_PI = 2.0 * np.pi

FIELD_MAGIC = "LPFLD1"


class FieldFormatError(ValueError):
    """A field file has a malformed header entry or payload.

    ``field`` names the offending header item (magic, dim, components,
    points, period, payload).
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on the torus [0, period)^dim.

    ``points`` is the sample count per axis and must be a power of two; the
    angular frequency lattice is (2*pi/period) * Z^dim capped at Nyquist.
    """

    dim: int
    points: int
    period: float = TWO_PI

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        n = self.points
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"points must be a power of two >= 2, got {n}")
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")

    @property
    def spacing(self) -> float:
        return self.period / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def nyquist(self) -> float:
        """Largest resolved angular frequency per axis, (N/2) * 2*pi/L."""
        return (self.points // 2) * (TWO_PI / self.period)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @cached_property
    def k_axis(self) -> np.ndarray:
        k = TWO_PI * np.fft.fftfreq(self.points, d=self.spacing)
        k.setflags(write=False)
        return k

    @cached_property
    def k_axis_deriv(self) -> np.ndarray:
        # Nyquist mode zeroed: its odd derivative is not representable.
        k = self.k_axis.copy()
        k[self.points // 2] = 0.0
        k.setflags(write=False)
        return k

    @cached_property
    def k_mesh(self) -> np.ndarray:
        mesh = np.stack(np.meshgrid(*([self.k_axis] * self.dim), indexing="ij"))
        mesh.setflags(write=False)
        return mesh

    @cached_property
    def k_mesh_deriv(self) -> np.ndarray:
        mesh = np.stack(
            np.meshgrid(*([self.k_axis_deriv] * self.dim), indexing="ij")
        )
        mesh.setflags(write=False)
        return mesh

    @cached_property
    def k_sq(self) -> np.ndarray:
        ksq = np.sum(self.k_mesh**2, axis=0)
        ksq.setflags(write=False)
        return ksq

    @cached_property
    def k_abs(self) -> np.ndarray:
        kabs = np.sqrt(self.k_sq)
        kabs.setflags(write=False)
        return kabs

    def coordinates(self) -> np.ndarray:
        """Physical coordinates, shape (dim, N, ..., N)."""
        x = np.arange(self.points) * self.spacing
        return np.stack(np.meshgrid(*([x] * self.dim), indexing="ij"))

    def doubled(self) -> "Grid":
        return Grid(self.dim, 2 * self.points, self.period)


def _spatial_axes(dim: int) -> tuple[int, ...]:
    return tuple(range(-dim, 0))


def hermitian_symmetrize(coeffs: np.ndarray, dim: int) -> np.ndarray:
    """Project spectral coefficients onto the Hermitian (real-field) part."""
    flipped = coeffs
    for ax in _spatial_axes(dim):
        flipped = np.roll(np.flip(flipped, axis=ax), 1, axis=ax)
    return 0.5 * (coeffs + np.conj(flipped))


class Field:
    """Immutable real m-component field on a :class:`Grid`.

    ``values`` has shape (m, N, ..., N).  The spectral representation (same
    shape, complex, Hermitian-symmetric) is computed on first use and cached.
    """

    __slots__ = ("grid", "values", "_spectral")

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim == grid.dim:
            values = values[np.newaxis]
        if values.ndim != grid.dim + 1 or values.shape[1:] != grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid "
                f"(m, {', '.join(str(grid.points) for _ in range(grid.dim))})"
            )
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self._spectral = None

    @property
    def components(self) -> int:
        return self.values.shape[0]

    @property
    def spectral(self) -> np.ndarray:
        if self._spectral is None:
            c = np.fft.fftn(self.values, axes=_spatial_axes(self.grid.dim))
            c /= self.grid.points**self.grid.dim
            c.setflags(write=False)
            self._spectral = c
        return self._spectral

    @classmethod
    def from_spectral(cls, grid: Grid, coeffs: np.ndarray) -> "Field":
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.ndim == grid.dim:
            coeffs = coeffs[np.newaxis]
        if coeffs.ndim != grid.dim + 1 or coeffs.shape[1:] != grid.shape:
            raise ValueError(
                f"spectral shape {coeffs.shape} does not match grid"
            )
        coeffs = hermitian_symmetrize(coeffs, grid.dim)
        values = np.fft.ifftn(
            coeffs * grid.points**grid.dim, axes=_spatial_axes(grid.dim)
        ).real
        out = cls(grid, values)
        coeffs = np.ascontiguousarray(coeffs)
        coeffs.setflags(write=False)
        out._spectral = coeffs
        return out

    @classmethod
    def zeros(cls, grid: Grid, components: int = 1) -> "Field":
        return cls(grid, np.zeros((components,) + grid.shape))

    def component(self, i: int) -> "Field":
        out = Field(self.grid, self.values[i : i + 1])
        if self._spectral is not None:
            out._spectral = self._spectral[i : i + 1]
        return out

    def _binary(self, other: "Field", op) -> "Field":
        if not isinstance(other, Field):
            return NotImplemented
        if other.grid != self.grid or other.components != self.components:
            raise ValueError("field grids/components do not match")
        return Field(self.grid, op(self.values, other.values))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Field(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.values)

    def magnitude(self) -> np.ndarray:
        """Pointwise Euclidean magnitude across components, shape (N, ..., N)."""
        if self.components == 1:
            return np.abs(self.values[0])
        return np.sqrt(np.sum(self.values**2, axis=0))

    def __repr__(self):
        g = self.grid
        return (
            f"Field(m={self.components}, n={g.dim}, N={g.points}, "
            f"L={g.period:.6g})"
        )


# ---------------------------------------------------------------------------
# transforms


def to_spectral(field: Field) -> np.ndarray:
    """Amplitude-convention spectral coefficients of ``field``."""
    return field.spectral


def to_physical(grid: Grid, coeffs: np.ndarray) -> Field:
    """Field with the given spectral coefficients (Hermitian part is taken)."""
    return Field.from_spectral(grid, coeffs)


def spectral_l2_norm(field: Field) -> float:
    """l2 norm of the spectrum scaled to match the grid L2 norm (Parseval)."""
    c = field.spectral
    return float(
        np.sqrt(field.grid.period**field.grid.dim * np.sum(np.abs(c) ** 2))
    )


# ---------------------------------------------------------------------------
# differential operators and propagators


def gradient(field: Field) -> Field:
    """Spectral gradient of a scalar field; returns an n-component field."""
    if field.components != 1:
        raise ValueError("gradient expects a scalar field (m = 1)")
    grid = field.grid
    coeffs = 1j * grid.k_mesh_deriv * field.spectral[0]
    return Field.from_spectral(grid, coeffs)


def divergence(field: Field) -> Field:
    """Spectral divergence of an n-component vector field."""
    grid = field.grid
    if field.components != grid.dim:
        raise ValueError(
            f"divergence expects m = n = {grid.dim}, got m = {field.components}"
        )
    coeffs = np.sum(1j * grid.k_mesh_deriv * field.spectral, axis=0)
    return Field.from_spectral(grid, coeffs[np.newaxis])


def helmholtz_project(field: Field) -> Field:
    """Leray projection onto divergence-free fields.

    Multiplier (delta_ij - k_i k_j / |k|^2); acts as the identity on the mean
    mode, where the inverse Laplacian has its removable singularity.
    """
    grid = field.grid
    if field.components != grid.dim:
        raise ValueError(
            f"projection expects m = n = {grid.dim}, got m = {field.components}"
        )
    return Field.from_spectral(grid, project_divergence_free(field.spectral, grid))


def project_divergence_free(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Apply the Leray projector to a spectral stack (..., dim, N, ..., N)."""
    k = grid.k_mesh_deriv
    ksq = np.sum(k**2, axis=0)
    inv = np.where(ksq > 0, 1.0 / np.where(ksq > 0, ksq, 1.0), 0.0)
    ax = -grid.dim - 1
    kdotu = np.sum(k * coeffs, axis=ax)
    return coeffs - np.expand_dims(kdotu * inv, ax) * k


def heat_propagate(field: Field, t: float) -> Field:
    """Heat semigroup e^{t Laplacian}: exact multiplier exp(-|k|^2 t)."""
    if t < 0:
        raise ValueError(f"heat propagation requires t >= 0, got {t}")
    if t == 0:
        return field
    return Field.from_spectral(
        field.grid, field.spectral * np.exp(-field.grid.k_sq * t)
    )


def heat_stack(coeffs: np.ndarray, grid: Grid, times: np.ndarray) -> np.ndarray:
    """exp(-|k|^2 t) * coeffs for each t; output shape (len(times), *coeffs)."""
    times = np.asarray(times, dtype=float)
    expo = np.exp(
        -grid.k_sq * times.reshape(times.shape + (1,) * grid.dim)
    )
    shape = times.shape + (1,) * (coeffs.ndim - grid.dim) + grid.shape
    return expo.reshape(shape) * coeffs


# ---------------------------------------------------------------------------
# dealiased products


@lru_cache(maxsize=None)
def _embed_indices(n_src: int, n_dst: int) -> tuple[np.ndarray, ...]:
    if n_dst < n_src:
        raise ValueError("target lattice must be at least as fine")
    ints = (np.fft.fftfreq(n_src) * n_src).astype(int)
    return (ints % n_dst,)


def embed_spectrum(coeffs: np.ndarray, dim: int, n_src: int, n_dst: int) -> np.ndarray:
    """Copy spectral modes onto a finer lattice (same integer wavevectors)."""
    (idx,) = _embed_indices(n_src, n_dst)
    out = np.zeros(coeffs.shape[:-dim] + (n_dst,) * dim, dtype=np.complex128)
    out[(Ellipsis,) + np.ix_(*([idx] * dim))] = coeffs
    return out


def restrict_spectrum(coeffs: np.ndarray, dim: int, n_dst: int) -> np.ndarray:
    """Keep modes representable on the coarser lattice; Nyquist plane zeroed."""
    n_src = coeffs.shape[-1]
    (idx,) = _embed_indices(n_dst, n_src)
    out = coeffs[(Ellipsis,) + np.ix_(*([idx] * dim))]
    out = np.ascontiguousarray(out)
    nyq = n_dst // 2
    for ax in _spatial_axes(dim):
        sl = [slice(None)] * out.ndim
        sl[ax] = nyq
        out[tuple(sl)] = 0.0
    return out


def dealias_multiply(
    spec_a: np.ndarray, spec_b: np.ndarray, grid: Grid
) -> np.ndarray:
    """Exact (2x zero-padded) product of two spectral stacks.

    The inputs may carry arbitrary leading axes, which broadcast against each
    other.  Returns the spectrum of the pointwise product restricted to the
    original lattice; within that band the result is the exact linear
    convolution of the inputs, so no aliased mode pollutes it.
    """
    dim, n, n2 = grid.dim, grid.points, 2 * grid.points
    axes = _spatial_axes(dim)
    pa = np.fft.ifftn(embed_spectrum(spec_a, dim, n, n2) * n2**dim, axes=axes).real
    pb = np.fft.ifftn(embed_spectrum(spec_b, dim, n, n2) * n2**dim, axes=axes).real
    prod = np.fft.fftn(pa * pb, axes=axes) / n2**dim
    return restrict_spectrum(prod, dim, n)


def dealiased_product(f: Field, g: Field) -> Field:
    """Dealiased pointwise product of two fields.

    Componentwise when the component counts match; a scalar factor broadcasts
    over a multi-component one.
    """
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    if f.components != g.components and 1 not in (f.components, g.components):
        raise ValueError(
            f"cannot broadcast components {f.components} x {g.components}"
        )
    out = dealias_multiply(f.spectral, g.spectral, f.grid)
    return Field.from_spectral(f.grid, out)


# ---------------------------------------------------------------------------
# field file format
#
#   header line:  "LPFLD1 <dim> <components> <points> <period>\n"  (ASCII)
#   payload:      little-endian float64, row-major, component-contiguous


def write_field(path, field: Field) -> None:
    header = (
        f"{FIELD_MAGIC} {field.grid.dim} {field.components} "
        f"{field.grid.points} {field.grid.period!r}\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(field.values.astype("<f8").tobytes())


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        header = fh.readline(256)
        payload = fh.read()
    try:
        text = header.decode("ascii").strip()
    except UnicodeDecodeError:
        raise FieldFormatError("magic", "header is not ASCII") from None
    parts = text.split()
    if not parts or parts[0] != FIELD_MAGIC:
        raise FieldFormatError("magic", f"expected {FIELD_MAGIC!r}")
    if len(parts) != 5:
        raise FieldFormatError(
            "header", f"expected 5 header fields, got {len(parts)}"
        )
    _, dim_s, m_s, n_s, period_s = parts
    try:
        dim = int(dim_s)
    except ValueError:
        raise FieldFormatError("dim", f"not an integer: {dim_s!r}") from None
    try:
        m = int(m_s)
    except ValueError:
        raise FieldFormatError("components", f"not an integer: {m_s!r}") from None
    if m < 1:
        raise FieldFormatError("components", f"must be >= 1, got {m}")
    try:
        n = int(n_s)
    except ValueError:
        raise FieldFormatError("points", f"not an integer: {n_s!r}") from None
    try:
        period = float(period_s)
    except ValueError:
        raise FieldFormatError("period", f"not a float: {period_s!r}") from None
    try:
        grid = Grid(dim, n, period)
    except ValueError as exc:
        field = "points" if "points" in str(exc) else "dim"
        raise FieldFormatError(field, str(exc)) from None
    expected = m * n**dim * 8
    if len(payload) != expected:
        raise FieldFormatError(
            "payload", f"expected {expected} bytes, got {len(payload)}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape((m,) + grid.shape)
    return Field(grid, values)
