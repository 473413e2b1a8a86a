"""Nonhomogeneous dyadic (Littlewood-Paley) decomposition on the torus.

Blocks act as radial Fourier multipliers built from the cutoff pair:

    block -1:  chi(|k|)
    block q:   phi(2^-q |k|)     for q >= 0
    block q:   0                 for q <= -2

and the partial sum below 2^q is the multiplier chi(2^-q |k|).  ``shell_max``
is the largest q whose shell {3/4 * 2^q <= |k| <= 8/3 * 2^q} fits entirely
under the Nyquist frequency; a field is reconstructed exactly from blocks
-1..shell_max iff its spectrum sits below ``reconstruction_cap`` = 1.5 *
2^shell_max.

``support_report`` certifies the frequency-localization identities that drive
every product estimate downstream: blocks two shells apart annihilate each
other, a low-high paraproduct summand stays inside a known annulus around
2^q, and a diagonal (remainder) summand has no content above 8 * 2^q.  Those
are convolution-support statements, so they are checked directly on the
spectral coefficients of dealiased products, which implies the corresponding
block products vanish wherever such blocks exist on the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cutoffs import CHI_FLAT_RADIUS, CutoffPair, build_cutoffs
from .spectral import Field, Grid, dealias_multiply


def shell_max(grid: Grid, cutoffs: CutoffPair | None = None) -> int:
    """Largest q with 2 * gamma * 2^q <= Nyquist; -1 if no full shell fits."""
    cut = cutoffs or build_cutoffs()
    q = -1
    while 2.0 * cut.gamma * 2.0 ** (q + 1) <= grid.nyquist * (1 + 1e-12):
        q += 1
    return q


def reconstruction_cap(grid: Grid, cutoffs: CutoffPair | None = None) -> float:
    """Spectral radius below which blocks -1..shell_max reproduce the field."""
    return CHI_FLAT_RADIUS * 2.0 ** (shell_max(grid, cutoffs) + 1)


def shell_bounds(q: int, cutoffs: CutoffPair | None = None) -> tuple[float, float]:
    """Support radii (lo, hi) of block q's multiplier."""
    cut = cutoffs or build_cutoffs()
    if q <= -2:
        return (0.0, 0.0)
    if q == -1:
        return (0.0, cut.gamma)
    return (2.0**q / cut.gamma, 2.0 * cut.gamma * 2.0**q)


@lru_cache(maxsize=None)
def _block_weights(grid: Grid, q: int, cutoffs: CutoffPair) -> np.ndarray:
    if q <= -2:
        w = np.zeros(grid.shape)
    elif q == -1:
        w = cutoffs.chi(grid.k_abs)
    else:
        w = cutoffs.phi(grid.k_abs / 2.0**q)
    w = np.asarray(w)
    w.setflags(write=False)
    return w


@lru_cache(maxsize=None)
def _lowpass_weights(grid: Grid, q: int, cutoffs: CutoffPair) -> np.ndarray:
    w = cutoffs.chi(grid.k_abs / 2.0**q)
    w = np.asarray(w)
    w.setflags(write=False)
    return w


def block_weights(grid: Grid, q: int, cutoffs: CutoffPair | None = None) -> np.ndarray:
    return _block_weights(grid, int(q), cutoffs or build_cutoffs())


def lowpass_weights(grid: Grid, q: int, cutoffs: CutoffPair | None = None) -> np.ndarray:
    """Multiplier of the partial sum below 2^q (zero for q <= -1)."""
    if q <= -1:
        return np.zeros(grid.shape)
    return _lowpass_weights(grid, int(q), cutoffs or build_cutoffs())


def dyadic_block(f: Field, q: int, cutoffs: CutoffPair | None = None) -> Field:
    """Frequency block of ``f`` around |k| ~ 2^q (zero field for q <= -2)."""
    if q <= -2:
        return Field.zeros(f.grid, f.components)
    return Field.from_spectral(f.grid, f.spectral * block_weights(f.grid, q, cutoffs))


def partial_sum(f: Field, q: int, cutoffs: CutoffPair | None = None) -> Field:
    """Sum of blocks strictly below q, i.e. the low-pass chi(2^-q D) f."""
    if q <= -1:
        return Field.zeros(f.grid, f.components)
    return Field.from_spectral(
        f.grid, f.spectral * lowpass_weights(f.grid, q, cutoffs)
    )


@dataclass(frozen=True)
class DyadicDecomposition:
    """Blocks -1..q_max of a source field (q_max = shell_max of its grid)."""

    source: Field
    blocks: tuple[Field, ...]
    q_max: int

    def block(self, q: int) -> Field:
        if q < -1 or q > self.q_max:
            return Field.zeros(self.source.grid, self.source.components)
        return self.blocks[q + 1]

    def reconstruction(self) -> Field:
        total = self.blocks[0]
        for b in self.blocks[1:]:
            total = total + b
        return total


def decompose(f: Field, cutoffs: CutoffPair | None = None) -> DyadicDecomposition:
    qm = shell_max(f.grid, cutoffs)
    blocks = tuple(dyadic_block(f, q, cutoffs) for q in range(-1, qm + 1))
    return DyadicDecomposition(f, blocks, qm)


# ---------------------------------------------------------------------------
# frequency-localization certificates


def _max_outside(spec: np.ndarray, grid: Grid, lo: float, hi: float) -> float:
    """Largest |coefficient| outside the annulus lo <= |k| <= hi."""
    outside = (grid.k_abs < lo - 1e-12) | (grid.k_abs > hi + 1e-12)
    if not np.any(outside):
        return 0.0
    return float(np.max(np.abs(spec[..., outside])))


def support_report(
    f: Field,
    g: Field,
    cutoffs: CutoffPair | None = None,
    tol: float = 1e-12,
) -> dict:
    """Verify the block-interaction support identities on a field pair.

    Returns per-identity maximal violating coefficients, relative to the
    product of the inputs' sup norms, together with a global pass flag:

    * ``block_orthogonality``: Delta_k Delta_q f = 0 for |k - q| >= 2;
    * ``paraproduct_localization``: the spectrum of S_{q-1} f * Delta_q g
      vanishes outside [2^q/12, (10/3) 2^q], hence blocks with |k - q| >= 5
      (indeed >= 3 above) annihilate it;
    * ``remainder_localization``: the spectrum of Delta_q f * Delta_{q+l} g
      (|l| <= 1) vanishes above 2*gamma*(1 + 2^l) * 2^q, hence blocks
      k >= q + 4 annihilate it.

    Products are dealiased, so the checked coefficients are exact.
    """
    cut = cutoffs or build_cutoffs()
    grid = f.grid
    if g.grid != grid:
        raise ValueError("fields live on different grids")
    qm = shell_max(grid, cut)
    gamma = cut.gamma
    scale = float(np.max(f.magnitude()) * np.max(g.magnitude()))
    scale_f = float(np.max(f.magnitude()))

    ortho = 0.0
    for q in range(-1, qm + 1):
        wq = block_weights(grid, q, cut)
        for k in range(-1, qm + 1):
            if abs(k - q) < 2:
                continue
            wk = block_weights(grid, k, cut)
            ortho = max(ortho, float(np.max(np.abs(wk * wq * f.spectral))))

    para = 0.0
    for q in range(1, qm + 1):
        low = Field.from_spectral(grid, f.spectral * lowpass_weights(grid, q - 1, cut))
        high = dyadic_block(g, q, cut)
        prod = dealias_multiply(low.spectral, high.spectral, grid)
        lo = 2.0**q / gamma - gamma * 2.0 ** (q - 1)
        hi = 2.0 * gamma * 2.0**q + gamma * 2.0 ** (q - 1)
        para = max(para, _max_outside(prod, grid, lo, hi))
        # explicit far blocks, where any exist on this lattice
        for k in range(-1, qm + 1):
            if abs(k - q) < 5:
                continue
            wk = block_weights(grid, k, cut)
            para = max(para, float(np.max(np.abs(wk * prod))))

    rem = 0.0
    for q in range(-1, qm + 1):
        bq = dyadic_block(f, q, cut)
        for l in (-1, 0, 1):
            if q + l < -1 or q + l > qm:
                continue
            bl = dyadic_block(g, q + l, cut)
            prod = dealias_multiply(bq.spectral, bl.spectral, grid)
            hi = shell_bounds(q, cut)[1] + shell_bounds(q + l, cut)[1]
            rem = max(rem, _max_outside(prod, grid, 0.0, hi))

    checks = {
        "block_orthogonality": ortho / max(scale_f, 1e-300),
        "paraproduct_localization": para / max(scale, 1e-300),
        "remainder_localization": rem / max(scale, 1e-300),
    }
    return {
        "checks": checks,
        "tolerance": tol,
        "pass": all(v < tol for v in checks.values()),
    }
