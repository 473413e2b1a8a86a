"""Lacunary Dirac-comb norms separating B^0_{inf,1} from B^{0,1}_{inf,inf}.

The witness is a one-dimensional comb of unit Fourier masses on the lacunary
radii 2^j,

    f = sum_{j=-1..J} a_j e_j,        e_j(x) = cos(2^j x),

whose dyadic blocks mix only the two neighbouring coefficients: the mode at
radius 2^j is split between blocks j-1 and j with weights summing to one.
Consequently

    sum_q ||block_q f||_inf   ~  sum_j |a_j|,
    sup_q (q+3) ||block_q f||_inf  ~  sup_j (j+3) |a_j|,

so a_j = 1/(j+3) has bounded log-weighted sup norm but logarithmically
divergent summed norm, and no inclusion holds in either direction.

Blocks are evaluated through the convolution kernels of the cutoffs: the
kernel h (inverse transform of phi, and h-tilde of chi) is materialized once
by high-resolution quadrature on the line, cached, and the block weight of a
mode at radius omega is recovered as the cosine transform of the sampled
kernel at omega.  The sup norm of a block is taken over a dense sample of
one period of its lowest active frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cutoffs import CutoffPair, build_cutoffs

KERNEL_POINTS = 1 << 16  # samples of h on the half-line
KERNEL_EXTENT = 400.0  # the kernel decays super-polynomially; tail checked in tests
PROFILE_POINTS = 1 << 11
SUP_SAMPLES = 1 << 13


@dataclass(frozen=True)
class DiracCombSpec:
    """Coefficients a_j for j = -1..J of the lacunary comb."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(float(a) for a in self.coefficients)
        )
        if self.J < 0:
            raise ValueError("need coefficients for at least j = -1 and j = 0")

    @property
    def J(self) -> int:
        return len(self.coefficients) - 2

    @classmethod
    def harmonic(cls, J: int) -> "DiracCombSpec":
        return cls(tuple(1.0 / (j + 3.0) for j in range(-1, J + 1)))

    @classmethod
    def kronecker(cls, k: int, J: int | None = None) -> "DiracCombSpec":
        if k < 0:
            raise ValueError("k must be >= 0")
        J = k + 2 if J is None else J
        coeffs = [0.0] * (J + 2)
        coeffs[k + 1] = 1.0 / (3.0 + k)
        return cls(tuple(coeffs))


@lru_cache(maxsize=None)
def _kernel_table(cutoffs: CutoffPair) -> dict:
    """h = F^-1 phi and h~ = F^-1 chi sampled on [0, KERNEL_EXTENT]."""
    rho_top = 2.0 * cutoffs.gamma + 0.5
    rho = np.linspace(0.0, rho_top, PROFILE_POINTS)
    phi_vals = cutoffs.phi(rho)
    chi_vals = cutoffs.chi(rho)
    ys = np.linspace(0.0, KERNEL_EXTENT, KERNEL_POINTS)
    drho = rho[1] - rho[0]
    # h(y) = (1/pi) int_0^inf phi(rho) cos(rho y) drho, in manageable chunks
    h = np.empty_like(ys)
    h_tilde = np.empty_like(ys)
    chunk = 2048
    for start in range(0, ys.size, chunk):
        block = np.cos(np.outer(ys[start : start + chunk], rho))
        weights = np.full(rho.size, drho)
        weights[0] = weights[-1] = 0.5 * drho
        h[start : start + chunk] = block @ (phi_vals * weights) / np.pi
        h_tilde[start : start + chunk] = block @ (chi_vals * weights) / np.pi
    return {"y": ys, "h": h, "h_tilde": h_tilde}


def kernel_multiplier(
    omega: float, q: int, cutoffs: CutoffPair | None = None
) -> float:
    """Block-q weight of the mode cos(omega x), via the materialized kernel.

    For q >= 0 this is the cosine transform of 2^q h(2^q .) at omega, i.e.
    the numerically recovered phi(2^-q omega); for q = -1 it is the recovered
    chi(omega).
    """
    cut = cutoffs or build_cutoffs()
    if q <= -2:
        return 0.0
    table = _kernel_table(cut)
    ys, dy = table["y"], table["y"][1] - table["y"][0]
    kern = table["h_tilde"] if q == -1 else table["h"]
    arg = omega if q == -1 else omega / 2.0**q
    integrand = kern * np.cos(arg * ys)
    # even kernel: transform = 2 * int_0^inf
    total = 2.0 * dy * (np.sum(integrand) - 0.5 * integrand[0] - 0.5 * integrand[-1])
    return float(total)


def _block_sup(amps: list[float], exponents: list[int]) -> float:
    """sup_x |sum_i amps[i] cos(2^{e_i} x)| over one period of the lowest mode."""
    if not amps:
        return 0.0
    base = min(exponents)
    theta = np.linspace(0.0, 2.0 * np.pi, SUP_SAMPLES, endpoint=False)
    total = np.zeros_like(theta)
    for amp, e in zip(amps, exponents):
        total += amp * np.cos(2.0 ** (e - base) * theta)
    return float(np.max(np.abs(total)))


def dirac_comb_norms(
    spec: DiracCombSpec, cutoffs: CutoffPair | None = None, dim: int = 1
) -> tuple[float, float]:
    """(partial sum_q ||block_q f||_inf for q <= J, sup_q (q+3) ||block_q f||_inf).

    Comparable within fixed constants to sum_j |a_j| and sup_j (j+3) |a_j|.
    The construction is one-dimensional.
    """
    if dim != 1:
        raise ValueError("the comb norms are computed in one dimension only")
    cut = cutoffs or build_cutoffs()
    J = spec.J
    partial = 0.0
    weighted_sup = 0.0
    for q in range(-1, J + 1):
        amps, expos = [], []
        for j in range(-1, J + 1):
            a = spec.coefficients[j + 1]
            if a == 0.0:
                continue
            w = kernel_multiplier(2.0**j, q, cut)
            if abs(w) < 1e-9:
                continue
            amps.append(a * w)
            expos.append(j)
        sup = _block_sup(amps, expos)
        partial += sup
        weighted_sup = max(weighted_sup, (q + 3.0) * sup)
    return partial, weighted_sup
