"""Discrete momentum grid, grid functions, and the discrete integral.

The function space everything else acts on: complex-valued functions sampled
on the uniformly spaced momenta p_j = p0 + j*a, j = 0..n_points-1, with the
spacing-weighted sum as integral and the induced sesquilinear inner product.
Units are dimensionless (hbar = 1); `square_well_lattice` maps the infinite
square well onto this grid.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .formatting import fmt_real

GRID_CSV_HEADER = "j,p,re,im"


@dataclass(frozen=True)
class MomentumLattice:
    """Uniform momentum grid p_j = p0 + j*a with a finite number of points."""

    p0: float
    a: float
    n_points: int

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"lattice spacing must be positive, got a={self.a}")
        if self.n_points < 1:
            raise ValueError(f"lattice needs at least one point, got {self.n_points}")

    def momentum_at(self, j: int) -> float:
        """Momentum of the j-th grid point, p0 + j*a."""
        if not 0 <= j < self.n_points:
            raise IndexError(f"grid index {j} outside 0..{self.n_points - 1}")
        return self.p0 + j * self.a

    def momenta(self) -> np.ndarray:
        """All grid momenta as a float array of length n_points."""
        return self.p0 + self.a * np.arange(self.n_points, dtype=float)

    def descriptor(self) -> str:
        return f"p0={fmt_real(self.p0)},a={fmt_real(self.a)},n={self.n_points}"


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A complex-valued function sampled on a MomentumLattice."""

    lattice: MomentumLattice
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).copy()
        if vals.shape != (self.lattice.n_points,):
            raise ValueError(
                f"expected {self.lattice.n_points} values, got shape {vals.shape}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def square_well_lattice(L: float, n_levels: int, hbar: float = 1.0) -> MomentumLattice:
    """Momentum grid of the 1-d infinite square well of width L.

    The allowed momenta are hbar*pi/L * (1, 2, 3, ...), so p0 = a = hbar*pi/L.
    """
    if not L > 0:
        raise ValueError(f"well width must be positive, got L={L}")
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if n_levels < 1:
        raise ValueError(f"need at least one level, got {n_levels}")
    step = hbar * math.pi / L
    return MomentumLattice(p0=step, a=step, n_points=n_levels)


def sample(lattice: MomentumLattice, fn: Callable[[np.ndarray], np.ndarray]) -> GridFunction:
    """Sample a vectorized callable on the lattice momenta."""
    return GridFunction(lattice, np.asarray(fn(lattice.momenta()), dtype=complex))


def a_integral(f: GridFunction) -> complex:
    """Discrete integral a * sum_j f(p_j) over the whole grid."""
    return complex(f.lattice.a * np.sum(f.values))


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """<f|g> = a * sum_j conj(f(p_j)) g(p_j); conjugate-linear in f."""
    if f.lattice != g.lattice:
        raise ValueError("inner product requires both functions on the same lattice")
    return complex(f.lattice.a * np.sum(np.conj(f.values) * g.values))


def grid_to_csv(f: GridFunction) -> str:
    """CSV interchange form: header `j,p,re,im`, one row per grid point."""
    lines = [GRID_CSV_HEADER]
    for j, (p, v) in enumerate(zip(f.lattice.momenta(), f.values)):
        lines.append(f"{j},{fmt_real(p)},{fmt_real(v.real)},{fmt_real(v.imag)}")
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str) -> GridFunction:
    """Parse the `j,p,re,im` CSV form back into a GridFunction.

    The lattice is inferred from the p column, so at least two rows are
    required.
    """
    rows = [line for line in io.StringIO(text) if line.strip()]
    if not rows or rows[0].strip() != GRID_CSV_HEADER:
        raise ValueError(f"expected header '{GRID_CSV_HEADER}'")
    momenta = []
    values = []
    for expected_j, line in enumerate(rows[1:]):
        fields = line.strip().split(",")
        if len(fields) != 4:
            raise ValueError(f"expected 4 fields, got {len(fields)}: {line!r}")
        j, p, re, im = int(fields[0]), float(fields[1]), float(fields[2]), float(fields[3])
        if j != expected_j:
            raise ValueError(f"row index {j} out of order (expected {expected_j})")
        momenta.append(p)
        values.append(complex(re, im))
    if len(momenta) < 2:
        raise ValueError("need at least two rows to infer the lattice spacing")
    a = momenta[1] - momenta[0]
    lattice = MomentumLattice(p0=momenta[0], a=a, n_points=len(momenta))
    return GridFunction(lattice, np.asarray(values))
