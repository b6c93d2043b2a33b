"""Truncated matrix representations of the lattice operators.

Builds dense matrices for the shifts A/Abar, the one-sided difference
quotients D/Dbar, multiplication by momentum P, the symmetrized position
operator X, the curvature operator Q and H = X^2 + P^2, on a finite window of
the momentum grid.  Truncation zeroes everything beyond the window (Dirichlet
convention), so operator identities that hold on the unbounded grid hold here
on interior rows only; `interior_residual` measures exactly that, and
`verify_identity_suite` runs the full battery of identity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .formatting import fmt_real
from .lattice import GridFunction, MomentumLattice, inner_product

OPERATOR_NAMES = ("A", "Abar", "D", "Dbar", "P", "X", "Q", "H", "I")

RESIDUAL_CSV_HEADER = "identity,margin,residual"
CONVERGENCE_CSV_HEADER = "a,r,log_a,log_r"


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix on a lattice, with a tracked band radius.

    shift_radius is an upper bound on |row - column| of nonzero entries; it
    is carried through arithmetic (max under +/-, sum under products) and the
    band structure is asserted on construction.
    """

    lattice: MomentumLattice
    entries: np.ndarray
    shift_radius: int

    def __post_init__(self):
        n = self.lattice.n_points
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {entries.shape}")
        if self.shift_radius < 0:
            raise ValueError("shift_radius must be non-negative")
        if self.shift_radius < n - 1:
            idx = np.arange(n)
            outside = np.abs(idx[:, None] - idx[None, :]) > self.shift_radius
            if np.any(entries[outside] != 0):
                raise ValueError("nonzero entry outside the declared band")
        object.__setattr__(self, "entries", entries)

    def _same_lattice(self, other: "OperatorMatrix"):
        if self.lattice != other.lattice:
            raise ValueError("operators live on different lattices")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_lattice(other)
        return OperatorMatrix(self.lattice, self.entries + other.entries,
                              max(self.shift_radius, other.shift_radius))

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_lattice(other)
        return OperatorMatrix(self.lattice, self.entries - other.entries,
                              max(self.shift_radius, other.shift_radius))

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.lattice, -self.entries, self.shift_radius)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._same_lattice(other)
        return OperatorMatrix(self.lattice, self.entries @ other.entries,
                              self.shift_radius + other.shift_radius)

    def scaled(self, c: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.lattice, c * self.entries, self.shift_radius)


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one identity check: worst interior matrix entry of LHS-RHS."""

    identity_name: str
    max_interior_residual: float
    margin_rows: int
    lattice: str


@dataclass(frozen=True)
class ConvergenceTable:
    """Residual-vs-spacing table of a continuum scan plus the log-log slope."""

    spacings: tuple
    residuals: tuple
    slope: float


def build_operator(lattice: MomentumLattice, name: str) -> OperatorMatrix:
    """Truncated matrix of one named operator.

    A shifts samples down-index (row j picks up sample j+1) and has a zero
    last row; Abar is its mirror.  D = (A-I)/a, Dbar = (I-Abar)/a,
    P = diag(p_j), X = (D+Dbar)/(2i), Q = Dbar-D, H = X@X + P@P.
    """
    n = lattice.n_points
    a = lattice.a
    if name == "I":
        return OperatorMatrix(lattice, np.eye(n, dtype=complex), 0)
    if name == "A":
        return OperatorMatrix(lattice, np.eye(n, k=1, dtype=complex), 1)
    if name == "Abar":
        return OperatorMatrix(lattice, np.eye(n, k=-1, dtype=complex), 1)
    if name == "P":
        return OperatorMatrix(lattice, np.diag(lattice.momenta().astype(complex)), 0)
    if name == "D":
        A = build_operator(lattice, "A")
        I = build_operator(lattice, "I")
        return (A - I).scaled(1.0 / a)
    if name == "Dbar":
        Abar = build_operator(lattice, "Abar")
        I = build_operator(lattice, "I")
        return (I - Abar).scaled(1.0 / a)
    if name == "X":
        D = build_operator(lattice, "D")
        Dbar = build_operator(lattice, "Dbar")
        return (D + Dbar).scaled(1.0 / 2.0j)
    if name == "Q":
        D = build_operator(lattice, "D")
        Dbar = build_operator(lattice, "Dbar")
        return Dbar - D
    if name == "H":
        X = build_operator(lattice, "X")
        P = build_operator(lattice, "P")
        return X @ X + P @ P
    raise ValueError(f"unknown operator name {name!r}; expected one of {OPERATOR_NAMES}")


def adjoint(M: OperatorMatrix) -> OperatorMatrix:
    """Conjugate transpose, same band radius."""
    return OperatorMatrix(M.lattice, M.entries.conj().T.copy(), M.shift_radius)


def bracket(kind: str, M1: OperatorMatrix, M2: OperatorMatrix) -> OperatorMatrix:
    """Commutator or anticommutator of two operators on the same lattice."""
    if kind == "commutator":
        return M1 @ M2 - M2 @ M1
    if kind == "anticommutator":
        return M1 @ M2 + M2 @ M1
    raise ValueError(f"unknown bracket kind {kind!r}")


def apply(M: OperatorMatrix, f: GridFunction) -> GridFunction:
    """Matrix-vector action of an operator on a grid function."""
    if M.lattice != f.lattice:
        raise ValueError("operator and function live on different lattices")
    return GridFunction(f.lattice, M.entries @ f.values)


def interior_residual(M: OperatorMatrix, margin: int) -> float:
    """Largest |entry| over rows margin..n-margin-1 (all columns).

    The margin excludes the rows corrupted by truncation; an empty row range
    is rejected rather than reported as a vacuous zero.
    """
    n = M.lattice.n_points
    if margin < 0:
        raise ValueError("margin must be non-negative")
    if 2 * margin >= n:
        raise ValueError(f"margin {margin} leaves no interior rows on {n} points")
    block = M.entries[margin:n - margin, :]
    return float(np.max(np.abs(block)))


def _commutator(M1, M2):
    return bracket("commutator", M1, M2)


def _anticommutator(M1, M2):
    return bracket("anticommutator", M1, M2)


def verify_identity_suite(lattice: MomentumLattice, seed: int = 181054) -> list:
    """Check every operator identity on the truncated matrices.

    Each report carries the largest interior residual entry of LHS-RHS, with
    the margin set to the total band radius of the expression.  The adjoint
    relation between the shifts and the inner product is exercised on random
    grid functions vanishing at both endpoints.
    """
    n = lattice.n_points
    if n < 8:
        raise ValueError(f"identity suite needs n >= 8, got {n}")
    a = lattice.a
    desc = lattice.descriptor()

    A = build_operator(lattice, "A")
    Abar = build_operator(lattice, "Abar")
    D = build_operator(lattice, "D")
    Dbar = build_operator(lattice, "Dbar")
    P = build_operator(lattice, "P")
    X = build_operator(lattice, "X")
    Q = build_operator(lattice, "Q")
    I = build_operator(lattice, "I")
    H = X @ X + P @ P

    XH = _commutator(X, H)
    PH = _commutator(P, H)
    H_shift = (A - Abar) @ (A - Abar)
    H_shift = H_shift.scaled(-1.0 / (4.0 * a * a)) + P @ P

    checks = [
        ("A_Abar_is_identity", A @ Abar - I, 1),
        ("Abar_A_is_identity", Abar @ A - I, 1),
        ("commutator_A_P", _commutator(A, P) - A.scaled(a), 1),
        ("commutator_Abar_P", _commutator(Abar, P) + Abar.scaled(a), 1),
        ("commutator_D_P", _commutator(D, P) - A, 1),
        ("commutator_Dbar_P", _commutator(Dbar, P) - Abar, 1),
        ("commutator_X_P", _commutator(X, P) + I.scaled(1.0j) - Q.scaled(0.5j * a), 1),
        ("H_shift_form", H - H_shift, 2),
        ("commutator_X_H_braced",
         XH + P.scaled(2.0j) - _anticommutator(Q, P).scaled(0.5j * a), 3),
        ("commutator_X_H_expanded",
         XH + P.scaled(2.0j) - (P @ Q).scaled(1.0j * a) - X.scaled(a * a), 3),
        ("commutator_P_H_braced",
         PH - X.scaled(2.0j) + _anticommutator(Q, X).scaled(0.5j * a), 3),
        ("commutator_P_H_expanded",
         PH - X.scaled(2.0j) + (X @ Q).scaled(1.0j * a), 3),
        ("P_hermitian", P - adjoint(P), 0),
        ("X_hermitian", X - adjoint(X), 0),
        ("Abar_is_A_adjoint", Abar - adjoint(A), 0),
    ]
    reports = [
        ResidualReport(name, interior_residual(resid, margin), margin, desc)
        for name, resid, margin in checks
    ]

    # <f|A g> = <Abar f|g> on random functions vanishing at both endpoints.
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(4):
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        f[0] = f[-1] = 0.0
        g[0] = g[-1] = 0.0
        gf = GridFunction(lattice, f)
        gg = GridFunction(lattice, g)
        lhs = inner_product(gf, apply(A, gg))
        rhs = inner_product(apply(Abar, gf), gg)
        worst = max(worst, abs(lhs - rhs))
    reports.append(ResidualReport("A_adjoint_inner_product", worst, 0, desc))
    return reports


def unit_gaussian(p: np.ndarray) -> np.ndarray:
    """Default continuum-scan test function exp(-p^2/2)."""
    return np.exp(-np.asarray(p, dtype=float) ** 2 / 2.0)


def window_lattice(spacing: float, window: tuple = (-8.0, 8.0)) -> MomentumLattice:
    """Smallest lattice with the given spacing whose points cover the window."""
    lo, hi = window
    if not hi > lo:
        raise ValueError(f"empty window {window}")
    n = int(math.floor((hi - lo) / spacing + 1e-9)) + 1
    return MomentumLattice(p0=lo, a=spacing, n_points=n)


def continuum_scan(spacings, test_function=None, window: tuple = (-8.0, 8.0)) -> ConvergenceTable:
    """Residual of the canonical commutation relation as the spacing shrinks.

    For each spacing a the test function is sampled on a lattice covering the
    window and r(a) = max_j |(([X,P] + i I) f)(p_j)| / max|f| is measured on
    interior rows.  Returns the table together with the least-squares slope
    of log r against log a.
    """
    spacings = tuple(float(s) for s in spacings)
    if len(spacings) < 3:
        raise ValueError(f"need at least 3 spacings, got {len(spacings)}")
    if any(s <= 0 for s in spacings):
        raise ValueError("spacings must be positive")
    if any(s2 >= s1 for s1, s2 in zip(spacings, spacings[1:])):
        raise ValueError("spacings must be strictly decreasing")
    fn = test_function if test_function is not None else unit_gaussian

    residuals = []
    for a in spacings:
        lat = window_lattice(a, window)
        f = np.asarray(fn(lat.momenta()), dtype=complex)
        X = build_operator(lat, "X").entries
        P = build_operator(lat, "P").entries
        g = X @ (P @ f) - P @ (X @ f) + 1j * f
        residuals.append(float(np.max(np.abs(g[1:-1])) / np.max(np.abs(f))))

    if all(r > 0 for r in residuals):
        slope = float(np.polyfit(np.log(spacings), np.log(residuals), 1)[0])
    else:
        slope = math.nan  # a vanishing residual has no log-log scaling
    return ConvergenceTable(spacings, tuple(residuals), slope)


def reports_to_csv(reports) -> str:
    lines = [RESIDUAL_CSV_HEADER]
    for r in reports:
        lines.append(f"{r.identity_name},{r.margin_rows},{fmt_real(r.max_interior_residual)}")
    return "\n".join(lines) + "\n"


def report_to_dict(r: ResidualReport) -> dict:
    return {
        "identity_name": r.identity_name,
        "max_interior_residual": r.max_interior_residual,
        "margin_rows": r.margin_rows,
        "lattice": r.lattice,
    }


def convergence_to_csv(table: ConvergenceTable) -> str:
    lines = [CONVERGENCE_CSV_HEADER]
    for a, r in zip(table.spacings, table.residuals):
        lines.append(f"{fmt_real(a)},{fmt_real(r)},"
                     f"{fmt_real(math.log(a))},{fmt_real(math.log(r))}")
    lines.append(f"slope,{fmt_real(table.slope)},,")
    return "\n".join(lines) + "\n"


def convergence_to_dict(table: ConvergenceTable) -> dict:
    rows = [
        {"a": a, "r": r, "log_a": math.log(a), "log_r": math.log(r)}
        for a, r in zip(table.spacings, table.residuals)
    ]
    return {"rows": rows, "slope": table.slope}
