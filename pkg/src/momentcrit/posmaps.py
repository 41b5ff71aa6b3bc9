"""Positive (not completely positive) maps and their partial application.

The catalog covers the three-parameter diagonal-type map on 3x3 matrices
(with its indecomposable special case), the rotation-parameterized map built
on an orthonormal traceless generator basis, and the time-reversal map on
even dimensions built from a skew-symmetric unitary.  Partially applying any
of these to one factor of a separable block matrix preserves positivity, so
a negative output eigenvalue witnesses entanglement of the input.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np

from .errors import DimensionError
from .moments import MomentMatrix

_ORTHO_TOL = 1e-10


@dataclasses.dataclass(frozen=True)
class ChoiParams:
    """Parameters (alpha, beta, gamma) of the diagonal-type map on 3x3 inputs.

    Validated to be a positive map at construction:
    alpha >= 1, alpha + beta + gamma >= 3, and for 1 <= alpha <= 2
    additionally beta * gamma >= (2 - alpha)^2.  The ``decomposable`` flag
    records whether the map is decomposable (alpha >= 1 and, for
    1 <= alpha <= 3, beta * gamma >= (3 - alpha)^2 / 4); indecomposable maps
    are the ones that can in principle see PPT entanglement.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        a, b, g = float(self.alpha), float(self.beta), float(self.gamma)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", g)
        if min(a, b, g) < 0:
            raise ValueError("map parameters must be nonnegative")
        if a < 1 or a + b + g < 3 or (1 <= a <= 2 and b * g < (2 - a) ** 2):
            raise ValueError(
                f"parameters ({a}, {b}, {g}) do not define a positive map"
            )

    @property
    def decomposable(self) -> bool:
        if self.alpha < 1:
            return False
        if 1 <= self.alpha <= 3:
            return self.beta * self.gamma >= (3 - self.alpha) ** 2 / 4
        return True


def choi_apply(p: ChoiParams, a: np.ndarray) -> np.ndarray:
    """Diagonal-type map on a 3x3 matrix: -A plus a cyclic diagonal recombination."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (3, 3):
        raise DimensionError(f"map acts on 3x3 matrices, got {a.shape}")
    d = np.array(
        [
            p.alpha * a[0, 0] + p.beta * a[1, 1] + p.gamma * a[2, 2],
            p.gamma * a[0, 0] + p.alpha * a[1, 1] + p.beta * a[2, 2],
            p.beta * a[0, 0] + p.gamma * a[1, 1] + p.alpha * a[2, 2],
        ]
    )
    return -a + np.diag(d)


def stormer() -> ChoiParams:
    """The indecomposable special case (2, 0, 1)."""
    return ChoiParams(2.0, 0.0, 1.0)


def gell_mann_generators(n: int) -> list[np.ndarray]:
    """Traceless Hermitian basis of su(n), orthonormal under Tr(g_i g_j) = delta_ij.

    Order: symmetric pairs (j < k lexicographic), antisymmetric pairs, then
    the diagonal members.  For n = 2 these are the Pauli matrices / sqrt(2).
    """
    if n < 2:
        raise DimensionError("generator basis needs dimension >= 2")
    gens: list[np.ndarray] = []
    for j in range(n):
        for k in range(j + 1, n):
            g = np.zeros((n, n), dtype=complex)
            g[j, k] = g[k, j] = 1 / np.sqrt(2)
            gens.append(g)
    for j in range(n):
        for k in range(j + 1, n):
            g = np.zeros((n, n), dtype=complex)
            g[j, k] = -1j / np.sqrt(2)
            g[k, j] = 1j / np.sqrt(2)
            gens.append(g)
    for l in range(1, n):
        g = np.zeros((n, n), dtype=complex)
        g[np.diag_indices(n)] = [1.0] * l + [-l] + [0.0] * (n - l - 1)
        g /= np.sqrt(l * (l + 1))
        gens.append(g)
    return gens


def _check_rotation(r: np.ndarray, dim: int) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (dim, dim):
        raise DimensionError(f"rotation must be {dim}x{dim}, got {r.shape}")
    if np.max(np.abs(r @ r.T - np.eye(dim))) > _ORTHO_TOL:
        raise ValueError("rotation matrix is not orthogonal within 1e-10")
    if abs(np.linalg.det(r) - 1.0) > _ORTHO_TOL:
        raise ValueError("rotation matrix must have determinant +1 within 1e-10")
    return r


@dataclasses.dataclass(frozen=True)
class KossakowskiParams:
    """Rotation map data: dimension n, rotation R on the generator space, y.

    Only y = 0 is validated here (the usage this package needs); positivity
    with the rotation is additionally checked empirically on random PSD
    inputs at construction.
    """

    n: int
    rotation: np.ndarray
    y: np.ndarray | None = None
    generators: tuple[np.ndarray, ...] | None = None
    validation_samples: int = 200

    def __post_init__(self):
        n = int(self.n)
        object.__setattr__(self, "n", n)
        if n < 2:
            raise DimensionError("dimension must be >= 2")
        dim = n * n - 1
        object.__setattr__(self, "rotation", _check_rotation(self.rotation, dim))
        y = np.zeros(dim) if self.y is None else np.asarray(self.y, dtype=float)
        if y.shape != (dim,):
            raise DimensionError(f"y must have length {dim}")
        if np.max(np.abs(y)) > 1e-12:
            raise ValueError("only y = 0 is validated; nonzero y is rejected")
        object.__setattr__(self, "y", y)
        gens = self.generators
        if gens is None:
            gens = tuple(gell_mann_generators(n))
        else:
            gens = tuple(np.asarray(g, dtype=complex) for g in gens)
            if len(gens) != dim:
                raise DimensionError(f"need {dim} generators, got {len(gens)}")
            for i, g in enumerate(gens):
                if np.max(np.abs(g - g.conj().T)) > _ORTHO_TOL:
                    raise ValueError(f"generator {i} is not Hermitian within 1e-10")
                if abs(np.trace(g)) > _ORTHO_TOL:
                    raise ValueError(f"generator {i} is not traceless within 1e-10")
            for i, gi in enumerate(gens):
                for j, gj in enumerate(gens):
                    expected = 1.0 if i == j else 0.0
                    if abs(np.trace(gi @ gj) - expected) > _ORTHO_TOL:
                        raise ValueError("generators are not orthonormal within 1e-10")
        object.__setattr__(self, "generators", gens)
        self._empirical_positivity_check()

    def _empirical_positivity_check(self):
        rng = np.random.default_rng(20200512)
        for _ in range(int(self.validation_samples)):
            z = rng.standard_normal((self.n, self.n)) + 1j * rng.standard_normal(
                (self.n, self.n)
            )
            psd = z @ z.conj().T
            out = kossakowski_apply(self, psd)
            if float(np.linalg.eigvalsh((out + out.conj().T) / 2)[0]) < -1e-10:
                raise ValueError("rotation map failed the empirical positivity check")


def kossakowski_apply(p: KossakowskiParams, a: np.ndarray) -> np.ndarray:
    """(I/n) Tr A + g . (R x + kappa * y * Tr A) / (n - 1) with x_i = Tr(A g_i)."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (p.n, p.n):
        raise DimensionError(f"map acts on {p.n}x{p.n} matrices, got {a.shape}")
    x = np.array([np.trace(a @ g) for g in p.generators])
    kappa = np.sqrt((p.n - 1) / p.n)
    coeffs = p.rotation @ x + kappa * p.y * np.trace(a)
    out = np.eye(p.n, dtype=complex) * np.trace(a) / p.n
    for c, g in zip(coeffs, p.generators):
        out = out + c * g / (p.n - 1)
    return out


@dataclasses.dataclass(frozen=True)
class BreuerParams:
    """Time-reversal map data: even dimension d and skew-symmetric unitary U."""

    d: int
    unitary: np.ndarray

    def __post_init__(self):
        d = int(self.d)
        object.__setattr__(self, "d", d)
        if d < 4 or d % 2:
            raise DimensionError("dimension must be even and >= 4")
        u = np.asarray(self.unitary, dtype=complex)
        if u.shape != (d, d):
            raise DimensionError(f"unitary must be {d}x{d}, got {u.shape}")
        if np.max(np.abs(u @ u.conj().T - np.eye(d))) > _ORTHO_TOL:
            raise ValueError("U is not unitary within 1e-10")
        if np.max(np.abs(u.T + u)) > _ORTHO_TOL:
            raise ValueError("U is not skew-symmetric within 1e-10")
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)


def breuer_unitary(phases: tuple[float, ...], rotation: np.ndarray | None = None) -> np.ndarray:
    """Skew-symmetric unitary U = R D R^T from 2x2 rotation blocks D.

    D places e^{i phi_k} (|2k><2k+1| - |2k+1><2k|) on consecutive pairs; any
    real orthogonal R (default identity) conjugates it.
    """
    d = 2 * len(phases)
    if d < 4:
        raise DimensionError("need at least two phase blocks (dimension >= 4)")
    dmat = np.zeros((d, d), dtype=complex)
    for k, phi in enumerate(phases):
        phase = np.exp(1j * float(phi))
        dmat[2 * k, 2 * k + 1] = phase
        dmat[2 * k + 1, 2 * k] = -phase
    if rotation is None:
        return dmat
    r = np.asarray(rotation, dtype=float)
    if r.shape != (d, d):
        raise DimensionError(f"rotation must be {d}x{d}")
    if np.max(np.abs(r @ r.T - np.eye(d))) > _ORTHO_TOL:
        raise ValueError("rotation matrix is not orthogonal within 1e-10")
    return r @ dmat @ r.T


def breuer_antidiagonal_unitary(d: int) -> np.ndarray:
    """The anti-diagonal skew-symmetric unitary with +1 above, -1 below center."""
    if d < 4 or d % 2:
        raise DimensionError("dimension must be even and >= 4")
    u = np.zeros((d, d), dtype=complex)
    for i in range(d):
        u[i, d - 1 - i] = 1.0 if i < d // 2 else -1.0
    return u


def breuer_apply(p: BreuerParams, a: np.ndarray) -> np.ndarray:
    """I Tr A - A - U A^T U^dag."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (p.d, p.d):
        raise DimensionError(f"map acts on {p.d}x{p.d} matrices, got {a.shape}")
    theta = p.unitary @ a.T @ p.unitary.conj().T
    return np.eye(p.d, dtype=complex) * np.trace(a) - a - theta


@dataclasses.dataclass(frozen=True)
class PositiveMap:
    """A validated positive map packaged with its input dimension and name."""

    name: str
    dim: int
    apply: Callable[[np.ndarray], np.ndarray]
    indecomposable: bool | None = None

    def __call__(self, a: np.ndarray) -> np.ndarray:
        return self.apply(a)


def choi_map(p: ChoiParams) -> PositiveMap:
    name = f"choi({p.alpha:g},{p.beta:g},{p.gamma:g})"
    return PositiveMap(name, 3, lambda a: choi_apply(p, a), indecomposable=not p.decomposable)


def stormer_map() -> PositiveMap:
    p = stormer()
    return PositiveMap("stormer", 3, lambda a: choi_apply(p, a), indecomposable=not p.decomposable)


def kossakowski_map(p: KossakowskiParams) -> PositiveMap:
    return PositiveMap(f"kossakowski(n={p.n})", p.n, lambda a: kossakowski_apply(p, a))


def breuer_map(p: BreuerParams) -> PositiveMap:
    return PositiveMap(f"breuer(d={p.d})", p.d, lambda a: breuer_apply(p, a), indecomposable=True)


def identity_map(dim: int) -> PositiveMap:
    return PositiveMap(f"identity({dim})", dim, lambda a: np.asarray(a, dtype=complex).copy())


def apply_partial(
    m: MomentMatrix | np.ndarray,
    pmap: PositiveMap,
    side: str = "A",
    dims: tuple[int, int] | None = None,
) -> np.ndarray:
    """Apply a positive map to one tensor factor of a bipartite block matrix.

    side="A" transforms the fast (A-side) d_A x d_A blocks, side="B" the slow
    ones.  The worked witness patterns in the regression suite all use
    side="A"; both sides are first-class.  Returns a plain array: the output
    is generally not a moment matrix.
    """
    if isinstance(m, MomentMatrix):
        entries, d_a, d_b = m.entries, m.d_a, m.d_b
    else:
        if dims is None:
            raise DimensionError("dims=(d_a, d_b) is required for a raw array")
        d_a, d_b = dims
        entries = np.asarray(m, dtype=complex)
    if side == "A":
        if pmap.dim != d_a:
            raise DimensionError(f"map dimension {pmap.dim} != d_a {d_a}")
    elif side == "B":
        if pmap.dim != d_b:
            raise DimensionError(f"map dimension {pmap.dim} != d_b {d_b}")
    else:
        raise ValueError("side must be 'A' or 'B'")
    four = entries.reshape(d_b, d_a, d_b, d_a)
    out = np.empty_like(four)
    if side == "A":
        for l in range(d_b):
            for lp in range(d_b):
                out[l, :, lp, :] = pmap(four[l, :, lp, :])
    else:
        for k in range(d_a):
            for kp in range(d_a):
                out[:, k, :, kp] = pmap(four[:, k, :, kp])
    return out.reshape(d_a * d_b, d_a * d_b)
