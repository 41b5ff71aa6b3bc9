"""Moments <f_i^dag f_j> and finite moment matrices with bipartite structure.

Index convention, fixed package-wide: a tensor-product operator class with
sides (f^A_1, ..., f^A_dA) and (f^B_1, ..., f^B_dB) flattens to the single
ordered list

    (f^A_1 f^B_1, f^A_2 f^B_1, ..., f^A_dA f^B_1, f^A_1 f^B_2, ...),

i.e. 1-based flat index i = (l-1) * d_A + k with the A-side index k varying
fastest.  For the two-mode class (1, a) x (1, b) this is the row order
(1, a, b, ab).  The worked 3x3 and 2x2 witness patterns reproduced by the
regression suite hold in exactly this ordering, with partial maps acting on
the fast (A) factor; see reorder.py and posmaps.py.

Truncation-leakage policy: moments are evaluated on a working space obtained
by zero-padding the state, with per-mode padding equal to the largest
creation power plus the largest annihilation power appearing in the operator
class.  Ladder products then act exactly on the state's support, so all
finite-excitation fixtures are exact and coherent states converge with the
deficit-controlled cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .fock import (
    ModeCutoffs,
    Monomial,
    State,
    StateVector,
    monomial_matrix,
    pad_matrix,
    pad_vector,
)

_HERMITICITY_TOL = 1e-10


def _check_bipartition(modes_a, modes_b, num_modes):
    if not modes_a or not modes_b:
        raise DimensionError("both sides of the bipartition must be nonempty")
    if set(modes_a) & set(modes_b):
        raise DimensionError("bipartition sides must be disjoint")
    if any(q < 0 or q >= num_modes for q in modes_a + modes_b):
        raise DimensionError("bipartition refers to modes outside the state")


@dataclass(frozen=True)
class OperatorClass:
    """Tensor-product operator class: ordered monomial lists per side.

    Duplicate entries are legitimate and kept verbatim; they produce repeated
    rows/columns, which some map-based witnesses rely on.
    """

    side_a: tuple[Monomial, ...]
    side_b: tuple[Monomial, ...]
    modes_a: tuple[int, ...] = (0,)
    modes_b: tuple[int, ...] = (1,)

    def __post_init__(self):
        object.__setattr__(self, "side_a", tuple(self.side_a))
        object.__setattr__(self, "side_b", tuple(self.side_b))
        object.__setattr__(self, "modes_a", tuple(self.modes_a))
        object.__setattr__(self, "modes_b", tuple(self.modes_b))
        if not self.side_a or not self.side_b:
            raise DimensionError("each side needs at least one monomial")
        num_modes = self.side_a[0].num_modes
        if any(op.num_modes != num_modes for op in self.side_a + self.side_b):
            raise DimensionError("all monomials must act on the same number of modes")
        _check_bipartition(self.modes_a, self.modes_b, num_modes)
        for op in self.side_a:
            if not set(op.support) <= set(self.modes_a):
                raise DimensionError(f"side-A monomial {op.to_string()} leaves side-A modes")
        for op in self.side_b:
            if not set(op.support) <= set(self.modes_b):
                raise DimensionError(f"side-B monomial {op.to_string()} leaves side-B modes")

    @property
    def num_modes(self) -> int:
        return self.side_a[0].num_modes

    @property
    def d_a(self) -> int:
        return len(self.side_a)

    @property
    def d_b(self) -> int:
        return len(self.side_b)

    def flat_ops(self) -> tuple[Monomial, ...]:
        """Flattened operator list, A-side index fastest."""
        return tuple(
            fa.merged_with(fb) for fb in self.side_b for fa in self.side_a
        )

    @classmethod
    def from_strings(
        cls,
        side_a: list[str],
        side_b: list[str],
        modes_a: tuple[int, ...] = (0,),
        modes_b: tuple[int, ...] = (1,),
        num_modes: int | None = None,
    ) -> "OperatorClass":
        if num_modes is None:
            num_modes = max(tuple(modes_a) + tuple(modes_b)) + 1
        return cls(
            tuple(Monomial.from_string(s, num_modes) for s in side_a),
            tuple(Monomial.from_string(s, num_modes) for s in side_b),
            tuple(modes_a),
            tuple(modes_b),
        )

    def describe(self) -> str:
        sa = ",".join(op.to_string() for op in self.side_a)
        sb = ",".join(op.to_string() for op in self.side_b)
        return f"({sa})x({sb})"


@dataclass(frozen=True)
class GenericClass:
    """Ordered monomial list without tensor structure, plus a bipartition.

    The bipartition is only consulted when moments of the partially
    transposed state are requested (see build_generic_moment_matrix).
    """

    ops: tuple[Monomial, ...]
    modes_a: tuple[int, ...] = (0,)
    modes_b: tuple[int, ...] = (1,)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "modes_a", tuple(self.modes_a))
        object.__setattr__(self, "modes_b", tuple(self.modes_b))
        if not self.ops:
            raise DimensionError("a generic class needs at least one monomial")
        num_modes = self.ops[0].num_modes
        if any(op.num_modes != num_modes for op in self.ops):
            raise DimensionError("all monomials must act on the same number of modes")
        _check_bipartition(self.modes_a, self.modes_b, num_modes)
        for op in self.ops:
            if not set(op.support) <= set(self.modes_a) | set(self.modes_b):
                raise DimensionError("monomial support leaves the declared bipartition")

    @property
    def num_modes(self) -> int:
        return self.ops[0].num_modes

    @property
    def size(self) -> int:
        return len(self.ops)

    @classmethod
    def from_strings(
        cls,
        ops: list[str],
        modes_a: tuple[int, ...] = (0,),
        modes_b: tuple[int, ...] = (1,),
        num_modes: int | None = None,
    ) -> "GenericClass":
        if num_modes is None:
            num_modes = max(tuple(modes_a) + tuple(modes_b)) + 1
        return cls(
            tuple(Monomial.from_string(s, num_modes) for s in ops),
            tuple(modes_a),
            tuple(modes_b),
        )

    def describe(self) -> str:
        return "(" + ",".join(op.to_string() for op in self.ops) + ")"


@dataclass(frozen=True)
class MomentMatrix:
    """Hermitian matrix of moments M_ij = <f_i^dag f_j> over a flattened class."""

    entries: np.ndarray
    d_a: int
    d_b: int
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.d_a * self.d_b, self.d_a * self.d_b):
            raise DimensionError("entries do not match d_a * d_b")
        if np.max(np.abs(m - m.conj().T)) > _HERMITICITY_TOL:
            raise ValueError("moment matrix is not Hermitian within 1e-10")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def size(self) -> int:
        return self.d_a * self.d_b

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True)
class GenericMomentMatrix:
    """Hermitian matrix of moments over a generic (non-tensor) class."""

    entries: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("moment matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > _HERMITICITY_TOL:
            raise ValueError("moment matrix is not Hermitian within 1e-10")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def flatten_index(k: int, l: int, d_a: int, d_b: int | None = None) -> int:
    """1-based flat index i = (l-1)*d_A + k of the side pair (k, l)."""
    if not 1 <= k <= d_a:
        raise IndexError(f"side-A index {k} out of range 1..{d_a}")
    if l < 1 or (d_b is not None and l > d_b):
        raise IndexError(f"side-B index {l} out of range")
    return (l - 1) * d_a + k


def _working_cutoffs(state: State, specs: tuple[Monomial, ...]) -> ModeCutoffs:
    """Support cutoff plus (max creation + max annihilation) power per mode."""
    pads = []
    for q in range(state.num_modes):
        max_n = max((spec.powers[q][0] for spec in specs), default=0)
        max_m = max((spec.powers[q][1] for spec in specs), default=0)
        pads.append(max_n + max_m)
    return state.cutoffs.padded(tuple(pads))


def _padded_state_arrays(state: State, working: ModeCutoffs):
    """Return (vector or None, matrix or None) on the working space."""
    if isinstance(state, StateVector):
        return pad_vector(state.amplitudes, state.cutoffs, working), None
    return None, pad_matrix(state.matrix, state.cutoffs, working)


def op_expectation(state: State, specs: tuple[Monomial, ...]) -> complex:
    """Expectation of the operator product specs[0] @ specs[1] @ ... on the state.

    The product is evaluated as dense matrices on the padded working space,
    with per-mode padding summed over all factors, so no truncation leakage
    can occur for states supported below their cutoff.
    """
    if not specs:
        return 1.0 + 0.0j
    if any(spec.num_modes != state.num_modes for spec in specs):
        raise DimensionError("monomial and state disagree on the number of modes")
    pads = tuple(
        sum(spec.powers[q][0] + spec.powers[q][1] for spec in specs)
        for q in range(state.num_modes)
    )
    working = state.cutoffs.padded(pads)
    vec, mat = _padded_state_arrays(state, working)
    op = monomial_matrix(specs[0], working)
    for spec in specs[1:]:
        op = op @ monomial_matrix(spec, working)
    if vec is not None:
        return complex(np.vdot(vec, op @ vec))
    return complex(np.trace(op @ mat))


def moment(state: State, spec: Monomial) -> complex:
    """Single moment <spec> = Tr(rho * monomial) under the leakage policy."""
    return op_expectation(state, (spec,))


def _gram_moments(state: State, ops: tuple[Monomial, ...]) -> np.ndarray:
    """Matrix of <ops_i^dag ops_j> via dense operators on the padded space."""
    working = _working_cutoffs(state, ops)
    vec, mat = _padded_state_arrays(state, working)
    matrices = [monomial_matrix(op, working) for op in ops]
    n = len(ops)
    out = np.empty((n, n), dtype=complex)
    if vec is not None:
        phis = [m @ vec for m in matrices]
        for i in range(n):
            for j in range(i, n):
                value = complex(np.vdot(phis[i], phis[j]))
                out[i, j] = value
                out[j, i] = value.conjugate()
    else:
        right = [m @ mat for m in matrices]
        for i in range(n):
            for j in range(n):
                # Tr(F_i^dag F_j rho) = sum conj(F_i) * (F_j rho), entrywise
                out[i, j] = complex(np.vdot(matrices[i], right[j]))
    return out


def build_moment_matrix(state: State, cls: OperatorClass) -> MomentMatrix:
    """Moment matrix over the flattened tensor-product class."""
    if cls.num_modes != state.num_modes:
        raise DimensionError("operator class and state disagree on the number of modes")
    entries = _gram_moments(state, cls.flat_ops())
    return MomentMatrix(
        entries,
        cls.d_a,
        cls.d_b,
        provenance={"class": cls.describe(), "state": getattr(state, "label", "state")},
    )


def build_pt_moment_matrix(state: State, cls: OperatorClass) -> MomentMatrix:
    """Moment matrix of the partially transposed state, by index swap.

    Entries obey out[(k,l),(k',l')] = M[(k,l'),(k',l)], the exchange of the
    B-side column indices; no explicit state-level partial transpose is
    performed.  This coincides with transposing the slow (B) factor of the
    moment matrix of the state itself.
    """
    base = build_moment_matrix(state, cls)
    d_a, d_b = cls.d_a, cls.d_b
    four = base.entries.reshape(d_b, d_a, d_b, d_a)
    swapped = four.transpose(2, 1, 0, 3).reshape(base.size, base.size)
    return MomentMatrix(
        swapped,
        d_a,
        d_b,
        provenance={**base.provenance, "transformed": "pt_state"},
    )


def build_generic_moment_matrix(
    state: State, cls: GenericClass, conjugate_b_modes: bool = False
) -> GenericMomentMatrix:
    """Moment matrix over a generic class, optionally on the PT state.

    With ``conjugate_b_modes=True`` the entries are moments of the partially
    transposed state, obtained on the original state by exchanging the
    B-mode parts of the row and column monomials inside each product:
    entry (i, j) = < (A_i B_j)^dag (A_j B_i) > where A/B restrict each
    monomial to its bipartition side.  Taking a submatrix of the plain
    moment matrix and transposing it afterwards is NOT equivalent for
    non-tensor classes, which is why the exchange happens here.
    """
    if cls.num_modes != state.num_modes:
        raise DimensionError("operator class and state disagree on the number of modes")
    prov = {
        "class": cls.describe(),
        "state": getattr(state, "label", "state"),
        "pt_state": bool(conjugate_b_modes),
    }
    if not conjugate_b_modes:
        return GenericMomentMatrix(_gram_moments(state, cls.ops), provenance=prov)
    n = cls.size
    a_parts = [op.restricted_to(cls.modes_a) for op in cls.ops]
    b_parts = [op.restricted_to(cls.modes_b) for op in cls.ops]
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            row_op = a_parts[i].merged_with(b_parts[j])
            col_op = a_parts[j].merged_with(b_parts[i])
            value = op_expectation(state, (row_op.dagger(), col_op))
            out[i, j] = value
            out[j, i] = value.conjugate()
    return GenericMomentMatrix(out, provenance=prov)


def principal_submatrix(
    matrix: np.ndarray | MomentMatrix | GenericMomentMatrix,
    r: tuple[int, ...],
) -> np.ndarray:
    """Principal submatrix keeping the 1-based rows/columns listed in r."""
    m = matrix.entries if hasattr(matrix, "entries") else np.asarray(matrix)
    size = m.shape[0]
    r = tuple(int(x) for x in r)
    if not r:
        raise IndexError("index list r must be nonempty")
    if any(x < 1 or x > size for x in r):
        raise IndexError(f"indices {r} out of range 1..{size}")
    if any(b <= a for a, b in zip(r, r[1:])):
        raise IndexError(f"indices {r} must be strictly increasing")
    idx = [x - 1 for x in r]
    return m[np.ix_(idx, idx)]


def _project_side(ops: tuple[Monomial, ...], modes: tuple[int, ...]) -> tuple[Monomial, ...]:
    """Rewrite side monomials as monomials on the side's own modes only."""
    return tuple(Monomial(tuple(op.powers[q] for q in modes)) for op in ops)


def product_state_factorization(
    state_a: State, state_b: State, cls: OperatorClass
) -> np.ndarray:
    """Reference kron factorization M^B (x) M^A for a product state rho_A (x) rho_B.

    With the A-fastest flattening, M[(l,k),(l',k')] = M^A_{kk'} M^B_{ll'}
    becomes the Kronecker product with the B factor on the slow side.
    The factor states live on the side modes alone.
    """
    ma = _gram_moments(state_a, _project_side(cls.side_a, cls.modes_a))
    mb = _gram_moments(state_b, _project_side(cls.side_b, cls.modes_b))
    return np.kron(mb, ma)
