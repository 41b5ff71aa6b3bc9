import numpy as np
import pytest

from momentcrit.errors import DimensionError
from momentcrit.posmaps import (
    BreuerParams,
    ChoiParams,
    KossakowskiParams,
    apply_partial,
    breuer_antidiagonal_unitary,
    breuer_apply,
    breuer_map,
    breuer_unitary,
    choi_apply,
    choi_map,
    gell_mann_generators,
    identity_map,
    kossakowski_apply,
    kossakowski_map,
    stormer,
    stormer_map,
)
from momentcrit.sampling import random_psd, random_rotation


def test_choi_params_validation():
    ChoiParams(1, 1, 1)  # reduction-map family boundary: accepted
    ChoiParams(3, 0, 0)
    with pytest.raises(ValueError):
        ChoiParams(0.5, 2, 2)
    with pytest.raises(ValueError):
        ChoiParams(1, 0.5, 0.5)  # beta*gamma = 0.25 < (2-1)^2
    with pytest.raises(ValueError):
        ChoiParams(2, -1, 2)


def test_stormer_special_case():
    p = stormer()
    assert (p.alpha, p.beta, p.gamma) == (2.0, 0.0, 1.0)
    assert not p.decomposable
    assert stormer_map().indecomposable


def test_choi_action_on_identity_and_basis():
    p = stormer()
    np.testing.assert_allclose(choi_apply(p, np.eye(3)), 2 * np.eye(3), atol=0)
    out = choi_apply(p, np.diag([1.0, 0, 0]))
    np.testing.assert_allclose(out, np.diag([1.0, 1.0, 0]), atol=0)
    with pytest.raises(DimensionError):
        choi_apply(p, np.eye(4))


def test_stormer_equals_choi_201_everywhere():
    rng = np.random.default_rng(0)
    p = ChoiParams(2, 0, 1)
    for _ in range(10):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        np.testing.assert_allclose(choi_apply(stormer(), a), choi_apply(p, a), atol=1e-12)


def test_gell_mann_n2_is_scaled_pauli():
    gens = gell_mann_generators(2)
    paulis = [
        np.array([[0, 1], [1, 0]]),
        np.array([[0, -1j], [1j, 0]]),
        np.array([[1, 0], [0, -1]]),
    ]
    for g, p in zip(gens, paulis):
        np.testing.assert_allclose(g, p / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gell_mann_orthonormal_traceless(n):
    gens = gell_mann_generators(n)
    assert len(gens) == n * n - 1
    for i, gi in enumerate(gens):
        assert abs(np.trace(gi)) < 1e-14
        np.testing.assert_allclose(gi, gi.conj().T, atol=1e-14)
        for j, gj in enumerate(gens):
            assert abs(np.trace(gi @ gj) - (1.0 if i == j else 0.0)) < 1e-13


@pytest.mark.parametrize("n", [2, 3])
def test_gell_mann_completeness(n):
    # brute-force reconstruction of random Hermitian matrices
    rng = np.random.default_rng(1)
    gens = gell_mann_generators(n)
    for _ in range(10):
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = z + z.conj().T
        rebuilt = np.trace(a) / n * np.eye(n)
        for g in gens:
            rebuilt = rebuilt + np.trace(g @ a) * g
        np.testing.assert_allclose(rebuilt, a, atol=1e-12)


def test_kossakowski_identity_rotation():
    p = KossakowskiParams(3, np.eye(8))
    np.testing.assert_allclose(kossakowski_apply(p, np.eye(3)), np.eye(3), atol=1e-14)
    rng = np.random.default_rng(2)
    z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    a = z + z.conj().T
    traceless = a - np.trace(a) / 3 * np.eye(3)
    out = kossakowski_apply(p, traceless)
    assert abs(np.trace(out)) < 1e-12
    # trace preservation for y = 0, brute force over random inputs
    for _ in range(5):
        z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert abs(np.trace(kossakowski_apply(p, z)) - np.trace(z)) < 1e-12


def test_kossakowski_validation():
    with pytest.raises(ValueError):
        KossakowskiParams(3, np.eye(8) * 2)  # not orthogonal
    bad = np.eye(8)
    bad[0, 0] = -1  # det -1
    with pytest.raises(ValueError):
        KossakowskiParams(3, bad)
    with pytest.raises(ValueError):
        KossakowskiParams(3, np.eye(8), y=np.ones(8))


def test_breuer_unitary_construction():
    u = breuer_unitary((0.0, 0.0))
    d = np.array(
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=complex
    )
    np.testing.assert_allclose(u, d, atol=0)
    # permutation rotation sending the block form to the anti-diagonal form
    r = np.zeros((4, 4))
    r[0, 0] = r[1, 2] = r[2, 3] = r[3, 1] = 1.0
    np.testing.assert_allclose(
        breuer_unitary((0.0, 0.0), r), breuer_antidiagonal_unitary(4), atol=0
    )


def test_breuer_unitary_invariants():
    rng = np.random.default_rng(3)
    for _ in range(5):
        phases = tuple(rng.uniform(0, 2 * np.pi, size=3))
        rot = random_rotation(rng, 6)
        u = breuer_unitary(phases, rot)
        np.testing.assert_allclose(u.T, -u, atol=1e-12)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(6), atol=1e-12)
        BreuerParams(6, u)  # validates


def test_breuer_params_validation():
    with pytest.raises(DimensionError):
        BreuerParams(5, np.eye(5))
    with pytest.raises(ValueError):
        BreuerParams(4, np.eye(4))  # symmetric, not skew


def test_breuer_apply_identity_and_diagonal():
    p = BreuerParams(4, breuer_antidiagonal_unitary(4))
    np.testing.assert_allclose(breuer_apply(p, np.eye(4)), 2 * np.eye(4), atol=0)
    diag = np.diag([1.0, 2.0, 3.0, 4.0])
    expected = 10 * np.eye(4) - diag - np.diag([4.0, 3.0, 2.0, 1.0])
    np.testing.assert_allclose(breuer_apply(p, diag), expected, atol=0)


@pytest.mark.parametrize(
    "factory",
    [
        lambda rng: stormer_map(),
        lambda rng: choi_map(ChoiParams(1, 1, 1)),
        lambda rng: choi_map(ChoiParams(2.5, 0.4, 0.3)),
        lambda rng: kossakowski_map(KossakowskiParams(3, np.eye(8))),
        lambda rng: kossakowski_map(KossakowskiParams(3, random_rotation(rng, 8))),
        lambda rng: kossakowski_map(KossakowskiParams(2, random_rotation(rng, 3))),
        lambda rng: breuer_map(BreuerParams(4, breuer_antidiagonal_unitary(4))),
        lambda rng: breuer_map(
            BreuerParams(4, breuer_unitary((0.7, 1.9), random_rotation(rng, 4)))
        ),
    ],
)
def test_catalog_preserves_positivity(factory):
    rng = np.random.default_rng(12)
    pmap = factory(rng)
    for _ in range(200):
        psd = random_psd(rng, pmap.dim)
        out = pmap(psd)
        assert np.linalg.eigvalsh((out + out.conj().T) / 2)[0] >= -1e-10


def test_apply_partial_identity_map_is_noop():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    out = apply_partial(m, identity_map(3), side="A", dims=(3, 4))
    np.testing.assert_allclose(out, m, atol=0)
    out = apply_partial(m, identity_map(4), side="B", dims=(3, 4))
    np.testing.assert_allclose(out, m, atol=0)


def test_apply_partial_dimension_checks():
    m = np.zeros((12, 12))
    with pytest.raises(DimensionError):
        apply_partial(m, identity_map(4), side="A", dims=(3, 4))
    with pytest.raises(DimensionError):
        apply_partial(m, identity_map(3), side="B", dims=(3, 4))


def test_apply_partial_keeps_separable_moment_matrices_psd():
    # the full transformed matrix (not just a submatrix) stays PSD when the
    # input moment matrix comes from a separable state
    from momentcrit.moments import OperatorClass, build_moment_matrix
    from momentcrit.sampling import random_separable_mixture

    rng = np.random.default_rng(7)
    tri = OperatorClass.from_strings(["1", "a", "a"], ["1", "b", "b"])
    f2 = OperatorClass.from_strings(["1", "a", "Aa", "1"], ["1", "b", "Bb", "1"])
    breuer4 = breuer_map(BreuerParams(4, breuer_antidiagonal_unitary(4)))
    koss = kossakowski_map(KossakowskiParams(3, random_rotation(rng, 8)))
    for _ in range(10):
        state = random_separable_mixture(rng, (2, 2))
        m3 = build_moment_matrix(state, tri)
        for pmap in (stormer_map(), koss):
            out = apply_partial(m3, pmap, side="A")
            assert np.linalg.eigvalsh((out + out.conj().T) / 2)[0] >= -1e-9
        m4 = build_moment_matrix(state, f2)
        out = apply_partial(m4, breuer4, side="A")
        assert np.linalg.eigvalsh((out + out.conj().T) / 2)[0] >= -1e-9


def test_apply_partial_block_structure():
    # side="A" must transform each fast-factor block independently.
    rng = np.random.default_rng(5)
    blocks = [[random_psd(rng, 3) for _ in range(2)] for _ in range(2)]
    m = np.block(blocks)
    pmap = stormer_map()
    out = apply_partial(m, pmap, side="A", dims=(3, 2))
    for l in range(2):
        for lp in range(2):
            np.testing.assert_allclose(
                out[3 * l : 3 * l + 3, 3 * lp : 3 * lp + 3],
                pmap(blocks[l][lp]),
                atol=1e-13,
            )
