import itertools

import numpy as np
import pytest

from ghz_atlas import golden, hilbert
from ghz_atlas.experiment import parse_words
from ghz_atlas.hilbert import (
    BELL_TERMS,
    NumericalError,
    achievable_vectors,
    basis_state,
    bell_analysis,
    bell_operator,
    classical_bell_max,
    ghz_state,
    is_ghz_form,
    joint_eigenspace,
    random_local_unitary,
    to_operator,
    verify_bsquared_identity,
    violated_subset,
)
from ghz_atlas.lhv import identity_subsets, operator_identity_subsets
from ghz_atlas.pauli import parse_string

# Exhaustive 2**12 scan, frozen after the oracle run.
CLASSICAL_BELL_MAX = 5


def overlap(a, b):
    return abs(np.vdot(a, b))


@pytest.mark.parametrize("word", ["xxxx", "yzxy", "zzzz", "yyy"])
def test_operator_is_hermitian_unitary_involution(word):
    op = to_operator(parse_string(word))
    eye = np.eye(op.shape[0])
    assert np.allclose(op, op.conj().T, atol=1e-12)
    assert np.allclose(op @ op, eye, atol=1e-12)


def test_operator_examples():
    z = to_operator(parse_string("zzzz"))
    assert np.allclose(z @ basis_state("0000"), basis_state("0000"))
    x = to_operator(parse_string("xxxx"))
    assert np.allclose(x @ ghz_state(4), -ghz_state(4))


def test_site_one_is_most_significant():
    op = to_operator(parse_string("xzzz"))
    assert np.allclose(op @ basis_state("0000"), basis_state("1000"))


def test_4a4_achievable():
    e = golden.labeled_forms()["4A.4"]
    vecs = achievable_vectors(e)
    assert len(vecs) == 16
    assert all(v.eigenspace_dim == 1 for v in vecs)
    assert all(v.values[0] * v.values[2] * v.values[3] * v.values[4] == -1 for v in vecs)
    assert (-1, 1, 1, 1, 1) in {v.values for v in vecs}


def test_three_commuting_with_triad_relation():
    # xxxx * yyyy = zzzz, so eps3 = eps1 eps2: four eigenspaces of dimension 4
    e = parse_words("xxxx,yyyy,zzzz")
    vecs = achievable_vectors(e)
    assert sorted(v.values for v in vecs) == sorted(
        [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    )
    assert all(v.eigenspace_dim == 4 for v in vecs)
    basis = joint_eigenspace(e, (1, 1, 1))
    assert len(basis) == 4


def test_mermin_three_qubit():
    vecs = achievable_vectors(parse_words("xxx,xyy,yxy,yyx"))
    assert len(vecs) == 8 and all(v.eigenspace_dim == 1 for v in vecs)


def test_joint_eigenspace_4a4():
    e = golden.labeled_forms()["4A.4"]
    (state,) = joint_eigenspace(e, (-1, 1, 1, 1, 1))
    assert overlap(state, ghz_state(4)) == pytest.approx(1, abs=1e-9)


def test_joint_eigenspace_inconsistent_is_empty():
    e = golden.labeled_forms()["4A.4"]
    assert joint_eigenspace(e, (1, 1, 1, 1, 1)) == []
    bad = violated_subset(e, (1, 1, 1, 1, 1))
    assert bad.indices == (0, 2, 3, 4) and bad.sign == -1


def test_joint_eigenspace_bad_input():
    e = golden.labeled_forms()["4A.4"]
    with pytest.raises(ValueError):
        joint_eigenspace(e, (1, 1))
    with pytest.raises(ValueError):
        joint_eigenspace(e, (1, 1, 1, 1, 0))


def test_residual_check_raises(monkeypatch):
    real_eigh = np.linalg.eigh

    def noisy_eigh(a):
        w, v = real_eigh(a)
        return w, v + 1e-6
    monkeypatch.setattr(hilbert.np.linalg, "eigh", noisy_eigh)
    e = golden.labeled_forms()["4A.4"]
    with pytest.raises(NumericalError):
        joint_eigenspace(e, (-1, 1, 1, 1, 1))


def test_dimension_sum_and_constraints(all_n4_entries):
    for entry in all_n4_entries:
        e = entry.canonical
        vecs = achievable_vectors(e)
        assert sum(v.eigenspace_dim for v in vecs) == 16
        relations = operator_identity_subsets(e)
        for v in vecs:
            for s in identity_subsets(e):
                assert np.prod([v.values[i] for i in s.indices]) == s.sign
        # the achievable set is exactly the set cut out by the operator relations
        allowed = {
            eps
            for eps in itertools.product((1, -1), repeat=len(e))
            if all(np.prod([eps[i] for i in s.indices]) == s.sign for s in relations)
        }
        assert {v.values for v in vecs} == allowed


def test_identity_subsets_alone_do_not_cut_out_triad_classes():
    """Sign constraints from the classical dependencies are weaker when a product has a triad."""
    e = parse_words("xxxx,yyyy,zzzz")
    assert identity_subsets(e) == []
    assert len(achievable_vectors(e)) == 4 < 2 ** len(e)


def test_nontrivial_eigenstates_are_ghz(all_n4_entries):
    for entry in all_n4_entries:
        if not entry.verdict.nontrivial:
            continue
        for v in achievable_vectors(entry.canonical):
            if v.eigenspace_dim == 1:
                (s,) = joint_eigenspace(entry.canonical, v.values)
                dec = is_ghz_form(s)
                assert dec is not None
                assert np.linalg.norm(dec.state() - s) < 1e-8


def test_ghz_decomposition_of_ghz():
    dec = is_ghz_form(ghz_state(4))
    assert dec is not None
    u = np.kron(np.kron(dec.u[0], dec.u[1]), np.kron(dec.u[2], dec.u[3]))
    v = np.kron(np.kron(dec.v[0], dec.v[1]), np.kron(dec.v[2], dec.v[3]))
    parts = {int(np.argmax(abs(u))), int(np.argmax(abs(v)))}
    assert parts == {0, 15}
    for a, b in zip(dec.u, dec.v):
        assert abs(np.vdot(a, b)) < 1e-12
    assert 0 <= dec.theta < 2 * np.pi and 0 <= dec.phi < 2 * np.pi


def test_product_state_rejected():
    assert is_ghz_form(basis_state("0000")) is None


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (0.6, 0.3), (0.2, -0.64)])
def test_mixture_of_two_ghz_pieces_rejected(a, b):
    psi = a * (basis_state("0000") - basis_state("1111")) + b * (basis_state("0100") - basis_state("1011"))
    psi = psi / np.linalg.norm(psi)
    assert is_ghz_form(psi) is None


def test_imaginary_relative_phase_gives_ghz():
    # with a real and b purely imaginary the state is locally a GHZ state
    psi = 0.5 * (basis_state("0000") - basis_state("1111")) + 0.5j * (basis_state("0100") - basis_state("1011"))
    dec = is_ghz_form(psi)
    assert dec is not None
    assert np.linalg.norm(dec.state() - psi) < 1e-8


def test_ghz_rejects_bad_input():
    with pytest.raises(ValueError):
        is_ghz_form(np.ones(8) / np.sqrt(8))
    with pytest.raises(ValueError):
        is_ghz_form(np.ones(16))


def test_local_unitary_invariance(rng):
    accepted = [ghz_state(4)]
    e = golden.labeled_forms()["5.2"]
    for v in achievable_vectors(e)[:4]:
        accepted.extend(joint_eigenspace(e, v.values))
    rejected = [basis_state("0110"), (basis_state("0000") + basis_state("0011")) / np.sqrt(2)]
    for _ in range(50):
        for s in accepted:
            assert is_ghz_form(random_local_unitary(4, rng) @ s, 1e-8) is not None
        for s in rejected:
            assert is_ghz_form(random_local_unitary(4, rng) @ s, 1e-8) is None


def test_bell_analysis():
    rep = bell_analysis()
    assert rep.quantum_max == pytest.approx(9, abs=1e-9)
    assert not rep.degenerate
    assert rep.ghz
    assert rep.ghz_overlap == pytest.approx(1, abs=1e-9)
    assert rep.classical_max == CLASSICAL_BELL_MAX
    assert rep.discrepancy


def test_bell_terms_and_expectation():
    assert len(BELL_TERMS) == 9
    g = ghz_state(4)
    assert np.vdot(g, bell_operator() @ g).real == pytest.approx(9, abs=1e-12)


def test_classical_bell_max_oracle():
    """Independent scan: values of the twelve local observables directly."""
    best = -100
    for bits in itertools.product((1, -1), repeat=12):
        val = lambda j, ch: bits[3 * j + "xyz".index(ch)]
        total = sum(c * np.prod([val(j, ch) for j, ch in enumerate(w)]) for c, w in BELL_TERMS)
        best = max(best, total)
    assert best == classical_bell_max() == CLASSICAL_BELL_MAX


def test_bsquared_identity_axes():
    assert verify_bsquared_identity(1e-12)


def _random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def test_bsquared_identity_rotated_triads(rng):
    for _ in range(10):
        assert verify_bsquared_identity(1e-12, _random_rotation(rng).T)
        per_site = np.stack([_random_rotation(rng).T for _ in range(4)])
        assert verify_bsquared_identity(1e-12, per_site)


def test_bsquared_identity_broken_triad():
    t = np.eye(3)
    t[2] = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)  # A'' not orthogonal to A
    assert not verify_bsquared_identity(1e-12, t)
