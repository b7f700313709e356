import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghz_atlas.hilbert import commutator_norm, general_operator, to_operator
from ghz_atlas.pauli import (
    MINUS_ONE,
    ONE,
    Axis,
    GeneralObservable,
    LemmaVerdict,
    PauliString,
    Phase,
    all_strings,
    commutes,
    commutes_general,
    is_identity,
    lemma_verdict,
    orthogonal_sites,
    parse_string,
    subset_product,
    word_product,
)

words4 = st.text(alphabet="xyz", min_size=4, max_size=4)


def P(w):
    return parse_string(w)


@pytest.mark.parametrize(
    "text, axes",
    [
        ("xxxx", (Axis.X,) * 4),
        ("zzzy", (Axis.Z, Axis.Z, Axis.Z, Axis.Y)),
        ("xy", (Axis.X, Axis.Y)),
    ],
)
def test_parse_string(text, axes):
    p = parse_string(text)
    assert p.axes == axes
    assert str(p) == text


def test_parse_string_case_insensitive():
    assert parse_string("XyZ") == parse_string("xyz")


@pytest.mark.parametrize("bad", ["", "xxq", "x", "xx yy", "x1"])
def test_parse_string_rejects(bad):
    with pytest.raises(ValueError):
        parse_string(bad)


def test_parse_string_declared_length():
    assert parse_string("xyz", n=3).n == 3
    with pytest.raises(ValueError, match="expected 4"):
        parse_string("xyz", n=4)


def test_codes_follow_lexicographic_order():
    words = all_strings(3)
    assert [p.code for p in words] == list(range(27))
    assert [str(p) for p in words] == sorted(str(p) for p in words)
    for p in words:
        assert PauliString.from_code(p.code, 3) == p


@pytest.mark.parametrize(
    "p, q, expected",
    [("xxxx", "yyxx", True), ("xxxx", "xxxx", True), ("xxxx", "yxxx", False), ("xyzx", "yzxy", True)],
)
def test_commutes_examples(p, q, expected):
    assert commutes(P(p), P(q)) is expected
    assert commutes(P(q), P(p)) is expected


def test_commutes_length_mismatch():
    with pytest.raises(ValueError):
        commutes(P("xxx"), P("xxxx"))


def test_commutation_matches_matrices_exhaustively_n3():
    for p, q in itertools.product(all_strings(3), repeat=2):
        assert (commutator_norm(to_operator(p), to_operator(q)) < 1e-12) == commutes(p, q)


def test_single_site_product_table():
    # sigma_a sigma_b = delta_ab + i eps_abc sigma_c, so xy = i z, yx = -i z, ...
    phase, res = word_product([P("xx"), P("yx")])
    assert res == (Axis.Z, None) and phase == Phase(1)
    phase, res = word_product([P("yx"), P("xx")])
    assert res == (Axis.Z, None) and phase == Phase(3)
    phase, res = word_product([P("zx"), P("xx")])
    assert res == (Axis.Y, None) and phase == Phase(1)


@given(st.lists(words4, min_size=1, max_size=5))
def test_word_product_matches_matrices(ws):
    strings = [P(w) for w in ws]
    phase, res = word_product(strings)
    mat = np.eye(16, dtype=complex)
    for p in strings:
        mat = mat @ to_operator(p)
    expected = complex(phase) * _residual_matrix(res)
    assert np.allclose(mat, expected, atol=1e-12)


def _residual_matrix(res):
    from functools import reduce

    from ghz_atlas.hilbert import PAULI

    mats = [np.eye(2) if a is None else PAULI[int(a)] for a in res]
    return reduce(np.kron, mats)


@pytest.mark.parametrize(
    "words, phase, identity",
    [
        ("xxxx,yxyx,xxyy,yxxy", MINUS_ONE, True),
        ("xxxx,yyxx,xxyy,yyyy", ONE, True),
    ],
)
def test_subset_product_examples(words, phase, identity):
    strings = [P(w) for w in words.split(",")]
    ph, res = subset_product(strings, range(len(strings)))
    assert ph == phase
    assert is_identity(res) is identity


def test_subset_product_singleton():
    ph, res = subset_product([P("xxxx")], [0])
    assert ph == ONE
    assert res == (Axis.X,) * 4


def test_subset_product_rejects_noncommuting():
    with pytest.raises(ValueError):
        subset_product([P("xxxx"), P("yxxx")], [0, 1])


def test_subset_product_empty():
    with pytest.raises(ValueError):
        subset_product([P("xxxx")], [])


def _commuting_words(rng, k):
    words = all_strings(4)
    chosen = [words[rng.integers(81)]]
    while len(chosen) < k:
        cand = words[rng.integers(81)]
        if all(commutes(cand, c) for c in chosen):
            chosen.append(cand)
    return chosen


def test_subset_product_order_independent(rng):
    for _ in range(200):
        strings = _commuting_words(rng, int(rng.integers(2, 7)))
        perm = rng.permutation(len(strings))
        shuffled = [strings[i] for i in perm]
        assert subset_product(strings, range(len(strings))) == subset_product(shuffled, range(len(strings)))


@given(words4)
def test_square_is_identity(w):
    ph, res = word_product([P(w), P(w)])
    assert ph == ONE and is_identity(res)


@given(words4, words4)
def test_commutes_iff_products_agree(a, b):
    p, q = P(a), P(b)
    pq = word_product([p, q])
    qp = word_product([q, p])
    assert (pq == qp) == commutes(p, q)
    assert pq[1] == qp[1]


def test_phase_group():
    i = Phase(1)
    assert i * i == MINUS_ONE
    assert i**4 == ONE
    assert complex(Phase(3)) == -1j
    assert [str(Phase(k)) for k in range(4)] == ["+1", "+i", "-1", "-i"]
    with pytest.raises(ValueError):
        i.sign


# ---- general observables


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def test_general_examples():
    par = GeneralObservable(np.array([_unit([1, 2, 3]), _unit([0, 1, 0]), _unit([1, 0, 0])]))
    assert commutes_general(par, par)
    a = np.array([[1.0, 0, 0], [0, 1, 0], [0, 0, 1]])
    b = a.copy()
    b[0] = [0, 1, 0]
    assert lemma_verdict(GeneralObservable(a), GeneralObservable(b)) is LemmaVerdict.ODD_ORTHOGONAL
    c = a.copy()
    c[0] = _unit([1, 1, 0])
    assert lemma_verdict(GeneralObservable(a), GeneralObservable(c)) is LemmaVerdict.DICHOTOMY_VIOLATED
    assert not commutes_general(GeneralObservable(a), GeneralObservable(c))
    assert commutator_norm(general_operator(GeneralObservable(a)), general_operator(GeneralObservable(c))) > 1e-3


def test_general_rejects_non_unit():
    with pytest.raises(ValueError):
        GeneralObservable(np.array([[1.0, 1.0, 0.0], [1.0, 0.0, 0.0]]))


def _random_lemma_pair(rng, n=3):
    """Pairs whose sites are parallel, antiparallel, orthogonal or (rarely) generic."""
    o1, o2 = [], []
    for _ in range(n):
        a = _unit(rng.normal(size=3))
        kind = rng.integers(4)
        if kind == 0:
            b = a * rng.choice([-1, 1])
        elif kind in (1, 2):
            b = _unit(np.cross(a, rng.normal(size=3)))
        else:
            b = _unit(rng.normal(size=3))
        o1.append(a)
        o2.append(b)
    return GeneralObservable(np.array(o1)), GeneralObservable(np.array(o2))


def test_lemma_agrees_with_matrix_commutator(rng):
    counts = {v: 0 for v in LemmaVerdict}
    for _ in range(1000):
        o1, o2 = _random_lemma_pair(rng)
        verdict = lemma_verdict(o1, o2, tol=1e-10)
        counts[verdict] += 1
        norm = commutator_norm(general_operator(o1), general_operator(o2))
        assert (norm < 1e-10) == (verdict is LemmaVerdict.COMMUTING)
        assert commutes_general(o1, o2, 1e-10) == (norm < 1e-10)
    assert all(counts.values())


def test_orthogonal_sites_counts():
    assert orthogonal_sites(P("xyzx"), P("xzzy")) == 2
