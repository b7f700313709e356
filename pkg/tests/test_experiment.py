import itertools

import pytest

from ghz_atlas.experiment import (
    Experiment,
    InvalidExperiment,
    c_invariant,
    invariants,
    parse_experiment,
    parse_words,
    r_by_element,
    r_invariant,
    triad_profile,
    validate,
)
from ghz_atlas.pauli import orthogonal_sites


def test_valid_example():
    e = parse_experiment("xxxx,yyxx,xxyy")
    assert isinstance(e, Experiment)
    assert len(e) == 3 and e.n == 4


def test_output_is_sorted_and_order_insensitive():
    a = parse_experiment("yyxx,xxyy,xxxx")
    b = parse_experiment("xxxx,yyxx,xxyy")
    assert a == b
    assert str(a) == "xxxx,xxyy,yyxx"


def test_noncommuting_reports_pair():
    with pytest.raises(InvalidExperiment) as info:
        parse_experiment("xxxx,yxxx")
    assert info.value.rule == "non-commuting"
    p, q, d = info.value.witnesses
    assert {str(p), str(q)} == {"xxxx", "yxxx"} and d == 1


def test_single_axis_site_reports_site():
    with pytest.raises(InvalidExperiment) as info:
        parse_experiment("xxxx,yyxx")
    assert info.value.rule == "single-axis-site"
    assert info.value.witnesses[0] == 3
    assert "site 3" in str(info.value)


def test_size_two_is_allowed():
    assert len(parse_experiment("xxxx,yyyy")) == 2


def test_rejects_singleton_and_mixed_lengths():
    with pytest.raises(InvalidExperiment):
        validate(parse_words("xxxx"))
    with pytest.raises(ValueError):
        parse_words("xxxx,yyy")


@pytest.mark.parametrize(
    "words, c, r",
    [
        ("xxxx,yyxx,xxyy", 0, (2, 1, 1)),
        ("xxxx,yyyy,zzzz", 4, (0, 0, 0)),
        ("xxxx,yyxx,yxyx,zzzy", 3, (2, 2, 2, 0)),
        ("xxxx,yyxx,yxyx,yxxy", 0, (3, 3, 3, 3)),
    ],
)
def test_c_and_r_examples(words, c, r):
    e = parse_experiment(words)
    assert c_invariant(e) == c
    assert r_invariant(e) == r


def test_r_by_element_keeps_order():
    strings = parse_words("xxyy,xxxx,yyxx")
    assert r_by_element(strings) == (1, 2, 1)


@pytest.mark.parametrize(
    "words, triads",
    [("xxxx,yyzz,zzyy", (4,)), ("xxxx,zzzz,yyzz", (2,)), ("xxxx,yyxx,zzxx", (2,))],
)
def test_triad_counts_of_triples(words, triads):
    assert triad_profile(parse_words(words)) == triads


def test_triad_profile_short():
    assert triad_profile(parse_experiment("xxxx,yyyy")) == ()


def test_triad_profile_is_sorted_over_triples():
    e = parse_experiment("xxxx,yyxx,xxyy,zzyy,yyzz")
    prof = triad_profile(e)
    assert len(prof) == 10
    assert list(prof) == sorted(prof, reverse=True)


def test_r_counts_only_distance_two():
    e = parse_experiment("xxxx,yyxx,yxyx,xxyy,yxxy")
    for p, r in zip(e, r_by_element(e)):
        dist = [orthogonal_sites(p, q) for q in e if q != p]
        assert 0 not in dist
        assert all(d % 2 == 0 for d in dist)
        assert r == dist.count(2)


def test_subsets_with_two_axes_per_site_are_experiments():
    e = parse_experiment("xxxx,yyxx,yxyx,xxyy,yxxy,xyyx")
    for k in range(2, len(e)):
        for sub in itertools.combinations(e, k):
            try:
                validate(sub)
            except InvalidExperiment as exc:
                assert exc.rule == "single-axis-site"


def test_invariant_record_key():
    rec = invariants(parse_experiment("xxxx,yyxx,xxyy"))
    assert rec.key == (0, (2, 1, 1), (0,))
