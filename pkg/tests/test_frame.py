"""
Tests for observation frames, observed tables and automorphisms.
"""

import itertools
from fractions import Fraction

import pytest

from signedprob import scenarios
from signedprob.errors import CapExceededError, FrameValidationError, NotObservableError
from signedprob.frame import (
    Ensemble,
    Frame,
    ObservedDistribution,
    Partition,
    apply_permutation,
    automorphism_violation,
    check_permutation,
    common_refinement,
    compose,
    enumerate_automorphisms,
    ensure_valid,
    generate_group,
    identity,
    inverse,
    is_automorphism,
    is_coobservable,
    is_group,
    is_normalized,
    is_observable,
    normalize_fat_outcomes,
    observed_prob,
    validate_frame,
    validate_observed,
)
from signedprob.scalar import ONE, ZERO, Scalar
from signedprob.space import SampleSpace

THIRD = Scalar(Fraction(1, 3))
HALF = Scalar(Fraction(1, 2))


def make_frame(labels, ensembles):
    space = SampleSpace(tuple(labels))
    return Frame(space, tuple(
        Ensemble(name, Partition(space, tuple(space.event(part) for part in parts)))
        for name, parts in ensembles))


def scenario_frames():
    return [scenarios.piponi(), scenarios.bell(), scenarios.hardy_hidden()]


def test_valid_scenario_frames():
    for bundle in scenario_frames() + [scenarios.hardy()]:
        assert validate_frame(bundle.frame).ok
        assert validate_observed(bundle.observed) == []


def test_partition_violations_are_reported():
    frame = make_frame("abc", [("overlap", [["a", "b"], ["b", "c"]]), ("short", [["a"], ["b"]])])
    report = validate_frame(frame)
    assert not report.ok
    assert "overlap" in report.first
    assert any("'short'" in v and "not covered" in v for v in report.violations)


def test_duplicate_names_and_partitions():
    frame = make_frame("ab", [("E", [["a"], ["b"]]), ("E", [["b"], ["a"]])])
    violations = validate_frame(frame).violations
    assert any("duplicate ensemble name" in v for v in violations)
    assert any("repeats the partition" in v for v in violations)
    with pytest.raises(FrameValidationError):
        ensure_valid(ObservedDistribution(frame, ((HALF, HALF), (HALF, HALF))))


def test_observable_and_coobservable(piponi):
    f = piponi.frame
    space = f.space
    assert is_observable(f, space.event(["00", "01"]))
    assert is_observable(f, space.full())
    assert not is_observable(f, space.event(["00"]))
    assert is_coobservable(f, [space.event(["00", "01"]), space.event(["10", "11"])])
    assert not is_coobservable(f, [space.event(["00", "01"]), space.event(["00", "10"])])
    assert is_coobservable(f, [])


def test_ensemble_algebras_are_closed():
    for bundle in scenario_frames():
        f = bundle.frame
        for ens in f.ensembles:
            events = [e for _, e in ens.partition.algebra()]
            assert len(events) == 2 ** len(ens.partition.parts)
            for e1, e2 in itertools.product(events, repeat=2):
                group = [e1 | e2, e1 & e2, ~e1]
                assert all(ens.partition.contains(e) for e in group)
                assert is_coobservable(f, [e1, e2] + group)


def test_common_refinement_of_scenarios_is_discrete():
    for bundle in scenario_frames():
        refinement = common_refinement(bundle.frame)
        assert all(len(part) == 1 for part in refinement.parts)
        assert is_normalized(bundle.frame)


def test_common_refinement_is_the_coarsest_refinement():
    frame = make_frame("abcdef", [("P", [["a", "b", "c"], ["d", "e", "f"]]),
                                  ("Q", [["a", "b"], ["c", "d"], ["e", "f"]])])
    refinement = common_refinement(frame)
    assert [part.labels for part in refinement.parts] == [("a", "b"), ("c",), ("d",), ("e", "f")]
    for ens in frame.ensembles:
        assert refinement.refines(ens.partition)
    # 같은 파트의 두 결과는 어떤 앙상블로도 구분되지 않음
    owners = [ens.partition.part_of() for ens in frame.ensembles]
    for part in refinement.parts:
        for i, j in itertools.combinations(part.members, 2):
            assert all(owner[i] == owner[j] for owner in owners)


def test_normalize_fat_outcomes_merges_labels():
    frame = make_frame("abcd", [("E", [["b", "a"], ["c", "d"]])])
    obs = ObservedDistribution(frame, ((THIRD, ONE - THIRD),))
    assert not is_normalized(frame)
    merged_frame, merged_obs = normalize_fat_outcomes(frame, obs)
    assert merged_frame.space.labels == ("a+b", "c+d")
    assert is_normalized(merged_frame)
    assert merged_obs.table == ((THIRD, ONE - THIRD),)
    same_frame, same_obs = normalize_fat_outcomes(merged_frame, merged_obs)
    assert same_frame is merged_frame and same_obs is merged_obs


def test_merged_label_collision_is_a_validation_error():
    frame = make_frame(["a", "b", "a+b"], [("E", [["a", "b"], ["a+b"]])])
    obs = ObservedDistribution(frame, ((HALF, HALF),))
    with pytest.raises(FrameValidationError) as info:
        normalize_fat_outcomes(frame, obs)
    assert info.value.violations == ["merged outcome label 'a+b' collides with an existing outcome label"]


def test_observed_sum_violation_names_the_ensemble():
    frame = make_frame("ab", [("left", [["a"], ["b"]])])
    obs = ObservedDistribution(frame, ((ONE, HALF),))
    problems = validate_observed(obs)
    assert problems == ["ensemble 'left': probabilities sum to 3/2, not 1"]


def test_negative_observed_probability():
    frame = make_frame("ab", [("E", [["a"], ["b"]])])
    obs = ObservedDistribution(frame, ((Scalar(2), Scalar(-1)),))
    assert any("negative probability" in p for p in validate_observed(obs))


def test_disagreeing_ensembles():
    frame = make_frame("abc", [("E1", [["a"], ["b"], ["c"]]), ("E2", [["a"], ["b", "c"]])])
    obs = ObservedDistribution(frame, ((THIRD, THIRD, THIRD), (HALF, HALF)))
    assert validate_observed(obs) == ["ensembles 'E1' and 'E2' disagree on {a}: 1/3 vs 1/2"]
    with pytest.raises(FrameValidationError) as info:
        ensure_valid(obs)
    assert info.value.violations == validate_observed(obs)


def test_table_shape_is_checked():
    frame = make_frame("ab", [("E", [["a"], ["b"]])])
    with pytest.raises(ValueError):
        ObservedDistribution(frame, ((ONE,),))


def test_observed_prob(piponi):
    space = piponi.frame.space
    assert observed_prob(piponi.observed, space.event(["10", "11"])) == ONE
    assert observed_prob(piponi.observed, space.event(["00", "11"])) == ZERO
    assert observed_prob(piponi.observed, space.full()) == ONE
    with pytest.raises(NotObservableError):
        observed_prob(piponi.observed, space.event(["00"]))


def test_permutation_helpers():
    p = (1, 2, 0)
    assert compose(p, inverse(p)) == identity(3)
    assert compose(p, p) == (2, 0, 1)
    with pytest.raises(ValueError):
        check_permutation((0, 0, 1), 3)
    with pytest.raises(ValueError):
        check_permutation((0, 1), 3)
    space = SampleSpace(("x", "y", "z"))
    assert apply_permutation(p, space.event(["x"])).labels == ("y",)


def test_piponi_swap_is_an_automorphism(piponi):
    swap = (0, 2, 1, 3)
    assert is_automorphism(piponi.frame, piponi.observed, swap)
    group = enumerate_automorphisms(piponi.frame, piponi.observed)
    assert swap in group
    assert is_group(group)


def test_violation_names_the_ensemble(piponi):
    reason = automorphism_violation(piponi.frame, piponi.observed, (3, 1, 2, 0))
    assert reason is not None
    assert reason.startswith("ensemble 'left'")


def test_bell_automorphisms_contain_the_letter_flip(bell):
    group = enumerate_automorphisms(bell.frame, bell.observed)
    flip = scenarios.bell_letter_flip()
    assert flip in group
    assert identity(8) in group
    assert is_group(group)
    assert all(is_automorphism(bell.frame, bell.observed, g) for g in group)


def test_automorphism_cap(hardy_hidden):
    with pytest.raises(CapExceededError):
        enumerate_automorphisms(hardy_hidden.frame, hardy_hidden.observed)


def test_generate_group():
    flip = scenarios.bell_letter_flip()
    group = generate_group([flip], 8)
    assert list(group) == [identity(8), flip]
    cycle = generate_group([(1, 2, 3, 0)], 4)
    assert len(cycle) == 4
    assert is_group(cycle)
    assert not is_group([(1, 0, 2)])
    with pytest.raises(CapExceededError):
        generate_group([(1, 2, 3, 0)], 4, max_order=3)
