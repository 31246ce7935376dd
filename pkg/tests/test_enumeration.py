import itertools

import pytest

from dillmaps.conjugation import reduce_to_representative, trajectory
from dillmaps.dill import (
    BlockRule,
    canonicalize,
    compose,
    identity_rule,
    is_image_admissible,
    shift_rule,
    symbol_rule,
)
from dillmaps.enumeration import (
    build_example_family,
    canonical_radius,
    dedupe_up_to_shift,
    enumerate_block_maps,
    period_class,
)
from dillmaps.errors import BudgetExceeded
from dillmaps.recognizer import build_recognizer
from dillmaps.substitution import factor_language, is_uniform


def brute_force(tau, rho, radius, verify_len):
    """Every total assignment of target letters, filtered by the admissibility predicate."""
    windows = sorted(factor_language(tau).words(radius + 1))
    out = []
    for letters in itertools.product(range(len(rho.alphabet)), repeat=len(windows)):
        rule = BlockRule(tau, rho, radius, dict(zip(windows, letters)))
        if is_image_admissible(rule.as_dill(), verify_len):
            out.append(rule)
    return out


def found_rules(result):
    return {rule for rule, _, _ in result.members}


@pytest.mark.parametrize("name", ["tm", "fib"])
@pytest.mark.parametrize("radius", [0, 1])
def test_search_matches_brute_force(request, name, radius):
    s = request.getfixturevalue(name)
    verify_len = 40
    result = enumerate_block_maps(s, s, radius, verify_len=verify_len)
    assert found_rules(result) == set(brute_force(s, s, radius, verify_len))


def test_thue_morse_classes(tm):
    result = enumerate_block_maps(tm, tm, 2)
    assert len(result) == 2
    flip = symbol_rule(tm, tm, {0: 1, 1: 0})
    assert set(result.representatives) == {identity_rule(tm), flip}
    # at radius 2 each class holds the rule and its shifts by one and two
    assert [result.class_size(c) for c in range(2)] == [3, 3]
    assert result.report().splitlines()[-1] == f"classes=2 radius=2 verified_to={result.verify_len}"


def test_fibonacci_and_tribonacci_single_class(fib, tri):
    for s, r in ((fib, 3), (tri, 2)):
        result = enumerate_block_maps(s, s, r)
        assert len(result) == 1
        assert result.representatives[0] == identity_rule(s)
        assert result.class_size(0) == r + 1


def test_members_relate_to_representative_by_shift(tm):
    result = enumerate_block_maps(tm, tm, 2)
    for rule, c, k in result.members:
        rep = result.representatives[c]
        lhs = canonicalize(rule.as_dill())
        rhs = canonicalize(compose(shift_rule(tm, k).as_dill(), rep.as_dill())) if k else rep.as_dill()
        assert lhs == rhs


def test_raising_verify_len_never_adds_rules(tm, fib):
    for s in (tm, fib):
        loose = found_rules(enumerate_block_maps(s, s, 1, verify_len=2))
        tight = found_rules(enumerate_block_maps(s, s, 1, verify_len=40))
        assert tight <= loose
    # with a single window of context the constant map still looks admissible on Thue-Morse
    const = BlockRule(tm, tm, 0, {bytes([0]): 0, bytes([1]): 0})
    assert is_image_admissible(const.as_dill(), 2)
    assert not is_image_admissible(const.as_dill(), 3)


def test_representatives_closed_under_composition(tm):
    result = enumerate_block_maps(tm, tm, 2)
    doubled = enumerate_block_maps(tm, tm, 4)
    for f, g in itertools.product(result.representatives, repeat=2):
        h = canonicalize(compose(f.as_dill(), g.as_dill())).as_block_rule()
        assert any(len(dedupe_up_to_shift([h, rep])) == 1 for rep in doubled.representatives)


def test_found_rules_reduce_through_conjugation(tm, fib):
    for s in (tm, fib):
        result = enumerate_block_maps(s, s, 2)
        for rule, _, _ in result.members:
            t = trajectory(rule, s, s, max_steps=20, horizon=256)
            assert t.cycle is not None
            reduce_to_representative(t)


def test_dedupe_examples(tm):
    assert len(dedupe_up_to_shift([])) == 0
    assert len(dedupe_up_to_shift([shift_rule(tm, 1), shift_rule(tm, 2)])) == 1
    flip = symbol_rule(tm, tm, {0: 1, 1: 0})
    assert len(dedupe_up_to_shift([identity_rule(tm), flip])) == 2


def test_node_budget(tm):
    with pytest.raises(BudgetExceeded) as err:
        enumerate_block_maps(tm, tm, 3, node_budget=5)
    assert isinstance(err.value.partial, list)


def test_period_classes(tm):
    rec = build_recognizer(tm)
    flip = symbol_rule(tm, tm, {0: 1, 1: 0})
    assert period_class(identity_rule(tm), tm, rec) == 0
    assert period_class(shift_rule(tm, 1), tm, rec) == 1
    assert period_class(flip, tm, rec) == 0
    assert period_class(shift_rule(tm, 3), tm, rec) == 1


def test_family_rules():
    s = build_example_family(2, 4)
    fmt = s.alphabet.format
    assert fmt(s.images[s.alphabet.index("b0")]) == "b0 c c c"
    assert fmt(s.images[s.alphabet.index("a0")]) == "b1 a0 a0 a0"
    assert s.images[s.alphabet.index("c")] == s.images[s.alphabet.index("a0")]
    assert is_uniform(s)
    t = build_example_family(2, 4, "nonuniform")
    assert t.alphabet.format(t.images[t.alphabet.index("b0")]) == "b0 a0 a0 a0 a0"
    assert not is_uniform(t)
    with pytest.raises(ValueError):
        build_example_family(1, 3)
    with pytest.raises(ValueError):
        build_example_family(0, 4)


def test_family_two_letters_has_wide_endomorphism():
    s = build_example_family(2, 4)
    result = enumerate_block_maps(s, s, 3)
    radii = sorted(result.min_radius(c) for c in range(len(result)))
    assert radii[0] == 0
    assert len(result) >= 2 and all(r >= 3 for r in radii[1:])
    for c in range(1, len(result)):
        assert canonical_radius(result.representatives[c]) == result.min_radius(c)
