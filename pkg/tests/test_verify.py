import pytest

from cgkit.verify import CHECKS, broken_rules, format_table, verify_all


def test_bound_two_passes_everything():
    seen = []
    results = verify_all(2, random_count=0, progress=seen.append)
    assert [r.name for r in results] == list(CHECKS)
    assert seen == results
    for r in results:
        assert r.status in ("PASS", "WARN"), (r.name, r.counterexamples)
        assert r.n_cases > 0


def test_bound_three_passes_everything():
    for r in verify_all(3, random_count=0):
        assert r.passed, (r.name, r.counterexamples)


def test_broken_rule_is_caught():
    (res,) = verify_all(3, amp_rules=broken_rules(), checks=["amp-learner"])
    assert res.status == "FAIL"
    assert res.counterexamples
    # the collider is the smallest graph R1 is needed for
    assert any("A->C, B->C" in str(c) or "A->B, C->B" in str(c) for c in res.counterexamples)
    table = format_table([res])
    assert "amp-learner" in table and "FAIL" in table


def test_unknown_check_and_bound():
    with pytest.raises(ValueError):
        verify_all(2, checks=["no-such-check"])
    with pytest.raises(ValueError):
        verify_all(6)
