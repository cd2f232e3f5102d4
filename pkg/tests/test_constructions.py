import pytest

from omegatrans.constructions import (
    SstSf,
    compare_outputs,
    eliminate_lookaround,
    pipeline_output,
    run_model,
    run_output_sst_sf,
    twowst_to_sst_sf,
    useful_configs,
)
from omegatrans.fixtures import (
    alternating_copier_twowst,
    mirror_corpus,
    mirror_fot,
    mirror_lookahead_dma,
    mirror_sst,
    mirror_twowst,
    plain_copier_twowst,
)
from omegatrans.muller import Dma
from omegatrans.sst import (
    NotInDomain,
    Sst,
    is_1_bounded,
    is_aperiodic_sst,
    parse_rhs,
    run_output,
    sst_monoid,
)
from omegatrans.twowst import MARK, RIGHT, STAY, Dfa, TwoWst, run_2wst
from omegatrans.words import UPWord


def tie_break_machine():
    """One state, one letter, two lookahead guards that can both be claimed.

    From any position of a^ω both guard states u and v lead into the
    accepting u-loop, so the guard-free elimination must track both claims
    and pick the least matching configuration when updates collide.
    """
    ahead = Dma("uv", "a", "u", {("u", "a"): "u", ("v", "a"): "u"}, [{"u"}])
    update = {
        ("z", None, "a", "u"): {"X": parse_rhs("Xa", ("X",))},
        ("z", None, "a", "v"): {"X": parse_rhs("Xb", ("X",))},
    }
    delta = {key: "z" for key in update}
    return SstSf("z", "a", "z", delta, ("X",), update, {frozenset("z"): ("X",)},
                 lookahead=ahead)


def wrapped_mirror_sst():
    """The plain mirror transducer dressed up with a one-state lookbehind.

    The guards are vacuous, so eliminating them must give back a machine
    isomorphic to the original: singleton subset states, one output rule.
    """
    base = mirror_sst()
    behind = Dfa("v", "ab#", "v", {("v", al): "v" for al in "ab#"})
    delta = {}
    update = {}
    for (q, al), q2 in base.delta.items():
        delta[(q, "v", al, None)] = q2
        update[(q, "v", al, None)] = base.update[(q, al)]
    return SstSf(list(base.states), "ab#", 1, delta, base.variables, update,
                 dict(base.F), lookbehind=behind)


def test_mirror_conversion_states():
    s = twowst_to_sst_sf(mirror_twowst())
    assert s.initial == ("t", (("p", "q"),))
    assert set(s.states) == {("t", (("p", "q"),)), ("t", (("t", "t"), ("p", "q")))}
    assert s.variables == ("X_t", "X_p", "X_q", "O")
    assert all(v == "" for v in s.initial_values().values())


def test_rightward_loop_appends_to_the_output_variable():
    t = TwoWst("q", "a", "q", {("q", None, "a", None): ("q", "g", RIGHT)}, [{"q"}])
    s = twowst_to_sst_sf(t)
    key = (s.initial, None, "a", None)
    assert s.update[key]["O"] == (("var", "O"), ("lit", "g"))
    assert s.update[key]["X_q"] == ()


def test_stay_step_is_composed_into_one_crossing():
    delta = {
        ("q", None, "a", None): ("t", "g", STAY),
        ("t", None, "a", None): ("t", "h", RIGHT),
    }
    t = TwoWst("qt", "a", "q", delta, [{"t"}])
    s = twowst_to_sst_sf(t)
    key = (s.initial, None, "a", None)
    assert s.update[key]["O"] == (("var", "O"), ("lit", "g"), ("lit", "h"))


def test_conversion_agrees_with_two_way_runs():
    machines = [
        (mirror_twowst(), mirror_corpus()[:8]),
        (alternating_copier_twowst(), [UPWord("", "a")]),
        (plain_copier_twowst(), [UPWord("", "ab"), UPWord("ba", "b")]),
    ]
    for t, words in machines:
        s = twowst_to_sst_sf(t)
        for w in words:
            assert run_output_sst_sf(s, w, 60) == run_2wst(t, w, 60)


def test_conversion_accepts_whatever_the_guards_allow():
    """The converted machine owns no state-repetition condition of its own:
    every nonempty state set is accepting and rejection comes only from the
    guards.  A word with infinitely many separators slips through, still
    mirrored block by block, even though the two-way machine rejects it."""
    t = mirror_twowst()
    s = twowst_to_sst_sf(t)
    w = UPWord("", "a#")
    with pytest.raises(NotInDomain):
        run_2wst(t, w, 9)
    assert run_output_sst_sf(s, w, 9) == "aa#aa#aa#"
    elim = eliminate_lookaround(s)
    assert pipeline_output(elim, s, w, 9) == "aa#aa#aa#"


def test_head_that_never_leaves_a_cell_is_reported():
    t = TwoWst("q", "a", "q", {("q", None, "a", None): ("q", "x", STAY)}, [{"q"}])
    with pytest.raises(ValueError, match="recursion divergence"):
        twowst_to_sst_sf(t)


def test_head_stuck_at_the_end_marker_is_reported():
    delta = {
        ("q", None, MARK, None): ("q", "", STAY),
        ("q", None, "a", None): ("q", "", RIGHT),
    }
    t = TwoWst("q", "a", "q", delta, [{"q"}])
    with pytest.raises(ValueError, match="end marker"):
        twowst_to_sst_sf(t)


def test_guarded_end_marker_transition_is_rejected():
    delta = {("q", None, MARK, "y"): ("q", "", RIGHT)}
    for al in "ab#":
        delta[("q", None, al, None)] = ("q", al, RIGHT)
    t = TwoWst("q", "ab#", "q", delta, [{"q"}], lookahead=mirror_lookahead_dma())
    with pytest.raises(ValueError, match="must not carry guards"):
        twowst_to_sst_sf(t)


def test_conversion_state_cap():
    with pytest.raises(ValueError, match="state blowup"):
        twowst_to_sst_sf(mirror_twowst(), cap=1)


def test_guarded_transducer_validation():
    ahead = Dma("uv", "a", "u", {("u", "a"): "u", ("v", "a"): "u"}, [{"u"}])
    with pytest.raises(ValueError, match="is not copyless"):
        SstSf("z", "a", "z", {("z", None, "a", None): "z"}, ("X",),
              {("z", None, "a", None): {"X": parse_rhs("XX", ("X",))}},
              {frozenset("z"): ("X",)})
    with pytest.raises(ValueError, match="unknown lookahead guard"):
        SstSf("z", "a", "z", {("z", None, "a", "w"): "z"}, ("X",),
              {("z", None, "a", "w"): {"X": parse_rhs("Xa", ("X",))}},
              {frozenset("z"): ("X",)}, lookahead=ahead)
    with pytest.raises(ValueError, match="unknown letter"):
        SstSf("z", "a", "z", {("z", None, "b", None): "z"}, ("X",),
              {("z", None, "b", None): {"X": parse_rhs("Xa", ("X",))}},
              {frozenset("z"): ("X",)})


def test_overlapping_guards_are_an_error_at_run_time():
    ahead = Dma("uv", "a", "u", {("u", "a"): "u", ("v", "a"): "u"}, [{"u"}])
    update = {
        ("z", None, "a", None): {"X": parse_rhs("Xa", ("X",))},
        ("z", None, "a", "u"): {"X": parse_rhs("Xb", ("X",))},
    }
    delta = {key: "z" for key in update}
    amb = SstSf("z", "a", "z", delta, ("X",), update, {frozenset("z"): ("X",)},
                lookahead=ahead)
    with pytest.raises(ValueError, match="ambiguous guards"):
        run_output_sst_sf(amb, UPWord("", "a"), 5)


def test_word_with_no_firing_transition_is_rejected():
    stuck = SstSf("z", "ab", "z", {("z", None, "a", None): "z"}, ("X",),
                  {("z", None, "a", None): {"X": parse_rhs("Xa", ("X",))}},
                  {frozenset("z"): ("X",)})
    with pytest.raises(NotInDomain, match="stuck"):
        run_output_sst_sf(stuck, UPWord("", "ab"), 5)


def test_useful_configurations_of_the_mirror():
    s = twowst_to_sst_sf(mirror_twowst())
    useful = useful_configs(s)
    claims = sorted(sorted(c.claims) for c in useful)
    assert claims == [[], [], ["m"], ["m", "n"], ["m", "y"], ["n"], ["y"]]
    assert all(not {"y", "n"} <= set(c.claims) for c in useful)
    assert all(c.behind == () for c in useful)


def test_elimination_of_the_mirror_lookahead():
    s = twowst_to_sst_sf(mirror_twowst())
    elim = eliminate_lookaround(s)
    assert len(elim.states) == 5
    assert len(elim.variables) == 28
    assert sorted(elim.F.values()) == [("O@1",), ("O@5",), ("O@6",)]
    assert run_output(elim, UPWord("ab#", "a"), 20) == "baab#" + "a" * 15


def test_eliminated_mirror_is_aperiodic_and_1_bounded():
    s = twowst_to_sst_sf(mirror_twowst())
    elim = eliminate_lookaround(s)
    assert len(sst_monoid(elim).elements) == 6
    assert is_1_bounded(elim) == (True, None)
    assert is_aperiodic_sst(elim) == (True, None)


def test_pipeline_run_agrees_with_the_two_way_run():
    t = mirror_twowst()
    s = twowst_to_sst_sf(t)
    elim = eliminate_lookaround(s)
    for w in mirror_corpus()[:10]:
        expect = run_2wst(t, w, 60)
        assert pipeline_output(elim, s, w, 60) == expect
        assert run_output(elim, w, 60) == expect


def test_elimination_cap():
    s = twowst_to_sst_sf(mirror_twowst())
    with pytest.raises(ValueError, match="state blowup"):
        eliminate_lookaround(s, cap=2)


def test_alternating_copier_needs_the_guarded_runner():
    """The accepting loop hops between two subset states, so no single
    streaming output rule fits; the lockstep runner still works."""
    t = alternating_copier_twowst()
    s = twowst_to_sst_sf(t)
    elim = eliminate_lookaround(s)
    assert sorted(elim.F.values()) == []
    with pytest.raises(NotInDomain):
        run_output(elim, UPWord("", "a"), 12)
    assert pipeline_output(elim, s, UPWord("", "a"), 12) == "a" * 12


def test_vacuous_guards_eliminate_to_singleton_states():
    wrap = wrapped_mirror_sst()
    useful = useful_configs(wrap)
    assert sorted((c.state, c.behind, sorted(c.claims)) for c in useful) == [
        (1, ("v",), []),
        (2, ("v",), []),
    ]
    elim = eliminate_lookaround(wrap)
    assert len(elim.states) == 2
    assert all(len(subset) == 1 for subset in elim.states)
    assert sorted(elim.F.values()) == [("x@1", "z@1")]
    base = mirror_sst()
    for w in [UPWord("ab#", "a"), UPWord("", "ab"), UPWord("abbb#ba#", "ab")]:
        expect = run_output(base, w, 40)
        assert run_output_sst_sf(wrap, w, 40) == expect
        assert run_output(elim, w, 40) == expect
        assert pipeline_output(elim, wrap, w, 40) == expect


def test_colliding_updates_take_the_least_configuration():
    tb = tie_break_machine()
    elim = eliminate_lookaround(tb)
    assert elim.variables == ("X@0", "X@1", "X@2", "X@3")
    claimed_both = [
        S for S in elim.states
        if sorted(sorted(c.claims) for c in S) == [["u"], ["v"]]
    ]
    assert len(claimed_both) == 1
    subst = elim.update[(claimed_both[0], "a")]
    assert subst["X@1"] == (("var", "X@1"), ("lit", "a"))
    assert subst["X@2"] == (("var", "X@1"), ("lit", "b"))
    assert sorted(elim.F.values()) == [("X@1",)]
    assert run_output(elim, UPWord("", "a"), 6) == "aaaaaa"


def test_run_model_dispatches_on_the_machine_kind():
    w = UPWord("ab#", "a")
    expect = "baab#aaaaa"
    assert run_model(mirror_sst(), w, 10) == expect
    assert run_model(mirror_twowst(), w, 10) == expect
    assert run_model(twowst_to_sst_sf(mirror_twowst()), w, 10) == expect
    assert run_model(mirror_fot(), w, 10) == expect
    with pytest.raises(TypeError, match="no runner"):
        run_model("nope", w, 5)


def test_compare_outputs_equal_and_cross_model():
    corpus = [UPWord("ab#", "a"), UPWord("", "ab"), UPWord("abbb#ba#", "ab")]
    rows = compare_outputs(mirror_twowst(), mirror_twowst(), corpus, k=40)
    assert [(v, d) for _, v, d in rows] == [("equal", None)] * 3
    rows = compare_outputs(mirror_twowst(), mirror_fot(), corpus[2:], k=40)
    assert rows == [(UPWord("abbb#ba#", "ab"), "equal", None)]
    rows = compare_outputs(mirror_fot(), mirror_sst(), corpus[2:], k=40)
    assert rows == [(UPWord("abbb#ba#", "ab"), "equal", None)]


def test_compare_outputs_flags_divergence_and_rejections():
    base = mirror_sst()
    update = {key: dict(subst) for key, subst in base.update.items()}
    update[(2, "#")]["x"] = parse_rhs("xy!", base.variables)
    mutated = Sst(list(base.states), "ab#", 1, base.delta, base.variables,
                  update, dict(base.F))
    rows = compare_outputs(mirror_sst(), mutated, [UPWord("ab#", "a")], k=40)
    assert rows == [(UPWord("ab#", "a"), "mismatch", 5)]
    rows = compare_outputs(mirror_sst(), mutated, [UPWord("", "a#")], k=40)
    assert rows == [(UPWord("", "a#"), "both-reject", None)]
    silent = Sst(list(base.states), "ab#", 1, base.delta, base.variables,
                 base.update, {})
    rows = compare_outputs(mirror_sst(), silent, [UPWord("ab#", "a")], k=40)
    assert rows == [(UPWord("ab#", "a"), "mismatch", -1)]
