import itertools

import pytest
from hypothesis import given, settings, strategies as st

from omegatrans.words import UPWord
from omegatrans import fologic as fo


# Reference evaluator: brute-force over explicit assignments on a finite
# universe, structured around satisfying-assignment sets instead of recursion
# on a single assignment.  Used only as an oracle.
def naive_eval(f, letters, assignment):
    n = len(letters)

    def sat(f, env):
        if isinstance(f, fo.Eq):
            return env[f.x] == env[f.y]
        if isinstance(f, fo.Leq):
            return env[f.x] <= env[f.y]
        if isinstance(f, fo.Less):
            return env[f.x] < env[f.y]
        if isinstance(f, fo.Label):
            return letters[env[f.x] - 1] == f.letter
        if isinstance(f, fo.Not):
            return not sat(f.body, env)
        if isinstance(f, fo.And):
            return sat(f.left, env) and sat(f.right, env)
        if isinstance(f, fo.Or):
            return sat(f.left, env) or sat(f.right, env)
        if isinstance(f, fo.Implies):
            return sat(f.right, env) if sat(f.left, env) else True
        if isinstance(f, (fo.Exists, fo.Forall)):
            hits = []
            for i in range(1, n + 1):
                env2 = dict(env)
                env2[f.var] = i
                hits.append(sat(f.body, env2))
            return any(hits) if isinstance(f, fo.Exists) else all(hits)
        raise TypeError(f)

    return sat(f, assignment)


def test_parse_basics():
    f = fo.parse_formula("E x. (A y. (x <= y -> !L#(y)))")
    assert f == fo.Exists(
        "x",
        fo.Forall("y", fo.Implies(fo.Leq("x", "y"), fo.Not(fo.Label("#", "y")))),
    )
    assert fo.parse_formula("x < y & La(x) | x = y") == fo.Or(
        fo.And(fo.Less("x", "y"), fo.Label("a", "x")), fo.Eq("x", "y")
    )


def test_parse_precedence_and_quantifier_scope():
    # -> binds loosest and right-associative; quantifier runs to the end
    f = fo.parse_formula("A x. La(x) -> Lb(x) -> x = x")
    assert isinstance(f, fo.Forall)
    assert isinstance(f.body, fo.Implies)
    assert isinstance(f.body.right, fo.Implies)


def test_parse_errors():
    for bad in ["", "x <", "E x (x = x)", "La(x", "x = y extra"]:
        with pytest.raises(ValueError):
            fo.parse_formula(bad)


def test_quantifier_depth():
    assert fo.quantifier_depth(fo.parse_formula("x = y")) == 0
    assert fo.quantifier_depth(fo.parse_formula("E x. A y. x <= y")) == 2
    # pinned: the well-formed string axioms have depth 4
    assert fo.quantifier_depth(fo.is_string()) == 4


def test_free_variables():
    f = fo.parse_formula("E x. (x < y & La(z))")
    assert fo.free_variables(f) == {"y", "z"}


def test_evaluate_requires_assignment():
    with pytest.raises(ValueError):
        fo.evaluate(fo.parse_formula("La(x)"), UPWord("", "a"))


def test_label_and_order_atoms():
    w = UPWord("ab#", "a")
    assert fo.evaluate(fo.parse_formula("L#(x)"), w, {"x": 3})
    assert not fo.evaluate(fo.parse_formula("L#(x)"), w, {"x": 4})
    assert fo.evaluate(fo.parse_formula("x < y"), w, {"x": 2, "y": 9})


def test_shorthands_on_separator_word():
    w = UPWord("ab#", "a")  # single # at position 3
    reach = fo.reaches_letter("x", "#")
    assert fo.evaluate(reach, w, {"x": 1})
    assert fo.evaluate(reach, w, {"x": 2})
    assert not fo.evaluate(reach, w, {"x": 3})
    assert not fo.evaluate(reach, w, {"x": 7})
    btw = fo.between_letter("x", "y", "#")
    assert fo.evaluate(btw, w, {"x": 5, "y": 1})  # orientation-free
    assert fo.evaluate(btw, w, {"x": 1, "y": 5})
    assert not fo.evaluate(btw, w, {"x": 4, "y": 9})
    first = fo.is_first("x")
    assert fo.evaluate(first, w, {"x": 1})
    assert not fo.evaluate(first, w, {"x": 2})


def test_domain_sentence_finitely_many_separators():
    dom = fo.parse_formula("E x. (A y. (x < y -> !L#(y)))")
    assert fo.evaluate(dom, UPWord("ab#", "a"))
    assert fo.evaluate(dom, UPWord("", "b"))


def test_edge_witness_artifact_is_stable():
    # Bounded quantification has a known blind spot: an existential witness at
    # the horizon's edge makes an inner universal vacuous, and the artifact
    # scales with the horizon, so stability checking cannot flag it.  On a word
    # with infinitely many #s the finitely-many-# sentence therefore still
    # holds.  Pinned here so the limitation stays visible.
    dom = fo.parse_formula("E x. (A y. (x < y -> !L#(y)))")
    assert fo.evaluate(dom, UPWord("", "ab#"))


def test_unstable_detection():
    # "the letter at the largest visible position is a" flips with the horizon
    f = fo.parse_formula("E x. ((A y. y <= x) & La(x))")
    cfg = fo.EvalConfig(fixed_horizon=1)
    with pytest.raises(fo.Unstable):
        fo.evaluate(f, UPWord("", "ab"), config=cfg)
    # on a constant word the same formula is stable
    assert fo.evaluate(f, UPWord("", "a"), config=cfg)


def test_horizon_formula():
    w = UPWord("ab#", "ba")
    f = fo.parse_formula("E x. A y. x <= y")
    # |prefix| + |period| * base_bound * (depth+1) = 3 + 2*4*3
    assert fo.horizon_for(f, w) == 27
    assert fo.horizon_for(f, w, fo.EvalConfig(fixed_horizon=9)) == 9


variables = st.sampled_from(["x", "y", "z"])


def formulas(depth):
    atoms = st.one_of(
        st.builds(fo.Eq, variables, variables),
        st.builds(fo.Leq, variables, variables),
        st.builds(fo.Less, variables, variables),
        st.builds(fo.Label, st.sampled_from("ab#"), variables),
    )
    if depth == 0:
        return atoms
    sub = formulas(depth - 1)
    return st.one_of(
        atoms,
        st.builds(fo.Not, sub),
        st.builds(fo.And, sub, sub),
        st.builds(fo.Or, sub, sub),
        st.builds(fo.Implies, sub, sub),
        st.builds(fo.Exists, variables, sub),
        st.builds(fo.Forall, variables, sub),
    )


@given(formulas(3))
def test_format_parse_roundtrip(f):
    assert fo.parse_formula(fo.format_formula(f)) == f


@settings(max_examples=200)
@given(
    formulas(2),
    st.text(alphabet="ab#", min_size=1, max_size=5),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=5),
)
def test_bounded_eval_matches_naive(f, letters, px, py, pz):
    n = len(letters)
    env = {"x": min(px, n), "y": min(py, n), "z": min(pz, n)}
    w = UPWord(letters, letters)  # any word agreeing on the first n letters
    assert fo.evaluate_at(f, w, env, n) == naive_eval(f, letters, env)
