"""Exhaustive-search oracles: pinned ground truth and cross-route checks.

Every frozen constant below was computed by a second, independent route
(hand derivation or the scalar evaluators) before being pinned.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from termflow.depgraph import (DependencyGraph, GuessingStrategy,
                               add_source_loops, dependency_graph)
from termflow.errors import (BudgetError, PreconditionError, ValidationError)
from termflow.normalize import diversify, embed_dispersion, pipeline
from termflow.oracle import (BlockEncoding, SearchBudget, brute_dispersion,
                             brute_guessing, brute_max_solutions,
                             check_counts_preserved, check_embedding,
                             check_perfect_fixed,
                             check_solutions_equal_winning, count_solutions,
                             count_winning, enumerate_interpretations,
                             image_of, interpretation_at,
                             interpretation_count, lift_interpretation,
                             sandwich_check, table_space)
from termflow.terms import (App, DispersionSpec, Equation, Interpretation,
                            Signature, TermSystem, Var)
from conftest import load


# ---- enumeration ------------------------------------------------------------

def test_spaces():
    assert table_space(2, 2) == 16
    assert table_space(3, 2) == 19683
    assert table_space(2, 0) == 2  # a constant's table has one entry
    sig = Signature(symbols=(("f", 1), ("g", 1)))
    assert interpretation_count(sig, 2) == 16
    assert interpretation_count(Signature(symbols=()), 2) == 1


def test_enumeration_is_canonical_big_endian():
    sig = Signature(symbols=(("f", 1), ("g", 1)))
    interps = list(enumerate_interpretations(sig, 2))
    assert len(interps) == 16
    # last symbol varies fastest; within one table, entry 0 is most significant
    assert interps[0].tables == {"f": (0, 0), "g": (0, 0)}
    assert interps[1].tables == {"f": (0, 0), "g": (0, 1)}
    assert interps[2].tables == {"f": (0, 0), "g": (1, 0)}
    assert interps[4].tables == {"f": (0, 1), "g": (0, 0)}
    assert interps[15].tables == {"f": (1, 1), "g": (1, 1)}
    for idx in (0, 5, 11, 15):
        assert interpretation_at(sig, 2, idx) == interps[idx]


def test_enumeration_slicing():
    sig = Signature(symbols=(("f", 2),))
    full = list(enumerate_interpretations(sig, 2))
    part = list(enumerate_interpretations(sig, 2, start=3, stop=7))
    assert part == full[3:7]


def test_budget_refusal_is_exact_and_total():
    diamond = load("diamond.disp")
    with pytest.raises(BudgetError) as exc:
        brute_dispersion(diamond, 4)
    assert exc.value.interpretations == 4294967296
    assert exc.value.evaluations == 1099511627776
    with pytest.raises(BudgetError):
        list(enumerate_interpretations(diamond.signature, 4))
    # a tighter budget refuses even the tiny case, with exact numbers
    with pytest.raises(BudgetError) as exc:
        brute_dispersion(diamond, 2, SearchBudget(max_evaluations=100))
    assert exc.value.evaluations == 256


def test_index_width_guard():
    sig = Signature(symbols=(("f", 32),))
    system = TermSystem(variables=("x",), signature=sig,
                        equations=(Equation(App("f", (Var("x"),) * 32),
                                            Var("x")),))
    with pytest.raises(BudgetError):
        brute_max_solutions(system, 4)


def test_alphabet_preconditions():
    with pytest.raises(PreconditionError):
        brute_dispersion(load("diamond.disp"), 0)
    assert brute_dispersion(load("diamond.disp"), 1).value == 1
    with pytest.raises(ValidationError):
        SearchBudget(max_evaluations=0)


# ---- scalar evaluators -------------------------------------------------------

def test_count_solutions_scalar():
    system = load("fx.inst")
    ident = Interpretation(n=2, tables={"f": (0, 1)})
    assert count_solutions(system, ident) == 2


def test_image_of_scalar():
    witness = Interpretation(n=2, tables={"f": (0, 0, 0, 1)})
    assert len(image_of(load("diamond.disp"), witness)) == 10


def test_count_winning_scalar():
    copy = GuessingStrategy(n=2, tables={"a": (0, 1), "b": (0, 1),
                                         "c": (0, 1)})
    assert count_winning(load("cycle3.graph"), copy) == 2


# ---- dispersion -------------------------------------------------------------

def test_diamond_dispersion_n2():
    res = brute_dispersion(load("diamond.disp"), 2)
    assert res.value == 10
    assert res.witness.tables["f"] == (0, 0, 0, 1)
    assert res.evaluations == 256
    assert abs(res.rate - math.log2(10)) < 1e-12
    assert len(image_of(load("diamond.disp"), res.witness)) == 10


def test_diamond_dispersion_n3():
    res = brute_dispersion(load("diamond.disp"), 3)
    assert res.value == 53
    assert len(image_of(load("diamond.disp"), res.witness)) == 53


@pytest.mark.parametrize("name,n,value", [
    ("projections.disp", 2, 4),
    ("constants.disp", 2, 1),
    ("fg.disp", 2, 2),
    ("fg.disp", 3, 3),
    ("single_var.disp", 2, 2),
    ("single_fn.disp", 2, 2),
    ("single_fn.disp", 3, 3),
    ("shared_subterm.disp", 2, 2),
    ("encode_pair.disp", 2, 2),
    ("nested_r1.disp", 2, 2),
    ("pad_base.disp", 2, 2),
])
def test_small_dispersion_values(name, n, value):
    res = brute_dispersion(load(name), n)
    assert res.value == value
    assert len(image_of(load(name), res.witness)) == value


def test_projection_dispersion_has_no_tables():
    res = brute_dispersion(load("projections.disp"), 2)
    assert res.witness.tables == {}
    assert res.evaluations == 4


def test_witness_is_least_index():
    # every strictly smaller interpretation index gives a smaller image
    spec = load("diamond.disp")
    res = brute_dispersion(spec, 2)
    witness_index = 1  # f = (0,0,0,1) is interpretation index 1
    assert interpretation_at(spec.signature, 2, witness_index) == res.witness
    for idx in range(witness_index):
        smaller = interpretation_at(spec.signature, 2, idx)
        assert len(image_of(spec, smaller)) < res.value


def test_jobs_do_not_change_results():
    spec = load("diamond.disp")
    lone = brute_dispersion(spec, 3, jobs=1)
    pooled = brute_dispersion(spec, 3, jobs=8)
    assert lone == pooled


# ---- solution counting ------------------------------------------------------

def test_max_solutions_small_systems():
    assert brute_max_solutions(load("fx.inst"), 2).value == 2
    assert brute_max_solutions(load("two_cycle.inst"), 2).value == 2
    assert brute_max_solutions(load("two_cycle.inst"), 3).value == 3
    assert brute_max_solutions(load("collision.inst"), 2).value == 2


def test_index_coding_solution_count():
    res = brute_max_solutions(load("index_coding.inst"), 2)
    assert res.value == 4
    assert res.witness.tables["f"] == (0, 0, 0, 1, 1, 0, 0, 0)
    assert res.witness.tables["h1"] == (0, 1, 1, 0)
    assert res.evaluations == 16777216
    assert count_solutions(load("index_coding.inst"), res.witness) == 4


@pytest.mark.parametrize("name", ["fx.inst", "two_cycle.inst",
                                  "collision.inst", "cascade.inst",
                                  "flatten_nested.inst", "two_sided.inst"])
def test_witness_recount_matches_value(name):
    system = load(name)
    res = brute_max_solutions(system, 2)
    assert count_solutions(system, res.witness) == res.value


# ---- perfection -------------------------------------------------------------

def test_diamond_is_never_perfect():
    dec2 = check_perfect_fixed(load("diamond.disp"), 2)
    assert not dec2.perfect
    assert dec2.target == 16 and dec2.max_image == 10
    assert dec2.interpretations == 16
    dec3 = check_perfect_fixed(load("diamond.disp"), 3)
    assert not dec3.perfect
    assert dec3.target == 81 and dec3.max_image == 53
    assert dec3.interpretations == 19683


def test_perfect_hits_exit_early():
    dec = check_perfect_fixed(load("projections.disp"), 2)
    assert dec.perfect and dec.target == 4
    assert dec.interpretations == 1 and dec.evaluations == 4
    dec = check_perfect_fixed(load("encode_pair.disp"), 2)
    assert dec.perfect
    assert dec.interpretations < 16  # stopped at the first surjection
    assert len(image_of(load("encode_pair.disp"), dec.witness)) == dec.target


def test_perfect_matches_dispersion_value():
    for name in ("single_var.disp", "single_fn.disp", "constants.disp",
                 "encode_pair.disp", "nested_r1.disp", "diamond.disp"):
        spec = load(name)
        dec = check_perfect_fixed(spec, 2)
        disp = brute_dispersion(spec, 2)
        assert dec.perfect == (disp.value == dec.target)


# ---- guessing games ----------------------------------------------------------

def test_cycle_game_values():
    assert brute_guessing(load("cycle3.graph"), 2).value == 2
    assert brute_guessing(load("cycle3.graph"), 3).value == 3
    assert brute_guessing(load("cycle2.graph"), 2).value == 2
    assert brute_guessing(load("clique2.graph"), 2).value == 2
    res = brute_guessing(load("cycle3.graph"), 2)
    assert res.rate == 1.0
    assert count_winning(load("cycle3.graph"), res.witness) == 2


def test_single_source_game():
    norm, _ = pipeline(load("fx.inst"))
    graph = dependency_graph(norm)
    assert brute_guessing(graph, 5).value == 5


def test_game_value_at_least_source_configurations():
    names = ["cycle2.graph", "cycle3.graph", "clique2.graph"]
    for name in names:
        g = load(name)
        assert brute_guessing(g, 2).value >= 2 ** len(g.sources)
    norm, _ = pipeline(load("index_coding.inst"))
    g = dependency_graph(norm)
    assert brute_guessing(g, 2).value >= 2 ** len(g.sources)


def test_source_loops_preserve_game_value():
    system = TermSystem(variables=("x", "y", "z"),
                        signature=Signature(symbols=(("f", 2),)),
                        equations=(Equation(App("f", (Var("x"), Var("y"))),
                                            Var("z")),))
    norm, _ = pipeline(system)
    g = dependency_graph(norm)
    assert brute_guessing(g, 2).value == 4
    assert brute_guessing(add_source_loops(g), 2).value == 4


def test_vertices_may_shadow_symbol_names():
    # vertex names live in a namespace of their own
    g = DependencyGraph(vertices=("f", "g"),
                        edges=frozenset({("f", "g")}),
                        sources=frozenset({"f"}))
    assert brute_guessing(g, 2).value == 2


def test_strategy_witness_validates():
    g = load("cycle3.graph")
    res = brute_guessing(g, 2)
    res.witness.validate_against(g)
    assert set(res.witness.tables) == {"a", "b", "c"}


# ---- solutions vs winning -----------------------------------------------------

def test_solutions_equal_winning_small():
    norm, _ = pipeline(load("fx.inst"))
    eq = check_solutions_equal_winning(diversify(norm), 2)
    assert eq.equal
    assert eq.solutions.value == 2 and eq.winning.value == 2


def test_solutions_equal_winning_index_coding():
    norm, _ = pipeline(load("index_coding.inst"))
    eq = check_solutions_equal_winning(diversify(norm), 2)
    assert eq.equal
    assert eq.solutions.value == 4 and eq.winning.value == 4


def test_solutions_equal_winning_gates():
    norm, _ = pipeline(load("two_sided.inst"))
    with pytest.raises(PreconditionError):
        check_solutions_equal_winning(diversify(norm), 2)
    shared, _ = pipeline(load("two_cycle.inst"))
    with pytest.raises(PreconditionError):
        check_solutions_equal_winning(shared, 2)  # not diversified


# ---- preservation -------------------------------------------------------------

@pytest.mark.parametrize("name,interps", [
    ("flatten_nested.inst", 16),
    ("two_sided.inst", 16),
    ("collision.inst", 4),
    ("cascade.inst", 16),
    ("fx.inst", 4),
])
def test_pipeline_preserves_counts(name, interps):
    system = load(name)
    norm, _ = pipeline(system)
    chk = check_counts_preserved(system, norm, 2)
    assert chk.equal
    assert chk.interpretations == interps
    assert chk.first_mismatch is None


def test_count_preservation_detects_differences():
    sig = Signature(symbols=(("f", 1),))
    before = TermSystem(variables=("x", "y"), signature=sig,
                        equations=(Equation(App("f", (Var("x"),)), Var("y")),))
    after = TermSystem(variables=("x", "y"), signature=sig,
                       equations=(Equation(App("f", (Var("x"),)), Var("x")),))
    chk = check_counts_preserved(before, after, 2)
    assert not chk.equal
    assert chk.first_mismatch == 1  # f = (0,1) fixes both points of x = f(x)


def test_count_preservation_needs_shared_signature():
    fx = load("fx.inst")
    other = TermSystem(variables=("x", "y"),
                       signature=Signature(symbols=(("g", 1),)),
                       equations=(Equation(App("g", (Var("x"),)), Var("y")),))
    with pytest.raises(PreconditionError):
        check_counts_preserved(fx, other, 2)


# ---- block encodings and lifting ----------------------------------------------

def test_canonical_block_encoding():
    enc = BlockEncoding.canonical(4, 2)
    assert enc.m == 2
    assert enc.blocks == ((0, 1), (2, 3))
    enc5 = BlockEncoding.canonical(5, 2)
    assert enc5.blocks == ((0, 1), (2, 3))  # element 4 stays unused


def test_block_encoding_validation():
    with pytest.raises(ValidationError):
        BlockEncoding(4, 0, 0, ())
    with pytest.raises(ValidationError):
        BlockEncoding(4, 2, 1, ((0,), (1,)))  # m must be n // v
    with pytest.raises(ValidationError):
        BlockEncoding(4, 2, 2, ((0, 1), (1, 2)))  # overlap
    with pytest.raises(ValidationError):
        BlockEncoding(4, 2, 2, ((0, 1),))  # one block per variable


def test_lift_interpretation_recount():
    norm, _ = pipeline(load("fx.inst"))
    div = diversify(norm)
    small = brute_max_solutions(div, 2)
    enc = BlockEncoding.canonical(4, 2)
    lifted = lift_interpretation(norm, small.witness, enc)
    assert lifted.n == 4
    assert count_solutions(norm, lifted) >= small.value
    lifted.validate_against(norm.signature)


def test_lift_preconditions():
    norm, _ = pipeline(load("fx.inst"))
    div = diversify(norm)
    small = brute_max_solutions(div, 2).witness
    with pytest.raises(PreconditionError):
        lift_interpretation(norm, small, BlockEncoding.canonical(6, 3))
    wrong_sig = Interpretation(n=2, tables={"f": (0, 1)})
    with pytest.raises(PreconditionError):
        lift_interpretation(norm, wrong_sig, BlockEncoding.canonical(4, 2))
    bad, _ = pipeline(load("two_sided.inst"))
    with pytest.raises(PreconditionError):
        lift_interpretation(bad, small, BlockEncoding.canonical(4, 2))


def test_sandwich_fx():
    norm, _ = pipeline(load("fx.inst"))
    rep = sandwich_check(norm, 4)
    assert rep.ok and rep.upper_ok and rep.lower_ok and rep.lift_ok
    assert (rep.n, rep.v, rep.m) == (4, 2, 2)
    assert rep.original.value == 4
    assert rep.diversified_same_n.value == 4
    assert rep.diversified_small.value == 2
    assert rep.lifted_count == 4


def test_sandwich_two_cycle():
    norm, _ = pipeline(load("two_cycle.inst"))
    rep = sandwich_check(norm, 4)
    assert rep.ok
    assert rep.original.value == 4
    assert rep.diversified_small.value == 2
    assert rep.lifted_count == 4


def test_sandwich_preconditions():
    norm, _ = pipeline(load("fx.inst"))
    with pytest.raises(PreconditionError):
        sandwich_check(norm, 1)  # n below the variable count
    bad, _ = pipeline(load("two_sided.inst"))
    with pytest.raises(PreconditionError):
        sandwich_check(bad, 4)


# ---- embedding ----------------------------------------------------------------

def test_embedding_equalities():
    for name, n, value in (("single_var.disp", 2, 2), ("single_var.disp", 3, 3),
                           ("single_fn.disp", 2, 2)):
        chk = check_embedding(load(name), n)
        assert chk.equal
        assert chk.dispersion.value == value
        assert chk.embedded.value == value


def test_embedding_diamond():
    spec = load("diamond.disp")
    chk = check_embedding(spec, 2)
    assert chk.equal
    assert chk.dispersion.value == 10 and chk.embedded.value == 10
    embedded = embed_dispersion(spec)
    assert count_solutions(embedded, chk.embedded.witness) == 10
    chk.embedded.witness.validate_against(embedded.signature)


def test_embedding_respects_budget():
    with pytest.raises(BudgetError):
        check_embedding(load("diamond.disp"), 4)


# ---- randomized cross-checks ---------------------------------------------------

_vars = ("x", "y")


@st.composite
def _tiny_systems(draw):
    arity = draw(st.integers(1, 2))
    symbols = (("f", arity),)

    def term(depth):
        if depth == 0 or draw(st.booleans()):
            return Var(draw(st.sampled_from(_vars)))
        return App("f", tuple(term(depth - 1) for _ in range(arity)))

    eqs = tuple(Equation(term(1), term(1))
                for _ in range(draw(st.integers(1, 2))))
    return TermSystem(variables=_vars, signature=Signature(symbols=symbols),
                      equations=eqs)


@settings(max_examples=40, deadline=None)
@given(_tiny_systems())
def test_random_witness_recount(system):
    res = brute_max_solutions(system, 2)
    assert 1 <= res.value <= 4  # all-zero tables satisfy the all-zero point
    assert count_solutions(system, res.witness) == res.value
    assert brute_max_solutions(system, 2, jobs=2) == res


@st.composite
def _tiny_specs(draw):
    arity = draw(st.integers(1, 2))
    symbols = (("f", arity),)

    def term(depth):
        if depth == 0 or draw(st.booleans()):
            return Var(draw(st.sampled_from(_vars)))
        return App("f", tuple(term(depth - 1) for _ in range(arity)))

    outputs = tuple(term(2) for _ in range(draw(st.integers(1, 2))))
    return DispersionSpec(inputs=_vars, signature=Signature(symbols=symbols),
                          outputs=outputs)


@settings(max_examples=40, deadline=None)
@given(_tiny_specs())
def test_random_dispersion_bounds(spec):
    from termflow.flownet import dispersion_exponent
    res = brute_dispersion(spec, 2)
    assert 1 <= res.value <= 2 ** dispersion_exponent(spec).D
    assert len(image_of(spec, res.witness)) == res.value


@settings(max_examples=25, deadline=None)
@given(_tiny_systems())
def test_random_pipeline_preserves_counts(system):
    norm, _ = pipeline(system)
    chk = check_counts_preserved(system, norm, 2)
    assert chk.equal, chk.first_mismatch
