"""Cost algebra: construction, simplification, expansion, evaluation,
comparison."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spa import (
    DEFAULT_ASSUMPTIONS,
    Affine,
    App,
    AssumptionSet,
    BasicTT,
    CostExpr,
    CostFunc,
    CostModel,
    HashSize,
    LambdaC,
    LambdaP,
    Overhead,
    SizeModel,
    TypeSize,
    Verdict,
    compare,
    cost_expr,
    cost_of_space,
    eval_cost,
    expand_additivity,
    expand_one,
    extract,
    parse,
    project,
    render_cost,
    render_size,
    simplify,
    ssum,
)
from spa.costs import EXPANDABLE, ZERO_COST, _strictly_dominates

from .generators import random_cost_expr, random_eval_model
from .helpers import KEY_WRAP, X509_ORIGINAL

SR, SN, SK_, SM = (TypeSize(tt) for tt in BasicTT)


def _sizes():
    return {BasicTT.R: 8, BasicTT.N: 16, BasicTT.K: 16, BasicTT.M: 100}


def app(func, *units):
    return App(func, (ssum(list(units)),))


def strand_of(path, label):
    spec = parse(open(path, encoding="utf-8").read())
    for s in project(spec).strands:
        if s.participant.label == label:
            return s
    raise AssertionError(label)


def test_cost_expr_merges():
    e = cost_expr([LambdaC(), LambdaC(), (LambdaP(), 2)])
    assert e.terms == ((LambdaC(), 2), (LambdaP(), 2))


def test_cost_expr_validated():
    with pytest.raises(ValueError):
        CostExpr(((LambdaC(), 0),))
    with pytest.raises(ValueError):
        CostExpr(((LambdaC(), 1), (LambdaC(), 2)))
    with pytest.raises(ValueError):
        App(CostFunc.F_C, (SN,))  # wrong arity
    with pytest.raises(ValueError):
        App(CostFunc.F_H, (SN, SR))


def test_raw_cost_key_wrap():
    cost = cost_of_space(extract(strand_of(KEY_WRAP, "B")).space())
    assert render_cost(cost) == (
        "f_kg(|k|) + f_c(|n|, |k|) + f_c(|n| + |k|, |r|) + "
        "f_sk(|n| + |k| + |r|) + f_p(|k|) + f_p(|n| + |k|) + "
        "2*f_p(|n| + |k| + |r|)"
    )


def test_simplified_cost_key_wrap():
    cost = cost_of_space(extract(strand_of(KEY_WRAP, "B")).space())
    assert render_cost(simplify(cost)) == (
        "f_kg(|k|) + 2*L_C + f_sk(|n| + |k| + |r|) + 4*L_P"
    )


def test_simplified_cost_x509():
    cost = cost_of_space(extract(strand_of(X509_ORIGINAL, "A")).space())
    assert render_cost(simplify(cost)) == (
        "f_pk(|m|) + f_ng(|n|) + 4*L_C + f_h(2|n| + |r| + |m| + S_asym(|m|)) + "
        "f_pk(S_hash) + 8*L_P"
    )


def test_canonical_order_classes():
    scrambled = cost_expr([
        (Overhead(-1), 1),
        (LambdaP(), 2),
        app(CostFunc.F_H, HashSize(), SN),
        (LambdaC(), 1),
        app(CostFunc.F_SK, SN, SR),
        app(CostFunc.F_NG, SN),
        app(CostFunc.F_KG, SK_),
    ])
    got = render_cost(simplify(scrambled))
    assert got == (
        "f_kg(|k|) + f_ng(|n|) + L_C + f_sk(|n| + |r|) + "
        "f_h(S_hash + |n|) + 2*L_P - Ov_h"
    )


def test_simplify_folds_constants():
    e = cost_expr([
        App(CostFunc.F_C, (SN, SR)),
        App(CostFunc.F_P, (SN,)),
        App(CostFunc.F_P, (SR,)),
    ])
    assert render_cost(simplify(e)) == "L_C + 2*L_P"


def test_simplify_merges_equal_args_after_normalization():
    from spa import Sum

    a = App(CostFunc.F_H, (SN,))
    b = App(CostFunc.F_H, (Sum(((1, SN),)),))  # denormal singleton sum
    assert render_cost(simplify(cost_expr([a, b]))) == "2*f_h(|n|)"


def test_equal_coefficient_units_keep_occurrence_order():
    # |n| + |r| and |r| + |n| are distinct normal forms by design: unit
    # order inside a sum records how the term was built
    assert render_size(ssum([SN, SR])) == "|n| + |r|"
    assert render_size(ssum([SR, SN])) == "|r| + |n|"


def test_expand_one():
    term = app(CostFunc.F_H, SN, SN, SR)
    parts = expand_one(term)
    assert (App(CostFunc.F_H, (SN,)), 2) in parts
    assert (App(CostFunc.F_H, (SR,)), 1) in parts
    assert (Overhead(-1), 2) in parts
    assert expand_one(app(CostFunc.F_H, SN)) is None  # single unit
    assert expand_one(App(CostFunc.F_C, (SN, SR))) is None  # not expandable


def test_expand_additivity_golden():
    e = cost_expr([(app(CostFunc.F_H, SN, SN, SR), 2), LambdaC()])
    got = render_cost(expand_additivity(e))
    assert got == "4*f_h(|n|) + 2*f_h(|r|) + L_C - 4*Ov_h"


def test_render_cost_zero_and_signs():
    assert render_cost(ZERO_COST) == "0"
    e = cost_expr([(Overhead(-1), 2)])
    assert render_cost(e) == "-2*Ov_h"
    e = cost_expr([LambdaC(), Overhead(1)])
    assert render_cost(e) == "L_C + Ov_h"


def model(ov=0.25, **overrides):
    funcs = {f: Affine(1.0, 0.1) for f in EXPANDABLE}
    funcs.update(overrides)
    return CostModel(
        funcs=funcs,
        lambda_c=0.1,
        lambda_p=0.05,
        ov_h=ov,
        size_model=SizeModel(
            sizes=_sizes(), s_hash=20, blk_in=117, blk_out=128, pad=11,
        ),
    )


def test_eval_single_hash():
    # alpha 1, beta 0.1 over a 16-byte nonce
    m = model()
    assert math.isclose(eval_cost(cost_expr([app(CostFunc.F_H, SN)]), m), 2.6)


def test_eval_constants_and_overhead():
    m = model()
    e = cost_expr([LambdaC(), (LambdaP(), 2), (Overhead(-1), 3)])
    assert math.isclose(eval_cost(e, m), 0.1 + 0.1 - 0.75)
    # unfolded concatenation and processing cost the constants too
    e = cost_expr([App(CostFunc.F_C, (SN, SR)), App(CostFunc.F_P, (SN,))])
    assert math.isclose(eval_cost(e, m), 0.15)


def test_affine_and_model_validation():
    with pytest.raises(ValueError):
        Affine(-1, 0)
    with pytest.raises(ValueError):
        CostModel(funcs={CostFunc.F_H: Affine(1, 1)}, lambda_c=0, lambda_p=0,
                  ov_h=0, size_model=model().size_model)
    with pytest.raises(ValueError):
        model(ov=-1)


def test_assumption_set_rejects_cycles():
    with pytest.raises(ValueError):
        AssumptionSet(dominance=((CostFunc.F_PK, CostFunc.F_H),
                                 (CostFunc.F_H, CostFunc.F_PK)))
    with pytest.raises(ValueError):
        AssumptionSet(dominance=((CostFunc.F_PK, CostFunc.F_PK),))


def test_closure_is_transitive():
    a = AssumptionSet(dominance=((CostFunc.F_PK, CostFunc.F_H),
                                 (CostFunc.F_H, CostFunc.F_S)))
    assert (CostFunc.F_PK, CostFunc.F_S) in a.closure()


def test_compare_equal_modulo_order():
    a = cost_expr([app(CostFunc.F_H, SN), LambdaC()])
    b = cost_expr([LambdaC(), app(CostFunc.F_H, SN)])
    res = compare(a, b)
    assert res.verdict is Verdict.EQUAL
    assert res.left_residual == ZERO_COST and res.right_residual == ZERO_COST


def test_compare_subset_is_less():
    a = cost_expr([app(CostFunc.F_H, SN)])
    b = cost_expr([app(CostFunc.F_H, SN), LambdaC()])
    assert compare(a, b).verdict is Verdict.LESS
    assert compare(b, a).verdict is Verdict.GREATER


def test_compare_dominance():
    a = cost_expr([app(CostFunc.F_H, SN)])
    b = cost_expr([app(CostFunc.F_PK, SN)])
    res = compare(a, b)
    assert res.verdict is Verdict.LESS
    assert res.residual_line() == "f_h(|n|) < f_pk(|n|)"
    assert compare(b, a).verdict is Verdict.GREATER


def test_compare_no_rule_is_indeterminate():
    a = cost_expr([app(CostFunc.F_SK, SN)])
    b = cost_expr([app(CostFunc.F_H, SN)])
    res = compare(a, b)
    assert res.verdict is Verdict.INDETERMINATE
    assert res.residual_line() == "f_sk(|n|) ? f_h(|n|)"


def test_compare_additivity_makes_equal():
    a = cost_expr([app(CostFunc.F_H, SN, SN)])
    b = cost_expr([(app(CostFunc.F_H, SN), 2)])
    assert compare(a, b).verdict is Verdict.EQUAL


def test_overhead_residue_blocks_verdict():
    keep = AssumptionSet(ignore_overhead=False)
    a = cost_expr([app(CostFunc.F_H, SN, SN)])
    b = cost_expr([(app(CostFunc.F_H, SN), 2)])
    res = compare(a, b, keep)
    assert res.verdict is Verdict.INDETERMINATE
    assert any("overhead" in step for step in res.trace)


def test_trace_ends_with_verdict():
    res = compare(cost_expr([LambdaC()]), cost_expr([LambdaC()]))
    assert res.trace[-1] == "verdict: Equal"
    assert any(step.startswith("cancel") for step in res.trace)


def test_compare_simplifies_inputs():
    raw = cost_expr([App(CostFunc.F_C, (SN, SR))])
    folded = cost_expr([LambdaC()])
    assert compare(raw, folded).verdict is Verdict.EQUAL


def test_dominance_covers_lambda_constants():
    a = AssumptionSet(dominance=((CostFunc.F_C, CostFunc.F_P),))
    res = compare(cost_expr([LambdaP()]), cost_expr([LambdaC()]), a)
    assert res.verdict is Verdict.LESS


def test_strictly_dominates():
    assume = DEFAULT_ASSUMPTIONS
    closure = assume.closure()
    fh_n = app(CostFunc.F_H, SN)
    fpk_n = app(CostFunc.F_PK, SN)
    fpk_r = app(CostFunc.F_PK, SR)
    assert _strictly_dominates(fpk_n, fh_n, assume, closure)
    assert _strictly_dominates(fpk_r, fh_n, assume, closure)  # any sizes
    assert not _strictly_dominates(fh_n, fpk_n, assume, closure)
    # monotone: strictly wider argument multiset of the same function
    wide = app(CostFunc.F_H, SN, SR)
    assert _strictly_dominates(wide, fh_n, assume, closure)
    assert not _strictly_dominates(fh_n, wide, assume, closure)
    assert not _strictly_dominates(fh_n, fh_n, assume, closure)
    # incomparable multisets
    fh_r = app(CostFunc.F_H, SR)
    assert not _strictly_dominates(fh_r, fh_n, assume, closure)
    # overhead never participates
    assert not _strictly_dominates(Overhead(1), fh_n, assume, closure)
    assert not _strictly_dominates(fh_n, Overhead(1), assume, closure)


def test_strictly_dominates_monotone_off():
    assume = AssumptionSet(monotone=False)
    closure = assume.closure()
    wide = app(CostFunc.F_H, SN, SR)
    narrow = app(CostFunc.F_H, SN)
    assert not _strictly_dominates(wide, narrow, assume, closure)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_compare_reflexive_equal(seed):
    rng = random.Random(seed)
    e = random_cost_expr(rng)
    res = compare(e, e)
    assert res.verdict is Verdict.EQUAL
    assert res.left_residual == ZERO_COST


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_cancellation_neutrality(seed):
    # adding the same term to both sides never changes the verdict
    rng = random.Random(seed)
    a, b = random_cost_expr(rng), random_cost_expr(rng)
    extra = (random_cost_expr(rng).terms or ((LambdaC(), 1),))[0]
    before = compare(a, b).verdict
    after = compare(
        cost_expr(list(a.terms) + [extra]),
        cost_expr(list(b.terms) + [extra]),
    ).verdict
    assert before is after


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_eval_preserved_by_rewrites(seed):
    rng = random.Random(seed)
    e = random_cost_expr(rng)
    m = random_eval_model(rng)
    base = eval_cost(e, m)
    for rewritten in (simplify(e), expand_additivity(simplify(e))):
        assert math.isclose(eval_cost(rewritten, m), base, rel_tol=1e-9, abs_tol=1e-9)
