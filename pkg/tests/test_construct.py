import pytest

from veltman.conditions import (
    check_invariants,
    find_deficiencies,
    find_problems,
    truth_lemma_check,
)
from veltman.construct import (
    ConstructionState,
    DeficiencyLabel,
    M0Existence,
    ProblemLabel,
    Unsatisfied,
    construct_model,
    eliminate_deficiency,
    eliminate_problem,
    oracle_answer,
    verify_answer,
)
from veltman.formula import (
    Box,
    Neg,
    Rhd,
    Var,
    adequate_closure,
    parse,
    print_formula,
    single_negation,
)
from veltman.labels import extend_ambient, holds, label_crit, label_prec, saturate, atoms_of
from veltman.model import LabeledFrame, forces, induced_model
from veltman.search import FrameClass, find_countermodel

p, q, r = Var("p"), Var("q"), Var("r")


def root_state(phi_text, logic=FrameClass.IL, bound=3, debug=True):
    res_phi = parse(phi_text)
    d = adequate_closure({res_phi})
    amb = extend_ambient(d)
    from veltman.construct import _root_label

    lab = _root_label(res_phi, d, amb, logic, bound)
    assert lab is not None
    lf = LabeledFrame(["w0"], nu_world={"w0": lab})
    return ConstructionState(
        lf=lf, logic=logic, adequate_set=d, ambient=amb, bound=bound,
        budget=50, debug=debug,
    )


def test_problem_label_oracle():
    d = adequate_closure({parse("~(p |> q)")})
    amb = extend_ambient(d)
    gamma = saturate(amb, {a: print_formula(a) in ("~(p |> q)",) for a in atoms_of(amb)})
    req = ProblemLabel(gamma, Neg(Rhd(p, q)), d, amb, FrameClass.IL)
    ans = oracle_answer(req, 3)
    assert not isinstance(ans, Unsatisfied)
    (delta,) = ans.labels
    assert holds(delta, p, amb)
    assert holds(delta, Box(single_negation(p)), amb)
    assert holds(delta, parse("~q"), amb)
    assert holds(delta, parse("[]~q"), amb)
    assert label_crit(gamma, delta, q, amb)
    assert verify_answer(req, ans)


def test_deficiency_label_oracle_bot_criticality():
    d = adequate_closure({parse("p |> q")})
    amb = extend_ambient(d)
    gamma = saturate(amb, {a: print_formula(a) == "p |> q" for a in atoms_of(amb)})
    from veltman.formula import BOT

    req = DeficiencyLabel(gamma, BOT, Rhd(p, q), d, amb, FrameClass.IL)
    ans = oracle_answer(req, 3)
    assert not isinstance(ans, Unsatisfied)
    (delta,) = ans.labels
    assert holds(delta, q, amb) and holds(delta, parse("[]~q"), amb)
    assert label_prec(gamma, delta, amb)


def test_m0_existence_degenerate():
    """With no side obligations the request collapses to a single label
    containing the consequent."""
    d = adequate_closure({parse("p |> q")})
    amb = extend_ambient(d)
    gamma = saturate(amb, {a: print_formula(a) == "p |> q" for a in atoms_of(amb)})
    delta = saturate(amb, {a: print_formula(a) in ("p", "~[]~p") for a in atoms_of(amb)})
    from veltman.formula import BOT

    req = M0Existence(
        gamma=gamma, delta=delta, criticality=BOT, obligation=Rhd(p, q),
        side_obligations=(), adequate=d, ambient=amb, logic=FrameClass.ILM0,
    )
    ans = oracle_answer(req, 3)
    assert not isinstance(ans, Unsatisfied)
    assert len(ans.labels) == 1
    assert holds(ans.labels[0], q, amb)
    assert verify_answer(req, ans)


def test_eliminate_problem_one_point():
    st = root_state("~(p |> q)")
    probs = find_problems(st.lf, st.adequate_set, st.ambient)
    assert len(probs) == 1
    eliminate_problem(st, probs[0])
    assert len(st.lf.worlds) == 2
    assert not find_problems(st.lf, st.adequate_set, st.ambient)
    model = induced_model(st.lf)
    assert forces(model, "w0", parse("~(p |> q)"))
    assert st.lf.nu_edge[("w0", "w1")] == q


def test_eliminate_problem_ilm0_same_shape():
    st = root_state("~(p |> q)", FrameClass.ILM0)
    probs = find_problems(st.lf, st.adequate_set, st.ambient)
    eliminate_problem(st, probs[0])
    assert len(st.lf.worlds) == 2


def test_problem_never_reemerges():
    st = root_state("~(p |> q) /\\ ~(q |> p)")
    seen = set()
    for _ in range(10):
        probs = find_problems(st.lf, st.adequate_set, st.ambient)
        if not probs:
            break
        key = (probs[0].world, probs[0].formula)
        assert key not in seen
        seen.add(key)
        eliminate_problem(st, probs[0])
    assert not find_problems(st.lf, st.adequate_set, st.ambient)


def test_eliminate_deficiency_adds_witness():
    st = root_state("<>p /\\ (p |> q)")
    while find_problems(st.lf, st.adequate_set, st.ambient):
        eliminate_problem(st, find_problems(st.lf, st.adequate_set, st.ambient)[0])
    ds = find_deficiencies(st.lf, st.adequate_set, st.ambient)
    assert ds
    d = ds[0]
    eliminate_deficiency(st, d)
    remaining = find_deficiencies(st.lf, st.adequate_set, st.ambient)
    assert all((d.world, d.successor, d.formula) != (e.world, e.successor, e.formula) for e in remaining)
    # the new witness is an S successor of the deficient pair carrying q
    pairs = st.lf.s_pairs(d.world)
    assert any(u == d.successor and holds(st.lf.nu_world[z], q, st.ambient) for (u, z) in pairs)


def test_construct_one_point():
    res = construct_model(parse("p"), FrameClass.IL, budget=50, bound=3)
    assert res.status == "success"
    assert list(res.model.frame.worlds) == ["w0"]
    assert res.log == []


def test_construct_refuses_unsatisfiable():
    res = construct_model(parse("p /\\ ~p"), FrameClass.IL, budget=50, bound=3)
    assert res.status == "abort"
    assert "refus" in res.reason


def test_construct_end_to_end_counter_m0():
    """A root refuting an M0 instance yields a model that agrees with the
    exhaustive search witness by mutual forcing."""
    inst = parse("p |> q -> <>p /\\ []r |> q /\\ []r")
    phi = Neg(inst)
    res = construct_model(phi, FrameClass.IL, budget=50, bound=4, debug=True)
    assert res.status == "success"
    assert forces(res.model, res.root, phi)
    search_witness = find_countermodel(inst, FrameClass.IL, 4)
    assert search_witness.found
    assert not forces(search_witness.model, search_witness.world, inst)


def test_construct_debug_invariants_hold():
    res = construct_model(
        parse("~(<>p |> q) /\\ (p |> r)"), FrameClass.ILM0, budget=50, bound=3,
        debug=True,
    )
    assert res.status == "success"
    rep = check_invariants(res.lf, adequate_closure({parse("~(<>p |> q) /\\ (p |> r)")}),
                           FrameClass.ILM0)
    assert rep.ok
    ok, tl = truth_lemma_check(res.lf, adequate_closure({parse("~(<>p |> q) /\\ (p |> r)")}))
    assert ok and tl.agreement


def test_construct_budget_abort():
    res = construct_model(parse("~(p |> q)"), FrameClass.IL, budget=0, bound=3)
    assert res.status == "abort"
    assert res.reason == "budget"


def test_construct_log_format():
    res = construct_model(parse("~(p |> q)"), FrameClass.IL, budget=50, bound=3)
    assert res.log == ["STEP 1 PROBLEM w0 ~(p |> q) -> +w1"]
