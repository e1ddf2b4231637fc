"""Step-by-step model construction: eliminate problems and deficiencies
from a one-point labeled frame until a truth lemma holds.

Maximal consistent sets are replaced by saturated finite labels over an
extended ambient set; the non-propositional part of consistency is
delegated to the bounded satisfiability oracle, which is sound (a found
model certifies consistency) but incomplete (an exhausted bound proves
nothing).  An Unsatisfied answer therefore means the bound was too small
or the starting label inconsistent, never that the logic lacks a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .closure import il_close, m0_close, wstar_close
from .conditions import (
    Deficiency,
    Problem,
    check_invariants,
    find_deficiencies,
    find_problems,
    truth_lemma_check,
)
from .formula import (
    BOT,
    Box,
    Formula,
    Rhd,
    adequate_closure,
    formula_key,
    is_neg,
    print_formula,
    single_negation,
)
from .labels import (
    atoms_of,
    box_gain_pool,
    box_subset,
    extend_ambient,
    holds,
    label_crit,
    member,
    plainly_inconsistent,
    saturated_labels,
)
from .model import LabeledFrame, Model, forces, induced_model
from .relations import box_max_of, critical_cone, derived, n_cone, one_step
from .search import FrameClass, realizable_signatures, satisfiable_cached


class ConstructionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Label requests and the oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemLabel:
    gamma: frozenset
    negated: Formula  # ~(A |> B)
    adequate: frozenset
    ambient: frozenset
    logic: FrameClass


@dataclass(frozen=True)
class DeficiencyLabel:
    gamma: frozenset
    criticality: Formula  # B with the new world landing in the B-cone
    obligation: Formula  # C |> D
    adequate: frozenset
    ambient: frozenset
    logic: FrameClass


@dataclass(frozen=True)
class M0Existence:
    gamma: frozenset
    delta: frozenset  # the box-inclusion maximum to climb over
    criticality: Formula
    obligation: Formula  # P |> Q
    side_obligations: tuple  # the S_i |> T_i list
    adequate: frozenset
    ambient: frozenset
    logic: FrameClass
    want_box_not_p: bool = False  # the W* variant


@dataclass(frozen=True)
class LabelAnswer:
    labels: tuple


@dataclass(frozen=True)
class Unsatisfied:
    bound: int
    reason: str = ""


def _consistent(label, logic, bound, ambient=None):
    """Bounded satisfiability of a saturated label.

    Saturation pins the truth of every ambient formula to the label's atom
    decision, so the label has a class model within the bound exactly when
    its atom signature is realized somewhere; all labels over one ambient
    share a single realizability sweep.
    """
    if ambient is None:
        return satisfiable_cached(label, logic, bound)
    atoms = atoms_of(ambient)
    names = sorted({v for a in atoms for v in _vars_of(a)})
    sigs = realizable_signatures(tuple(atoms), tuple(names), logic, bound)
    sig = 0
    for i, a in enumerate(atoms):
        if a in label:
            sig |= 1 << i
    return sig in sigs


def _vars_of(f):
    from .formula import variables

    return variables(f)


_pool_cache = {}


def _commitment_cost(cand, adequate_set, ambient):
    """How many fresh obligations a world with this label would create:
    negated |> and box members become problems, |> antecedents in the label
    arm future deficiencies.  Candidates are tried cheapest first so runs
    stay small; any consistent candidate would do for correctness."""
    problems = 0
    triggers = 0
    for f in adequate_set:
        if isinstance(f, Rhd):
            if member(cand, f, ambient) is False:
                problems += 1
            if holds(cand, f.left, ambient):
                triggers += 1
        elif isinstance(f, Box):
            if member(cand, f, ambient) is False:
                problems += 1
    return (problems, triggers)


def _label_pool(adequate_set, ambient):
    """Saturated labels over ambient, cheapest commitments first; ties kept
    in canonical enumeration order."""
    key = (adequate_set, ambient)
    if key not in _pool_cache:
        pool = list(saturated_labels(ambient))
        ranked = sorted(
            range(len(pool)),
            key=lambda i: (_commitment_cost(pool[i], adequate_set, ambient), i),
        )
        _pool_cache[key] = tuple(pool[i] for i in ranked)
    return _pool_cache[key]


def _single_label_candidates(req, constraints, bound):
    """Pool labels meeting the membership and relation constraints,
    cheapest filters first; SAT gate last."""
    for cand in _label_pool(req.adequate, req.ambient):
        if all(c(cand) for c in constraints):
            if _consistent(cand, req.logic, bound, req.ambient):
                yield cand


def oracle_answer(req, bound: int):
    """Answer a label request by canonical enumeration, or Unsatisfied."""
    amb = req.ambient
    if isinstance(req, ProblemLabel):
        rhd = req.negated.left
        a, b = rhd.left, rhd.right
        constraints = [
            lambda c: holds(c, a, amb),
            lambda c: holds(c, Box(single_negation(a)), amb),
            lambda c: label_crit(req.gamma, c, b, amb),
        ]
        for cand in _single_label_candidates(req, constraints, bound):
            return LabelAnswer((cand,))
        return Unsatisfied(bound, "no consistent critical label found")
    if isinstance(req, DeficiencyLabel):
        c_f, d_f = req.obligation.left, req.obligation.right
        constraints = [
            lambda c: holds(c, d_f, amb),
            lambda c: holds(c, Box(single_negation(d_f)), amb),
            lambda c: label_crit(req.gamma, c, req.criticality, amb),
        ]
        for cand in _single_label_candidates(req, constraints, bound):
            return LabelAnswer((cand,))
        return Unsatisfied(bound, "no consistent critical label found")
    if isinstance(req, M0Existence):
        return _answer_m0(req, bound)
    raise TypeError(f"unknown request {req!r}")


def _answer_m0(req: M0Existence, bound):
    amb = req.ambient
    p_f, q_f = req.obligation.left, req.obligation.right
    base_ok = lambda c: (
        label_crit(req.gamma, c, req.criticality, amb)
        and box_subset(req.delta, c, amb)
        and (not req.want_box_not_p or holds(c, Box(single_negation(p_f)), amb))
    )
    pool = [c for c in _label_pool(req.adequate, amb) if base_ok(c)]
    sts = list(req.side_obligations)
    sat = {}

    def consistent(c):
        if c not in sat:
            sat[c] = _consistent(c, req.logic, bound, amb)
        return sat[c]

    def unmet(chosen):
        for j, st in enumerate(sts):
            s_f, t_f = st.left, st.right
            if any(holds(c, s_f, amb) for c in chosen) and not any(
                holds(c, t_f, amb) for c in chosen
            ):
                return j
        return None

    def solve(chosen):
        j = unmet(chosen)
        if j is None:
            return chosen
        if len(chosen) > len(sts):
            return None
        t_f = sts[j].right
        for cand in pool:
            if cand in chosen or not holds(cand, t_f, amb):
                continue
            if not consistent(cand):
                continue
            got = solve(chosen + [cand])
            if got is not None:
                return got
        return None

    for first in pool:
        if not holds(first, q_f, amb) or not consistent(first):
            continue
        got = solve([first])
        if got is not None:
            return LabelAnswer(tuple(got))
    return Unsatisfied(bound, "no covering label tuple found")


def verify_answer(req, ans: LabelAnswer) -> bool:
    """Re-check an oracle answer against the request's constraints."""
    amb = req.ambient
    if isinstance(req, ProblemLabel):
        (c,) = ans.labels
        a, b = req.negated.left.left, req.negated.left.right
        return (
            holds(c, a, amb)
            and holds(c, Box(single_negation(a)), amb)
            and label_crit(req.gamma, c, b, amb)
        )
    if isinstance(req, DeficiencyLabel):
        (c,) = ans.labels
        d_f = req.obligation.right
        return (
            holds(c, d_f, amb)
            and holds(c, Box(single_negation(d_f)), amb)
            and label_crit(req.gamma, c, req.criticality, amb)
        )
    if isinstance(req, M0Existence):
        labels = ans.labels
        if len(labels) > len(req.side_obligations) + 1:
            return False
        p_f, q_f = req.obligation.left, req.obligation.right
        if not holds(labels[0], q_f, amb):
            return False
        for c in labels:
            if not label_crit(req.gamma, c, req.criticality, amb):
                return False
            if not box_subset(req.delta, c, amb):
                return False
            if req.want_box_not_p and not holds(
                c, Box(single_negation(p_f)), amb
            ):
                return False
        for st in req.side_obligations:
            if any(holds(c, st.left, amb) for c in labels) and not any(
                holds(c, st.right, amb) for c in labels
            ):
                return False
        return True
    raise TypeError(f"unknown request {req!r}")


# ---------------------------------------------------------------------------
# Construction state and eliminations
# ---------------------------------------------------------------------------

@dataclass
class ConstructionState:
    lf: LabeledFrame
    logic: FrameClass
    adequate_set: frozenset
    ambient: frozenset
    bound: int
    budget: int
    debug: bool = False
    log: list = field(default_factory=list)
    fresh: int = 1
    root: str = "w0"

    def new_world(self):
        w = f"w{self.fresh}"
        self.fresh += 1
        return w

    def close(self):
        if self.logic == FrameClass.IL:
            self.lf = il_close(self.lf, debug=self.debug)
        elif self.logic == FrameClass.ILM0:
            self.lf = m0_close(self.lf, debug=self.debug)
        else:
            self.lf = wstar_close(self.lf, self.adequate_set, debug=self.debug)

    def assert_invariants(self, context):
        rep = check_invariants(self.lf, self.adequate_set, self.logic, self.ambient)
        if not rep.ok:
            raise ConstructionError(f"invariants broken after {context}:\n{rep}")
        depth = _longest_r_chain(self.lf)
        limit = len([f for f in box_gain_pool(self.adequate_set)]) + 1
        if depth > limit:
            raise ConstructionError(
                f"R-chain of length {depth} exceeds the box-growth bound {limit}"
            )


def _longest_r_chain(lf):
    # longest R-path (R is acyclic on construction states)
    memo = {}

    def depth(x):
        if x not in memo:
            memo[x] = 1 + max(
                (depth(y) for (a, y) in lf.R if a == x), default=0
            )
        return memo[x]

    return max((depth(w) for w in lf.worlds), default=0)


def eliminate_problem(st: ConstructionState, p: Problem) -> ConstructionState:
    """Add one fresh world carrying a critical label, then close."""
    a = p.world
    a_f, b_f = p.parts()
    req = ProblemLabel(
        st.lf.nu_world[a], p.formula, st.adequate_set, st.ambient, st.logic
    )
    ans = oracle_answer(req, st.bound)
    if isinstance(ans, Unsatisfied):
        raise ConstructionError(
            f"oracle unsatisfied for problem {print_formula(p.formula)} at {a}: "
            f"{ans.reason} (bound {ans.bound})"
        )
    if not verify_answer(req, ans):
        raise ConstructionError("oracle answer failed verification")
    b = st.new_world()
    st.lf.add_world(b, ans.labels[0])
    st.lf.add_r(a, b)
    st.lf.set_edge_label(a, b, b_f)
    st.close()
    st.log.append(
        f"STEP {len(st.log) + 1} PROBLEM {a} {print_formula(p.formula)} -> +{b}"
    )
    if st.debug:
        st.assert_invariants(f"problem elimination at {a}")
    return st


def _cone_formula(st, a, y, use_ncone):
    """The unique edge-label formula whose cone above a contains y, or bot."""
    hits = []
    d = derived(st.lf) if use_ncone else None
    for f in st.lf.edge_labels():
        cone = (
            n_cone(st.lf, a, f, d.K) if use_ncone else critical_cone(st.lf, a, f)
        )
        if y in cone:
            hits.append(f)
    if len(hits) > 1:
        raise ConstructionError(
            f"world {y} lies in two cones above {a}; adequacy is broken"
        )
    return hits[0] if hits else BOT


def eliminate_deficiency(st: ConstructionState, d: Deficiency) -> ConstructionState:
    a, b = d.world, d.successor
    c_f, d_f = d.parts()
    if d_f == BOT:
        raise ConstructionError(
            "a box-type deficiency cannot be repaired; the frame violates "
            "the successor-label clause upstream"
        )
    if st.logic == FrameClass.IL:
        crit = _cone_formula(st, a, b, use_ncone=False)
        req = DeficiencyLabel(
            st.lf.nu_world[a], crit, d.formula, st.adequate_set, st.ambient, st.logic
        )
        ans = oracle_answer(req, st.bound)
        if isinstance(ans, Unsatisfied):
            raise ConstructionError(
                f"oracle unsatisfied for deficiency {print_formula(d.formula)}: "
                f"{ans.reason}"
            )
        if not verify_answer(req, ans):
            raise ConstructionError("oracle answer failed verification")
        c = st.new_world()
        st.lf.add_world(c, ans.labels[0])
        st.lf.add_r(a, c)
        st.lf.add_s(a, b, c)
        st.close()
        new_worlds = [c]
    else:
        new_worlds = _eliminate_deficiency_m0(st, d)
    st.log.append(
        f"STEP {len(st.log) + 1} DEFICIENCY {a},{b} {print_formula(d.formula)} "
        f"-> +{','.join(new_worlds)}"
    )
    if st.debug:
        st.assert_invariants(f"deficiency elimination at {a},{b}")
    return st


def _eliminate_deficiency_m0(st: ConstructionState, d: Deficiency):
    a, b = d.world, d.successor
    rels = derived(st.lf)
    K = rels.K
    k1 = one_step(K).pairs
    crit = _cone_formula(st, a, b, use_ncone=True)
    between = [
        t for t in st.lf.worlds if (a, t) in K.pairs and (t, b) in k1
    ]
    if not between:
        # a sees b in one K step: the plain single-world solution applies
        req = DeficiencyLabel(
            st.lf.nu_world[a], crit, d.formula, st.adequate_set, st.ambient, st.logic
        )
        ans = oracle_answer(req, st.bound)
        if isinstance(ans, Unsatisfied):
            raise ConstructionError(
                f"oracle unsatisfied for deficiency {print_formula(d.formula)}: "
                f"{ans.reason}"
            )
        if not verify_answer(req, ans):
            raise ConstructionError("oracle answer failed verification")
        c = st.new_world()
        st.lf.add_world(c, ans.labels[0])
        st.lf.add_r(a, c)
        st.lf.add_s(a, b, c)
        st.lf.set_edge_label(a, c, crit)
        st.close()
        return [c]
    labels = [st.lf.nu_world[t] for t in between]
    mx = box_max_of(labels, st.ambient)
    if mx is None:
        raise ConstructionError(
            f"no box-inclusion maximum between {a} and {b}; I_box is broken"
        )
    side = tuple(
        f
        for f in sorted(st.adequate_set, key=formula_key)
        if isinstance(f, Rhd) and holds(st.lf.nu_world[a], f, st.ambient)
    )
    req = M0Existence(
        gamma=st.lf.nu_world[a],
        delta=mx,
        criticality=crit,
        obligation=d.formula,
        side_obligations=side,
        adequate=st.adequate_set,
        ambient=st.ambient,
        logic=st.logic,
        want_box_not_p=(st.logic == FrameClass.ILWstar),
    )
    ans = oracle_answer(req, st.bound)
    if isinstance(ans, Unsatisfied):
        raise ConstructionError(
            f"oracle unsatisfied for deficiency {print_formula(d.formula)}: "
            f"{ans.reason}"
        )
    if not verify_answer(req, ans):
        raise ConstructionError("oracle answer failed verification")
    ys = []
    for lab in ans.labels:
        y = st.new_world()
        st.lf.add_world(y, lab)
        st.lf.add_r(a, y)
        st.lf.set_edge_label(a, y, crit)
        ys.append(y)
    for y in ys:
        st.lf.add_s(a, b, y)
        for y2 in ys:
            if y != y2:
                st.lf.add_s(a, y, y2)
    st.close()
    return ys


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

@dataclass
class ConstructResult:
    status: str  # "success" or "abort"
    model: Model = None
    root: str = ""
    log: list = field(default_factory=list)
    lf: LabeledFrame = None
    reason: str = ""


def _root_label(phi, adequate_set, ambient, logic, bound):
    for cand in _label_pool(adequate_set, ambient):
        if holds(cand, phi, ambient) and _consistent(cand, logic, bound, ambient):
            return cand
    return None


def construct_model(
    phi: Formula, logic: FrameClass, budget: int, bound: int, debug=False
) -> ConstructResult:
    """Drive problem/deficiency elimination until the truth lemma holds.

    The budget caps the number of eliminations; the procedure never claims
    totality (the underlying chains can be infinite in general).
    """
    if not satisfiable_cached(frozenset((phi,)), logic, bound):
        return ConstructResult(
            "abort",
            reason=f"root formula has no model within {bound} worlds; refusing",
        )
    adequate_set = adequate_closure((phi,))
    ambient = extend_ambient(adequate_set)
    root_label = _root_label(phi, adequate_set, ambient, logic, bound)
    if root_label is None:
        return ConstructResult(
            "abort", reason="no consistent saturated root label at this bound"
        )
    lf = LabeledFrame(["w0"], nu_world={"w0": root_label})
    st = ConstructionState(
        lf=lf,
        logic=logic,
        adequate_set=adequate_set,
        ambient=ambient,
        bound=bound,
        budget=budget,
        debug=debug,
    )
    if debug:
        st.assert_invariants("the one-point start")
    steps = 0
    while True:
        problems = find_problems(st.lf, st.adequate_set, st.ambient)
        if problems:
            if steps >= budget:
                return ConstructResult("abort", log=st.log, lf=st.lf, reason="budget")
            eliminate_problem(st, problems[0])
            steps += 1
            continue
        deficiencies = find_deficiencies(st.lf, st.adequate_set, st.ambient)
        if deficiencies:
            if steps >= budget:
                return ConstructResult("abort", log=st.log, lf=st.lf, reason="budget")
            eliminate_deficiency(st, deficiencies[0])
            steps += 1
            continue
        break
    ok, rep = truth_lemma_check(st.lf, st.adequate_set, st.ambient)
    model = induced_model(st.lf)
    if not ok or not forces(model, st.root, phi):
        raise ConstructionError(
            "construction ended without a truth lemma:\n" + "\n".join(rep.lines())
        )
    return ConstructResult("success", model=model, root=st.root, log=st.log, lf=st.lf)
