"""Structure classification and invariant checking.

Everything returns a ValidationReport whose violations carry witnesses, so
test failures are actionable and golden files stay stable.  Box formulas of
the checked set are handled through their provable rhd form (``[]B``
behaves as ``~B |> bot``) so that the problem/deficiency criterion is
exactly equivalent to the truth lemma on saturated labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .formula import (
    BOT,
    Box,
    Formula,
    Implies,
    Neg,
    Rhd,
    adequate_closure,
    formula_key,
    is_neg,
    single_negation,
)
from .labels import (
    box_gain_pool,
    box_proper_subset,
    box_subset,
    holds,
    label_crit,
    label_prec,
    member,
)
from .model import (
    Frame,
    LabeledFrame,
    ValidationReport,
    Violation,
    forces,
    induced_model,
    validate_frame,
)
from .relations import (
    Rel,
    box_max_of,
    compose,
    critical_cone,
    derived,
    generalized_cone,
    is_conversely_well_founded,
    multi_step,
    n_cone,
    one_step,
    pure_s,
    r_rel,
    refl_trans_closure,
    s_rel,
    trans_closure,
    union,
)
from .search import FrameClass


@dataclass(frozen=True)
class Problem:
    world: str
    formula: Formula  # always of the form ~(A |> B)

    def parts(self):
        rhd = self.formula.left
        return rhd.left, rhd.right


@dataclass(frozen=True)
class Deficiency:
    world: str
    successor: str
    formula: Formula  # always of the form C |> D

    def parts(self):
        return self.formula.left, self.formula.right


def check_ambient(lf: LabeledFrame, extra=()) -> frozenset:
    """Ambient adequate set for membership queries on a labeled frame."""
    seed = set(extra)
    for label in lf.nu_world.values():
        seed |= set(label)
    seed |= set(lf.nu_edge.values())
    return adequate_closure(seed)


def _rhd_translates(adequate_set):
    """The |> obligations of an adequate set: its literal |> members plus
    the ``~B |> bot`` reading of each box member."""
    rhds = []
    boxes = []
    for f in sorted(adequate_set, key=formula_key):
        if isinstance(f, Rhd):
            rhds.append(f)
        elif isinstance(f, Box):
            boxes.append(f)
    return rhds, boxes


# ---------------------------------------------------------------------------
# Quasi / adequate checks
# ---------------------------------------------------------------------------

def _check_label_coherence(lf, ambient, use_ncone=False, K=None):
    """Clauses 3-5 shared by quasi-frames and adequate frames: successor
    labels along R, disjoint generalized cones, criticality inside cones."""
    v = []
    for x, y in sorted(lf.R):
        if not label_prec(lf.nu_world[x], lf.nu_world[y], ambient):
            v.append(Violation("label-prec", (x, y), "xRy needs nu(x) prec nu(y)"))
    labels = lf.edge_labels()
    for x in lf.worlds:
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                both = generalized_cone(lf, x, a) & generalized_cone(lf, x, b)
                for y in sorted(both):
                    v.append(
                        Violation(
                            "cone-disjoint",
                            (x, y),
                            f"in generalized cones of {formula_key(a)} and {formula_key(b)}",
                        )
                    )
    for x in lf.worlds:
        for a in labels:
            cone = n_cone(lf, x, a, K) if use_ncone else critical_cone(lf, x, a)
            rule = "ncone-critical" if use_ncone else "cone-critical"
            for y in sorted(cone):
                if not label_crit(lf.nu_world[x], lf.nu_world[y], a, ambient):
                    v.append(
                        Violation(
                            rule, (x, y), f"needs nu(x) crit_{formula_key(a)} nu(y)"
                        )
                    )
    return v


def check_quasi_frame(lf: LabeledFrame, ambient=None) -> ValidationReport:
    """The five quasi-frame clauses."""
    if ambient is None:
        ambient = check_ambient(lf)
    v = []
    skel = lf.skeleton()
    from .model import has_cycle

    cyc = has_cycle(lf.worlds, lf.R)
    if cyc is not None:
        v.append(Violation("R-conversely-well-founded", (cyc,)))
    for w in lf.worlds:
        for y, z in sorted(lf.s_pairs(w)):
            if (w, y) not in lf.R:
                v.append(Violation("S-domain", (w, y, z)))
            if (w, z) not in lf.R:
                v.append(Violation("S-range", (w, y, z)))
    v.extend(_check_label_coherence(lf, ambient))
    return ValidationReport(v)


def check_adequate(lf: LabeledFrame, ambient=None) -> ValidationReport:
    """IL-frame clauses plus the three adequacy clauses."""
    if ambient is None:
        ambient = check_ambient(lf)
    rep = validate_frame(lf.skeleton())
    v = list(rep.violations)
    v.extend(_check_label_coherence(lf, ambient))
    return ValidationReport(v)


def check_class_condition(f: Frame, cls: FrameClass) -> ValidationReport:
    """Frame conditions: IL clauses, the M0 implication, W's converse
    well-foundedness of S_w;R, or both for W*."""
    if cls == FrameClass.IL:
        return validate_frame(f)
    v = []
    if cls in (FrameClass.ILM0, FrameClass.ILWstar):
        rset = f.R
        for w, x in sorted(rset):
            for x2, y in sorted(rset):
                if x2 != x:
                    continue
                for y2, yp in sorted(f.s_pairs(w)):
                    if y2 != y:
                        continue
                    for yp2, z in sorted(rset):
                        if yp2 == yp and (x, z) not in rset:
                            v.append(Violation("M0-condition", (w, x, y, yp, z)))
    if cls in (FrameClass.ILW, FrameClass.ILWstar):
        worlds = tuple(sorted(f.worlds))
        r = Rel(worlds, f.R)
        for w in worlds:
            comp = compose(Rel(worlds, f.s_pairs(w)), r)
            closed = trans_closure(comp)
            for x in worlds:
                if (x, x) in closed.pairs:
                    v.append(
                        Violation("W-condition", (w, x), "S_w;R has a cycle through x")
                    )
    return ValidationReport(v)


def check_adequate_m0(lf: LabeledFrame, ambient=None) -> ValidationReport:
    """Adequate frame clauses plus the four adequate ILM0 clauses."""
    if ambient is None:
        ambient = check_ambient(lf)
    v = list(check_adequate(lf, ambient).violations)
    v.extend(check_class_condition(lf.skeleton(), FrameClass.ILM0).violations)
    rset = lf.R
    for w, x in sorted(rset):
        for x2, y in sorted(rset):
            if x2 != x:
                continue
            for y2, yp in sorted(lf.s_pairs(w)):
                if y2 == y and not box_subset(
                    lf.nu_world[x], lf.nu_world[yp], ambient
                ):
                    v.append(Violation("M0-box-transfer", (w, x, y, yp)))
    v.extend(_s_decomposition_violations(lf))
    v.extend(_r_decomposition_violations(lf))
    return ValidationReport(v)


def _s_decomposition_violations(lf):
    v = []
    for w in lf.worlds:
        mixed = refl_trans_closure(union(pure_s(lf, w), r_rel(lf)))
        for y, z in sorted(lf.s_pairs(w)):
            if (y, z) not in mixed.pairs:
                v.append(
                    Violation(
                        "S-pure-decomposition",
                        (w, y, z),
                        "xS_wy without a pure-S/R path",
                    )
                )
    return v


def _r_decomposition_violations(lf, rel=None, rule="R-one-step"):
    r = rel if rel is not None else r_rel(lf)
    chains = trans_closure(one_step(r))
    return [
        Violation(rule, (x, y), "no chain of immediate steps")
        for (x, y) in sorted(r.pairs)
        if (x, y) not in chains.pairs
    ]


def check_quasi_m0(lf: LabeledFrame, ambient=None) -> ValidationReport:
    """Quasi-frame clauses plus the seven quasi ILM0 clauses."""
    if ambient is None:
        ambient = check_ambient(lf)
    v = list(check_quasi_frame(lf, ambient).violations)
    d = derived(lf)
    K = d.K
    if not is_conversely_well_founded(K):
        v.append(Violation("K-conversely-well-founded", ()))
    for x, y in sorted(K.pairs):
        if not label_prec(lf.nu_world[x], lf.nu_world[y], ambient):
            v.append(Violation("K-prec", (x, y)))
    # N-cone criticality
    for w in lf.worlds:
        for a in lf.edge_labels():
            for x in sorted(n_cone(lf, w, a, K)):
                if not label_crit(lf.nu_world[w], lf.nu_world[x], a, ambient):
                    v.append(Violation("ncone-critical", (w, x), formula_key(a)))
    # wKxKy(S_w u K)* y' -> box transfer
    for w, x, yp in _k_chain_targets(lf, K):
        if not box_subset(lf.nu_world[x], lf.nu_world[yp], ambient):
            v.append(Violation("K-box-transfer", (w, x, yp)))
    v.extend(_s_decomposition_violations(lf))
    k1 = one_step(K)
    k1_chains = trans_closure(k1)
    for w, x, z in _rule3_conclusions(lf, K):
        if (x, z) not in k1_chains.pairs:
            v.append(Violation("K-one-step-rule", (w, x, z)))
    v.extend(_r_decomposition_violations(lf))
    return ValidationReport(v)


def _k_chain_targets(lf, K):
    """Triples (w, x, y') with wKxKy(S_w u K)*y' for some y."""
    out = set()
    for w in lf.worlds:
        mixed = refl_trans_closure(union(s_rel(lf, w), K))
        for x in lf.worlds:
            if (w, x) not in K.pairs:
                continue
            for y in lf.worlds:
                if (x, y) not in K.pairs:
                    continue
                for yp in lf.worlds:
                    if (y, yp) in mixed.pairs:
                        out.add((w, x, yp))
    return sorted(out)


def _rule3_conclusions(lf, K):
    """Triples (w, x, z) matched by wKxK^1y (S-breve_w)^tr y' K^1 z."""
    k1 = one_step(K).pairs
    out = set()
    for w in lf.worlds:
        sp = trans_closure(pure_s(lf, w)).pairs
        for x in lf.worlds:
            if (w, x) not in K.pairs:
                continue
            for y in lf.worlds:
                if (x, y) not in k1:
                    continue
                for yp in lf.worlds:
                    if (y, yp) not in sp:
                        continue
                    for z in lf.worlds:
                        if (yp, z) in k1:
                            out.add((w, x, z))
    return sorted(out)


def check_quasi_wstar(lf: LabeledFrame, adequate_set, ambient=None) -> ValidationReport:
    """Quasi ILM0 clauses plus the strict box-gain clause along pure chains."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    v = list(check_quasi_m0(lf, ambient).violations)
    K = derived(lf).K
    for w, x, yp in _pure_chain_targets(lf, K):
        if not box_proper_subset(
            lf.nu_world[x], lf.nu_world[yp], adequate_set, ambient
        ):
            v.append(Violation("Wstar-box-gain", (w, x, yp)))
    return ValidationReport(v)


def _pure_chain_targets(lf, K):
    """Triples (w, x, y') with wKxKy (S-breve_w)^tr y'."""
    out = set()
    for w in lf.worlds:
        sp = trans_closure(pure_s(lf, w)).pairs
        for x in lf.worlds:
            if (w, x) not in K.pairs:
                continue
            for y in lf.worlds:
                if (x, y) not in K.pairs:
                    continue
                for yp in lf.worlds:
                    if (y, yp) in sp:
                        out.add((w, x, yp))
    return sorted(out)


def check_adequate_wstar(lf: LabeledFrame, adequate_set, ambient=None) -> ValidationReport:
    """Adequate ILM0 clauses plus the strict box-gain clause over R."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    v = list(check_adequate_m0(lf, ambient).violations)
    r = r_rel(lf)
    for w, x, yp in _pure_chain_targets_rel(lf, r):
        if not box_proper_subset(
            lf.nu_world[x], lf.nu_world[yp], adequate_set, ambient
        ):
            v.append(Violation("Wstar-box-gain", (w, x, yp)))
    return ValidationReport(v)


def _pure_chain_targets_rel(lf, r):
    out = set()
    for w in lf.worlds:
        sp = trans_closure(pure_s(lf, w)).pairs
        for x in lf.worlds:
            if (w, x) not in r.pairs:
                continue
            for y in lf.worlds:
                if (x, y) not in r.pairs:
                    continue
                for yp in lf.worlds:
                    if (y, yp) in sp:
                        out.add((w, x, yp))
    return sorted(out)


# ---------------------------------------------------------------------------
# Problems and deficiencies
# ---------------------------------------------------------------------------

def _problem_shapes(adequate_set):
    """(formula-as-stated, A, B) triples for every |> obligation whose
    negation can sit in a label: literal ~(A|>B) members of the set and the
    box translations."""
    out = []
    rhds, boxes = _rhd_translates(adequate_set)
    for f in rhds:
        out.append((Neg(f), f.left, f.right))
    for f in boxes:
        out.append((Neg(Rhd(Neg(f.inner), BOT)), Neg(f.inner), BOT))
    seen = set()
    uniq = []
    for t in out:
        if t[0] not in seen:
            seen.add(t[0])
            uniq.append(t)
    return uniq


def _negated_in(label, neg_formula, a, b, ambient):
    """Is the negated obligation in the label's virtual MCS?"""
    if b == BOT and is_neg(a):
        # box translation: ~(~B |> bot) is ~[]B
        return member(label, Box(a.left), ambient) is False
    return holds(label, neg_formula, ambient)


def find_problems(lf: LabeledFrame, adequate_set, ambient=None):
    """Working problem list: negated obligations with no witness in the
    corresponding critical cone.  Deterministic order."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    shapes = _problem_shapes(adequate_set)
    out = []
    for x in lf.worlds:
        lab = lf.nu_world[x]
        for neg_f, a, b in shapes:
            if not _negated_in(lab, neg_f, a, b, ambient):
                continue
            cone = critical_cone(lf, x, b)
            if not any(holds(lf.nu_world[y], a, ambient) for y in sorted(cone)):
                out.append(Problem(x, neg_f))
    return out


def find_problems_old(lf: LabeledFrame, adequate_set, ambient=None):
    """Problems in the original sense: the negated obligation is in the
    label, yet the combinatorial reading of the obligation holds at x."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    shapes = _problem_shapes(adequate_set)
    out = []
    for x in lf.worlds:
        lab = lf.nu_world[x]
        sx = lf.s_pairs(x)
        for neg_f, a, b in shapes:
            if not _negated_in(lab, neg_f, a, b, ambient):
                continue
            fulfilled = True
            for y in lf.r_succ(x):
                if not holds(lf.nu_world[y], a, ambient):
                    continue
                if not any(
                    holds(lf.nu_world[z], b, ambient)
                    for (u, z) in sx
                    if u == y
                ):
                    fulfilled = False
                    break
            if fulfilled:
                out.append(Problem(x, neg_f))
    return out


def find_deficiencies(lf: LabeledFrame, adequate_set, ambient=None):
    """Unmet S_x obligations, including the box translations."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    rhds, boxes = _rhd_translates(adequate_set)
    obligations = [(f, f.left, f.right) for f in rhds]
    obligations += [
        (Rhd(Neg(f.inner), BOT), Neg(f.inner), BOT) for f in boxes
    ]
    seen = set()
    uniq = []
    for t in obligations:
        if t[0] not in seen:
            seen.add(t[0])
            uniq.append(t)
    out = []
    for x in lf.worlds:
        lab = lf.nu_world[x]
        sx = lf.s_pairs(x)
        for f, c, d in uniq:
            in_label = (
                member(lab, Box(c.left), ambient) is True
                if d == BOT and is_neg(c)
                else holds(lab, f, ambient)
            )
            if not in_label:
                continue
            for y in lf.r_succ(x):
                if not holds(lf.nu_world[y], c, ambient):
                    continue
                if not any(
                    holds(lf.nu_world[z], d, ambient) for (u, z) in sx if u == y
                ):
                    out.append(Deficiency(x, y, f))
    return out


@dataclass
class TruthLemmaReport:
    holds: bool
    direct_mismatches: list
    problems: list
    problems_old: list
    deficiencies: list

    @property
    def combinatorial_ok(self):
        return not self.problems_old and not self.deficiencies

    @property
    def agreement(self):
        return self.combinatorial_ok == self.holds

    def lines(self):
        out = [f"truth lemma: {'holds' if self.holds else 'fails'}"]
        for x, f, got, want in self.direct_mismatches:
            out.append(
                f"  direct mismatch at {x}: {formula_key(f)} forced={got} label={want}"
            )
        for p in self.problems_old:
            out.append(f"  problem at {p.world}: {formula_key(p.formula)}")
        for d in self.deficiencies:
            out.append(
                f"  deficiency at {d.world} wrt {d.successor}: {formula_key(d.formula)}"
            )
        if not self.agreement:
            out.append(
                "  WARNING combinatorial criterion disagrees with the direct check"
            )
        return out


def truth_lemma_check(lf: LabeledFrame, adequate_set, ambient=None):
    """Two independent verdicts that must agree: (i) no problems nor
    deficiencies, (ii) forcing on the induced model matches label
    membership for every formula of the set, at every world."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    m = induced_model(lf)
    memo = {}
    mismatches = []
    for x in lf.worlds:
        for f in sorted(adequate_set, key=formula_key):
            got = forces(m, x, f, memo)
            want = f in lf.nu_world[x]
            if got != want:
                mismatches.append((x, f, got, want))
    report = TruthLemmaReport(
        holds=not mismatches,
        direct_mismatches=mismatches,
        problems=find_problems(lf, adequate_set, ambient),
        problems_old=find_problems_old(lf, adequate_set, ambient),
        deficiencies=find_deficiencies(lf, adequate_set, ambient),
    )
    return report.holds, report


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

def _deficiency_in_wrt(lf, w, x, adequate_set, ambient):
    """Is there a deficiency in w w.r.t. x (|> formulas of the set only)?"""
    lab = lf.nu_world[w]
    sw = lf.s_pairs(w)
    for f in sorted(adequate_set, key=formula_key):
        if not isinstance(f, Rhd):
            continue
        if not holds(lab, f, ambient):
            continue
        if not holds(lf.nu_world[x], f.left, ambient):
            continue
        if not any(
            holds(lf.nu_world[z], f.right, ambient) for (u, z) in sw if u == x
        ):
            return f
    return None


def check_invariants(
    lf: LabeledFrame, adequate_set, cls: FrameClass, ambient=None
) -> ValidationReport:
    """Evaluate the main and sub invariants for the target class."""
    if ambient is None:
        ambient = check_ambient(lf, adequate_set)
    v = []
    pool = sorted(box_gain_pool(adequate_set), key=formula_key)
    for x, y in sorted(lf.R):
        if not any(
            holds(lf.nu_world[y], g, ambient) and not holds(lf.nu_world[x], g, ambient)
            for g in pool
        ):
            v.append(Violation("I_D", (x, y), "no strict box gain along R", 14))
    if cls == FrameClass.IL:
        return ValidationReport(v)
    if cls == FrameClass.ILW:
        raise ValueError("no invariant battery is defined for the ILW class")

    d = derived(lf)
    K = d.K
    k1 = one_step(K)
    kmulti = multi_step(K)
    labels = lf.edge_labels()

    # I_box: K^1-predecessor labels linearly ordered by box inclusion
    for y in lf.worlds:
        preds = [x for x in lf.worlds if (x, y) in k1.pairs]
        for i, x1 in enumerate(preds):
            for x2 in preds[i + 1:]:
                if not (
                    box_subset(lf.nu_world[x1], lf.nu_world[x2], ambient)
                    or box_subset(lf.nu_world[x2], lf.nu_world[x1], ambient)
                ):
                    v.append(Violation("I_box", (y, x1, x2), "incomparable", 10))

    # I_d: no deficiency in w w.r.t. x when x is K^1- and K^{>=2}-reachable
    for w in lf.worlds:
        mixed = refl_trans_closure(union(s_rel(lf, w), K))
        for x in lf.worlds:
            if (w, x) not in k1.pairs:
                continue
            if not any(
                (w, xp) in kmulti.pairs and (xp, x) in mixed.pairs
                for xp in lf.worlds
            ):
                continue
            f = _deficiency_in_wrt(lf, w, x, adequate_set, ambient)
            if f is not None:
                v.append(Violation("I_d", (w, x), formula_key(f), 11))

    # I_S: the box-inclusion max of the K^1-predecessors of y' dominates x
    for w, x, yp in _k_chain_targets(lf, K):
        preds = [t for t in lf.worlds if (w, t) in K.pairs and (t, yp) in k1.pairs]
        if not preds:
            continue
        mx = box_max_of([lf.nu_world[t] for t in preds], ambient)
        if mx is None:
            v.append(
                Violation("I_S", (w, x, yp), "no box-inclusion max (see I_box)", 12)
            )
        elif not box_subset(lf.nu_world[x], mx, ambient):
            v.append(Violation("I_S", (w, x, yp), "max does not dominate x", 12))

    # I_N: N-cones closed under K-interpolants
    for w in lf.worlds:
        for a in labels:
            cone = n_cone(lf, w, a, K)
            for x in lf.worlds:
                if (w, x) not in K.pairs:
                    continue
                for y in sorted(cone):
                    if (x, y) in K.pairs and x not in cone:
                        v.append(Violation("I_N", (w, x, y), formula_key(a), 13))

    # I_M0: the full adequate ILM0 battery
    for viol in check_invariants_m0_frame(lf, ambient):
        v.append(viol)

    if cls == FrameClass.ILWstar:
        for w, x, yp in _pure_chain_targets(lf, K):
            if not box_proper_subset(
                lf.nu_world[x], lf.nu_world[yp], adequate_set, ambient
            ):
                v.append(Violation("I_wstar", (w, x, yp), "", 16))

    # sub-invariants
    spure_tr = {w: trans_closure(pure_s(lf, w)).pairs for w in lf.worlds}

    # J_u: unique K^{>=2} entry point into a pure chain
    for w in lf.worlds:
        for y in lf.worlds:
            entries = [
                x
                for x in lf.worlds
                if (w, x) in kmulti.pairs and (x, y) in spure_tr[w]
            ]
            for i, x1 in enumerate(entries):
                for x2 in entries[i + 1:]:
                    v.append(Violation("J_u", (w, y, x1, x2), "", 20))

    # J_K1: rule-3 patterns conclude in a single K step
    for w, x, z in _rule3_conclusions(lf, K):
        if (x, z) not in k1.pairs:
            v.append(Violation("J_K1", (w, x, z), "", 21))

    # J_below: antisymmetry of the derived ordering
    below = d.below
    for x in lf.worlds:
        for y in lf.worlds:
            if x < y and (x, y) in below.pairs and (y, x) in below.pairs:
                v.append(Violation("J_below", (x, y), "", 22))

    # J_N1 / J_N2: N-cones and pure chains
    for w in lf.worlds:
        for a in labels:
            cone = n_cone(lf, w, a, K)
            for vsrc in lf.worlds:
                for x, y in sorted(spure_tr[vsrc]):
                    if (
                        x in cone
                        and (w, y) in K.pairs
                        and y not in cone
                    ):
                        v.append(Violation("J_N1", (w, vsrc, x, y), formula_key(a), 23))
            for x, y in sorted(spure_tr[w]):
                if y in cone and x not in cone:
                    v.append(Violation("J_N2", (w, x, y), formula_key(a), 24))

    # J_nu1 .. J_nu4: edge labels vs K and pure chains
    for (w, y), _f in sorted(lf.nu_edge.items()):
        for t in lf.worlds:
            if (t, y) in K.pairs and (t, w) not in below.pairs:
                v.append(Violation("J_nu1", (w, y, t), "vKy needs v below w", 25))
        if (w, y) not in k1.pairs:
            v.append(Violation("J_nu2", (w, y), "edge label off K^1", 26))
    edge_sources = {}
    for (w, y), _f in sorted(lf.nu_edge.items()):
        edge_sources.setdefault(y, []).append(w)
    for y, srcs in sorted(edge_sources.items()):
        if len(set(srcs)) > 1:
            v.append(Violation("J_nu3", (y,) + tuple(sorted(set(srcs))), "", 27))
    for w in lf.worlds:
        for x, y in sorted(spure_tr[w]):
            if (w, y) not in lf.nu_edge:
                v.append(Violation("J_nu4", (w, x, y), "pure chain without label", 28))
    return ValidationReport(v)


def check_invariants_m0_frame(lf, ambient):
    """I_M0 delegated to the adequate ILM0 battery."""
    out = []
    for viol in check_adequate_m0(lf, ambient).violations:
        out.append(Violation("I_M0/" + viol.rule, viol.witness, viol.detail, 15))
    return out
