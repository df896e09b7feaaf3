"""The property suite: registered claims replayed over a corpus.

Each claim enumerates instances deterministically from the corpus and checks
one property per instance.  A failing instance always carries a witness
string naming the concrete counterexample (an element, a non-surjective
image, a non-factoring morphism), and can be re-checked from its key.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from . import commutator as comm
from . import corpus as corpus_mod
from . import varieties as V
from .algebra import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    compose,
    identity,
    kernel_pair,
    pullback,
    product,
    pullback_pair,
    quotient_by_congruence,
    RelationSpan,
)
from .category import ALGEBRAS, ExtCategory, ExtSquare, category_at
from .galois import (
    DiscreteFibrationDatum,
    GaloisStructure,
    abelianization_structure,
    apply_reflector,
    boolean_structure,
    centralize,
    centralize_via_commutator,
    commutator_abelianization_structure,
    identity_structure,
    is_covering,
    is_discrete_fibration,
    is_n_fold_central,
    is_trivial_covering,
    isomorphic_over_base,
    lift_structure,
)
from .search import all_congruences, congruence_lattice, homomorphisms

EXT1 = category_at(1)
EXT2 = category_at(2)

Outcome = tuple[bool, str]


@dataclass(frozen=True)
class Instance:
    key: str
    payload: object = field(compare=False, repr=False)


@dataclass(frozen=True)
class Claim:
    id: str
    anchor: str
    instances: Callable[["Context"], list[Instance]]
    check: Callable[["Context", object], Outcome]


@dataclass(frozen=True)
class Record:
    claim: str
    anchor: str
    instance: str
    verdict: bool
    witness: str

    def as_dict(self) -> dict:
        d = {"claim": self.claim, "anchor": self.anchor, "instance": self.instance,
             "verdict": "pass" if self.verdict else "fail"}
        if not self.verdict:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    corpus: str
    records: list[Record]
    # (id, anchor) of every claim that ran, so claims with no instances are still listed
    claims: list[tuple[str, str]] = field(default_factory=list)

    def _anchors(self) -> dict[str, str]:
        anchors = dict(self.claims)
        for r in self.records:
            anchors.setdefault(r.claim, r.anchor)
        return anchors

    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {c: {"instances": 0, "passed": 0, "failed": 0} for c, _ in self.claims}
        for r in self.records:
            s = out.setdefault(r.claim, {"instances": 0, "passed": 0, "failed": 0})
            s["instances"] += 1
            s["passed" if r.verdict else "failed"] += 1
        return out

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.verdict]

    @property
    def clean(self) -> bool:
        return not self.failures

    def failed_claims(self) -> list[str]:
        return sorted({r.claim for r in self.failures})

    def to_json(self) -> str:
        anchors = self._anchors()
        doc = {
            "corpus": self.corpus,
            "claims": [{"claim": c, "anchor": anchors[c], **s} for c, s in self.summary().items()],
            "records": [r.as_dict() for r in self.records],
            "totals": {"instances": len(self.records), "failed": len(self.failures)},
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    def to_text(self, verbose: bool = False) -> str:
        lines = [f"property suite over the {self.corpus} corpus"]
        anchors = self._anchors()
        for c, s in self.summary().items():
            status = "ok  " if s["failed"] == 0 else "FAIL"
            lines.append(f"{status} {c:28s} {s['passed']:5d}/{s['instances']:<5d} {anchors[c]}")
        for r in self.failures if not verbose else self.records:
            if not r.verdict:
                lines.append(f"  fail {r.claim} on {r.instance}: {r.witness}")
        lines.append(f"{len(self.records)} checks, {len(self.failures)} failed")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# instance material


def _desc(f: Homomorphism) -> str:
    return f"{f.source.name}->{f.target.name} {f.map.tolist()}"


def _sq_desc(sq: ExtSquare) -> str:
    return f"[{_desc(sq.source)} => {_desc(sq.target)}]"


def _quotient_between(q1: Homomorphism, q2: Homomorphism) -> Homomorphism:
    """For quotients ``q1, q2`` of one algebra with ``ker q1 <= ker q2``, the map ``q2 / q1``."""
    return ALGEBRAS.factor(q1, q2)


class Context:
    """Corpus-derived material shared by the claims, computed lazily."""

    def __init__(self, selector: str = "small"):
        self.selector = selector
        self.groups = corpus_mod.groups(selector)
        self.rings = corpus_mod.rings(selector)
        self.ab = abelianization_structure()
        self.ab_commutator = commutator_abelianization_structure()
        self.boolean = boolean_structure()
        self.identity = identity_structure()

    @cached_property
    def ab1(self) -> GaloisStructure:
        return lift_structure(self.ab)

    @cached_property
    def ab1_commutator(self) -> GaloisStructure:
        return lift_structure(self.ab, centralizer=lambda f: centralize_via_commutator(self.ab, f))

    @cached_property
    def group_surjections(self) -> list[Homomorphism]:
        """Every surjective homomorphism between corpus groups."""
        out = []
        for A in self.groups:
            for B in self.groups:
                if A.size % B.size == 0:
                    out.extend(h for h in homomorphisms(A, B) if h.is_surjective())
        return out

    @cached_property
    def ring_surjections(self) -> list[Homomorphism]:
        out = []
        for A in self.rings:
            for B in self.rings:
                if A.size % B.size == 0:
                    out.extend(h for h in homomorphisms(A, B) if h.is_surjective())
            out.extend(corpus_mod.quotient_maps(A))
        return out

    @cached_property
    def group_quotients(self) -> list[Homomorphism]:
        return [q for G in self.groups for q in corpus_mod.quotient_maps(G)]

    def lattice(self, X: FiniteAlgebra) -> list[Homomorphism]:
        return corpus_mod.quotient_maps(X)

    @cached_property
    def quotient_squares(self) -> list[ExtSquare]:
        """Squares ``X/M => X/(N v M)`` with top ``X -> X/N``, one per unordered pair ``{N, M}``
        of congruences of a corpus group of order at most 8."""
        out = []
        for X in self.groups:
            if X.size > 8:
                continue
            qs = self.lattice(X)
            for i, qn in enumerate(qs):
                for qm in qs[i:]:
                    out.append(self.pushout_square(qn, qm))
        return out

    def pushout_square(self, qn: Homomorphism, qm: Homomorphism) -> ExtSquare:
        X = qn.source
        join = kernel_pair(qn).join(kernel_pair(qm))
        _, qj = quotient_by_congruence(X, join, check=False)
        return ExtSquare(qm, _quotient_between(qn, qj), qn, _quotient_between(qm, qj))

    @cached_property
    def e1_squares(self) -> list[ExtSquare]:
        return [sq for sq in self.quotient_squares if EXT1.in_class(sq)]


# ---------------------------------------------------------------------------
# checks


def _iso_witness(f: Homomorphism) -> str:
    if not f.is_injective():
        m = f.map
        _, first, counts = np.unique(m, return_index=True, return_counts=True)
        v = int(m[first[np.argmax(counts > 1)]])
        xs = np.nonzero(m == v)[0][:2].tolist()
        return f"elements {xs[0]} and {xs[1]} of {f.source.name} have the same image {v}"
    missing = np.setdiff1d(np.arange(f.target.size), f.map)
    return f"element {int(missing[0])} of {f.target.name} is not in the image"


def arrow_iso_witness(C, f) -> str:
    if C.level == 0:
        return _iso_witness(f)
    if not C.base.is_iso(f.top):
        return "top: " + arrow_iso_witness(C.base, f.top)
    return "bottom: " + arrow_iso_witness(C.base, f.bottom)


def check_group_formula(ctx: Context, f: Homomorphism) -> Outcome:
    fbar, unit = centralize(ctx.ab, f)
    Q, qbar, _ = V.group_centralization_oracle(f)
    if isomorphic_over_base(fbar, qbar) is None:
        return False, (f"centralization has {fbar.source.size} elements over {f.target.name}, "
                       f"the quotient by [Ker f, A] has {Q.size}; no isomorphism over the base")
    return True, ""


def check_central_oracle(ctx: Context, f: Homomorphism) -> Outcome:
    engine = is_covering(ctx.ab, f)
    oracle = V.group_central_oracle(f)
    if engine != oracle:
        ker = V.kernel(f)
        z = V.center(f.source)
        outside = sorted(set(ker) - set(z))
        extra = f"; kernel element {outside[0]} is not central" if outside else "; kernel is central"
        return False, f"engine says covering={engine}, kernel-in-center oracle says {oracle}{extra}"
    return True, ""


def check_trivial_oracle(ctx: Context, f: Homomorphism) -> Outcome:
    engine = is_trivial_covering(ctx.ab, f)
    oracle = V.group_trivial_oracle(f)
    if engine != oracle:
        comparison = _trivial_comparison_witness(ctx.ab, f)
        return False, (f"engine says trivial={engine}, derived-subgroup oracle says {oracle}; "
                       f"comparison map: {comparison}")
    return True, ""


def _trivial_comparison_witness(G, f) -> str:
    from .galois import trivial_covering_comparison

    c = trivial_covering_comparison(G, f)
    return "isomorphism" if G.category.is_iso(c) else arrow_iso_witness(G.category, c)


def check_universal_property(ctx: Context, payload) -> Outcome:
    """Every slice map ``f -> g`` into a covering factors uniquely through the unit."""
    f, coverings = payload
    fbar, unit = centralize(ctx.ab, f)
    Abar = fbar.source
    for g in coverings:
        allowed = g.map[None, :] == f.map[:, None]
        for h in homomorphisms(f.source, g.source, allowed):
            over = g.map[None, :] == fbar.map[:, None]
            lifts = [k for k in homomorphisms(Abar, g.source, over) if np.array_equal(k.map[unit.map], h.map)]
            if len(lifts) != 1:
                return False, (f"slice map {h.map.tolist()} into covering {_desc(g)} has {len(lifts)} "
                               f"factorizations through the unit")
    return True, ""


def _covering_targets(ctx: Context) -> dict[str, list[Homomorphism]]:
    out: dict[str, list[Homomorphism]] = {}
    for g in ctx.group_surjections:
        if is_covering(ctx.ab, g):
            out.setdefault(g.target.key, []).append(g)
    return out


def _homs_into(ctx: Context, B: FiniteAlgebra) -> list[Homomorphism]:
    return [g for D in ctx.groups if D.size <= 8 for g in homomorphisms(D, B)]


def check_pullback_stable(ctx: Context, payload, predicate) -> Outcome:
    f, gs = payload
    for g in gs:
        P, pg, pf = pullback(g, f)
        if not predicate(ctx.ab, pg):
            return False, f"pullback along {_desc(g)} ({P.size} elements) loses the property"
    return True, ""


def check_split_covering_trivial(ctx: Context, payload) -> Outcome:
    f, s = payload
    if not is_trivial_covering(ctx.ab, f):
        return False, f"split by section {s.map.tolist()} and a covering, but {_trivial_comparison_witness(ctx.ab, f)}"
    return True, ""


def check_unit_e1(ctx: Context, f: Homomorphism) -> Outcome:
    fbar, unit = centralize(ctx.ab, f)
    if not unit.is_surjective():
        return False, _iso_witness(unit)
    sq = ExtSquare(f, fbar, unit, identity(f.target))
    w = EXT1.class_witness(sq)
    if w is not None:
        return False, f"unit square: {w}"
    return True, ""


def check_centralize_covering(ctx: Context, f: Homomorphism) -> Outcome:
    fbar, _ = centralize(ctx.ab, f)
    if not is_covering(ctx.ab, fbar):
        return False, f"{fbar.source.name} -> {fbar.target.name} is not a covering"
    return True, ""


def check_centralize_idempotent(ctx: Context, f: Homomorphism) -> Outcome:
    fbar, _ = centralize(ctx.ab, f)
    _, unit2 = centralize(ctx.ab, fbar)
    if not unit2.is_bijective():
        return False, f"second unit: {_iso_witness(unit2)}"
    return True, ""


def check_e1_identity(ctx: Context, f) -> Outcome:
    C = category_at(1)
    sq = C.identity(f)
    w = C.class_witness(sq)
    return (w is None), (w or "")


def check_e1_composition(ctx: Context, payload) -> Outcome:
    s, t = payload
    w = EXT1.class_witness(EXT1.compose(t, s))
    return (w is None), (f"composite: {w}" if w else "")


def check_e1_cancellation(ctx: Context, payload) -> Outcome:
    s, t = payload
    if not EXT1.in_class(EXT1.compose(t, s)):
        return True, ""
    w = EXT1.class_witness(t)
    return (w is None), (f"composite is in the class but the second factor is not: {w}" if w else "")


def check_e1_pullback(ctx: Context, payload) -> Outcome:
    s, t = payload
    cone = EXT1.pullback(s, t)
    w = EXT1.class_witness(cone.p2)
    return (w is None), (f"pulled-back square: {w}" if w else "")


def check_split_square(ctx: Context, payload) -> Outcome:
    C, sq = payload
    w = C.class_witness(sq)
    return (w is None), (w or "")


def check_strong_birkhoff(ctx: Context, payload) -> Outcome:
    G, f = payload
    sq = apply_reflector(G, f)
    C = ExtCategory(G.category)
    w = C.class_witness(sq)
    return (w is None), (f"naturality square: {w}" if w else "")


def check_commutator_oracle(ctx: Context, f: Homomorphism) -> Outcome:
    A = f.source
    bracket = comm.commutator(kernel_pair(f), Congruence.top(A))
    e = int(A.table("e"))
    block = bracket.block_of(e)
    oracle = V.relative_commutator_subgroup(A, V.kernel(f))
    if block != oracle:
        diff = sorted(set(block) ^ set(oracle))
        return False, f"identity block {block} differs from [Ker f, A] = {oracle} at element {diff[0]}"
    return True, ""


def check_centralize_agreement(ctx: Context, f: Homomorphism) -> Outcome:
    fbar, _ = centralize(ctx.ab, f)
    fbar2, _ = centralize_via_commutator(ctx.ab, f)
    if isomorphic_over_base(fbar, fbar2) is None:
        return False, (f"diagram construction gives {fbar.source.size} elements, commutator quotient gives "
                       f"{fbar2.source.size}; no isomorphism over the base")
    return True, ""


def check_identity_structure(ctx: Context, f: Homomorphism) -> Outcome:
    if not is_trivial_covering(ctx.identity, f):
        return False, f"not a trivial covering: {_trivial_comparison_witness(ctx.identity, f)}"
    fbar, unit = centralize(ctx.identity, f)
    if not unit.is_bijective():
        return False, f"centralization unit: {_iso_witness(unit)}"
    if isomorphic_over_base(fbar, f) is None:
        return False, "centralization is not isomorphic to the extension over its base"
    return True, ""


def check_boolean_output(ctx: Context, R: FiniteAlgebra) -> Outcome:
    Bq, unit = V.boolean_reflection(R)
    mul = Bq.table("mul")
    bad = [x for x in range(Bq.size) if mul[x, x] != x]
    if bad:
        return False, f"element {bad[0]} of the reflection satisfies a*a = {int(mul[bad[0], bad[0]])}"
    _, unit2 = V.boolean_reflection(Bq)
    if not unit2.is_bijective():
        return False, f"reflection is not idempotent: {_iso_witness(unit2)}"
    return True, ""


def check_boolean_values(ctx: Context, payload) -> Outcome:
    R, expected = payload
    Bq, _ = V.boolean_reflection(R)
    if Bq.size != expected:
        return False, f"reflection of {R.name} has {Bq.size} elements, expected {expected}"
    if expected == 2 and not (Bq.table("mul")[1, 1] == 1 and Bq.table("add")[1, 1] == 0):
        return False, f"reflection of {R.name} is not the two-element field"
    return True, ""


def check_discrete_fibration(ctx: Context, payload) -> Outcome:
    f, p = payload
    P, g, k = pullback(p, f)
    up = pullback(k, k)
    down = pullback(p, p)
    h = pullback_pair(down, compose(g, up.p1), compose(g, up.p2))
    d = DiscreteFibrationDatum(RelationSpan(up.obj, P, up.p1, up.p2), RelationSpan(down.obj, p.source, down.p1, down.p2),
                               h, g)
    if not is_discrete_fibration(d):
        return False, "second-projection square is not a pullback"
    return True, ""


def check_kernel_quotient(ctx: Context, theta: Congruence) -> Outcome:
    _, q = quotient_by_congruence(theta.algebra, theta)
    if kernel_pair(q) != theta:
        return False, f"kernel pair of the projection is {kernel_pair(q).classes()}"
    return True, ""


def check_maltsev(ctx: Context, A: FiniteAlgebra) -> Outcome:
    pair = comm.non_permuting_pair(A)
    if pair is None:
        return True, ""
    R, S = pair
    return False, f"congruences {R.classes()} and {S.classes()} do not permute"


def check_reflector_agreement(ctx: Context, G: FiniteAlgebra) -> Outcome:
    _, fast = V.group_abelianization(G)
    _, slow = comm.abelianization(G)
    if kernel_pair(fast) != kernel_pair(slow):
        x, y = np.argwhere(kernel_pair(fast).matrix() != kernel_pair(slow).matrix())[0].tolist()
        return False, f"elements {x} and {y} are identified by only one of the two reflectors"
    return True, ""


def check_commutator_laws(ctx: Context, G: FiniteAlgebra) -> Outcome:
    congs = congruence_lattice(G)
    br = {(i, j): comm.commutator(R, S) for i, R in enumerate(congs) for j, S in enumerate(congs)}
    for (i, j), c in br.items():
        R, S = congs[i], congs[j]
        if not c <= R.meet(S):
            return False, f"[R,S] not below R meet S for R={R.classes()}, S={S.classes()}"
        if c != br[(j, i)]:
            return False, f"[R,S] != [S,R] for R={R.classes()}, S={S.classes()}"
        for k, R2 in enumerate(congs):
            if R <= R2 and not c <= br[(k, j)]:
                return False, f"not monotone: R={R.classes()} <= R'={R2.classes()} with S={S.classes()}"
    return True, ""


def check_depth2(ctx: Context, payload) -> Outcome:
    sq, expected = payload
    path1 = is_n_fold_central(ctx.ab, sq, 2)
    fbar, unit = centralize(ctx.ab1_commutator, sq)
    path2 = EXT1.is_iso(unit)
    if path1 != expected or path2 != expected:
        return False, f"expected {expected}; direct test gave {path1}, centralize-then-compare gave {path2}"
    return True, ""


# ---------------------------------------------------------------------------
# instance builders


def _inst(items: Iterable, desc: Callable[[object], str]) -> list[Instance]:
    return [Instance(desc(x), x) for x in items]


def _split_sections(f: Homomorphism) -> list[Homomorphism]:
    allowed = f.map[None, :] == np.arange(f.target.size)[:, None]
    return list(homomorphisms(f.target, f.source, allowed))


def klein_square() -> ExtSquare:
    Z2 = V.cyclic(2)
    K = V.direct_product(Z2, Z2, "Z2xZ2")
    one = corpus_mod.groups("trivial")[0]
    p1 = Homomorphism(K, Z2, [0, 0, 1, 1])
    p2 = Homomorphism(K, Z2, [0, 1, 0, 1])
    t = Homomorphism(Z2, one, [0, 0])
    return ExtSquare(p1, t, p2, t)


def dihedral_square() -> ExtSquare:
    D4 = V.dihedral(4)
    one = corpus_mod.groups("trivial")[0]
    _, a = quotient_by_congruence(D4, V.coset_congruence(D4, V.subgroup_generated(D4, [1])), "D4/<r>")
    _, fp = quotient_by_congruence(D4, V.coset_congruence(D4, V.subgroup_generated(D4, [2, 4])), "D4/<r2,s>")
    return ExtSquare(fp, Homomorphism(a.target, one, [0, 0]), a, Homomorphism(fp.target, one, [0, 0]))


def _product_squares(ctx: Context) -> list[ExtSquare]:
    """Split epimorphisms ``f x g => g`` given by product projections."""
    out = []
    qs = [q for q in ctx.group_quotients if q.source.size <= 4]
    for f in qs:
        for g in qs:
            top = product(f.source, g.source)
            bot = product(f.target, g.target)
            fg = pullback_pair(bot, compose(f, top.p1), compose(g, top.p2))
            out.append(ExtSquare(fg, g, top.p2, bot.p2))
    return out


def _composable_pairs(ctx: Context) -> list[tuple[ExtSquare, ExtSquare]]:
    """Pairs ``(s, t)`` of quotient squares of one group with ``t . s`` defined.

    ``s`` is ``X/M => X/N -> X/(N v M)`` and ``t`` continues it to ``X/N2 -> X/(N2 v M)``
    for ``N <= N2``.
    """
    out = []
    for X in ctx.groups:
        if X.size > 8:
            continue
        qs = ctx.lattice(X)
        for qm in qs:
            for qn in qs:
                s = ctx.pushout_square(qn, qm)
                qj = _join_quotient(X, qn, qm)
                for qn2 in qs:
                    if not kernel_pair(qn) <= kernel_pair(qn2):
                        continue
                    qj2 = _join_quotient(X, qn2, qm)
                    t = ExtSquare(s.target, _quotient_between(qn2, qj2), _quotient_between(qn, qn2),
                                  _quotient_between(qj, qj2))
                    out.append((s, t))
    return out


def _join_quotient(X: FiniteAlgebra, qn: Homomorphism, qm: Homomorphism) -> Homomorphism:
    _, qj = quotient_by_congruence(X, kernel_pair(qn).join(kernel_pair(qm)), check=False)
    return qj


def _pullback_pairs(ctx: Context) -> list[tuple[ExtSquare, ExtSquare]]:
    """``(s, t)`` with ``s`` in the square class and ``t`` any square into the same extension."""
    out = []
    for X in ctx.groups:
        if X.size > 8:
            continue
        qs = ctx.lattice(X)
        for s in [sq for sq in ctx.e1_squares if sq.top.source == X]:
            f = s.target
            qn = s.top
            qj = _join_quotient(X, qn, s.source)
            for qk in qs:
                if not kernel_pair(qk) <= kernel_pair(qn):
                    continue
                for ql in qs:
                    if kernel_pair(qk) <= kernel_pair(ql) <= kernel_pair(qj):
                        h = _quotient_between(qk, ql)
                        t = ExtSquare(h, f, _quotient_between(qk, qn), _quotient_between(ql, qj))
                        out.append((s, t))
    return out


CLAIMS: list[Claim] = []


def claim(id: str, anchor: str, instances: Callable[[Context], list[Instance]]):
    def deco(fn):
        CLAIMS.append(Claim(id, anchor, instances, fn))
        return fn

    return deco


def _register() -> None:
    surj = lambda ctx: _inst(ctx.group_surjections, _desc)  # noqa: E731
    small_surj = lambda ctx: _inst([f for f in ctx.group_surjections if f.source.size <= 8], _desc)  # noqa: E731

    claim("group-formula", "centralization is A/[Ker f, A] -> B for groups", surj)(check_group_formula)
    claim("central-oracle", "coverings of groups are the extensions with central kernel", surj)(check_central_oracle)
    claim("trivial-oracle", "trivial coverings restrict to isomorphisms of commutator subgroups",
          surj)(check_trivial_oracle)

    def up_instances(ctx):
        cov = _covering_targets(ctx)
        return [Instance(_desc(f), (f, cov.get(f.target.key, [])))
                for f in ctx.group_surjections if f.source.size <= 8]

    claim("universal-property", "slice maps into coverings factor uniquely through the unit",
          up_instances)(check_universal_property)

    def pb_instances(pred):
        def build(ctx):
            return [Instance(_desc(f), (f, _homs_into(ctx, f.target)))
                    for f in ctx.group_quotients if pred(ctx.ab, f)]
        return build

    claim("trivial-pullback-stable", "pullbacks of trivial coverings are trivial coverings",
          pb_instances(is_trivial_covering))(lambda ctx, p: check_pullback_stable(ctx, p, is_trivial_covering))
    claim("covering-pullback-stable", "pullbacks of coverings are coverings",
          pb_instances(is_covering))(lambda ctx, p: check_pullback_stable(ctx, p, is_covering))

    def split_instances(ctx):
        out = []
        for f in ctx.group_surjections:
            if is_covering(ctx.ab, f):
                secs = _split_sections(f)
                if secs:
                    out.append(Instance(_desc(f), (f, secs[0])))
        return out

    claim("split-covering-trivial", "split epimorphic coverings are trivial coverings",
          split_instances)(check_split_covering_trivial)
    claim("unit-surjective-e1", "centralization units are surjective and their squares lie in the square class",
          small_surj)(check_unit_e1)
    claim("centralize-is-covering", "the centralization of an extension is a covering", small_surj)(
        check_centralize_covering)
    claim("centralize-idempotent", "centralizing a centralization gives an isomorphism unit", small_surj)(
        check_centralize_idempotent)

    claim("e1-isomorphisms", "identity squares lie in the square class",
          lambda ctx: _inst(ctx.group_quotients, _desc))(check_e1_identity)
    claim("e1-composition", "the square class is closed under vertical composition",
          lambda ctx: [Instance(f"{_sq_desc(s)} then {_sq_desc(t)}", (s, t)) for s, t in _composable_pairs(ctx)
                       if EXT1.in_class(s) and EXT1.in_class(t)])(check_e1_composition)
    claim("e1-cancellation", "if a composite of squares is in the class so is its second factor",
          lambda ctx: [Instance(f"{_sq_desc(s)} then {_sq_desc(t)}", (s, t))
                       for s, t in _composable_pairs(ctx)])(check_e1_cancellation)
    claim("e1-pullback", "squares in the class are stable under pointwise pullback",
          lambda ctx: [Instance(f"{_sq_desc(s)} along {_sq_desc(t)}", (s, t))
                       for s, t in _pullback_pairs(ctx)])(check_e1_pullback)

    def split_square_instances(ctx):
        out = [Instance(f"product {_sq_desc(sq)}", (EXT1, sq)) for sq in _product_squares(ctx)]
        for sq in ctx.e1_squares:
            out.append(Instance(f"kernel pair of {_sq_desc(sq)}", (EXT1, kernel_projection(EXT1, sq))))
        for cube in _cubes(ctx):
            if EXT2.in_class(cube):
                out.append(Instance(f"kernel pair of cube {_sq_desc(cube.source)} => {_sq_desc(cube.target)}",
                                    (EXT2, kernel_projection(EXT2, cube))))
        return out

    claim("e1-split", "split epimorphisms of extensions lie in the square class",
          split_square_instances)(check_split_square)

    claim("strong-birkhoff-0", "naturality squares of the reflector at extensions lie in the square class",
          lambda ctx: [Instance(_desc(f), (ctx.ab_commutator, f)) for f in ctx.group_surjections]
          + [Instance(_desc(f), (ctx.boolean, f)) for f in ctx.ring_surjections])(check_strong_birkhoff)
    claim("strong-birkhoff-1", "level-one naturality squares of centralization lie in the next square class",
          lambda ctx: [Instance(_sq_desc(sq), (ctx.ab1, sq)) for sq in ctx.e1_squares])(check_strong_birkhoff)

    claim("commutator-oracle", "identity block of [Eq(f), 1] is [Ker f, A]", surj)(check_commutator_oracle)
    claim("centralize-agreement", "diagram construction and commutator quotient agree over the base",
          surj)(check_centralize_agreement)
    claim("depth2-witnesses", "Klein square is double central, the dihedral square is not",
          lambda ctx: [Instance("klein", (klein_square(), True)),
                       Instance("dihedral", (dihedral_square(), False))])(check_depth2)
    claim("identity-structure", "under the identity reflector every extension is a trivial covering",
          lambda ctx: _inst(ctx.group_surjections + ctx.ring_surjections, _desc))(check_identity_structure)
    claim("boolean-output", "Boolean reflections satisfy a*a = a and are idempotent",
          lambda ctx: _inst(ctx.rings, lambda R: R.name))(check_boolean_output)
    claim("boolean-values", "Boolean reflections of Z/6 and Z/4 are Z/2",
          lambda ctx: [Instance(R.name, (R, 2)) for R in ctx.rings if R.name in ("Z/6", "Z/4")])(
        check_boolean_values)
    claim("discrete-fibration", "pulling back along an extension and taking kernel pairs gives a discrete fibration",
          lambda ctx: [Instance(f"{_desc(f)} along {_desc(p)}", (f, p)) for f in ctx.group_quotients
                       for p in ctx.group_quotients if p.target == f.target and f.source.size <= 8
                       and p.source.size <= 8])(check_discrete_fibration)
    claim("kernel-quotient", "quotient projections have the congruence as kernel pair",
          lambda ctx: [Instance(f"{t.algebra.name} {t.blocks.tolist()}", t) for A in ctx.groups + ctx.rings
                       if A.size <= 8 for t in all_congruences(A)])(check_kernel_quotient)
    claim("maltsev-audit", "congruences of corpus algebras permute",
          lambda ctx: _inst([A for A in ctx.groups + ctx.rings if A.size <= comm.DEFAULT_AUDIT_BOUND],
                            lambda A: A.name))(check_maltsev)
    claim("reflector-agreement", "table-based and commutator-based abelianization agree",
          lambda ctx: _inst([G for G in ctx.groups if G.size <= 8], lambda G: G.name))(check_reflector_agreement)
    claim("commutator-laws", "the commutator is symmetric, monotone and below the meet",
          lambda ctx: _inst([G for G in ctx.groups if G.size <= 8], lambda G: G.name))(check_commutator_laws)


def kernel_projection(C, arrow):
    """First kernel-pair projection of an arrow; it is split by the diagonal."""
    return C.pullback(arrow, arrow).p1


def _cubes(ctx: Context) -> list[ExtSquare]:
    """Arrows between quotient squares of one group of order at most 4.

    From the square for ``(N, M)`` to the square for ``(N2, M2)`` when
    ``N <= N2`` and ``M <= M2``.
    """
    out = []
    for X in ctx.groups:
        if X.size > 4:
            continue
        qs = ctx.lattice(X)
        pairs = [(qn, qm) for qn in qs for qm in qs]
        for qn, qm in pairs:
            for qn2, qm2 in pairs:
                if not (kernel_pair(qn) <= kernel_pair(qn2) and kernel_pair(qm) <= kernel_pair(qm2)):
                    continue
                s, s2 = ctx.pushout_square(qn, qm), ctx.pushout_square(qn2, qm2)
                qj, qj2 = _join_quotient(X, qn, qm), _join_quotient(X, qn2, qm2)
                top = ExtSquare(qm, qm2, identity(X), _quotient_between(qm, qm2))
                bottom = ExtSquare(s.target, s2.target, _quotient_between(qn, qn2), _quotient_between(qj, qj2))
                out.append(ExtSquare(s, s2, top, bottom))
    return out


_register()


# ---------------------------------------------------------------------------
# running


def claim_ids() -> list[str]:
    return [c.id for c in CLAIMS]


def run_claim(ctx: Context, c: Claim) -> list[Record]:
    out = []
    for inst in c.instances(ctx):
        out.append(evaluate(ctx, c, inst))
    return out


def evaluate(ctx: Context, c: Claim, inst: Instance) -> Record:
    try:
        ok, witness = c.check(ctx, inst.payload)
    except Exception as exc:  # a crash on an instance is a failed check, not a failed run
        ok, witness = False, f"{type(exc).__name__}: {exc}"
    return Record(c.id, c.anchor, inst.key, bool(ok), "" if ok else witness)


def run_property_suite(selector: str = "small", only: Iterable[str] | None = None, workers: int = 1) -> Report:
    ctx = Context(selector)
    chosen = [c for c in CLAIMS if only is None or c.id in set(only)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: run_claim(ctx, c), chosen))
    else:
        results = [run_claim(ctx, c) for c in chosen]
    return Report(selector, [r for rs in results for r in rs], [(c.id, c.anchor) for c in chosen])


def recheck(report: Report) -> list[Record]:
    """Re-run every failing record from its instance key; returns those that no longer fail."""
    ctx = Context(report.corpus)
    by_id = {c.id: c for c in CLAIMS}
    stale = []
    for r in report.failures:
        c = by_id[r.claim]
        inst = next((i for i in c.instances(ctx) if i.key == r.instance), None)
        if inst is None or evaluate(ctx, c, inst).verdict:
            stale.append(r)
    return stale
