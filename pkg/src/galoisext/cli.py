"""Command-line entry point.

Exit status: 0 when the verdict is true or the suite is clean, 1 when the
verdict is false or a claim fails, 2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import commutator as comm
from . import corpus as corpus_mod
from . import galois as gal
from . import suite
from .algebra import AlgebraError, Congruence, FiniteAlgebra, Homomorphism, kernel_pair
from .category import ExtSquare, category_of, tower_depth
from .documents import (
    DocumentError,
    Workspace,
    algebra_document,
    congruence_document,
    emit_documents,
    morphism_document,
    parse_documents,
)
from .mutations import FAULTS, inject

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
STRUCTURES = ("ab", "boolean", "identity")


class UsageError(Exception):
    pass


def _structure(name: str) -> gal.GaloisStructure:
    if name == "ab":
        return gal.abelianization_structure()
    if name == "boolean":
        return gal.boolean_structure()
    return gal.identity_structure()


def _morphism(ws: Workspace, name: str) -> Homomorphism:
    if name not in ws.morphisms:
        raise UsageError(f"{name!r} is not a morphism in the workspace")
    return ws.morphisms[name]


def _square(ws: Workspace, name: str) -> ExtSquare:
    obj = ws.squares.get(name) or ws.towers.get(name)
    if not isinstance(obj, ExtSquare):
        raise UsageError(f"{name!r} is not a square in the workspace")
    return obj


def _congruence(ws: Workspace, A: FiniteAlgebra, spec: str) -> Congruence:
    if spec in ("top", "nabla"):
        return Congruence.top(A)
    if spec in ("bottom", "delta"):
        return Congruence.bottom(A)
    if spec.startswith("ker:"):
        f = _morphism(ws, spec[4:])
        if f.source != A:
            raise UsageError(f"{spec[4:]!r} does not start at the chosen algebra")
        return kernel_pair(f)
    if spec in ws.congruences:
        theta = ws.congruences[spec]
        if theta.algebra != A:
            raise UsageError(f"congruence {spec!r} lives on a different algebra")
        return theta
    raise UsageError(f"unknown congruence {spec!r}; use top, bottom, ker:<morphism> or a congruence name")


def _say(verdict: bool, text: str) -> int:
    print(f"{'true' if verdict else 'false'}: {text}")
    return EXIT_TRUE if verdict else EXIT_FALSE


def cmd_check_central(args, ws: Workspace) -> int:
    f = _morphism(ws, args.morphism)
    G = _structure(args.structure)
    ok = gal.is_covering(G, f)
    return _say(ok, f"{args.morphism} is{'' if ok else ' not'} a covering for {G.name}")


def cmd_check_trivial(args, ws: Workspace) -> int:
    f = _morphism(ws, args.morphism)
    G = _structure(args.structure)
    comparison = gal.trivial_covering_comparison(G, f)
    ok = G.category.is_iso(comparison)
    detail = "the comparison map is an isomorphism" if ok else suite.arrow_iso_witness(G.category, comparison)
    return _say(ok, f"{args.morphism} is{'' if ok else ' not'} a trivial covering for {G.name} ({detail})")


def cmd_centralize(args, ws: Workspace) -> int:
    f = _morphism(ws, args.morphism)
    G = _structure(args.structure)
    st = gal.centralization_stages(G, f)
    src_name, tgt_name = ws.endpoints[args.morphism]
    base = args.name or f"{args.morphism}_c"
    Abar = st.fbar.source
    docs = []
    if args.stages:
        for label, obj, note in (("Eq", st.kernel_pair.obj, "kernel pair of the extension"),
                                 ("P0", st.p0.obj, "pullback of the unit of A along the reflected first projection"),
                                 ("P1", st.p1.obj, "pullback of the unit of the kernel pair along the reflected "
                                                   "pairing of the triple pullback")):
            docs.append(algebra_document(obj, f"{base}.{label}", note))
    docs.append(algebra_document(Abar, f"{base}.A", "quotient of P0 by the relation induced by the span from P1"))
    docs.append(morphism_document(st.fbar, f"{base}.f", f"{base}.A", tgt_name,
                                  "induced map from the quotient to the base"))
    docs.append(morphism_document(st.unit, f"{base}.unit", src_name, f"{base}.A",
                                  "diagonal into the kernel pair, comparison into P0, then the quotient map"))
    text = emit_documents(docs)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(docs)} documents to {args.out}: {Abar.size}-element reflection over "
              f"{tgt_name}")
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


def cmd_check_e1(args, ws: Workspace) -> int:
    sq = _square(ws, args.square)
    C = category_of(sq)
    if not C.commutes(sq):
        raise UsageError(f"square {args.square!r} does not commute")
    w = C.class_witness(sq)
    return _say(w is None, f"{args.square} " + ("lies in the square class" if w is None else f"fails: {w}"))


def cmd_check_double_central(args, ws: Workspace) -> int:
    sq = _square(ws, args.square)
    ok = gal.is_n_fold_central(_structure(args.structure), sq, 2)
    return _say(ok, f"{args.square} is{'' if ok else ' not'} a double central extension")


def cmd_check_n_central(args, ws: Workspace) -> int:
    t = ws.arrow(args.tower)
    if tower_depth(t) != args.depth:
        raise UsageError(f"{args.tower!r} has depth {tower_depth(t)}, not {args.depth}")
    ok = gal.is_n_fold_central(_structure(args.structure), t, args.depth, max_depth=args.max_depth)
    return _say(ok, f"{args.tower} is{'' if ok else ' not'} a {args.depth}-fold central extension")


def cmd_commutator(args, ws: Workspace) -> int:
    if args.algebra not in ws.algebras:
        raise UsageError(f"{args.algebra!r} is not an algebra in the workspace")
    A = ws.algebras[args.algebra]
    R = _congruence(ws, A, args.left)
    S = _congruence(ws, A, args.right)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", comm.NonPermutableWarning)
        bracket = comm.commutator(R, S)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(emit_documents([congruence_document(bracket, args.name or "bracket", args.algebra)]))
    print(f"[{args.left}, {args.right}] on {args.algebra}: {bracket.classes()}")
    return EXIT_TRUE


def cmd_verify_lemmas(args, ws: Workspace) -> int:
    only = args.claims.split(",") if args.claims else None
    if only:
        unknown = sorted(set(only) - set(suite.claim_ids()))
        if unknown:
            raise UsageError(f"unknown claims: {', '.join(unknown)}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", corpus_mod.CorpusWarning)
        if args.corpus == "full":
            print("warning: full corpus includes S4 and order-16 groups; this run is slow", file=sys.stderr)
        if args.inject:
            with inject(args.inject):
                report = suite.run_property_suite(args.corpus, only, args.workers)
        else:
            report = suite.run_property_suite(args.corpus, only, args.workers)
    if args.json:
        Path(args.json).write_text(report.to_json())
    sys.stdout.write(report.to_text())
    return EXIT_TRUE if report.clean else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="galoisext", description="Central extensions and coverings of finite algebras.")
    p.add_argument("-w", "--workspace", action="append", default=[], metavar="PATH",
                   help="document file to load (repeatable)")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        return sp

    def with_structure(sp):
        sp.add_argument("--structure", choices=STRUCTURES, default="ab")
        return sp

    with_structure(verb("check-central", cmd_check_central, "is the morphism a covering")).add_argument("morphism")
    with_structure(verb("check-trivial", cmd_check_trivial, "is the morphism a trivial covering")).add_argument(
        "morphism")
    sp = with_structure(verb("centralize", cmd_centralize, "reflect an extension into coverings"))
    sp.add_argument("morphism")
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--name", help="prefix for emitted document names")
    sp.add_argument("--stages", action="store_true", help="also emit the intermediate pullbacks")
    verb("check-e1", cmd_check_e1, "is the square in the square class").add_argument("square")
    with_structure(verb("check-double-central", cmd_check_double_central, "is the square double central")
                   ).add_argument("square")
    sp = with_structure(verb("check-n-central", cmd_check_n_central, "is the tower n-fold central"))
    sp.add_argument("tower")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--max-depth", type=int, default=gal.DEFAULT_MAX_DEPTH)
    sp = verb("commutator", cmd_commutator, "commutator of two congruences")
    sp.add_argument("algebra")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--name")
    sp = verb("verify-lemmas", cmd_verify_lemmas, "replay the property suite over a corpus")
    sp.add_argument("--corpus", choices=corpus_mod.SELECTORS, default="small")
    sp.add_argument("--json", metavar="PATH", help="write the machine-readable report")
    sp.add_argument("--inject", choices=sorted(FAULTS), help="run with a deliberate engine fault")
    sp.add_argument("--claims", help="comma-separated claim ids to run")
    sp.add_argument("--workers", type=int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_TRUE
    try:
        ws = parse_documents(args.workspace) if args.workspace else Workspace()
        return args.fn(args, ws)
    except (UsageError, DocumentError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
