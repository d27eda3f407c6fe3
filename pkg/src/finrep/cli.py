"""Command-line driver over declaration documents.

Every command reads a document, runs one checker or builder, prints one
report to standard output, and exits 0 when every verdict passed, 1 when
a violation was found, 2 on input errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import functors as functors_mod
from .document import Document, DocumentError, parse_document
from .errors import BudgetError, CarrierMismatch, UnvalidatedError
from .hor import (
    PreorderedSet,
    check_tilde_soundness,
    hat_report,
    hor_arrow,
    instantiate,
    mon_hor,
    validate_hor,
)
from .kleene import ka_hor
from .laws import LawConfig, relation_law_suite
from .morphism import product, validate_morphism
from .naturality import (
    ProbeUniverse,
    classify_linearity,
    is_natural_relation,
    is_natural_transformation,
    linearity_check,
    membership_family,
    powerset_union,
    powerset_unit,
    samevars_family,
    term_flatten,
    term_unit,
    varlist_family,
)
from .naturality import IndexedFunction
from .reduction import compose_reductions, validate_reduction, validate_syntactic_closure
from .report import Report, from_law_report, from_verdicts, render
from .represent import (
    is_exact,
    membership_representation,
    trivial_representation,
    validate_representation,
)
from .verdict import Verdict


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finrep",
        description="finite checkers for representations, reductions, and liftings",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--probe-max", type=int, default=None, help="largest probe carrier (default 3)")
    common.add_argument("--powerset-cap", type=int, default=None, help="subset bound for powerset builders (default 4)")
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")
    common.add_argument("--samples", type=int, default=None, help="sampled relations per carrier pair")
    common.add_argument("--budget", type=int, default=None, help="carrier element budget override")
    common.add_argument("--format", choices=["text", "structured"], default="text")

    sub = parser.add_subparsers(dest="group", required=True)

    check = sub.add_parser("check", parents=[common], help="validate a declared object")
    check.add_argument(
        "what",
        choices=["rep", "exact", "morphism", "reduction", "closure", "naturality", "linearity"],
    )
    check.add_argument("doc")
    check.add_argument("--name", help="declaration to check (default: the only one of its kind)")
    check.add_argument("--family", help="family declaration for naturality/linearity")
    check.add_argument("--side", choices=["both", "left", "right"], default="both")
    check.add_argument("--mode", choices=["both", "relations", "functions"], default="both")

    build = sub.add_parser("build", parents=[common], help="construct and validate a built-in object")
    build.add_argument("what", choices=["trivial", "membership", "product"])
    build.add_argument("doc")
    build.add_argument("--rel", help="relation for the trivial construction")
    build.add_argument("--set", dest="set_name", help="alphabet set for the membership construction")
    build.add_argument("--left", help="left factor representation")
    build.add_argument("--right", help="right factor representation")

    reduce_p = sub.add_parser("reduce", parents=[common], help="compose declared reductions")
    reduce_p.add_argument("what", choices=["compose"])
    reduce_p.add_argument("doc")
    reduce_p.add_argument("--first")
    reduce_p.add_argument("--second")

    hor_p = sub.add_parser("hor", parents=[common], help="instantiate and lift higher-order structures")
    hor_p.add_argument("what", choices=["instantiate", "arrow", "lift-preorder", "lift-rep"])
    hor_p.add_argument("doc")
    hor_p.add_argument("--hor", dest="hor_name", help="hor declaration (default: the only one)")
    hor_p.add_argument("--set", dest="set_name", help="alphabet set to instantiate at")
    hor_p.add_argument("--fun", dest="fun_name", help="declared function for the arrow action")
    hor_p.add_argument("--preorder", dest="preorder_name")
    hor_p.add_argument("--name", help="representation to lift over")

    laws_p = sub.add_parser("laws", parents=[common], help="run the relation-algebra law suite")
    laws_p.add_argument("what", choices=["relcore"])
    laws_p.add_argument("doc", nargs="?")

    return parser


def _named(doc: Document, kind: str, name: str | None):
    if name is not None:
        return doc.lookup(kind, name)
    return doc.only(kind).obj


def _two_named(doc: Document, kind: str, first: str | None, second: str | None):
    if first is not None and second is not None:
        return doc.lookup(kind, first), doc.lookup(kind, second)
    if first is None and second is None:
        found = [d for d in doc.decls if d.kind == kind]
        if len(found) != 2:
            raise DocumentError(
                f"document declares {len(found)} {kind}s, name two explicitly"
            )
        return found[0].obj, found[1].obj
    raise DocumentError(f"name both {kind}s or neither")


def _probe_config(doc: Document | None):
    if doc is None:
        return {}
    found = [d for d in doc.decls if d.kind == "probes"]
    return found[0].obj if len(found) == 1 else {}


def _probes(doc: Document | None, args) -> ProbeUniverse:
    cfg = _probe_config(doc)
    max_size = args.probe_max if args.probe_max is not None else cfg.get("max", 3)
    samples = args.samples if args.samples is not None else cfg.get("samples", 25)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    return ProbeUniverse(max_size=max_size, rel_samples=samples, seed=seed)


def _check_keys(config: dict, allowed: set, what: str):
    extra = set(config) - allowed - {"builtin", "sig_name"}
    if extra:
        raise DocumentError(f"{what} does not take parameter {sorted(extra)[0]!r}")


def _build_family(config: dict, args):
    builtin = config["builtin"]
    cap = config.get("cap", args.powerset_cap if args.powerset_cap is not None else 4)
    if builtin == "membership":
        _check_keys(config, {"cap"}, "membership family")
        return membership_family(cap)
    if builtin == "singleton":
        _check_keys(config, {"cap"}, "singleton family")
        return powerset_unit(cap)
    if builtin == "union":
        _check_keys(config, {"cap", "outer"}, "union family")
        return powerset_union(cap, config.get("outer", 1 << cap))
    _check_keys(config, {"sig", "depth"}, f"{builtin} family")
    sig = config.get("sig")
    if sig is None:
        raise DocumentError(f"{builtin} family needs sig <signature>")
    depth = config.get("depth", 2)
    builders = {
        "term-unit": term_unit,
        "term-flatten": term_flatten,
        "varlist": varlist_family,
        "samevars": samevars_family,
    }
    return builders[builtin](sig, depth)


def _build_hor(config: dict):
    if config["builtin"] == "mon":
        _check_keys(config, {"depth"}, "mon hor")
        return mon_hor(config.get("depth", 3))
    _check_keys(config, {"size", "words", "mode"}, "ka hor")
    mode = config.get("mode", "semantic")
    if mode not in ("semantic", "axiomatic"):
        raise DocumentError(f"ka mode must be semantic or axiomatic, got {mode!r}")
    return ka_hor(config.get("size", 3), config.get("words", 2), leq_mode=mode)


def _carrier_scope(*sets) -> str:
    inside = ", ".join(f"{len(s)} {s.name}" for s in sets)
    return f"exhaustive over declared carriers ({inside})"


def _exactness_finding(rep) -> Verdict:
    sem = is_exact(rep)
    return Verdict(
        "exactness-finding",
        True,
        witness=sem.witness,
        note="exact at this instance" if sem.ok else "not exact at this instance",
    )


def _cmd_check(args, doc: Document) -> Report:
    command = f"check {args.what}"
    if args.what == "rep":
        rep = _named(doc, "representation", args.name)
        lr = validate_representation(rep)
        return from_law_report(command, lr, scope=_carrier_scope(rep.traces, rep.exprs))
    if args.what == "exact":
        rep = _named(doc, "representation", args.name)
        verdicts = list(validate_representation(rep).verdicts)
        verdicts.append(is_exact(rep))
        return from_verdicts(
            command, f"representation {rep.name!r}", verdicts,
            scope=_carrier_scope(rep.traces, rep.exprs),
        )
    if args.what == "morphism":
        m = _named(doc, "morphism", args.name)
        lr = validate_morphism(m)
        return from_law_report(
            command, lr, scope=_carrier_scope(m.source.exprs, m.target.exprs)
        )
    if args.what == "reduction":
        r = _named(doc, "reduction", args.name)
        lr = validate_reduction(r)
        return from_law_report(
            command, lr, scope=_carrier_scope(r.source.exprs, r.target.exprs)
        )
    if args.what == "closure":
        coarse, fine, down = _named(doc, "closure", args.name)
        lr = validate_syntactic_closure(coarse, fine, down)
        return from_law_report(command, lr, scope=_carrier_scope(coarse.exprs))
    family = _named(doc, "family", args.family if args.family else args.name)
    probes = _probes(doc, args)
    built = _build_family(family, args)
    if args.what == "naturality":
        if isinstance(built, IndexedFunction):
            v = is_natural_transformation(built, probes)
        else:
            v = is_natural_relation(built, probes)
        return from_verdicts(
            command, built.name, [v], scope=probes.scope, seed=probes.seed
        )
    rho = built.graph_family() if isinstance(built, IndexedFunction) else built
    if args.side == "both" and args.mode == "both":
        lr = classify_linearity(rho, probes)
    else:
        mode = args.mode if args.mode != "both" else "relations"
        lr = linearity_check(rho, probes, side=args.side, mode=mode)
    return from_law_report(command, lr, seed=probes.seed)


def _cmd_build(args, doc: Document) -> Report:
    command = f"build {args.what}"
    if args.what == "trivial":
        x = _named(doc, "rel", args.rel)
        rep = trivial_representation(x)
        verdicts = list(validate_representation(rep).verdicts)
        verdicts.append(is_exact(rep))
        return from_verdicts(
            command, f"representation {rep.name!r}", verdicts,
            scope=_carrier_scope(rep.traces, rep.exprs),
        )
    if args.what == "membership":
        a = _named(doc, "set", args.set_name)
        cap = args.powerset_cap if args.powerset_cap is not None else 4
        rep = membership_representation(a, cap=cap)
        verdicts = list(validate_representation(rep).verdicts)
        verdicts.append(is_exact(rep))
        return from_verdicts(
            command, f"representation {rep.name!r}", verdicts,
            scope=_carrier_scope(rep.traces, rep.exprs) + f", subset bound {cap}",
        )
    r1, r2 = _two_named(doc, "representation", args.left, args.right)
    pre = []
    for rep in (r1, r2):
        report = validate_representation(rep)
        if not report.passed:
            pre.extend(report.verdicts)
    if pre:
        return from_verdicts(command, "product factors", pre)
    rp, p1, p2 = product(r1, r2)
    verdicts = list(validate_representation(rp).verdicts)
    for tag, m in (("left-projection", p1), ("right-projection", p2)):
        for v in validate_morphism(m).verdicts:
            verdicts.append(Verdict(f"{tag}-{v.law}", v.ok, v.witness, v.note))
    return from_verdicts(
        command, f"representation {rp.name!r}", verdicts,
        scope=_carrier_scope(rp.traces, rp.exprs),
    )


def _cmd_reduce(args, doc: Document) -> Report:
    first, second = _two_named(doc, "reduction", args.first, args.second)
    composite = compose_reductions(first, second)
    lr = validate_reduction(composite)
    return from_law_report(
        "reduce compose", lr,
        scope=_carrier_scope(composite.source.exprs, composite.target.exprs),
    )


def _cmd_hor(args, doc: Document) -> Report:
    command = f"hor {args.what}"
    h = _build_hor(_named(doc, "hor", args.hor_name))
    if args.what == "instantiate":
        a = _named(doc, "set", args.set_name)
        rep = instantiate(h, a)
        verdicts = list(validate_representation(rep).verdicts)
        verdicts.append(_exactness_finding(rep))
        return from_verdicts(
            command, f"representation {rep.name!r}", verdicts,
            scope=_carrier_scope(rep.traces, rep.exprs),
        )
    if args.what == "arrow":
        f = _named(doc, "fun", args.fun_name)
        m = hor_arrow(h, f)
        lr = validate_morphism(m)
        return from_law_report(
            command, lr, scope=_carrier_scope(m.source.exprs, m.target.exprs)
        )
    if args.what == "lift-preorder":
        order = _named(doc, "preorder", args.preorder_name)
        p = PreorderedSet(order.src, order)
        lr = check_tilde_soundness(h, p)
        return from_law_report(command, lr, scope=_carrier_scope(order.src))
    rep = _named(doc, "representation", args.name)
    base = validate_representation(rep)
    if not base.passed:
        return from_law_report(command, base)
    lifted, lr = hat_report(h, rep)
    return from_law_report(
        command, lr, scope=_carrier_scope(lifted.traces, lifted.exprs)
    )


def _cmd_laws(args, doc: Document | None) -> Report:
    cfg = _probe_config(doc)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    samples = args.samples if args.samples is not None else cfg.get("samples", 1000)
    exhaustive_max = args.probe_max if args.probe_max is not None else 2
    config = LawConfig(exhaustive_max=exhaustive_max, samples=samples, seed=seed)
    lr = relation_law_suite(config)
    return from_law_report("laws relcore", lr, seed=seed)


def _dispatch(args) -> Report:
    doc = None
    if getattr(args, "doc", None) is not None:
        try:
            with open(args.doc, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise DocumentError(f"cannot read {args.doc!r}: {e.strerror}") from None
        doc = parse_document(text)
    if args.group == "check":
        return _cmd_check(args, doc)
    if args.group == "build":
        return _cmd_build(args, doc)
    if args.group == "reduce":
        return _cmd_reduce(args, doc)
    if args.group == "hor":
        return _cmd_hor(args, doc)
    return _cmd_laws(args, doc)


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else int(e.code or 0)
    old_budget = functors_mod._CARRIER_BUDGET
    if args.budget is not None:
        functors_mod._CARRIER_BUDGET = args.budget
    try:
        report = _dispatch(args)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetError as e:
        print(f"error: budget exceeded: {e}", file=sys.stderr)
        return 2
    except (CarrierMismatch, UnvalidatedError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    finally:
        functors_mod._CARRIER_BUDGET = old_budget
    sys.stdout.write(render(report, args.format))
    return report.status


if __name__ == "__main__":
    raise SystemExit(main())
