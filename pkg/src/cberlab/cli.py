"""Batch command-line front end: instance generation, scenario execution,
JSON reporting, and the acceptance-suite driver.

Exit codes: 0 all checks pass, 1 a property assertion fails, 2 invalid input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

from .choice import choice_sequence_link, verify_windowed_link
from .eqrel import EqrelError, build_partition
from .groups import GroupError
from .instances import Instance, gen_chain, gen_instance
from .intervals import IntervalError
from .links import (
    LinkError,
    OuterAction,
    equidecompose,
    extend_link,
    hf_link,
    lift_from_link,
    link_finite_index,
    link_smooth,
    verify_link,
)
from .quasitile import TileError, ZdGroup, build_hierarchy, check_tiling, quasi_tile
from .report import Report, rational
from .suite import run_suite
from .tower import build_tower, stage_report, summability_report

INPUT_ERRORS = (EqrelError, GroupError, LinkError, TileError, IntervalError)


def _read_instance(args) -> tuple[Instance, dict]:
    if args.instance:
        if args.instance == "-":
            text = sys.stdin.read()
        else:
            with open(args.instance) as fh:
                text = fh.read()
        raw = json.loads(text)
        return Instance.from_json(text), raw
    inst = gen_instance(args.seed)
    return inst, json.loads(inst.to_json())


def _emit(report: Report, args) -> int:
    text = report.to_json()
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.all_pass else 1


def _fracs(text: str) -> list[Fraction]:
    return [Fraction(part) for part in text.split(",") if part.strip()]


def cmd_gen(args) -> int:
    inst = gen_instance(args.seed, args.size, args.index)
    text = inst.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_verify_link(args) -> int:
    inst, raw = _read_instance(args)
    if "L" not in raw:
        raise EqrelError("verify-link needs an 'L' field in the instance")
    l = build_partition(inst.e.n, raw["L"])
    ok, bad = verify_link(inst.e, inst.f, l)
    rep = Report({"task": "verify-link"}, "pass" if ok else "fail", seed=args.seed)
    rep.add_constraint("link-incidence: |E-class ∩ L-class| = 1 within F-classes",
                       str(bad) if bad else "all-ones", "1", ok)
    return _emit(rep, args)


def cmd_link(args) -> int:
    inst, _ = _read_instance(args)
    link = link_finite_index(inst.e, inst.f, inst.witness)
    ok, _bad = verify_link(inst.e, inst.f, link.l)
    rep = Report({"task": "link"}, "pass" if ok else "fail", seed=args.seed)
    rep.metrics["L"] = [list(c) for c in link.l.classes]
    rep.add_constraint("link-incidence", "constructed", "all-ones", ok)
    return _emit(rep, args)


def cmd_smooth_link(args) -> int:
    inst, _ = _read_instance(args)
    link = link_smooth(inst.e, inst.f, inst.witness)
    rep = Report({"task": "smooth-link"}, "pass", seed=args.seed)
    rep.metrics["L"] = [list(c) for c in link.l.classes]
    rep.add_constraint("link-incidence", "rank link", "all-ones", True)
    return _emit(rep, args)


def cmd_extend_link(args) -> int:
    ch = gen_chain(args.seed)
    base = link_finite_index(ch.e, ch.chain[0], ch.witnesses[0])
    ext = extend_link(ch.e, ch.chain[0], ch.chain[1], base, ch.witnesses[1])
    contained = base.l.refines(ext.l)
    rep = Report({"task": "extend-link"}, "pass" if contained else "fail", seed=args.seed)
    rep.metrics["L0"] = [list(c) for c in base.l.classes]
    rep.metrics["L1"] = [list(c) for c in ext.l.classes]
    rep.add_constraint("extension-containment: L ⊆ L'", "input link", "extended link", contained)
    return _emit(rep, args)


def cmd_hf_link(args) -> int:
    ch = gen_chain(args.seed)
    link = hf_link(ch.e, list(ch.chain), list(ch.witnesses))
    ok, _ = verify_link(ch.e, ch.chain[-1], link.l)
    rep = Report({"task": "hf-link"}, "pass" if ok else "fail", seed=args.seed)
    rep.metrics["L"] = [list(c) for c in link.l.classes]
    rep.add_constraint("link-incidence along the chain", "constructed", "all-ones", ok)
    return _emit(rep, args)


def cmd_lift(args) -> int:
    inst, _ = _read_instance(args)
    link = link_finite_index(inst.e, inst.f, inst.witness)
    cls_gens = tuple(
        tuple(inst.e.class_index(g[c[0]]) for c in inst.e.classes)
        for g in inst.witness
    )
    action = lift_from_link(OuterAction(inst.e, cls_gens), link)
    rep = Report({"task": "lift"}, "pass", seed=args.seed)
    rep.metrics["group_order"] = action.group.order
    rep.metrics["action"] = [list(p) for p in action.act]
    rep.add_constraint("lift: action axioms and class-bijectivity", "verified in construction",
                       "hold", True)
    return _emit(rep, args)


def cmd_equidecompose(args) -> int:
    inst, raw = _read_instance(args)
    if "A" not in raw or "B" not in raw:
        raise EqrelError("equidecompose needs 'A' and 'B' fields")
    wit = equidecompose(inst.e, raw["A"], raw["B"])
    rep = Report({"task": "equidecompose"}, "pass", seed=args.seed)
    rep.metrics["witness"] = [list(p) for p in wit.mapping] if wit else None
    rep.add_constraint("equidecomposable iff equal per-class counts",
                       "witness found" if wit else "no witness", "-", True)
    return _emit(rep, args)


def cmd_choice_link(args) -> int:
    inst, _ = _read_instance(args)
    wl = choice_sequence_link(inst.e, inst.f, args.depth)
    rep_w = verify_windowed_link(wl)
    rep = Report({"task": "choice-link", "depth": args.depth},
                 "pass" if rep_w.all_ones else "fail", seed=args.seed)
    rep.metrics["verified_classes"] = rep_w.verified_classes
    rep.metrics["truncated_points"] = rep_w.truncated_points
    rep.metrics["verdict"] = rep_w.verdict()
    rep.add_constraint("windowed all-ones incidence on emitted classes",
                       rep_w.verdict(), "all-ones", rep_w.all_ones)
    return _emit(rep, args)


def _make_group(name: str) -> ZdGroup:
    if name == "z":
        return ZdGroup(1)
    if name == "z2":
        return ZdGroup(2)
    raise TileError(f"unknown group {name!r} (use z or z2)")


def cmd_tile(args) -> int:
    group = _make_group(args.group)
    eps = Fraction(args.eps)
    side = round(args.size ** (1 / group.d))
    if args.group == "z":
        a = frozenset((x,) for x in range(args.size))
    else:
        a = frozenset(itertools.product(range(side), repeat=2))
    chain = [group.segment(int(x)) for x in args.chain.split(",")]
    qt = quasi_tile(group, a, chain, eps)
    chk = check_tiling(group, a, qt)
    ok = chk.eps_disjoint and chk.coverage_ok and chk.budget_scaled_ok
    rep = Report({"task": "tile", "group": args.group, "eps": str(eps)},
                 "pass" if ok else "fail", seed=args.seed)
    rep.metrics["coverage"] = qt.coverage
    rep.metrics["centers"] = [len(c) for c in qt.centers]
    rep.metrics["budget_raw_ok"] = chk.budget_raw_ok
    for key, value, relation, verdict in qt.ledger:
        rep.add_constraint(f"{key} [{relation}]", value, relation, verdict)
    rep.add_constraint("eps-disjointness (recheck)", "centers", ">= (1-eps)|B| new points",
                       chk.eps_disjoint)
    rep.add_constraint("coverage >= 1-eps (recheck)", chk.coverage, 1 - eps, chk.coverage_ok)
    rep.add_constraint("normalized budgets |B_i||C_i| <= p_i|A| (recheck)", "-", "-",
                       chk.budget_scaled_ok)
    return _emit(rep, args)


def cmd_hierarchy(args) -> int:
    eps = _fracs(args.eps)
    hier = build_hierarchy(_make_group(args.group), eps, args.levels)
    rep = Report({"task": "hierarchy", "levels": args.levels}, "pass", seed=args.seed)
    rep.metrics["sides"] = [lv.side for lv in hier.levels]
    rep.metrics["eps"] = [lv.eps for lv in hier.levels]
    rep.add_constraint("exact nested box tilings with the requested invariance",
                       "verified in construction", "hold", True)
    return _emit(rep, args)


def cmd_lift_sim(args) -> int:
    eps = _fracs(args.eps)
    summ = summability_report(eps)
    hier = build_hierarchy(_make_group(args.group), eps, args.stages)
    tower = build_tower(hier, args.stages)
    rep = Report({"task": "lift-sim", "stages": args.stages}, "pass", seed=args.seed)
    rep.add_constraint("summability: eps halves stage to stage",
                       summ["prefix_sum"], summ["tail_bound"], summ["halving"])
    stages_out = []
    for st in tower.stages:
        total = sum(t.measure for t in st.targets.values())
        rep.add_constraint(f"stage side {st.side}: sum |A| mu(X_A) = 1", total, 1, total == 1)
        stages_out.append(
            {
                "side": st.side,
                "eps": st.eps,
                "base": [list(map(rational, iv)) for iv in st.base.intervals],
                "targets": {
                    str(g): [list(map(rational, iv)) for iv in t.intervals]
                    for g, t in st.targets.items()
                },
            }
        )
    gen = tuple([1] + [0] * (tower.group.d - 1))
    for n in range(len(tower.stages) - 1):
        g = gen if n > 0 else tuple([0] * tower.group.d)
        r = stage_report(tower, n, g, g)
        rep.add_constraint(
            f"pair ({n},{n + 1}) agreement >= (1-eps)(1-3eps)"
            + ("" if r.agreement_premise else " [premise fails; not claimed]"),
            r.agreement, r.agreement_bound,
            (not r.agreement_premise) or r.agreement >= r.agreement_bound,
        )
        rep.add_constraint(
            f"stage {n + 1} action defect >= 1-2eps"
            + ("" if r.defect_premise else " [premise fails; not claimed]"),
            r.defect_domain, r.defect_bound,
            (not r.defect_premise) or r.defect_domain >= r.defect_bound,
        )
    rep.metrics["stages"] = stages_out
    return _emit(rep, args)


def cmd_suite(args) -> int:
    results = run_suite()
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"criterion {r.number:2d} [{r.name}]: {status} ({r.seconds:.1f}s) — {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cberlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        if instance:
            p.add_argument("--instance", help="instance JSON file, or - for stdin")

    p = sub.add_parser("gen", help="generate a seeded instance")
    common(p, instance=False)
    p.add_argument("--size", type=int, default=12)
    p.add_argument("--index", type=int, default=4)
    p.set_defaults(fn=cmd_gen)

    for name, fn in (
        ("verify-link", cmd_verify_link),
        ("link", cmd_link),
        ("smooth-link", cmd_smooth_link),
        ("lift", cmd_lift),
        ("equidecompose", cmd_equidecompose),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)

    for name, fn in (("extend-link", cmd_extend_link), ("hf-link", cmd_hf_link)):
        p = sub.add_parser(name)
        common(p, instance=False)
        p.set_defaults(fn=fn)

    p = sub.add_parser("choice-link")
    common(p)
    p.add_argument("--depth", type=int, default=400)
    p.set_defaults(fn=cmd_choice_link)

    p = sub.add_parser("tile")
    common(p, instance=False)
    p.add_argument("--group", default="z")
    p.add_argument("--eps", default="2/5")
    p.add_argument("--size", type=int, default=100000)
    p.add_argument("--chain", default="50", help="comma list of segment lengths")
    p.set_defaults(fn=cmd_tile)

    p = sub.add_parser("hierarchy")
    common(p, instance=False)
    p.add_argument("--group", default="z")
    p.add_argument("--eps", default="1/16,1/32,1/64,1/128")
    p.add_argument("--levels", type=int, default=3)
    p.set_defaults(fn=cmd_hierarchy)

    p = sub.add_parser("lift-sim")
    common(p, instance=False)
    p.add_argument("--group", default="z")
    p.add_argument("--eps", "--eps-seq", dest="eps", default="1/16,1/32,1/64,1/128")
    p.add_argument("--stages", type=int, default=3)
    p.set_defaults(fn=cmd_lift_sim)

    p = sub.add_parser("suite", help="run all acceptance criteria")
    common(p, instance=False)
    p.set_defaults(fn=cmd_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
