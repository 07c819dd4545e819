"""Command-line front end: classify, epsilon, expand, membership, r1, r2,
epsilon-test, verify, cohomology.

Exit codes: 0 for success / true verdicts, 1 for false verdicts or failed
checks, 2 for usage errors.  JSON output is byte-deterministic for identical
inputs.  STABFORGE_PREC_OVERRIDE overrides default precisions in CI.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import classifier, cohomology, unitclasses
from .errors import StabforgeError
from .localfield import FieldElem, FieldTower, epsilon_alpha
from .order import OrderParams
from .padic import PadicInt, parse_literal
from .relscript import run_script


def _emit(obj, mode="json"):
    if mode == "json":
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        _emit_table(obj)


def _emit_table(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                sys.stdout.write(f"{prefix}{k}:\n")
                _emit_table(v, prefix + "  ")
            else:
                sys.stdout.write(f"{prefix}{k}: {v}\n")
    elif isinstance(obj, list):
        for v in obj:
            _emit_table(v, prefix)
    else:
        sys.stdout.write(f"{prefix}{obj}\n")


def _prec_override(value):
    env = os.environ.get("STABFORGE_PREC_OVERRIDE")
    if value is not None:
        return value
    if env:
        return int(env)
    return None


def _parse_unit(text, p, prec):
    text = text.strip()
    if text.startswith("p:"):
        x = parse_literal(text)
        if x.p != p:
            raise ValueError("unit literal has the wrong prime")
        return x
    return PadicInt.from_integer(int(text), p, prec)


def _parse_field_elem(tower, text):
    """Sum of 'pi^i * [c0,c1,...]' terms, or a plain integer."""
    text = text.strip()
    try:
        return tower.from_int(int(text))
    except ValueError:
        pass
    acc = tower.zero()
    for chunk in text.split("+"):
        chunk = chunk.strip()
        power = 0
        coeffs = [1]
        if "[" in chunk:
            head, _, rest = chunk.partition("[")
            body = rest.rstrip("] \t")
            coeffs = [int(c) for c in body.split(",") if c.strip()]
            head = head.rstrip("* \t")
        else:
            head = chunk
        head = head.strip()
        if head:
            if not head.startswith("pi"):
                raise ValueError(f"bad term {chunk!r}")
            if head.startswith("pi^"):
                power = int(head[3:])
            elif head == "pi":
                power = 1
            else:
                raise ValueError(f"bad term {chunk!r}")
        grid = [[0] * tower.f for _ in range(tower.e)]
        for j, c in enumerate(coeffs):
            if j >= tower.f:
                raise ValueError("coefficient list longer than the residue degree")
            grid[0][j] = c
        acc = acc + tower.from_grid(grid) * tower.pi() ** power
    return acc


def _digits_json(digits, f):
    if f == 1:
        return [d[0] for d in digits]
    return [list(d) for d in digits]


def build_parser():
    ap = argparse.ArgumentParser(
        prog="stabforge",
        description="Exact arithmetic in p-adic division algebras and the "
        "classification of maximal finite stabilizer subgroups.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser(
        "classify",
        help="maximal finite subgroup classes of the extended group",
        description="Classification rules thm024/thm032 (inner classes), "
        "thm250/thm259/thm260 (extension branches) and the n=2 tables "
        "thm261/thm264.",
    )
    c.add_argument("--p", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--u-mod", type=int, default=1, help="u mod p^2 (odd p) or mod 8 (p=2)")
    c.add_argument("--inner", action="store_true", help="classes inside the stabilizer group")
    c.add_argument("--abelian", action="store_true", help="abelian classes, as (alpha, d) pairs")
    c.add_argument("--scan", action="store_true", help="sweep a grid, emit a table")
    c.add_argument("--p-max", type=int, default=3)
    c.add_argument("--n-max", type=int, default=6)
    c.add_argument("--mode", choices=["json", "table"], default="json")

    e = sub.add_parser(
        "epsilon",
        help="digit expansion of the unit epsilon_alpha",
        description="The unit with p*epsilon = pi^phi(p^alpha), its digit "
        "expansions (prop290/prop111/example292 data).",
    )
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--alpha", type=int, required=True)
    e.add_argument("--f", type=int, default=1)
    e.add_argument("--pi-prec", type=int, default=None)
    e.add_argument("--mode", choices=["json", "table"], default="json")

    x = sub.add_parser(
        "expand",
        help="pi-adic digit expansion of a field element",
        description="Teichmueller digit expansions in cyclotomic towers.",
    )
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--alpha", type=int, required=True)
    x.add_argument("--f", type=int, default=1)
    x.add_argument("--elem", required=True, help="integer or 'pi^i * [c0,c1,...] + ...'")
    x.add_argument("--pi-prec", type=int, default=None)
    x.add_argument("--mode", choices=["json", "table"], default="json")

    m = sub.add_parser(
        "membership",
        help="power-class membership in <zeta, U_1^k>",
        description="Filtration-quotient membership (lemma198/thm200/thm113 "
        "obstructions); exit code 1 when the element is not a member.",
    )
    m.add_argument("--p", type=int, required=True)
    m.add_argument("--alpha", type=int, required=True)
    m.add_argument("--f", type=int, default=1)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--elem", help="element literal; defaults to epsilon_alpha")
    m.add_argument("--u", default="1", help="divide the element by this unit")
    m.add_argument("--no-mu", action="store_true", help="span without the torsion generator")
    m.add_argument("--mode", choices=["json", "table"], default="json")

    r1 = sub.add_parser(
        "r1",
        help="admissible first extension indices",
        description="Largest r1 with a valuation-1/r1 extension (cor202 for "
        "odd p, cor115/cor294 for p=2).",
    )
    for flag in ("--p", "--n", "--alpha", "--d"):
        r1.add_argument(flag, type=int, required=True)
    r1.add_argument("--u", default="1")
    r1.add_argument("--mode", choices=["json", "table"], default="json")

    r2 = sub.add_parser(
        "r2",
        help="admissible second extension indices",
        description="Divisors of the greatest allowed index (thm223/thm225, "
        "counts per cor224).",
    )
    for flag in ("--p", "--n", "--alpha", "--d", "--r1"):
        r2.add_argument(flag, type=int, required=True)
    r2.add_argument("--u", default="1")
    r2.add_argument("--mode", choices=["json", "table"], default="json")

    et = sub.add_parser(
        "epsilon-test",
        help="triviality of epsilon_alpha/u modulo <F_0, r1-th powers>",
        description="The extension-existence criterion thm098; exit code 1 "
        "when the class is non-trivial.",
    )
    for flag in ("--p", "--n", "--alpha", "--d", "--r1"):
        et.add_argument(flag, type=int, required=True)
    et.add_argument("--u", default="1")
    et.add_argument("--mode", choices=["json", "table"], default="json")

    v = sub.add_parser(
        "verify",
        help="run a relation script against the order",
        description="Evaluates 'name := expr' and 'check a == b' lines over "
        "W_n<S> (remark210/example049 relation suites); exit 0 iff all hold.",
    )
    v.add_argument("script", help="path to the .rel file")
    v.add_argument("--p", type=int, default=2)
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--u", default="1")
    v.add_argument("--p-prec", type=int, default=None)
    v.add_argument("--s-prec", type=int, default=None)

    ch = sub.add_parser(
        "cohomology",
        help="cyclic group cohomology of a module",
        description="H^0, H^odd, H^even via kernels/images of 1-t and the "
        "norm (the lemma215-family engine).",
    )
    ch.add_argument("--rank", type=int, default=0)
    ch.add_argument("--torsion", default="", help="comma-separated orders")
    ch.add_argument("--action", required=True, help="rows 'a,b;c,d'")
    ch.add_argument("--order", type=int, required=True)
    ch.add_argument("--golden", action="store_true", help="run the transcribed golden suite")
    ch.add_argument("--mode", choices=["json", "table"], default="json")

    return ap


def _cmd_classify(args):
    if args.scan:
        primes = [q for q in (2, 3, 5, 7) if q <= args.p_max]
        rows = []
        for p, n, u, rep in classifier.scan(primes, range(1, args.n_max + 1), range(1, 9)):
            rows.append({"p": p, "n": n, "u_mod": u, "classes": [c.name for c in sorted(rep.classes)]})
        if args.mode == "table":
            for r in rows:
                sys.stdout.write(
                    f"p={r['p']} n={r['n']} u={r['u_mod']}: {', '.join(r['classes'])}\n"
                )
        else:
            _emit(rows)
        return 0
    if args.p is None or args.n is None:
        raise ValueError("classify needs --p and --n (or --scan)")
    if args.inner:
        rep = classifier.maximal_in_Sn(args.p, args.n)
    elif args.abelian:
        rep = classifier.abelian_classes(args.p, args.n)
    else:
        rep = classifier.maximal_in_Gn(classifier.ClassificationInput(args.p, args.n, args.u_mod))
    _emit(rep.to_json(), args.mode)
    return 0


def _cmd_epsilon(args):
    n_pi = _prec_override(args.pi_prec)
    if n_pi is None:
        n_pi = args.p**args.alpha + 2
    tower = FieldTower.for_pi_prec(args.p, args.f, args.alpha, n_pi)
    eps = epsilon_alpha(tower)
    out = {
        "p": args.p,
        "alpha": args.alpha,
        "precision": n_pi,
        "epsilon_digits": _digits_json(eps.pi_digit_expansion(n_pi), args.f),
        "neg_epsilon_digits": _digits_json((-eps).pi_digit_expansion(n_pi), args.f),
    }
    _emit(out, args.mode)
    return 0


def _cmd_expand(args):
    n_pi = _prec_override(args.pi_prec)
    if n_pi is None:
        n_pi = args.p**args.alpha + 2
    tower = FieldTower.for_pi_prec(args.p, args.f, args.alpha, n_pi)
    x = _parse_field_elem(tower, args.elem)
    digits = x.pi_digit_expansion(n_pi)
    _emit({"digits": _digits_json(digits, args.f), "precision": n_pi}, args.mode)
    return 0


def _cmd_membership(args):
    quotient = unitclasses.FiltrationQuotient.standard(args.p, args.f, args.alpha, args.k)
    tower = quotient.tower
    if args.elem:
        x = _parse_field_elem(tower, args.elem)
    else:
        x = epsilon_alpha(tower)
    u = _parse_unit(args.u, args.p, tower.prec)
    x = x * tower.from_int(u.val).invert()
    span = unitclasses.subgroup_span(quotient, args.k, include_mu_torsion=not args.no_mu)
    member = unitclasses.membership(x, span)
    _emit(
        {
            "member": member,
            "k": args.k,
            "depth": quotient.depth,
            "branch": "quotient-echelon",
        },
        args.mode,
    )
    return 0 if member else 1


def _cmd_r1(args):
    u = _parse_unit(args.u, args.p, 3 if args.p == 2 else 2)
    v = unitclasses.r1_max(args.p, args.n, args.alpha, args.d, u)
    _emit({"admissible": list(v.admissible), "maximal": v.maximal, "branch": v.branch}, args.mode)
    return 0


def _cmd_r2(args):
    u = _parse_unit(args.u, args.p, 3 if args.p == 2 else 2)
    v = unitclasses.r2_admissible(args.p, args.n, args.alpha, args.d, u, args.r1)
    _emit(
        {
            "admissible": list(v.admissible),
            "maximal": v.maximal,
            "branch": v.branch,
            "field_counts": {str(k): c for k, c in sorted(v.field_counts.items())},
        },
        args.mode,
    )
    return 0


def _cmd_epsilon_test(args):
    u = _parse_unit(args.u, args.p, max(3, args.r1 + 2))
    ok = unitclasses.epsilon_test(args.p, args.n, args.alpha, args.d, u, args.r1)
    _emit({"trivial": ok, "r1": args.r1, "branch": "thm098"}, args.mode)
    return 0 if ok else 1


def _cmd_verify(args):
    with open(args.script, encoding="utf-8") as fh:
        text = fh.read()
    p_prec = _prec_override(args.p_prec) or 6
    params = OrderParams(args.p, args.n, u=int(args.u), p_prec=p_prec, s_prec=args.s_prec)
    results = run_script(text, params)
    ok = True
    for r in results:
        sys.stdout.write(f"line {r.line_no}: {r.verdict}: {r.text}\n")
        ok = ok and r.verdict == "holds"
    sys.stdout.write(("all checks hold" if ok else "some checks failed") + f" ({len(results)} checks)\n")
    return 0 if ok else 1


def _cmd_cohomology(args):
    if args.golden:
        report = cohomology.golden_suite()
        out = [{"tag": tag, "ok": ok} for tag, ok, _ in report]
        _emit(out, args.mode)
        return 0 if all(r["ok"] for r in out) else 1
    torsion = [int(t) for t in args.torsion.split(",") if t.strip()]
    action = [[int(x) for x in row.split(",")] for row in args.action.split(";")]
    m = cohomology.CycModule(args.rank, torsion, action, args.order)
    out = {
        "h0": {"free_rank": m.h0().free_rank, "invariants": list(m.h0().invariants)},
        "h_odd": {"free_rank": m.h_odd().free_rank, "invariants": list(m.h_odd().invariants)},
        "h_even": {"free_rank": m.h_even().free_rank, "invariants": list(m.h_even().invariants)},
    }
    _emit(out, args.mode)
    return 0


_DISPATCH = {
    "classify": _cmd_classify,
    "epsilon": _cmd_epsilon,
    "expand": _cmd_expand,
    "membership": _cmd_membership,
    "r1": _cmd_r1,
    "r2": _cmd_r2,
    "epsilon-test": _cmd_epsilon_test,
    "verify": _cmd_verify,
    "cohomology": _cmd_cohomology,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _DISPATCH[args.cmd](args)
    except (StabforgeError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
