"""Command-line front end.

    equibar homology INPUT [--max-degree N]
    equibar verify SUITE [INPUT] [--max-degree N] [--stage-budget K] [--seed S]
    equibar forms {invariants,normalize,k0} INPUT

INPUT is a JSON file (simplicial set, monoid, category or form) or the name
of a built-in corpus entry.  Exit codes: 0 no failing check, 1 some check
failed, 2 the input could not be used.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import bar as barmod
from . import category as cat
from . import forms
from .errors import EquibarError
from .fibration import check_homology_fibration
from .homology import homology_groups
from .monoid import FiniteMonoid, corpus
from .report import Report
from .simplicial import SimplicialMap, SimplicialSet, point, representable

SUITES = ("relations", "fixed-points", "ji", "group-completion", "forms", "categories", "hofib")

# default degree budgets per suite
SUITE_DEGREES = {"relations": 4, "fixed-points": 3, "ji": 2, "group-completion": 2,
                 "categories": 3, "hofib": 2}


class InputError(Exception):
    """Raised for unusable input; the CLI exits with status 2."""


def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


def _builtin(name):
    if name == "point":
        return "simplicial", point
    monoids = corpus()
    if name in monoids:
        return "monoid", monoids[name]
    cats = cat.category_corpus()
    if name in cats:
        return "category", cats[name]
    return None


def load_input(source):
    """``(kind, object)`` with kind one of simplicial, monoid, category, form."""
    if not os.path.exists(source):
        found = _builtin(source)
        if found is None:
            raise InputError(f"{source}: no such file or built-in input")
        return found
    data = _read_json(source)
    if not isinstance(data, dict):
        raise InputError(f"{source}: expected a JSON object at the top level")
    try:
        if "gram" in data:
            form = forms.validate_form(data["gram"], data.get("epsilon", 1))
            return "form", (form, int(data.get("m", 0)))
        if "mul" in data:
            return "monoid", FiniteMonoid.from_json(data)
        if "composition" in data:
            return "category", cat.load_category(data)
        if "faces" in data:
            x = SimplicialSet.from_json(data)
            x.check_identities()
            return "simplicial", x
    except (EquibarError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{source}: {exc}") from exc
    raise InputError(f"{source}: cannot tell what kind of object this JSON describes")


def _expect(kind, wanted, source):
    if kind not in wanted:
        raise InputError(f"{source}: expected {' or '.join(wanted)} input, got {kind}")


# ---------------------------------------------------------------------------
# homology


def cmd_homology(args, report):
    kind, obj = load_input(args.input)
    budget = 3 if args.max_degree is None else args.max_degree
    if kind == "simplicial":
        x = obj(budget + 1) if callable(obj) else obj
        if x.max_degree < budget + 1:
            raise InputError(f"homology through degree {budget} needs simplices through "
                             f"degree {budget + 1}; the input stops at {x.max_degree}")
    elif kind == "monoid":
        x = barmod.bar(obj, budget + 1)
    else:
        raise InputError(f"{args.input}: expected a simplicial set or monoid")
    groups = homology_groups(x, budget)
    report.results["homology"] = [str(g) for g in groups]
    report.add("homology", "integral homology via Smith normal form", "PASS",
               {"groups": [g.to_json() for g in groups]})


# ---------------------------------------------------------------------------
# verification suites


def _monoids(args):
    if args.input is None:
        return list(corpus().values())
    kind, obj = load_input(args.input)
    _expect(kind, ("monoid",), args.input)
    return [obj]


def suite_relations(args, report, d):
    for M in _monoids(args):
        try:
            barmod.real_bar(M, d)
            report.add(f"relations.{M.name}", "real bar construction: w relations", "PASS",
                       {"degree": d})
        except EquibarError as exc:
            report.add(f"relations.{M.name}", "real bar construction: w relations", "FAIL",
                       {"error": str(exc), "degree": getattr(exc, "degree", None)})


def suite_fixed_points(args, report, d):
    for M in _monoids(args):
        res = barmod.fixed_point_bijection_b(M, d)
        report.check(f"fixed-points.{M.name}", "Sd fixed points of the real bar = B(*, M, M^C2)",
                     res.ok, res.to_json())


def suite_ji(args, report, d):
    for M in _monoids(args):
        res = barmod.ji_contraction_check(M, d)
        report.check(f"ji.{M.name}", "retraction r of d B(M, M, M^C2) onto M^C2",
                     res.ok, res.to_json())


def suite_group_completion(args, report, d):
    for M in _monoids(args):
        res = barmod.verify_group_completion(M, d, args.stage_budget)
        report.add(f"group-completion.{M.name}.retraction",
                   "retraction r of d B(M, M, M^C2) onto M^C2", res["retraction"])
        status = res["status"]
        witness = {k: v for k, v in res.items() if k not in ("monoid", "retraction")}
        report.add(f"group-completion.{M.name}", "equivariant group completion (homology form)",
                   status, witness)


def suite_hofib(args, report, d):
    monoids = _monoids(args) if args.input is not None else [corpus()["C2"]]
    for M in monoids:
        f = barmod.projection_to_bar(M, d + 1)
        res = check_homology_fibration(f, d)
        report.check(f"hofib.{M.name}.projection", "d B(M, M, *) -> B M is a homology fibration",
                     res.passed, res.to_json())
    # negative control: the vertex inclusion into the 1-simplex
    X, Y = point(d + 1), representable(1, d + 1)
    inc = SimplicialMap(X, Y, [np.zeros(1, dtype=np.int64) for _ in range(d + 2)])
    res = check_homology_fibration(inc, d)
    detected = (not res.passed and any(c.get("failing_degree") == 0 for c in res.failures))
    report.check("hofib.vertex-inclusion.detected",
                 "negative control: {0} -> Delta^1 fails the pullback condition",
                 detected, res.to_json())


def suite_forms(args, report, d):
    rng = np.random.default_rng(args.seed)
    one = forms.K0Element(forms.unit_form())
    invertible, witness = forms.k0_is_invertible(one)
    even, sample = forms.hyperbolic_evenness_check(rng, trials=1000, max_rank=5)
    witness = dict(witness, hyperbolic_evenness=sample)
    report.check("forms.unit-not-invertible", "symmetric forms: K0 is not a group",
                 (not invertible) and even, witness)
    hyper = []
    for m in range(1, 5):
        ok, _ = forms.k0_is_invertible(forms.K0Element(forms.standard_hyperbolic(m, 1)))
        hyper.append(ok)
    report.check("forms.hyperbolic-invertible", "hyperbolic classes become units",
                 all(hyper), {"m": [1, 2, 3, 4], "invertible": hyper})
    failures, trials = [], 100
    for k in range(trials):
        n = int(rng.integers(1, 5))
        J = forms.standard_hyperbolic(n, -1)
        Q = forms.random_unimodular(2 * n, rng)
        A = J.congruent_by(Q)
        P, found = forms.symplectic_normalize(A)
        if found != n or not forms.congruent(A, J, P):
            failures.append({"trial": k, "gram": [list(r) for r in A.gram]})
    report.check("forms.symplectic-normalize", "alternating forms: rank classifies",
                 not failures, {"trials": trials, "failures": failures[:5]})
    report.results["witt_monoid"] = forms.witt_monoid_report(4)


def suite_categories(args, report, d):
    if args.input is None:
        items = list(cat.category_corpus().items())
    else:
        kind, obj = load_input(args.input)
        _expect(kind, ("category", "monoid"), args.input)
        if kind == "monoid":
            obj = cat.from_monoid(obj)
        items = [(obj.category.name or "input", obj)]
    for name, D in items:
        if not D.is_strict:
            D = cat.d_construction(D).duality
        C = D.category
        res = cat.compare_sd_nerve(C, d)
        report.check(f"categories.{name}.sd-nerve", "nerve of Sd C = Sd of nerve of C",
                     res.ok, res.to_json())
        sym = cat.compare_sym(D)
        report.check(f"categories.{name}.sym", "Sym C = SdT-fixed subcategory of Sd C",
                     sym.ok, sym.to_json())
        try:
            cat.real_nerve(D, d)
            report.add(f"categories.{name}.real-nerve", "nerve of a strict duality is real",
                       "PASS", {"degree": d})
        except EquibarError as exc:
            report.add(f"categories.{name}.real-nerve", "nerve of a strict duality is real",
                       "FAIL", {"error": str(exc)})
        try:
            dc = cat.d_construction(D)
            report.add(f"categories.{name}.d-construction",
                       "D-construction: strict duality, K I = Id, I K = Id up to iso", "PASS",
                       {"objects": dc.category.n_objects, "morphisms": dc.category.n_morphisms})
        except EquibarError as exc:
            report.add(f"categories.{name}.d-construction",
                       "D-construction: strict duality, K I = Id, I K = Id up to iso", "FAIL",
                       {"error": str(exc), "witness": getattr(exc, "witness", None)})


SUITE_FUNCS = {"relations": suite_relations, "fixed-points": suite_fixed_points,
               "ji": suite_ji, "group-completion": suite_group_completion,
               "forms": suite_forms, "categories": suite_categories, "hofib": suite_hofib}


def cmd_verify(args, report):
    d = SUITE_DEGREES.get(args.suite, 0) if args.max_degree is None else args.max_degree
    report.config["max_degree"] = d
    with report.timed(args.suite):
        SUITE_FUNCS[args.suite](args, report, d)


# ---------------------------------------------------------------------------
# forms


def cmd_forms(args, report):
    kind, obj = load_input(args.input)
    _expect(kind, ("form",), args.input)
    F, m = obj
    if args.query == "invariants":
        inv = forms.invariants(F)
        if not F.nondegenerate:
            report.add("forms.nondegenerate", "plumbing", "SKIPPED",
                       {"warning": f"degenerate form (determinant {F.determinant})"})
        report.results["invariants"] = inv.to_json()
        report.add("forms.invariants", "rank, determinant, signature, parity", "PASS",
                   inv.to_json())
    elif args.query == "normalize":
        try:
            P, n = forms.symplectic_normalize(F)
        except EquibarError as exc:
            raise InputError(str(exc)) from exc
        ok = forms.congruent(F, forms.standard_hyperbolic(n, -1), P)
        report.results["normalize"] = {"n": n, "P": P}
        report.check("forms.normalize", "alternating forms: rank classifies", ok,
                     {"n": n, "P": P})
    else:
        try:
            ok, witness = forms.k0_is_invertible(forms.K0Element(F, m))
        except EquibarError as exc:
            raise InputError(str(exc)) from exc
        report.results["k0"] = {"invertible": ok, "witness": witness}
        report.add("forms.k0", "invertibility after inverting hyperbolic classes", "PASS",
                   {"invertible": ok, "witness": witness})


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="equibar", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"equibar {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--stage-budget", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timings (makes reports non-reproducible)")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("homology", parents=[common], help="homology groups through a degree")
    p.add_argument("input")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("input", nargs="?")
    p = sub.add_parser("forms", parents=[common], help="queries on a bilinear form")
    p.add_argument("query", choices=("invariants", "normalize", "k0"))
    p.add_argument("input")
    return parser


COMMANDS = {"homology": cmd_homology, "verify": cmd_verify, "forms": cmd_forms}


def main(argv=None):
    args = build_parser().parse_args(argv)
    for flag in ("max_degree", "stage_budget"):
        value = getattr(args, flag)
        if value is not None and value < 0:
            print(f"error: --{flag.replace('_', '-')} must be >= 0", file=sys.stderr)
            return 2
    config = {k: v for k, v in vars(args).items() if k not in ("out", "timing")}
    report = Report(args.command, config, __version__)
    try:
        COMMANDS[args.command](args, report)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report.render(include_timing=args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
