"""Command line front-end. Every command prints one JSON document (or an SVG
for ``plot-dh``); errors go to stderr as JSON with a matching exit code."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import combinations

from . import fixtures
from .algebra import _coaugmented_cocycles, build, verify_structure
from .errors import InternalAssertionError, PreconditionError, ValidationError, VolpolyError
from .exactmath import HomogeneousForm, SkewForm, q, qstr
from .multifan import MultiFan, as_rng, connected_sum, flip
from .plot import emit_svg
from .polytope import (MultiPolytope, face, mc_volume, minkowski_cocycle_check,
                       minkowski_facet_check)
from .recognize import from_poincare_algebra, is_volume_polynomial, reconstruct_detailed
from .simplicial import Chain, classify, profile
from .volume import (derivative, integrate_monomial, recover_lambda, volume_poly_index,
                     volume_poly_lawrence)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def plain(obj):
    """Fractions to strings, tuples to lists, recursively."""
    if isinstance(obj, Fraction):
        return qstr(obj)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2) + "\n"


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"expected comma separated integers, got {text!r}") from exc


def _rationals(text):
    try:
        return [q(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"expected comma separated rationals, got {text!r}") from exc


def _simplex(text):
    return tuple(sorted(i - 1 for i in _ints(text)))


def load_fan(args, which="") -> MultiFan:
    path = getattr(args, "fan" + which, None)
    name = getattr(args, "fixture" + which, None)
    if path and name:
        raise ValidationError("give either a fan file or a fixture, not both")
    if path:
        return MultiFan.from_json(_read_json(path))
    if name:
        return fixtures.by_name(name)
    raise ValidationError("a multi-fan is required (--fan FILE or --fixture NAME)")


def load_poly(path) -> HomogeneousForm:
    return HomogeneousForm.from_json(_read_json(path))


def _params(args, fan):
    if args.c is None:
        return [1] * fan.m
    c = _rationals(args.c)
    if len(c) != fan.m:
        raise ValidationError(f"--c needs {fan.m} values, got {len(c)}")
    return c


def _poly_json(F):
    return {"format": "multifan/1", "nvars": F.nvars, "degree": F.degree,
            "terms": F.to_json(), "text": str(F)}


# ------------------------------------------------------------ commands

def cmd_validate(args):
    fan = load_fan(args)
    out = fan.validate()
    out["n"], out["m"] = fan.n, fan.m
    out["classification"] = classify(fan.complex).to_json()
    return out


def cmd_volume(args):
    fan = load_fan(args)
    rng = as_rng(args.seed)
    out = {"route": args.route}
    if args.route in ("index", "both"):
        out["index"] = _poly_json(volume_poly_index(fan, rng).form)
    if args.route in ("lawrence", "both"):
        out["lawrence"] = _poly_json(volume_poly_lawrence(fan, rng=rng).form)
    if args.route == "both":
        out["routes_agree"] = out["index"]["terms"] == out["lawrence"]["terms"]
        if not out["routes_agree"]:
            raise InternalAssertionError("index and Lawrence routes disagree", out)
    out["polynomial"] = out.get("index", out.get("lawrence"))["text"]
    return out


def cmd_integrate(args):
    fan = load_fan(args)
    exp = _ints(args.monomial)
    return {"monomial": exp, "integral": integrate_monomial(fan, exp, as_rng(args.seed))}


def cmd_dims(args):
    if args.poly:
        F = load_poly(args.poly)
    else:
        F = volume_poly_index(load_fan(args), as_rng(args.seed)).form
    return build(F).report()


def cmd_structure(args):
    return verify_structure(load_fan(args))


def cmd_hvector(args):
    if args.complex:
        from .simplicial import SimplicialComplex
        K = SimplicialComplex.from_json(_read_json(args.complex))
    else:
        K = load_fan(args).complex
    return profile(K).to_json()


def cmd_dh(args):
    fan = load_fan(args)
    P = MultiPolytope(fan, _params(args, fan))
    return P.dh(_rationals(args.point), rng=as_rng(args.seed)).to_json()


def cmd_vertices(args):
    fan = load_fan(args)
    P = MultiPolytope(fan, _params(args, fan))
    return {"vertices": [{"simplex": [i + 1 for i in I], "point": x}
                         for I, x in sorted(P.vertices().items())]}


def cmd_faces(args):
    fan = load_fan(args)
    c = _params(args, fan)
    P = MultiPolytope(fan, c)
    J = _simplex(args.face)
    F = face(P, J)
    by_projection = F.normalized_volume()
    by_derivative = derivative(P.volume_polynomial(), J).evaluate(P.c)
    return {"face": [i + 1 for i in J], "normalized_volume": by_projection,
            "derivative_value": by_derivative, "agree": by_projection == by_derivative,
            "projected_fan": F.projection.fan.to_json(), "support_parameters": F.polytope.c}


def cmd_mcvol(args):
    fan = load_fan(args)
    P = MultiPolytope(fan, _params(args, fan))
    est, err = mc_volume(P, args.samples, args.seed)
    exact = P.volume()
    return {"estimate": round(est, 9), "stderr": round(err, 9), "exact": exact,
            "samples": args.samples, "within_3_stderr": abs(est - float(exact)) <= 3 * err}


def _basis_skew(n, S):
    return SkewForm(n, len(S), {S: 1})


def cmd_minkowski(args):
    fan = load_fan(args)
    P = MultiPolytope(fan, _params(args, fan))
    if args.mode == "facet":
        res = minkowski_facet_check(P)
        return {"mode": "facet", "residual": res, "zero": all(x == 0 for x in res)}
    K, chain, n = fan.complex, fan.underlying_chain(), fan.n
    results = []
    cochains = []
    if args.cochain:
        a = Chain.from_json(_read_json(args.cochain))
        cochains.append(("given", a))
    else:
        for k in range(1, n + 1):
            for t, a in enumerate(_coaugmented_cocycles(K, chain, k, exact=not args.closed)):
                cochains.append((f"basis{t}", Chain(k - 1, a)))
    for label, a in cochains:
        k = a.degree + 1
        for S in combinations(range(n), k):
            r = minkowski_cocycle_check(P, a, _basis_skew(n, S))
            results.append({"cochain": label, "degree": a.degree, "mu": [s + 1 for s in S],
                            "residual": r})
    return {"mode": "cocycle", "closed": bool(args.closed), "checks": len(results),
            "zero": all(r["residual"] == 0 for r in results), "results": results}


def cmd_flip(args):
    fan = load_fan(args)
    new = _rationals(args.new_lambda) if args.new_lambda else None
    out = flip(fan, _simplex(args.simplex), args.p, new)
    before = build(volume_poly_index(fan).form).dims
    after = build(volume_poly_index(out).form).dims
    return {"fan": out.to_json(), "dm_before": before, "dm_after": after,
            "dm_change": [b - a for a, b in zip(before, after)]}


def cmd_consum(args):
    f1, f2 = load_fan(args), load_fan(args, "2")
    I = _simplex(args.simplex)
    I2 = _simplex(args.simplex2) if args.simplex2 else None
    out = connected_sum(f1, f2, I, I2)
    dims = [build(volume_poly_index(f).form).dims for f in (f1, f2, out)]
    return {"fan": out.to_json(), "dm1": dims[0], "dm2": dims[1], "dm": dims[2]}


def cmd_recognize(args):
    F = load_poly(args.poly)
    out = is_volume_polynomial(F)
    if args.reconstruct and out["verdict"]:
        rec = reconstruct_detailed(F, args.seed)
        out["reconstruction"] = rec.to_json()
    return out


def _load_functional(path):
    data = _read_json(path)
    try:
        p, n = int(data["p"]), int(data["n"])
        values = {tuple(int(x) for x in t["exp"]): q(t["value"]) for t in data["values"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad functional JSON: {exc}") from exc
    return values, p, n


def cmd_from_algebra(args):
    values, p, n = _load_functional(args.functional)
    fan, cert = from_poincare_algebra(values, p, n, args.seed)
    return {"fan": fan.to_json(), "certificate": cert}


def cmd_recover_lambda(args):
    F = load_poly(args.poly) if args.poly else volume_poly_index(load_fan(args)).form
    fan = recover_lambda(F)
    return {"fan": fan.to_json(), "reproduces": volume_poly_index(fan).form == F}


def cmd_plot_dh(args):
    fan = load_fan(args)
    return emit_svg(MultiPolytope(fan, _params(args, fan)), v=fan.generic_vector(args.seed))


def cmd_experiment_rigidity(args):
    """Resample lambda for a fixed weighted cycle and tabulate dm."""
    fan = load_fan(args)
    rng = as_rng(args.seed)
    spectrum = {}
    skipped = 0
    for _ in range(args.trials):
        lam = [tuple(rng.randint(-args.bound, args.bound) for _ in range(fan.n)) for _ in range(fan.m)]
        try:
            g = MultiFan(lam, fan.weights, n=fan.n)
        except ValidationError:
            skipped += 1
            continue
        key = ",".join(map(str, build(volume_poly_index(g, rng).form).dims))
        spectrum[key] = spectrum.get(key, 0) + 1
    return {"trials": args.trials, "star_condition_failures": skipped, "dm_spectrum": spectrum,
            "profile": profile(fan.complex).to_json()}


# ------------------------------------------------------------ parser

def _fan_opts(p, suffix=""):
    p.add_argument(f"--fan{suffix}", help="multi-fan JSON file")
    p.add_argument(f"--fixture{suffix}", help="built-in fan: " + ", ".join(sorted(fixtures.FIXTURES)))


def make_parser():
    parser = _Parser(prog="volpoly", description="Exact computations with multi-fans and multi-polytopes.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write the result here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, fan=True, c=False, help=None):
        p = sub.add_parser(name, help=help)
        if fan:
            _fan_opts(p)
        if c:
            p.add_argument("--c", help="support parameters, comma separated rationals")
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        p.add_argument("--out", default=argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, help="star-condition, completeness and support type")
    p = add("volume", cmd_volume, help="volume polynomial")
    p.add_argument("--route", choices=("index", "lawrence", "both"), default="index")
    p = add("integrate", cmd_integrate, help="integral of a degree-n monomial")
    p.add_argument("--monomial", required=True, help="exponent vector, e.g. 1,1,0")
    p = add("dims", cmd_dims, help="graded dimensions of the algebra")
    p.add_argument("--poly", help="polynomial JSON instead of a fan")
    add("structure", cmd_structure, help="compare dm with h, h', h''")
    p = add("hvector", cmd_hvector, help="f, h, h', h'' and Betti numbers")
    p.add_argument("--complex", help="simplicial complex JSON instead of a fan")
    p = add("dh", cmd_dh, c=True, help="Duistermaat-Heckman function at a point")
    p.add_argument("--point", required=True)
    add("vertices", cmd_vertices, c=True, help="vertices of the multi-polytope")
    p = add("faces", cmd_faces, c=True, help="normalized volume of a face")
    p.add_argument("--face", required=True, help="simplex, 1-based, e.g. 1,2")
    p = add("mcvol", cmd_mcvol, c=True, help="Monte-Carlo volume estimate")
    p.add_argument("--samples", type=int, default=100000)
    p = add("minkowski", cmd_minkowski, c=True, help="Minkowski relation residuals")
    p.add_argument("mode", choices=("facet", "cocycle"))
    p.add_argument("--closed", action="store_true", help="use closed instead of exact cochains")
    p.add_argument("--cochain", help="cochain JSON to test instead of a basis")
    p = add("flip", cmd_flip, help="(p,q)-flip")
    p.add_argument("--simplex", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--new-lambda", help="apex vector for a (1,n)-flip")
    p = add("consum", cmd_consum, help="connected sum along a simplex")
    _fan_opts(p, "2")
    p.add_argument("--simplex", required=True)
    p.add_argument("--simplex2")
    p = add("recognize", cmd_recognize, fan=False, help="is a polynomial a volume polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--reconstruct", action="store_true")
    p = add("from-algebra", cmd_from_algebra, fan=False, help="multi-fan realising a duality algebra")
    p.add_argument("--functional", required=True)
    p = add("recover-lambda", cmd_recover_lambda, help="rebuild a fan from its volume polynomial")
    p.add_argument("--poly")
    p = add("plot-dh", cmd_plot_dh, c=True, help="SVG chart of the DH function (n = 2)")
    p = add("experiment-rigidity", cmd_experiment_rigidity, help="dm over random lambda for fixed weights")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--bound", type=int, default=5)
    return parser


def _emit_error(exc):
    body = {"error": exc.kind, "message": str(exc)}
    report = getattr(exc, "report", None)
    if report is not None:
        body["report"] = plain(report)
    sys.stderr.write(json.dumps(body, sort_keys=True) + "\n")


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        result = args.func(args)
        text = result if isinstance(result, str) else dumps(result)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    except VolpolyError as exc:
        _emit_error(exc)
        return exc.exit_code
    except RecursionError as exc:
        _emit_error(PreconditionError(f"input too large: {exc}"))
        return 3


if __name__ == "__main__":
    sys.exit(main())
