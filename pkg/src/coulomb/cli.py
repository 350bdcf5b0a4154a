"""Command-line interface: job configuration, dispatch, JSON reports, corpus runner.

Every subcommand builds a job configuration (a plain dict) and hands it to
:func:`execute`, which returns a deterministic payload and an exit code.
``run CONFIG`` and the corpus runner use the same path.
"""

from __future__ import annotations

import argparse
import cmath
import difflib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .commutative import (
    abelianization_check,
    graded_dimension,
    graded_generator,
    massless_span_check,
    su2_presentation,
    su2_zero_membership,
    survives,
    survives_cover,
    translate,
    winding_representatives,
)
from .euler import canonical_flavor, euler_pair
from .graded import ADDITIVE, MULTIPLICATIVE, GradedElement, RationalGraded
from .groups import GroupData, GroupError, from_json
from .numeric import (
    DEFAULT_FD_TOL,
    SingularInput,
    epsilon_section,
    gamma_q,
    lambda_section,
    log_gamma_h,
    superpotential_gradient,
    superpotential_legendre,
)
from .poly import FactoredClass, ParseError, Poly, parse_poly, tau
from .quantum import (
    MASSLESS_MU,
    QTorusElement,
    ShiftElement,
    gamma_conjugate,
    massless_report,
    nc_power_identity_check,
    nc_survives,
    q_gamma_conjugate,
    q_survives,
)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2

COMMANDS = (
    "euler",
    "section",
    "gamma",
    "survive",
    "gens",
    "member",
    "hilbert",
    "abelianize",
    "nc-mul",
    "nc-conj",
    "nc-survive",
    "nc-powers",
    "q-mul",
    "q-conj",
    "q-survive",
)

DEFAULT_FLAVOR = {"nc-mul": "h", "nc-conj": "h", "nc-survive": "h", "nc-powers": "h", "q-mul": "q", "q-conj": "q", "q-survive": "q"}


class UsageError(ValueError):
    pass


# ----------------------------------------------------------------------
# JSON encoding
# ----------------------------------------------------------------------


def rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def real_json(x: float) -> float:
    """Round to 12 decimals and 12 significant digits so reports are stable across platforms."""
    return float(f"{round(float(x), 12):.12g}") + 0.0


def complex_json(z: complex) -> list:
    z = complex(z)
    return [real_json(z.real), real_json(z.imag)]


def poly_json(p: Poly) -> dict:
    """Coefficient map ``{monomial text: "p/q"}``; the empty monomial is ``"1"``."""
    out = {}
    for mono, c in p.sorted_terms():
        key = str(Poly({mono: 1}))
        out[key] = rational(c)
    return out


def factored_json(fc: FactoredClass) -> dict:
    return {
        "text": str(fc),
        "unit": str(fc.unit),
        "forms": [[poly_json(f), e] for f, e in fc.factors],
        "degree": fc.degree(),
    }


def witness_json(w) -> dict:
    out = {"eta": list(w.eta), "divisor": str(w.divisor), "ok": w.ok}
    if w.ok:
        out["quotient"] = str(w.quotient)
    elif w.failing is not None:
        form, e = w.failing
        out["failing_factor"] = str(form)
        out["required_power"] = e
    return out


def rational_graded_json(r: RationalGraded) -> dict:
    return {
        "text": str(r),
        "regular": r.is_regular(),
        "parts": [
            {"eta": list(eta), "numerator": str(num), "denominator": str(den)} for eta, (num, den) in sorted(r.parts.items())
        ],
    }


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------


def _parse_weights(text):
    if isinstance(text, list):
        return text
    text = str(text).strip()
    if not text:
        return []
    if text.startswith("["):
        return json.loads(text)
    rows = [r for r in text.split(";") if r.strip()]
    if len(rows) == 1 and ";" not in text:
        return [int(v) for v in text.split(",") if v.strip()]
    return [[int(v) for v in r.split(",")] for r in rows]


def _parse_int_vector(value, rank: int, label: str) -> tuple:
    if isinstance(value, int):
        value = [value]
    if isinstance(value, str):
        value = [int(v) for v in value.replace(" ", "").split(",") if v]
    vec = tuple(int(v) for v in value)
    if len(vec) != rank:
        raise UsageError(f"{label} {vec} does not have rank {rank}")
    return vec


def build_group(config: dict) -> GroupData:
    spec = config.get("group", "u1")
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            spec = json.loads(text)
        elif text.endswith(".json"):
            spec = json.loads(Path(text).read_text())
        else:
            spec = {"group": text}
    spec = dict(spec)
    if "weights" in config and config["weights"] is not None:
        spec["weights"] = _parse_weights(config["weights"])
    if "rank" in config and config["rank"] is not None:
        spec["rank"] = int(config["rank"])
    if spec.get("group") == "torus" and "rank" not in spec:
        raise UsageError("torus needs --rank")
    if spec.get("pi1_torsion") is None and config.get("pi1_torsion") is not None:
        spec["pi1_torsion"] = int(config["pi1_torsion"])
    return from_json(spec)


def _check_variables(p: Poly, rank: int, flavor: str) -> None:
    for v in p.variables():
        if v[0] in "tzx" and v[1:].isdigit() and int(v[1:]) > rank:
            raise UsageError(f"variable {v} exceeds rank {rank}")
        additive_only = v == "mu" or v[0] == "t"
        mult_only = v in ("m", "q") or v[0] == "x"
        if flavor in ("comm", "h") and mult_only:
            raise UsageError(f"variable {v} does not belong to the {flavor} flavor")
        if flavor in ("k", "q") and additive_only:
            raise UsageError(f"variable {v} does not belong to the {flavor} flavor")
        if v == "h" and flavor != "h":
            raise UsageError("h appears only in the h flavor")
        if v == "q" and flavor != "q":
            raise UsageError("q appears only in the q flavor")


def parse_element(text: str, rank: int, flavor: str) -> GradedElement:
    """Parse an element written in normal order ``sum z^eta p_eta``."""
    p = parse_poly(text, allow_negative=[tau(i) for i in range(rank)] if flavor == "comm" else ())
    _check_variables(p, rank, flavor)
    if flavor == "h":
        return ShiftElement.from_poly(p, rank, ADDITIVE)
    if flavor == "q":
        return QTorusElement.from_poly(p, rank, MULTIPLICATIVE)
    return GradedElement.from_poly(p, rank, MULTIPLICATIVE if flavor == "k" else ADDITIVE)


def _mu(config: dict, flavor: str):
    if config.get("mu") is not None:
        return parse_poly(str(config["mu"]))
    if config.get("massless"):
        return MASSLESS_MU if flavor == "h" else Poly.const(0)
    return None


def _complex_vector(value, rank: int, label: str) -> tuple:
    if isinstance(value, (int, float, complex)):
        value = [value]
    if isinstance(value, str):
        value = [v for v in value.replace(" ", "").split(",") if v]
    out = []
    for v in value:
        if isinstance(v, list):
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(v))
    if len(out) != rank:
        raise UsageError(f"{label} has length {len(out)}, expected {rank}")
    return tuple(out)


def _complex(value, default=None) -> complex:
    if value is None:
        if default is None:
            raise UsageError("missing numeric argument")
        return complex(default)
    if isinstance(value, list):
        return complex(value[0], value[1])
    return complex(value)


# ----------------------------------------------------------------------
# command handlers: each returns (results, ok)
# ----------------------------------------------------------------------


def _cmd_euler(config, G, flavor):
    if config.get("eta") is None:
        raise UsageError("euler needs --eta")
    eta = _parse_int_vector(config["eta"], G.rank, "eta")
    pair = euler_pair(G, eta, flavor, _mu(config, flavor))
    return {"eta": list(eta), "flavor": pair.flavor, "eplus": factored_json(pair.eplus), "eminus": factored_json(pair.eminus)}, True


def _cmd_section(config, G, flavor):
    if config.get("point") is None:
        raise UsageError("section needs --point")
    point = _complex_vector(config["point"], G.rank, "point")
    tol = float(config.get("tolerance") or DEFAULT_FD_TOL)
    if flavor in ("k", "q"):
        sp = lambda_section(G, point, _complex(config.get("mass"), 1))
        return {"kind": "lambda", "value": [complex_json(v) for v in sp.value]}, True
    mass = _complex(config.get("mass"), 0)
    sp = epsilon_section(G, point, mass)
    out = {"kind": "epsilon", "value": [complex_json(v) for v in sp.value]}
    try:
        w = superpotential_legendre(G, point, mass)
    except SingularInput as exc:
        out["superpotential"] = None
        out["note"] = str(exc)
        return out, True
    grad = superpotential_gradient(G, point, mass)
    err = max((abs(cmath.exp(g) - v) / abs(v) for g, v in zip(grad, sp.value)), default=0.0)
    out["superpotential"] = complex_json(w)
    out["gradient_check"] = {"tolerance": tol, "passed": err < tol}
    return out, err < tol


def _cmd_gamma(config, G, flavor):
    if config.get("point") is None:
        raise UsageError("gamma needs --point")
    x = _complex(config["point"])
    if flavor == "q":
        qv = _complex(config.get("q"), 0.5)
        res = gamma_q(x, qv, int(config.get("truncation") or 200))
        return {"kind": "jackson", "value": complex_json(res.value), "error": float(f"{res.error:.3g}")}, True
    hv = _complex(config.get("hbar"), 1)
    lg = log_gamma_h(x, hv)
    return {"kind": "h-gamma", "value": complex_json(cmath.exp(lg)), "log_value": complex_json(lg)}, True


def _elements(config, G, flavor) -> list:
    return [(text, parse_element(text, G.rank, flavor)) for text in config.get("elements") or []]


def _expect(config, values: list) -> bool:
    want = config.get("expect")
    if want is None:
        return True
    want = want if isinstance(want, bool) else str(want).lower() == "true"
    return all(v == want for v in values)


def _cmd_survive(config, G, flavor):
    rows = []
    values = []
    mu = _mu(config, flavor)
    for text, f in _elements(config, G, flavor):
        if flavor == "h":
            res = nc_survives(f, G, mu)
        elif flavor == "q":
            res = q_survives(f, G)
        elif f.has_den():
            ok = survives_cover(f, G)
            rows.append({"element": text, "survives": ok, "witnesses": [], "ring": "cover"})
            values.append(ok)
            continue
        else:
            res = survives(f, G, flavor, mu)
        row = {"element": text, "survives": res.ok, "witnesses": [witness_json(w) for w in res.witnesses]}
        if flavor in ("comm", "k"):
            row["translate"] = rational_graded_json(translate(f, G, flavor, mu))
        rows.append(row)
        values.append(res.ok)
    return {"elements": rows}, _expect(config, values)


def _cmd_gens(config, G, flavor):
    if G.roots is not None and G.rank == 1 and G.weyl:
        pres = su2_presentation(G)
        checks = massless_span_check(pres, int(config.get("degree_bound") or 6), int(config.get("winding_bound") or 3))
        span_ok = all(c.equal for c in checks)
        names = ("x - y - t1*w", "x*y - c - mu^N*w")
        return {
            "N": pres.N,
            "phi_plus": factored_json(pres.phi_plus),
            "phi_minus": factored_json(pres.phi_minus),
            "x": str(pres.x),
            "y": str(pres.y),
            "w": str(pres.w),
            "c": str(pres.constant),
            "relations": [
                {"relation": rel, "residue_of": name, "residue": str(r), "zero": r.is_zero()}
                for rel, name, r in zip(pres.relations(), names, pres.residues)
            ],
            "massless_span_check": {"passed": span_ok, "checked": len(checks)},
        }, pres.holds and span_ok
    bound = int(config.get("winding_bound") or 1)
    mu = _mu(config, flavor)
    rows = []
    for eta in winding_representatives(G, bound):
        g = graded_generator(eta, G, flavor, mu)
        rows.append({"eta": list(eta), "generator": str(g)})
    return {"generators": rows}, True


def _cmd_member(config, G, flavor):
    if G.rank != 1:
        raise UsageError("member is implemented in rank one")
    max_den = config.get("max_den")
    rows = []
    values = []
    for text, f in _elements(config, G, "comm"):
        ok = su2_zero_membership(f, None if max_den is None else int(max_den))
        rows.append({"element": text, "member": ok, "tau_denominator": f.den[0]})
        values.append(ok)
    return {"elements": rows}, _expect(config, values)


def _cmd_hilbert(config, G, flavor):
    D = int(config.get("degree_bound") or 3)
    bound = int(config.get("winding_bound") or 1)
    if config.get("eta") is not None:
        etas = [_parse_int_vector(config["eta"], G.rank, "eta")]
    elif G.rank == 1 and G.weyl:
        etas = [(n,) for n in range(bound + 1)]
    else:
        etas = winding_representatives(G, bound)
    rows = [graded_dimension(G, eta, D, mu_zero=bool(config.get("massless"))).to_json() for eta in etas]
    return {"pieces": rows}, True


def _cmd_abelianize(config, G, flavor):
    rep = abelianization_check(G, int(config.get("degree_bound") or 4), int(config.get("winding_bound") or 3))
    out = {
        "mode": rep.mode,
        "reduced_weights": [list(w) for w in rep.reduced.weights],
        "entries": [e.to_json() for e in rep.entries],
        "all_equal": rep.all_equal,
        "slices": [
            {"root": list(a), "coroot": list(c), "all_equal": r.all_equal, "compared": len(r.compared)}
            for a, c, r in rep.slices
        ],
    }
    return out, rep.all_equal


def _product(elements: list):
    if not elements:
        return None
    out = elements[0][1]
    for _, f in elements[1:]:
        out = out * f
    return out


def _cmd_mul(config, G, flavor):
    els = _elements(config, G, flavor)
    prod = _product(els)
    return {"factors": [t for t, _ in els], "product": None if prod is None else str(prod)}, True


def _cmd_conj(config, G, flavor):
    rows = []
    mu = _mu(config, flavor)
    for text, f in _elements(config, G, flavor):
        conj = q_gamma_conjugate(f, G) if flavor == "q" else gamma_conjugate(f, G, mu)
        rows.append({"element": text, "conjugate": rational_graded_json(conj)})
    out = {"elements": rows}
    if config.get("massless") and flavor == "h":
        out["massless_info"] = [
            {"eta": list(eta), "conjugate": info["conjugate"], "sign_type": info["sign_type"]}
            for eta, info in sorted(massless_report(G).items())
        ]
    return out, True


def _cmd_powers(config, G, flavor):
    n_max = int(config.get("n") or config.get("winding_bound") or 4)
    mu = _mu(config, "h")
    rows = []
    for n in range(1, n_max + 1):
        res = nc_power_identity_check(G, n, mu)
        rows.append({"n": n, "minus": res.minus_holds, "plus": res.plus_holds})
    ok = all(r["minus"] and r["plus"] for r in rows)
    return {"identities": rows, "holds": ok}, ok


HANDLERS = {
    "euler": _cmd_euler,
    "section": _cmd_section,
    "gamma": _cmd_gamma,
    "survive": _cmd_survive,
    "gens": _cmd_gens,
    "member": _cmd_member,
    "hilbert": _cmd_hilbert,
    "abelianize": _cmd_abelianize,
    "nc-mul": _cmd_mul,
    "nc-conj": _cmd_conj,
    "nc-survive": _cmd_survive,
    "nc-powers": _cmd_powers,
    "q-mul": _cmd_mul,
    "q-conj": _cmd_conj,
    "q-survive": _cmd_survive,
}


def _validate(config: dict) -> None:
    for key in ("degree_bound", "winding_bound", "truncation", "n"):
        if config.get(key) is not None and int(config[key]) <= 0 and key != "winding_bound":
            raise UsageError(f"{key} must be positive")
        if key == "winding_bound" and config.get(key) is not None and int(config[key]) < 0:
            raise UsageError("winding_bound must be nonnegative")
    if config.get("tolerance") is not None and float(config["tolerance"]) <= 0:
        raise UsageError("tolerance must be positive")


def _echo(config: dict) -> dict:
    return {k: v for k, v in sorted(config.items()) if k != "output" and v is not None and v is not False}


def execute(config: dict) -> tuple[dict, int]:
    """Run one job; return ``(report, exit_code)``.

    The report's ``payload`` is deterministic; timings live under ``meta``.
    """
    start = time.perf_counter()
    config = dict(config)
    command = config.get("command")
    try:
        if command not in HANDLERS:
            raise UsageError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
        _validate(config)
        flavor = canonical_flavor(config.get("flavor") or DEFAULT_FLAVOR.get(command, "comm"))
        if command.startswith("nc-") and flavor != "h":
            raise UsageError(f"{command} needs the h flavor")
        if command.startswith("q-") and flavor != "q":
            raise UsageError(f"{command} needs the q flavor")
        G = build_group(config)
        results, ok = HANDLERS[command](config, G, flavor)
        code = EXIT_OK if ok else EXIT_MATH
        payload = {"command": command, "inputs": _echo(config), "results": results, "ok": ok, "version": __version__}
    except (UsageError, ParseError, GroupError, SingularInput, ValueError, KeyError, json.JSONDecodeError) as exc:
        kind = "parse" if isinstance(exc, (ParseError, json.JSONDecodeError)) else "usage"
        payload = {"command": command, "inputs": _echo(config), "error": {"kind": kind, "message": str(exc)}, "version": __version__}
        code = EXIT_USAGE
    return {"payload": payload, "meta": {"seconds": round(time.perf_counter() - start, 6)}}, code


# ----------------------------------------------------------------------
# corpus
# ----------------------------------------------------------------------


def _expectation_path(job: Path) -> Path:
    return job.with_name(job.name[: -len(".json")] + ".expected.json")


def run_corpus(path, out=None, err=None) -> int:
    """Run every job in ``path`` and diff its payload against the expectation."""
    out = out or sys.stdout
    err = err or sys.stderr
    root = Path(path)
    if not root.is_dir():
        print(f"error: corpus directory {root} not found", file=err)
        return EXIT_USAGE
    jobs = sorted(p for p in root.glob("*.json") if not p.name.endswith(".expected.json"))
    if not jobs:
        print(f"warning: corpus {root} is empty", file=err)
        print("corpus: 0 jobs, 0 failures", file=out)
        return EXIT_OK
    failures = 0
    for job in jobs:
        exp_path = _expectation_path(job)
        if not exp_path.exists():
            print(f"FAIL {job.name}: missing expectation file {exp_path.name}", file=out)
            failures += 1
            continue
        report, _ = execute(json.loads(job.read_text()))
        got = canonical(report["payload"])
        want = canonical(json.loads(exp_path.read_text()))
        if got == want:
            print(f"PASS {job.name}", file=out)
        else:
            failures += 1
            print(f"FAIL {job.name}", file=out)
            diff = difflib.unified_diff(want.splitlines(), got.splitlines(), "expected", "actual", lineterm="")
            print("\n".join(diff), file=out)
    print(f"corpus: {len(jobs)} jobs, {failures} failures", file=out)
    return EXIT_OK if failures == 0 else EXIT_MATH


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--group", default="u1", help="u1, su2, torus, a JSON descriptor, or a .json path")
    parser.add_argument("--weights", help="weights of V: '1,-1', '1,0;0,1' or JSON")
    parser.add_argument("--rank", type=int, help="torus rank (for --group torus)")
    parser.add_argument("--flavor", choices=["comm", "h", "q", "k"])
    parser.add_argument("--element", action="append", dest="elements", default=[], help="element in normal order (repeatable)")
    parser.add_argument("--degree-bound", type=int, dest="degree_bound")
    parser.add_argument("--winding-bound", type=int, dest="winding_bound")
    parser.add_argument("--massless", action="store_true", help="mu = 0 (commutative), mu = h/2 (h flavor)")
    parser.add_argument("--mu", help="explicit mass specialization, e.g. 0 or h/2")
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--output", help="write the JSON report here")
    parser.add_argument("--eta", help="cocharacter, e.g. 1 or 1,-2")
    parser.add_argument("--point", help="complex point, e.g. 1+2j or 1,0.5j")
    parser.add_argument("--mass", help="complex mass for sections")
    parser.add_argument("--hbar", help="value of h for gamma")
    parser.add_argument("--q", help="value of q for the Jackson gamma")
    parser.add_argument("--truncation", type=int)
    parser.add_argument("--n", type=int, help="largest power for nc-powers")
    parser.add_argument("--max-den", type=int, dest="max_den", help="declared tau-denominator bound for member")
    parser.add_argument("--expect", choices=["true", "false"], help="exit 1 unless every element has this outcome")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coulomb", description="Exact Coulomb-branch computations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _common(sub.add_parser(name))
    run = sub.add_parser("run", help="run a JSON job configuration")
    run.add_argument("config")
    run.add_argument("--output")
    corpus = sub.add_parser("corpus", help="run a directory of jobs against expectations")
    corpus.add_argument("path")
    return parser


def _emit(report: dict, output: str | None) -> None:
    text = canonical(report)
    if output:
        Path(output).write_text(text + "\n")
    print(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "corpus":
        return run_corpus(args.path)
    if args.command == "run":
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if not isinstance(config, dict):
            print("error: config must be a JSON object", file=sys.stderr)
            return EXIT_USAGE
        output = args.output or config.get("output")
    else:
        config = {k: v for k, v in vars(args).items() if v is not None}
        if not config.get("elements"):
            config.pop("elements", None)
        if not config.get("massless"):
            config.pop("massless", None)
        output = config.pop("output", None)
    report, code = execute(config)
    _emit(report, output)
    if "error" in report["payload"]:
        print(f"error: {report['payload']['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
