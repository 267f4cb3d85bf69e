"""Command-line front end.  Every command writes one deterministic JSON report
(or DOT / text where noted) and exits 0 on success, 1 when a check fails and
2 on bad input."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .coxeter import (
    CartanMatrixError,
    CoxeterMatrix,
    CoxeterMatrixError,
    GeneralizedCartanMatrix,
    brute_force_order,
    finite_type_subsets,
    gcm_to_coxeter,
    parabolic_order,
    system_for,
    weak_leq,
)
from .graded import InputError, is_prime
from .posets import PosetError, PosetSizeError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMANDS = (
    "nf", "theta", "finite-type", "davis", "check-combin", "check-pullback", "gp",
    "orbit-poset", "tor", "rank2-report", "levi-fixed", "bkfq", "tree-hilbert",
    "telescope", "w3", "hasse-dot",
)

# inline flags that can also come from --config; name -> type
OPTIONS = {
    "gcm": str, "coxeter": str, "p": int, "k": int, "l": int, "q": int,
    "depth": int, "radius": int, "maxdeg": int, "seed": int, "out": str, "format": str,
    "word": str, "v": str, "w": str, "maxlen": int, "i": int, "mode": str,
    "x": str, "y": str, "ring": str, "module": str, "stages": str, "samples": int,
}

DEFAULTS = {"format": "json", "seed": 0, "k": 1, "maxdeg": 20, "samples": 200}

HELP = {
    "gcm": "generalized Cartan matrix as JSON rows, or @file",
    "coxeter": 'Coxeter matrix as JSON {"m": rows} ("inf" allowed), or @file',
    "p": "characteristic of the base field",
    "k": "field degree, so the field has p^k elements",
    "l": "rank 2 parameter l (cohomology generators in degrees 4, 2l and 2l+1)",
    "q": "coefficient prime",
    "depth": "Hasse tree depth",
    "radius": "word-length radius",
    "maxdeg": "highest degree computed",
    "seed": "random seed for sampled checks",
    "out": "write the report to this file",
    "format": "json, dot or text",
    "word": "comma-separated generator indices",
    "v": "lower element as a word",
    "w": "upper element as a word",
    "maxlen": "sweep every w with l(w) up to this length",
    "i": "generator index",
    "mode": "davis: min or closed; orbit-poset: weak or davis",
    "x": "graph-product element as JSON [[node, scalar], ...]",
    "y": "second graph-product element",
    "ring": "tor: generators of the ring as JSON",
    "module": "tor: generators of the trivial module as JSON",
    "stages": "telescope stage lengths, comma separated",
    "samples": "random products per intersection check",
}


class ConfigError(ValueError):
    pass


def _load_json(text: str):
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return json.loads(text)


def parse_gcm(text: str) -> GeneralizedCartanMatrix:
    data = _load_json(text)
    if isinstance(data, list):
        data = {"a": data}
    return GeneralizedCartanMatrix.from_json(data)


def parse_coxeter(text: str) -> CoxeterMatrix:
    data = _load_json(text)
    if isinstance(data, list):
        data = {"m": data}
    return CoxeterMatrix.from_json(data)


def parse_word(text: str | None) -> tuple[int, ...]:
    if text is None or text.strip() in ("", "[]", "e"):
        return ()
    text = text.strip()
    if text.startswith("["):
        return tuple(int(x) for x in json.loads(text))
    return tuple(int(x) for x in text.replace(" ", "").split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmcomb", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("op", nargs="?", help="gp operation: mul, inv or member")
    parser.add_argument("--config", help="JSON file with any of the inline options")
    for name, kind in OPTIONS.items():
        parser.add_argument(f"--{name}", type=kind, default=None, help=HELP[name])
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(loaded) - set(OPTIONS) - {"command", "op"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, value in loaded.items():
            if key in ("gcm", "coxeter", "word", "v", "w", "x", "y", "ring", "module", "stages") and not isinstance(value, str):
                value = json.dumps(value)
            cfg[key] = value
    for name in OPTIONS:
        value = getattr(args, name)
        if value is not None:
            cfg[name] = value
    cfg["command"] = args.command
    if args.op is not None:
        cfg["op"] = args.op
    for key in ("depth", "radius", "maxdeg", "maxlen", "samples"):
        if key in cfg and cfg[key] is not None and cfg[key] < 0:
            raise ConfigError(f"--{key} must be nonnegative")
    for key in ("p", "q"):
        if cfg.get(key) is not None and not is_prime(cfg[key]):
            raise ConfigError(f"--{key} = {cfg[key]} is not prime")
    if cfg.get("k") is not None and cfg["k"] < 1:
        raise ConfigError("--k must be positive")
    if cfg.get("format") not in ("json", "dot", "text"):
        raise ConfigError("--format must be json, dot or text")
    return cfg


def _need(cfg: dict, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError(f"{cfg['command']} needs " + ", ".join(f"--{k}" for k in missing))


def _coxeter_from(cfg: dict) -> CoxeterMatrix:
    if cfg.get("coxeter"):
        return parse_coxeter(cfg["coxeter"])
    if cfg.get("gcm"):
        return gcm_to_coxeter(parse_gcm(cfg["gcm"]))
    raise ConfigError(f"{cfg['command']} needs --coxeter or --gcm")


def _check(name: str, ok: bool, details=None) -> dict:
    return {"name": name, "status": "PASS" if ok else "FAIL", "details": details if details is not None else {}}


def _element(system, text, label):
    word = parse_word(text)
    if any(not 1 <= s <= system.n for s in word):
        raise ConfigError(f"--{label} uses a generator outside 1..{system.n}")
    return system.element(word)


# -- commands -----------------------------------------------------------------


def cmd_nf(cfg):
    from .coxeter import reduced_expressions

    system = system_for(_coxeter_from(cfg))
    raw = parse_word(cfg.get("word"))
    w = _element(system, cfg.get("word"), "word")
    words = sorted(reduced_expressions(w))
    results = {"input": list(raw), "normalForm": list(w.word), "length": len(w),
               "reducedExpressions": [list(x) for x in words]}
    again = system.element(w.word)
    return results, [_check("idempotent", again == w), _check("shortlex-least", list(w.word) == list(words[0]))]


def cmd_theta(cfg):
    from .roots import theta

    _need(cfg, "gcm")
    A = parse_gcm(cfg["gcm"])
    system = system_for(gcm_to_coxeter(A))
    w = _element(system, cfg.get("word"), "word")
    th = theta(w, A)
    return ({"w": list(w.word), "theta": th.to_json()},
            [_check("size-equals-length", len(th) == len(w))])


def cmd_finite_type(cfg):
    C = _coxeter_from(cfg)
    P = finite_type_subsets(C)
    subsets = sorted((sorted(I) for I in P), key=lambda s: (len(s), s))
    orders = {",".join(map(str, s)): parabolic_order(C, s) for s in subsets}
    agree = all(brute_force_order(C, s) == parabolic_order(C, s)
                for r in range(C.n + 1) for s in _all_subsets(C.n, r))
    return ({"coxeter": C.to_json(), "subsets": subsets, "orders": orders},
            [_check("classifier-matches-enumeration", agree)])


def _all_subsets(n, r):
    from itertools import combinations

    return [list(c) for c in combinations(range(1, n + 1), r)]


def cmd_davis(cfg):
    from .davis import davis_poset, longest_is_monotone
    from .posets import certify

    _need(cfg, "radius")
    C = _coxeter_from(cfg)
    mode = cfg.get("mode") or "min"
    D = davis_poset(C, cfg["radius"], by=mode)
    cert = certify(D)
    results = {"nodes": [str(x) for x in D], "size": len(D), "covers": len(D.covers()),
               "certificate": cert.to_json()}
    return results, [_check("longest-element-monotone", longest_is_monotone(D))], D


def cmd_check_combin(cfg):
    from .davis import check_combin, sweep_combin

    C = _coxeter_from(cfg)
    system = system_for(C)
    if cfg.get("w") is not None:
        v = _element(system, cfg.get("v"), "v")
        w = _element(system, cfg["w"], "w")
        if not weak_leq(v, w):
            raise ConfigError(f"v = {list(v.word)} is not below w = {list(w.word)}")
        reports = [check_combin(system, v, w)]
    else:
        _need(cfg, "maxlen")
        reports = sweep_combin(system, cfg["maxlen"])
    failures = [r.input for r in reports if not r.passed]
    results = {"pairs": len(reports), "reports": [r.to_json() for r in reports]}
    return results, [_check("preimages-contractible", not failures,
                            {"pairs": len(reports), "failures": failures})]


def cmd_check_pullback(cfg):
    from .davis import check_pullback_ball, check_pullback_interval

    C = _coxeter_from(cfg)
    system = system_for(C)
    if cfg.get("w") is not None:
        v = _element(system, cfg.get("v"), "v")
        w = _element(system, cfg["w"], "w")
        if not weak_leq(v, w):
            raise ConfigError(f"v = {list(v.word)} is not below w = {list(w.word)}")
        rep = check_pullback_interval(system, v, w)
    else:
        _need(cfg, "radius")
        rep = check_pullback_ball(system, cfg["radius"])
    out = rep.to_json(label=lambda u: list(u.word))
    out["surrogate"] = "contractibility certified by dismantling or vanishing reduced homology to dimension 3"
    return out, [_check("comma-fibers-contractible", rep.passed, {"failures": out["failures"]})]


def _tree_for(cfg):
    from .unipotent import build_tree

    _need(cfg, "gcm")
    A = parse_gcm(cfg["gcm"])
    depth = cfg.get("depth")
    return A, build_tree(A, 3 if depth is None else depth)


def cmd_gp(cfg):
    from .unipotent import GPElement, gp_inverse, gp_multiply, in_Uw

    _need(cfg, "p", "x")
    op = cfg.get("op")
    if op not in ("mul", "inv", "member"):
        raise ConfigError("gp needs an operation: mul, inv or member")
    A, T = _tree_for(cfg)
    p, k = cfg["p"], cfg["k"]
    x = GPElement.from_json(_load_json(cfg["x"]), p, k)
    for u in x.support:
        if u not in T:
            raise ConfigError(f"node {list(u)} lies outside the tree of depth {T.depth}")
    if op == "mul":
        _need(cfg, "y")
        y = GPElement.from_json(_load_json(cfg["y"]), p, k)
        prod = gp_multiply(x, y, T)
        return {"x": x.to_json(), "y": y.to_json(), "product": prod.to_json()}, []
    if op == "inv":
        inv = gp_inverse(x)
        return ({"x": x.to_json(), "inverse": inv.to_json()},
                [_check("inverse-law", gp_multiply(x, inv).is_identity)])
    w = parse_word(cfg.get("w"))
    return {"x": x.to_json(), "w": list(w), "member": in_Uw(x, w)}, []


def cmd_orbit_poset(cfg):
    from .posets import certify
    from .unipotent import orbit_poset

    _need(cfg, "p", "i")
    A, T = _tree_for(cfg)
    mode = cfg.get("mode") or "weak"
    radius = cfg.get("radius") if cfg.get("radius") is not None else T.depth
    if not 1 <= cfg["i"] <= A.n:
        raise ConfigError(f"--i must lie in 1..{A.n}")
    P = orbit_poset(T, cfg["i"], cfg["p"], cfg["k"], mode, radius)
    cert = certify(P)
    return ({"size": len(P), "certificate": cert.to_json(), "mode": mode},
            [_check("orbit-poset-contractible", cert.passed)], P)


def _spec_from(text: str, q: int):
    from .graded import GradedAlgebraSpec

    data = _load_json(text)
    if isinstance(data, list):
        data = {"char": q, "generators": data}
    return GradedAlgebraSpec.from_json(data)


def cmd_tor(cfg):
    from .graded import koszul_tor, total_from_bigraded

    _need(cfg, "q", "ring")
    X = _spec_from(cfg["ring"], cfg["q"])
    L = _spec_from(cfg.get("module") or "[]", cfg["q"])
    spec, big = koszul_tor(X, L, cfg["maxdeg"])
    return ({"case": "trivial-module", "algebra": spec.describe(),
             "generators": [g.to_json() for g in spec.generators],
             "series": total_from_bigraded(big, cfg["maxdeg"]).to_json(),
             "bigraded": [[h, i, c] for (h, i), c in big.items()]}, [])


def cmd_rank2_report(cfg):
    from .graded import e2_rank2_fixed, kernel_series, rank2_compare, STATED_COLIMIT_COUNT

    _need(cfg, "p", "l", "q")
    p, k, l, q = cfg["p"], cfg["k"], cfg["l"], cfg["q"]
    comp = rank2_compare(p, k, l, q)
    # the degree-4l counts of the p^k = 1 branch depend only on l
    ker = kernel_series(l, q, 4 * l)
    e2_unit = e2_rank2_fixed(p, k, l, q, 4 * l) if comp.branch == "p^k=1" else None
    unit_counts = {
        "E2": e2_unit.series[4 * l] if e2_unit else _unit_branch_e2(l, q),
        "colimit": ker[4 * l - 1] + ker[4 * l],
        "colimitStated": STATED_COLIMIT_COUNT["odd" if l % 2 else "even"],
    }
    unit_counts["verdict"] = "distinct" if unit_counts["E2"] != unit_counts["colimit"] else "agree-in-degree-4l"
    results = {"comparison": comp.to_json(), "unitBranchCounts": unit_counts,
               "verdict": comp.verdict}
    checks = [_check("unit-branch-counts-differ", unit_counts["E2"] != unit_counts["colimit"], unit_counts)]
    if comp.branch == "p^k=1":
        checks.append(_check("colimit-count-matches-stated", unit_counts["colimit"] == unit_counts["colimitStated"],
                             {"computed": unit_counts["colimit"], "stated": unit_counts["colimitStated"],
                              "note": "for even l the stated count is an open question; the verdict does not depend on it"}))
    return results, checks


def _unit_branch_e2(l: int, q: int) -> int:
    from .graded import AdamsCell, series_of, adams_case_closed_form

    return series_of(adams_case_closed_form(AdamsCell(True, True), l, q), 4 * l)[4 * l]


def cmd_levi_fixed(cfg):
    from .graded import levi_and_torus_fixed, levi_closed_form, pk_class, series_of, torus_closed_form

    _need(cfg, "p", "q")
    p, k, q, n = cfg["p"], cfg["k"], cfg["q"], cfg["maxdeg"]
    levi, torus = levi_and_torus_fixed(p, k, q, n)
    cls = pk_class(p, k, q)
    ok_levi = levi.series == series_of(levi_closed_form(cls, q), n)
    ok_torus = torus.series == series_of(torus_closed_form(cls, q), n)
    return ({"levi": levi.to_json(), "torus": torus.to_json()},
            [_check("levi-matches-table", ok_levi), _check("torus-matches-table", ok_torus)])


def cmd_bkfq(cfg):
    from .graded import bk_finite_field_case

    _need(cfg, "p", "q")
    rep = bk_finite_field_case(cfg["p"], cfg["k"], cfg["q"], cfg["maxdeg"], cfg.get("l"))
    return rep.to_json(), []


def cmd_tree_hilbert(cfg):
    from .trees import tree_hilbert

    A, T = _tree_for(cfg)
    rep = tree_hilbert(T, max_deg=cfg["maxdeg"])
    return rep.to_json(), []


def cmd_telescope(cfg):
    from .trees import telescope_limit

    _need(cfg, "p", "q")
    stages = list(range(1, 9)) if cfg.get("stages") is None else list(parse_word(cfg["stages"]))
    rep = telescope_limit(stages, cfg["p"], cfg["k"], cfg["q"], cfg["maxdeg"])
    checks = [_check("restrictions-surjective", rep.all_surjective)]
    if cfg["q"] != cfg["p"]:
        checks.append(_check("positive-degrees-vanish", rep.vanishing))
    return rep.to_json(), checks


def cmd_w3(cfg):
    from .trees import w3_presentation

    rep = w3_presentation(min(cfg["maxdeg"], 10))
    # the printed ideal omits one tree-forced monomial; that is reported in
    # the results rather than failing the run
    return rep.to_json(), [_check("series-matches-tree", rep.matches_tree)]


def cmd_hasse_dot(cfg):
    A, T = _tree_for(cfg)
    return {"nodes": len(T), "depth": T.depth}, [], T


HANDLERS = {
    "nf": cmd_nf, "theta": cmd_theta, "finite-type": cmd_finite_type, "davis": cmd_davis,
    "check-combin": cmd_check_combin, "check-pullback": cmd_check_pullback, "gp": cmd_gp,
    "orbit-poset": cmd_orbit_poset, "tor": cmd_tor, "rank2-report": cmd_rank2_report,
    "levi-fixed": cmd_levi_fixed, "bkfq": cmd_bkfq, "tree-hilbert": cmd_tree_hilbert,
    "telescope": cmd_telescope, "w3": cmd_w3, "hasse-dot": cmd_hasse_dot,
}


def dispatch(cfg: dict) -> tuple[int, str]:
    """Run one command; return (exit status, rendered artifact)."""
    outcome = HANDLERS[cfg["command"]](cfg)
    results, checks = outcome[0], outcome[1]
    graph = outcome[2] if len(outcome) > 2 else None
    status = EXIT_FAIL if any(c["status"] == "FAIL" for c in checks) else EXIT_OK
    fmt = cfg["format"]
    if cfg["command"] == "hasse-dot" and fmt == "json" and "format" not in cfg.get("_explicit", ()):
        fmt = "dot"
    if fmt == "dot":
        if graph is None:
            raise ConfigError(f"{cfg['command']} has no graph to export as DOT")
        text = graph.to_dot()
    elif fmt == "text":
        lines = [f"{cfg['command']}: {'ok' if status == EXIT_OK else 'check failed'}"]
        lines += [f"  {c['name']}: {c['status']}" for c in checks]
        text = "\n".join(lines) + "\n"
    else:
        inputs = {k: v for k, v in sorted(cfg.items()) if not k.startswith("_")}
        report = {"tool_version": __version__, "command": cfg["command"], "inputs": inputs,
                  "seed": cfg["seed"], "results": results, "checks": checks}
        text = json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n"
    return status, text


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, float) and obj == float("inf"):
        return "inf"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        cfg["_explicit"] = tuple(k for k in OPTIONS if getattr(args, k) is not None)
        status, text = dispatch(cfg)
    except PosetSizeError as exc:
        print(f"kmcomb: size limit exceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, InputError, CartanMatrixError, CoxeterMatrixError, PosetError,
            json.JSONDecodeError, ValueError, KeyError, IndexError) as exc:
        kind = type(exc).__name__
        print(f"kmcomb: input error ({kind}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return status
