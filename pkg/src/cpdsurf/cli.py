"""Command-line front end: ``list``, ``verify``, ``export`` and ``suite``.

Exit status: 0 when every check passes, 1 when a verification check fails,
2 for configuration or usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cpd import cell_centres
from .errors import ConfigError, CpdError
from .presets import (FAMILIES, PRESETS, build, canonical_family_id, describe_family,
                      describe_preset, get_preset)
from .suite import (CHECKS, checks_for, dumps, measure, merge_tolerances, point_row,
                    preset_rng, run_suite, seed_from_env)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
CONFIG_KEYS = {"preset", "family", "params", "grid", "domain", "tol", "json", "format",
               "check", "only", "output"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# parsing helpers -----------------------------------------------------------

def parse_grid(text) -> tuple[int, int]:
    if isinstance(text, (list, tuple)) and len(text) == 2:
        parts = list(text)
    else:
        parts = str(text).lower().split("x")
    try:
        n_s, n_t = (int(p) for p in parts)
    except (TypeError, ValueError):
        raise ConfigError(f"grid must look like NxM, got {text!r}") from None
    if n_s < 2 or n_t < 2:
        raise ConfigError("grid dimensions must be at least 2")
    return n_s, n_t


def parse_domain(text) -> tuple[float, float, float, float]:
    parts = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        vals = tuple(float(p) for p in parts)
    except (TypeError, ValueError):
        raise ConfigError(f"domain must be a,b,c,d, got {text!r}") from None
    if len(vals) != 4 or not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise ConfigError(f"domain must be s_min,s_max,t_min,t_max with min < max, got {text!r}")
    return vals


def parse_pairs(items, what: str) -> dict:
    out = {}
    for item in items or []:
        if isinstance(item, dict):
            out.update(item)
            continue
        key, sep, val = str(item).partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{what} must be name=value, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _split(items) -> list[str]:
    out = []
    if isinstance(items, str):
        items = [items]
    for item in items or []:
        out.extend(x.strip() for x in str(item).split(",") if x.strip())
    return out


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    return cfg


def _merged(args, cfg: dict, key: str, attr: str | None = None):
    v = getattr(args, attr or key, None)
    return v if v not in (None, []) else cfg.get(key)


def resolve_surface(args, cfg: dict):
    """Returns (spec, preset-or-None, label dict) from flags and config."""
    preset_name = _merged(args, cfg, "preset")
    family = _merged(args, cfg, "family")
    if preset_name and family:
        raise ConfigError("give either --preset or --family, not both")
    if not preset_name and not family:
        raise ConfigError("one of --preset or --family is required")
    params = parse_pairs(cfg.get("params") if isinstance(cfg.get("params"), list) else
                         [cfg["params"]] if isinstance(cfg.get("params"), dict) else [], "param")
    params.update(parse_pairs(args.param, "--param"))
    domain_raw = _merged(args, cfg, "domain")
    domain = parse_domain(domain_raw) if domain_raw is not None else None

    if preset_name:
        preset = get_preset(preset_name)
        fid = preset.family_id
        full = dict(preset.params)
        full.update(params)
    else:
        fid = canonical_family_id(family)
        preset = PRESETS.get(FAMILIES[fid].default_preset)
        full = dict(preset.params) if preset else {}
        full.update(params)
    dom = domain or (preset.domain if preset else None)
    if dom is None:
        raise ConfigError("--domain is required for this family")
    spec = build(fid, full, dom)
    label = {"family_id": fid, "preset": preset.name if preset_name else None,
             "params": {k: full[k] for k in sorted(full)}, "domain": list(dom)}
    if preset and (params or (domain is not None and tuple(domain) != tuple(preset.domain))):
        # the geodesic start point belongs to the preset as shipped
        preset = None
    return spec, preset, label


def _write(path: str | None, text: str) -> None:
    if not path or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, newline="\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}") from None


# commands --------------------------------------------------------------------

def cmd_list(args) -> int:
    fams = [FAMILIES[canonical_family_id(args.family)]] if args.family else list(FAMILIES.values())
    entries = [describe_family(f) for f in fams]
    if args.json is not None:
        _write(args.json, json.dumps(entries, indent=2) + "\n")
        return EXIT_PASS
    for e in entries:
        print(f"{e['family_id']}: {e['theorem']}")
        print(f"    domain: {e['domain']}")
        for p in e["parameters"]:
            opt = " (optional)" if p["optional"] else ""
            print(f"    {p['name']} [{p['kind']}]{opt}: {p['doc']}")
        if e["presets"]:
            print(f"    presets: {', '.join(e['presets'])}")
    if not args.family:
        print("\npresets:")
        for p in PRESETS.values():
            d = describe_preset(p)
            params = ", ".join(f"{k}={v}" for k, v in d["params"].items()) or "-"
            tag = "  [negative control]" if p.negative_control else ""
            print(f"  {p.name:22s} {p.family_id:20s} {params}  domain={tuple(p.domain)}{tag}")
    return EXIT_PASS


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    spec, preset, label = resolve_surface(args, cfg)
    tol = merge_tolerances(parse_pairs(args.tol, "--tol") or cfg.get("tol"))
    grid = parse_grid(_merged(args, cfg, "grid") or "21x21")
    only = set(_split(_merged(args, cfg, "check", "check")))
    bad = only - set(CHECKS)
    if bad:
        raise ConfigError(f"unknown check(s) {', '.join(sorted(bad))}; known: {', '.join(CHECKS)}")
    seed = seed_from_env()
    start = preset.geodesic_start if preset is not None else None
    rng = preset_rng(seed, preset.name if preset else label["family_id"])
    if only and "geodesic" not in only:
        start = None
    if only and "oracle" not in only:
        rng = None
    m, _ = measure(spec, grid, start, rng)
    # verify always tests the CPD claim itself; only the suite inverts the
    # expectations for negative controls
    checks = checks_for(spec, m, tol, False, only or None)
    passed = all(c["passed"] for c in checks)
    report = {"tool": "cpdsurf", "version": __version__,
              "config": {**label, "grid": list(grid), "seed": seed, "tolerances": tol,
                         "checks": sorted(only)},
              "measures": m, "checks": checks, "passed": passed}
    out_path = _merged(args, cfg, "json")
    if out_path:
        _write(out_path, dumps(report))
    name = label["preset"] or label["family_id"]
    print(f"{name}: {'PASS' if passed else 'FAIL'}  max_residual={m['max_residual']:.3e}  "
          f"cases={m['grid']['case_histogram']}")
    for c in checks:
        v = "nan" if c["value"] is None else f"{c['value']:.3e}"
        print(f"  {'ok  ' if c['passed'] else 'FAIL'} {c['check']:14s} {v} {c['op']} {c['limit']:g}")
    return EXIT_PASS if passed else EXIT_FAIL


def export_text(spec, label: dict, grid: tuple[int, int], fmt: str) -> str:
    ss, ts = cell_centres(spec.domain, *grid)
    if fmt == "obj":
        params = " ".join(f"{k}={v}" for k, v in label["params"].items())
        lines = [f"# cpdsurf {__version__} family={label['family_id']}"
                 + (f" preset={label['preset']}" if label["preset"] else ""),
                 f"# params: {params or '-'}",
                 f"# domain: {','.join(repr(float(x)) for x in label['domain'])} grid: {grid[0]}x{grid[1]}"]
        for s in ss:
            for t in ts:
                x = spec.immersion.position(float(s), float(t))
                lines.append("v " + " ".join(repr(float(c)) for c in x))
        n_t = grid[1]
        for i in range(grid[0] - 1):
            for j in range(n_t - 1):
                a = i * n_t + j + 1
                lines.append(f"f {a} {a + n_t} {a + n_t + 1} {a + 1}")
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        lines = ["s,t,x1,x2,x3,H,K,residual"]
        for s in ss:
            for t in ts:
                r = point_row(spec, float(s), float(t))
                vals = [float(s), float(t), *r["x"], r["H"], r["K"], r["residual"]]
                lines.append(",".join(repr(float(v)) for v in vals))
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}; use obj or csv")


def cmd_export(args) -> int:
    cfg = load_config(args.config)
    spec, _, label = resolve_surface(args, cfg)
    grid = parse_grid(_merged(args, cfg, "grid") or "21x21")
    fmt = (_merged(args, cfg, "format") or "obj").lower()
    _write(_merged(args, cfg, "output"), export_text(spec, label, grid, fmt))
    return EXIT_PASS


def cmd_suite(args) -> int:
    cfg = load_config(args.config)
    only = _split(_merged(args, cfg, "only"))
    tol = parse_pairs(args.tol, "--tol") or cfg.get("tol")
    grid = parse_grid(_merged(args, cfg, "grid") or "21x21")
    report = run_suite(only or None, tol, grid=grid, determinism=not args.no_determinism)
    out_path = _merged(args, cfg, "json")
    if out_path:
        _write(out_path, dumps(report))
    for c in report["criteria"]:
        state = {True: "PASS", False: "FAIL", None: "skip"}[c["passed"]]
        print(f"criterion {c['id']:2d} {state}  {c['title']}")
    for name, r in report["presets"].items():
        if not r["passed"]:
            bad = ", ".join(c["check"] for c in r["checks"] if not c["passed"])
            print(f"  preset {name} failed: {bad}")
    print("suite:", "PASS" if report["passed"] else "FAIL")
    return EXIT_PASS if report["passed"] else EXIT_FAIL


# argument parser ---------------------------------------------------------------

def _surface_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="named preset (see `list`)")
    p.add_argument("--family", help="family id; starts from its default preset's parameters")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="family parameter; profiles are expressions in one variable")
    p.add_argument("--grid", metavar="NxM", help="cell-centred sampling grid (default 21x21)")
    p.add_argument("--domain", metavar="a,b,c,d", help="parameter rectangle s_min,s_max,t_min,t_max")
    p.add_argument("--config", metavar="FILE", help="JSON file with the same keys as the flags")


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cpdsurf", description="Canonical principal direction surfaces in E^3_1.")
    ap.add_argument("--version", action="version", version=f"cpdsurf {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("list", help="list families, presets and parameter schemas")
    p.add_argument("--family", help="show only this family")
    p.add_argument("--json", nargs="?", const="-", metavar="PATH",
                   help="emit JSON (to PATH, or stdout when no path is given)")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("verify", help="verify one surface on a grid")
    _surface_args(p)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--check", action="append", default=[], metavar="NAME",
                   help=f"restrict to these checks ({', '.join(CHECKS)})")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="export a mesh (OBJ) or per-point fields (CSV)")
    _surface_args(p)
    p.add_argument("--format", choices=["obj", "csv"], type=str.lower)
    p.add_argument("--output", "-o", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("suite", help="run the full acceptance suite over all presets")
    p.add_argument("--only", action="append", default=[], metavar="NAME",
                   help="preset name or family id (repeatable, comma separated)")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--grid", metavar="NxM")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here")
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--no-determinism", action="store_true",
                   help="skip the repeated run used by the determinism criterion")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        if not getattr(args, "func", None):
            make_parser().print_help()
            return EXIT_CONFIG
        return args.func(args)
    except (ConfigError, CpdError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
