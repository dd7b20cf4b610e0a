"""Registry of catalog families (with parameter schemas) and named presets."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import catalog
from .catalog import FamilySpec
from .errors import ConfigError, CpdError


@dataclass(frozen=True)
class Param:
    name: str
    kind: str          # "profile", "real", "int", "sign" or "expr" (profile or real)
    doc: str
    optional: bool = False


@dataclass(frozen=True)
class Family:
    family_id: str
    builder: Callable[..., FamilySpec]
    params: tuple[Param, ...]
    theorem: str
    domain_rule: str
    default_preset: str

    def schema(self) -> list[dict]:
        return [{"name": p.name, "kind": p.kind, "doc": p.doc, "optional": p.optional}
                for p in self.params]


@dataclass(frozen=True)
class Preset:
    name: str
    family_id: str
    params: dict
    domain: tuple[float, float, float, float]
    geodesic_start: tuple[float, float] | None = None
    negative_control: bool = False
    notes: str = ""


_ANCHORS = (Param("s0", "real", "lower limit of the s-integrals (default: domain midpoint)", True),
            Param("t0", "real", "lower limit of the t-integrals (default: domain midpoint)", True))

FAMILIES: dict[str, Family] = {f.family_id: f for f in [
    Family("spacelike_general", catalog.spacelike_general,
           (Param("theta", "profile", "angle function theta(s), theta' != 0"),
            Param("psi", "profile", "profile Psi(t)")) + _ANCHORS,
           "space-like surface, k = (1,0,0): general case with m = int sinh(theta) + Psi",
           "m(s,t) must not vanish", "spacelike-general"),
    Family("spacelike_flat", catalog.spacelike_flat,
           (Param("theta", "profile", "angle function theta(s), theta' != 0"),
            Param("t_const", "real", "the constant t0 of the flat case"),
            _ANCHORS[0]),
           "flat space-like surface, k = (1,0,0)", "any rectangle", "spacelike-flat"),
    Family("spacelike_maximal", catalog.spacelike_maximal,
           (Param("c", "real", "non-zero constant"),),
           "maximal space-like surface, theta(s) = arctanh(-c s)",
           "|c s| <= 1 - margin", "maximal-c1"),
    Family("bscroll", catalog.bscroll, (),
           "flat minimal B-scroll, non-diagonalizable shape operator with k_1 = 0",
           "s > 1/2 + margin", "bscroll"),
    Family("lorentzian_family", catalog.lorentzian_family,
           (Param("variant", "int", "1..4: circular (1, 2) or hyperbolic (3, 4) angle, general (1, 3) or flat (2, 4)"),
            Param("theta", "profile", "angle function theta(s), theta' != 0"),
            Param("psi_or_t0", "expr", "profile Psi(t) for variants 1 and 3, constant t0 for 2 and 4")) + _ANCHORS,
           "Lorentzian surface, k = (1,0,0), diagonalizable shape operator",
           "variants 1-2: sin(theta), cos(theta) != 0; variants 3-4: theta != 0; m must not vanish",
           "lorentzian-1"),
    Family("lorentzian_minimal", catalog.lorentzian_minimal,
           (Param("variant", "int", "1: theta = arccot(c s), 2: theta = arccoth(c s)"),
            Param("c", "real", "non-zero constant")),
           "minimal Lorentzian surface, k = (1,0,0)",
           "variant 2: c s > 1 + margin", "lorentzian-minimal-1"),
    Family("lightlike_general", catalog.lightlike_general,
           (Param("phi", "profile", "phi(s), phi != 0 and phi' != 0"),
            Param("gamma0", "profile", "gamma0(t)"),
            Param("b", "profile", "b(t)"),
            Param("eps", "sign", "-1 (time-like surface) or +1 (space-like surface)")) + _ANCHORS,
           "surface with a canonical principal direction relative to k = (1,0,1)",
           "1 - 2 eps gamma0 > margin; sqrt(1 - 2 eps gamma0) b + s gamma0' != 0",
           "lightlike-general"),
    Family("lightlike_flat", catalog.lightlike_flat,
           (Param("phi", "profile", "phi(s), phi != 0 and phi' != 0"),
            Param("c", "real", "constant value of gamma0"),
            Param("eps", "sign", "-1 or +1"),
            _ANCHORS[0]),
           "flat surface relative to k = (1,0,1)", "1 - 2 c eps > margin", "lightlike-flat"),
    Family("lightlike_extremal", catalog.lightlike_extremal,
           (Param("c1", "real", "shift in s"),
            Param("c2", "real", "positive constant"),
            Param("eps", "sign", "-1 minimal (time-like), +1 maximal (space-like)")),
           "minimal / maximal surface relative to k = (1,0,1)",
           "1 - 2 eps t > margin; s != c1", "lightlike-minimal"),
    Family("graph_counterexample", catalog.graph_counterexample, (),
           "negative control: the graph (s, t, s t / 2) is not CPD relative to (1,0,0)",
           "det g > 0", "graph-counterexample"),
]}

PRESETS: dict[str, Preset] = {p.name: p for p in [
    Preset("spacelike-general", "spacelike_general", {"theta": "s+1", "psi": "1", "s0": 0.1},
           (0.1, 1.4, -1.0, 1.0), geodesic_start=(0.15, 0.0)),
    Preset("spacelike-flat", "spacelike_flat", {"theta": "s", "t_const": 0.0}, (0.1, 1.1, -1.0, 1.0)),
    Preset("maximal-c1", "spacelike_maximal", {"c": 1.0}, (-0.8, 0.8, -1.0, 1.0)),
    Preset("bscroll", "bscroll", {}, (0.6, 2.0, -1.0, 1.0)),
    Preset("lorentzian-1", "lorentzian_family", {"variant": 1, "theta": "s", "psi_or_t0": "1"},
           (0.15, 1.45, -1.0, 1.0), geodesic_start=(0.2, 0.0)),
    Preset("lorentzian-2", "lorentzian_family", {"variant": 2, "theta": "s", "psi_or_t0": 0.0},
           (0.2, 1.2, -1.0, 1.0)),
    Preset("lorentzian-3", "lorentzian_family", {"variant": 3, "theta": "s+0.5", "psi_or_t0": "1"},
           (0.2, 1.2, -1.0, 1.0)),
    Preset("lorentzian-4", "lorentzian_family", {"variant": 4, "theta": "s+0.5", "psi_or_t0": 0.0},
           (0.2, 1.2, -1.0, 1.0)),
    Preset("lorentzian-minimal-1", "lorentzian_minimal", {"variant": 1, "c": 1.0}, (0.2, 2.0, -1.0, 1.0)),
    Preset("lorentzian-minimal-2", "lorentzian_minimal", {"variant": 2, "c": 1.0}, (1.2, 2.5, -1.0, 1.0)),
    Preset("lightlike-general", "lightlike_general",
           {"phi": "s+2", "gamma0": "t/4", "b": "1", "eps": -1},
           (0.0, 4.0, -1.0, 1.0), geodesic_start=(0.05, 0.0)),
    Preset("lightlike-flat", "lightlike_flat", {"phi": "s+2", "c": 0.1, "eps": -1}, (0.0, 1.0, -1.0, 1.0)),
    Preset("lightlike-minimal", "lightlike_extremal", {"c1": 0.0, "c2": 3.0, "eps": -1},
           (0.5, 1.5, -0.4, 1.0)),
    Preset("lightlike-maximal", "lightlike_extremal", {"c1": 0.0, "c2": 3.0, "eps": 1},
           (0.5, 1.5, -1.0, 0.4)),
    Preset("graph-counterexample", "graph_counterexample", {}, (-0.6, 1.2, -0.6, 1.2),
           geodesic_start=(-0.5, 0.3), negative_control=True),
]}


def canonical_family_id(name: str) -> str:
    fid = name.strip().replace("-", "_")
    if fid not in FAMILIES:
        raise ConfigError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return fid


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name.strip()]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def _coerce(p: Param, raw):
    if raw is None:
        return None
    try:
        if p.kind == "real":
            return float(raw)
        if p.kind in ("int", "sign"):
            as_float = float(raw)
            if as_float != int(as_float):
                raise ValueError
            return int(as_float)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {p.name}={raw!r} is not a valid {p.kind}") from None
    if p.kind == "expr" and isinstance(raw, str):
        try:
            return float(raw)
        except ValueError:
            return raw
    return raw


def build(family_id: str, params: dict, domain) -> FamilySpec:
    """Construct a family from loosely typed parameters (strings allowed)."""
    fam = FAMILIES[canonical_family_id(family_id)]
    known = {p.name for p in fam.params}
    extra = set(params) - known
    if extra:
        raise ConfigError(f"unknown parameter(s) for {fam.family_id}: {', '.join(sorted(extra))}")
    kwargs = {}
    for p in fam.params:
        if p.name not in params:
            if not p.optional:
                raise ConfigError(f"missing parameter {p.name!r} for {fam.family_id}")
            continue
        kwargs[p.name] = _coerce(p, params[p.name])
    try:
        spec = fam.builder(**kwargs, domain=domain)
    except CpdError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot build {fam.family_id}: {exc}") from None
    spec.params = {k: v for k, v in kwargs.items()}
    return spec


def build_preset(preset: Preset | str, domain=None) -> FamilySpec:
    preset = get_preset(preset) if isinstance(preset, str) else preset
    return build(preset.family_id, dict(preset.params), domain or preset.domain)


def presets_of(family_id: str) -> list[Preset]:
    fid = canonical_family_id(family_id)
    return [p for p in PRESETS.values() if p.family_id == fid]


def describe_family(fam: Family) -> dict:
    return {
        "family_id": fam.family_id,
        "theorem": fam.theorem,
        "parameters": fam.schema(),
        "domain": fam.domain_rule,
        "presets": [p.name for p in presets_of(fam.family_id)],
        "default_preset": fam.default_preset,
    }


def describe_preset(p: Preset) -> dict:
    return {"name": p.name, "family_id": p.family_id, "params": dict(p.params),
            "domain": list(p.domain), "negative_control": p.negative_control}
