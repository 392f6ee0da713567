"""Scenario spec files: TOML in, validated and normalized, TOML out.

Rationals are written as strings (``"1/3"``) or integers; floats are only
accepted for tolerances. Bands use the text format of
:func:`framerange.bands.format_band`. After parsing, every rational and band
is re-rendered in canonical form, so ``serialize(parse(text))`` is a fixed
point of ``serialize . parse``.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .bands import as_fraction, format_band, format_fraction, parse_band
from .errors import FrameRangeError, ParseError, SingularMatrix, UnknownKey
from .lattice import as_lattice
from .profiles import profile_from_dict

COMMANDS = (
    "multiplicity",
    "sampling-check",
    "classify",
    "classify-union",
    "mux-demo",
    "wavelet-disjoint",
    "wh-disjoint",
    "quasi-affine",
    "msf-check",
)

# field kinds: band, lattice, lattices, rational, int, float, bool, choice:<a|b>, str,
# profiles, windows, or a nested dict schema
_COMMON = {"command": "str", "report": "str", "csv": "str", "claim": "str"}

_PAIR = {"band": "band", "lattice": "lattice"}
_UNION_SIDE = {"band": "band", "lattices": "lattices"}
_MUX_SIDE = {"band": "band", "step": "rational"}
_WAVELET_SIDE = {"lattice": "lattice", "profiles": "profiles"}
_QA_SIDE = {"dilation": "rational", "lattice": "lattice", "profiles": "profiles"}
_WH_SIDE = {"modulation": "lattice", "translation": "lattice", "windows": "windows"}

SCHEMAS = {
    "multiplicity": {"band": "band", "lattice": "lattice", "resolution": "int"},
    "sampling-check": {"band": "band", "lattice": "lattice"},
    "classify": {"first": _PAIR, "second": _PAIR, "mode": "choice:single|bessel", "period": "rational"},
    "classify-union": {"first": _UNION_SIDE, "second": _UNION_SIDE},
    "mux-demo": {"first": _MUX_SIDE, "second": _MUX_SIDE, "period": "rational", "seed": "int",
                 "force": "bool", "tolerance": "float"},
    "wavelet-disjoint": {"first": _WAVELET_SIDE, "second": _WAVELET_SIDE},
    "wh-disjoint": {"first": _WH_SIDE, "second": _WH_SIDE, "route": "choice:auto|frequency|time"},
    "quasi-affine": {"first": _QA_SIDE, "second": _QA_SIDE, "r_min": "int"},
    "msf-check": {"band": "band", "dilation": "rational", "j_max": "int"},
}

REQUIRED = {
    "multiplicity": ("band", "lattice"),
    "sampling-check": ("band", "lattice"),
    "classify": ("first", "second"),
    "classify-union": ("first", "second", "claim"),
    "mux-demo": ("first", "second", "period"),
    "wavelet-disjoint": ("first", "second"),
    "wh-disjoint": ("first", "second"),
    "quasi-affine": ("first", "second"),
    "msf-check": ("band", "dilation", "j_max"),
}

CLAIMS = {
    "multiplicity": ("sampling",),
    "sampling-check": ("sampling",),
    "classify": ("equal", "orthogonal", "contained", "overlap"),
    "classify-union": ("equal", "orthogonal", "contained", "overlap"),
    "mux-demo": ("recovered",),
    "wavelet-disjoint": ("orthogonal", "equal", "contained"),
    "wh-disjoint": ("orthogonal", "equal", "contained"),
    "quasi-affine": ("orthogonal", "equal", "contained"),
    "msf-check": ("disjoint",),
}

_SIDE_REQUIRED = {
    "classify": ("band", "lattice"),
    "classify-union": ("band", "lattices"),
    "mux-demo": ("band", "step"),
    "wavelet-disjoint": ("lattice", "profiles"),
    "wh-disjoint": ("modulation", "translation", "windows"),
    "quasi-affine": ("dilation", "lattice", "profiles"),
}


@dataclass(frozen=True)
class ScenarioSpec:
    command: str
    data: dict
    source: str = ""

    def get(self, key, default=None):
        return self.data.get(key, default)

    def to_toml(self) -> str:
        return serialize(self)


def _line_of(text: str, path: str) -> int | None:
    """Best-effort line number of a dotted key in the source text."""
    if not text:
        return None
    parts = path.split(".")
    lines = text.splitlines()
    start = 0
    if len(parts) > 1:
        header = re.compile(r"^\s*\[+\s*" + re.escape(".".join(parts[:-1])) + r"\b")
        for i, ln in enumerate(lines):
            if header.match(ln):
                start = i
                break
    key = re.compile(r"^\s*\"?" + re.escape(parts[-1]) + r"\"?\s*=")
    for i in range(start, len(lines)):
        if key.match(lines[i]):
            return i + 1
    return None


class _Ctx:
    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, path: str, cls=ParseError):
        raise cls(message, line=_line_of(self.text, path), key=path)


def _rational(v, path, ctx):
    if isinstance(v, float):
        ctx.fail("floats are not accepted for exact quantities; write a rational string like \"1/3\"", path)
    if not isinstance(v, (int, str)) or isinstance(v, bool):
        ctx.fail(f"expected a rational, got {type(v).__name__}", path)
    try:
        return as_fraction(v)
    except FrameRangeError as exc:
        ctx.fail(str(exc), path)


def _lattice(v, path, ctx):
    try:
        if isinstance(v, list):
            if v and isinstance(v[0], list):
                entries = [[_rational(x, path, ctx) for x in row] for row in v]
            else:
                entries = [_rational(x, path, ctx) for x in v]
        else:
            entries = _rational(v, path, ctx)
        lat = as_lattice(entries, len(entries) if isinstance(entries, list) else 1)
    except SingularMatrix as exc:
        ctx.fail(f"singular lattice: {exc}", path, SpecSingularMatrix)
    except FrameRangeError as exc:
        if isinstance(exc, ParseError):
            raise
        ctx.fail(str(exc), path)
    if isinstance(entries, list):
        if isinstance(entries[0], list):
            return [[format_fraction(x) for x in row] for row in entries], lat
        return [format_fraction(x) for x in entries], lat
    return format_fraction(entries), lat


class SpecSingularMatrix(ParseError, SingularMatrix):
    """Singular lattice found while validating a spec."""


def _band(v, path, ctx):
    if not isinstance(v, str):
        ctx.fail("bands are written as strings like \"[-1,-1/2) u [1/2,1)\"", path)
    try:
        band = parse_band(v)
    except FrameRangeError as exc:
        ctx.fail(f"bad band: {exc}", path)
    if band.is_empty:
        ctx.fail("band is empty", path)
    return format_band(band)


def _profile(v, path, ctx, domain=None):
    if not isinstance(v, dict):
        ctx.fail("profiles are tables", path)
    try:
        p = profile_from_dict(v)
    except (FrameRangeError, KeyError, TypeError, ValueError) as exc:
        ctx.fail(f"bad profile: {exc}", path)
    if domain is not None and p.domain != domain:
        ctx.fail(f"profile lives in the {p.domain} domain, expected {domain}", path)
    return p.to_dict()


def _check(value, kind, path, ctx):
    if isinstance(kind, dict):
        if not isinstance(value, dict):
            ctx.fail("expected a table", path)
        return _check_table(value, kind, path, ctx)
    if kind == "band":
        return _band(value, path, ctx)
    if kind == "lattice":
        return _lattice(value, path, ctx)[0]
    if kind == "lattices":
        if not isinstance(value, list) or not value:
            ctx.fail("expected a non-empty list of lattices", path)
        return [_lattice(x, path, ctx)[0] for x in value]
    if kind == "rational":
        return format_fraction(_rational(value, path, ctx))
    if kind == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            ctx.fail("expected an integer", path)
        return value
    if kind == "float":
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            ctx.fail("expected a number", path)
        return float(value)
    if kind == "bool":
        if not isinstance(value, bool):
            ctx.fail("expected true or false", path)
        return value
    if kind == "str":
        if not isinstance(value, str):
            ctx.fail("expected a string", path)
        return value
    if kind.startswith("choice:"):
        choices = kind[7:].split("|")
        if value not in choices:
            ctx.fail(f"expected one of {choices}, got {value!r}", path)
        return value
    if kind == "profiles":
        if not isinstance(value, list) or not value:
            ctx.fail("expected a non-empty list of profiles", path)
        return [_profile(p, path, ctx) for p in value]
    if kind == "windows":
        if not isinstance(value, list) or not value:
            ctx.fail("expected a non-empty list of windows", path)
        out = []
        for w in value:
            if not isinstance(w, dict):
                ctx.fail("windows are tables with 'frequency' and/or 'time' profiles", path)
            extra = set(w) - {"frequency", "time"}
            if extra:
                ctx.fail(f"unknown window key {sorted(extra)[0]!r}", path, UnknownKey)
            if not w:
                ctx.fail("window needs a 'frequency' or 'time' profile", path)
            item = {}
            for dom in ("frequency", "time"):
                if dom in w:
                    prof = dict(w[dom])
                    if prof.get("type") != "fourier":
                        prof.setdefault("domain", dom)
                    item[dom] = _profile(prof, path, ctx, dom)
            out.append(item)
        return out
    raise AssertionError(kind)


def _check_table(table: dict, schema: dict, prefix: str, ctx) -> dict:
    out = {}
    for key, value in table.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in schema:
            ctx.fail(f"unknown key {key!r}", path, UnknownKey)
        out[key] = _check(value, schema[key], path, ctx)
    return out


def parse_spec(source) -> ScenarioSpec:
    """Parse a spec from a path or from TOML text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and source.endswith(".toml")):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        if line is None:
            m = re.search(r"line (\d+)", str(exc))
            line = int(m.group(1)) if m else None
        raise ParseError(f"invalid TOML: {exc}", line=line) from None
    return validate(raw, text)


def validate(raw: dict, text: str = "") -> ScenarioSpec:
    ctx = _Ctx(text)
    command = raw.get("command")
    if command not in COMMANDS:
        ctx.fail(f"command must be one of {list(COMMANDS)}, got {command!r}", "command")
    schema = dict(_COMMON, **SCHEMAS[command])
    data = _check_table(raw, schema, "", ctx)
    for key in REQUIRED[command]:
        if key not in data:
            ctx.fail(f"missing required key {key!r}", key)
    if "claim" in data and data["claim"] not in CLAIMS[command]:
        ctx.fail(f"claim for {command} must be one of {list(CLAIMS[command])}", "claim")
    for side in ("first", "second"):
        for key in _SIDE_REQUIRED.get(command, ()):
            if key not in data.get(side, {key: None}):
                ctx.fail(f"missing required key {key!r}", f"{side}.{key}")
    return ScenarioSpec(command, data, text)


_ORDER = ("command", "claim", "mode", "route", "band", "lattice", "dilation", "j_max", "r_min",
          "resolution", "period", "seed", "force", "tolerance", "report", "csv", "first", "second")


def _ordered(d: dict) -> dict:
    keys = sorted(d, key=lambda k: (_ORDER.index(k) if k in _ORDER else len(_ORDER), k))
    return {k: _ordered(d[k]) if isinstance(d[k], dict) else d[k] for k in keys}


def serialize(spec: ScenarioSpec) -> str:
    """Canonical TOML text for a validated spec."""
    return tomli_w.dumps(_ordered(spec.data))
