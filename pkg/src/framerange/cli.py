"""Command-line front end.

``framerange run SPEC...`` executes scenario files; ``framerange <command>``
runs a single command, taking an optional spec file plus ``--set key=value``
overrides (values are TOML, dotted keys address tables).

Exit codes: 0 success (or claim certified under ``--assert``), 1 claim not
certified, 2 malformed spec, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bands import format_band, format_fraction, parse_band
from .classify import (
    RangeKind,
    classify_bessel,
    classify_single,
    classify_union,
)
from .discrete import (
    build_model,
    cross_gram,
    frame_bounds_numeric,
    multiplex_roundtrip,
    projections_commutator,
    vector_to_csv,
)
from .errors import FrameRangeError, NotDisjoint, ParseError, RankAmbiguity
from .generators import (
    GaborGenerator,
    affine_verdict,
    msf_orthogonality_check,
    quasi_affine_report,
    wh_verdict,
)
from .lattice import as_lattice, frame_bounds_exact, multiplicity, numeric_multiplicity
from .profiles import profile_from_dict
from .scenario import COMMANDS, parse_spec, serialize, tomllib, validate

log = logging.getLogger("framerange")

EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_MALFORMED, EXIT_NUMERIC = 0, 1, 2, 3
SCHEMA_VERSION = 1


class NumericFailure(RuntimeError):
    """Oracle disagreement or tolerance breach."""


@dataclass
class Outcome:
    result: dict
    claims: dict  # claim name -> certified
    csv: str | None = None
    summary: str = ""


def _lat(v):
    if isinstance(v, list):
        if v and isinstance(v[0], list):
            return as_lattice([[Fraction(x) for x in row] for row in v])
        return as_lattice([Fraction(x) for x in v])
    return as_lattice(Fraction(v))


def _band(v):
    return parse_band(v)


# -- command runners -------------------------------------------------------------

def _run_multiplicity(spec):
    E, A = _band(spec.get("band")), _lat(spec.get("lattice"))
    res = spec.get("resolution")
    if A.is_diagonal and A.dim == E.dim:
        m = multiplicity(E, A)
        result = {
            "support": format_band(m.support()),
            "max": format_fraction(m.max()),
            "integral": format_fraction(m.integral()),
            "pieces": [[str(b), format_fraction(v)] for b, v in m.pieces],
            "approximate": False,
        }
        is_sampling = m.max() <= 1
        csv = m.to_csv()
    else:
        nm = numeric_multiplicity(E, A, res or 64)
        result = {"max": int(nm.values.max()), "resolution": nm.resolution, "approximate": True}
        is_sampling = bool(nm.values.max() <= 1)
        csv = "value\n" + "\n".join(str(int(v)) for v in nm.values.ravel()) + "\n"
    result["sampling"] = is_sampling
    return Outcome(result, {"sampling": is_sampling}, csv, f"max multiplicity {result['max']}")


def _run_sampling_check(spec):
    E, A = _band(spec.get("band")), _lat(spec.get("lattice"))
    m = multiplicity(E, A)
    ok = m.max() <= 1
    over = [str(b) for b, v in m.pieces if v > 1]
    result = {
        "kind": "Sampling" if ok else "NotSampling",
        "certified": ok,
        "sampling": ok,
        "certificate": {
            "max": format_fraction(m.max()),
            "attained_on": [str(b) for b, v in m.pieces if v == m.max()],
            "exceeds_one_on": over,
        },
    }
    if m.min_nonzero() is not None:
        c1, c2 = frame_bounds_exact(E, A)
        result["frame_bounds"] = [format_fraction(c1), format_fraction(c2)]
    summary = "sampling: true" if ok else f"sampling: false (max {m.max()} on {', '.join(over)})"
    return Outcome(result, {"sampling": ok}, m.to_csv(), summary)


_CLAIM_KINDS = {
    "equal": {RangeKind.EQUAL},
    "orthogonal": {RangeKind.ORTHOGONAL},
    "contained": {RangeKind.EQUAL, RangeKind.FIRST_INSIDE_SECOND},
    "overlap": {RangeKind.NONTRIVIAL_OVERLAP, RangeKind.EQUAL, RangeKind.FIRST_INSIDE_SECOND,
                RangeKind.SECOND_INSIDE_FIRST},
}


def _run_classify(spec):
    first, second = spec.get("first"), spec.get("second")
    E, A = _band(first["band"]), _lat(first["lattice"])
    F, B = _band(second["band"]), _lat(second["lattice"])
    mode = spec.get("mode", "single")
    rel = classify_single(E, A, F, B) if mode == "single" else classify_bessel(E, A, F, B)
    result = rel.to_report()
    claims = {}
    for claim, kinds in _CLAIM_KINDS.items():
        if mode == "single":
            claims[claim] = rel.kind in kinds
        else:
            claims[claim] = claim == "orthogonal" and rel.kind is RangeKind.ORTHOGONAL
    if spec.get("period") is not None:
        result["oracle"] = _classify_oracle(rel, E, A, F, B, Fraction(spec.get("period")))
    return Outcome(result, claims, None, f"{rel.kind.value} ({rel.grading})")


def _classify_oracle(rel, E, A, F, B, P):
    m1 = build_model(E, A.diag[0], P)
    m2 = build_model(F, B.diag[0], P)
    cg = cross_gram(m1, m2)
    out = {"cross_gram": cg, "P": format_fraction(P)}
    if rel.kind is RangeKind.ORTHOGONAL and cg > 1e-10:
        raise NumericFailure(f"exact supports are disjoint but the cross-Gram norm is {cg:.3e}")
    if rel.grading == "iff":
        comm = projections_commutator(m1, m2)
        out["commutator"] = comm
        if comm > 1e-10:
            raise NumericFailure(f"projection commutator {comm:.3e} exceeds 1e-10")
    return out


def _run_classify_union(spec):
    first, second = spec.get("first"), spec.get("second")
    E, F = _band(first["band"]), _band(second["band"])
    As = [_lat(a) for a in first["lattices"]]
    Bs = [_lat(b) for b in second["lattices"]]
    claims = {}
    for claim in ("equal", "orthogonal", "contained", "overlap"):
        v = classify_union(E, As, F, Bs, claim)
        claims[claim] = v.certified
        if claim == spec.get("claim"):
            verdict = v
    return Outcome(verdict.to_report(), claims, None, verdict.overall.value)


def _run_mux(spec):
    first, second = spec.get("first"), spec.get("second")
    P = Fraction(spec.get("period"))
    m1 = build_model(_band(first["band"]), Fraction(first["step"]), P)
    m2 = build_model(_band(second["band"]), Fraction(second["step"]), P)
    rng = np.random.default_rng(spec.get("seed", 0))
    f = rng.normal(size=len(m1.frequencies)) + 1j * rng.normal(size=len(m1.frequencies))
    g = rng.normal(size=len(m2.frequencies)) + 1j * rng.normal(size=len(m2.frequencies))
    tol = spec.get("tolerance", 1e-9)
    force = spec.get("force", False)
    result = {"models": [m1.to_dict(), m2.to_dict()], "cross_gram": cross_gram(m1, m2),
              "frame_bounds": [list(frame_bounds_numeric(m1)), list(frame_bounds_numeric(m2))]}
    try:
        mux = multiplex_roundtrip(m1, f, m2, g, force=force)
    except NotDisjoint as exc:
        result.update(kind="NotDisjoint", certified=False, reason=str(exc))
        return Outcome(result, {"recovered": False}, None, "not disjoint; multiplexing refused")
    ok = mux.crosstalk <= tol
    if not force and not ok:
        raise NumericFailure(f"crosstalk {mux.crosstalk:.3e} exceeds {tol:.1e} on a disjoint pair")
    result.update(kind="Recovered" if ok else "Crosstalk", certified=ok, crosstalk=mux.crosstalk,
                  tolerance=tol, forced=force)
    return Outcome(result, {"recovered": ok}, vector_to_csv(mux.stream),
                   f"crosstalk {mux.crosstalk:.3e}")


def _profiles(items):
    return [profile_from_dict(d) for d in items]


def _verdict_claims(make, claims=("orthogonal", "equal", "contained")):
    return {c: make(c).certified for c in claims}


def _run_wavelet(spec):
    first, second = spec.get("first"), spec.get("second")
    ps, X = _profiles(first["profiles"]), _lat(first["lattice"])
    qs, Y = _profiles(second["profiles"]), _lat(second["lattice"])
    claim = spec.get("claim", "orthogonal")
    v = affine_verdict(ps, X, qs, Y, claim)
    return Outcome(v.to_report(), _verdict_claims(lambda c: affine_verdict(ps, X, qs, Y, c)), None,
                   v.status.value)


def _windows(items):
    out = []
    for w in items:
        out.append(GaborGenerator(
            frequency=profile_from_dict(w["frequency"]) if "frequency" in w else None,
            time=profile_from_dict(w["time"]) if "time" in w else None,
        ))
    return out


def _run_wh(spec):
    first, second = spec.get("first"), spec.get("second")
    fs, A, X = _windows(first["windows"]), _lat(first["modulation"]), _lat(first["translation"])
    gs, B, Y = _windows(second["windows"]), _lat(second["modulation"]), _lat(second["translation"])
    route = spec.get("route", "auto")
    claim = spec.get("claim", "orthogonal")
    v = wh_verdict(fs, A, X, gs, B, Y, claim, route)
    return Outcome(v.to_report(), _verdict_claims(lambda c: wh_verdict(fs, A, X, gs, B, Y, c, route)),
                   None, f"{v.status.value} via {v.route}")


def _run_quasi_affine(spec):
    first, second = spec.get("first"), spec.get("second")
    ps, qs = _profiles(first["profiles"]), _profiles(second["profiles"])
    A, B = Fraction(first["dilation"]), Fraction(second["dilation"])
    X, Y = _lat(first["lattice"]), _lat(second["lattice"])
    r_min = spec.get("r_min", -8)
    claim = spec.get("claim", "orthogonal")

    def make(c):
        return quasi_affine_report(ps, A, X, qs, B, Y, r_min, c)

    rep = make(claim)
    return Outcome(rep.to_report(), _verdict_claims(make), None,
                   f"{rep.status.value} ({rep.route}{', truncated' if rep.truncated else ''})")


def _run_msf(spec):
    chk = msf_orthogonality_check(_band(spec.get("band")), Fraction(spec.get("dilation")), spec.get("j_max"))
    return Outcome(chk.to_report(), {"disjoint": chk.disjoint}, None,
                   "pairwise disjoint" if chk.disjoint else f"overlaps {list(chk.overlaps)}")


RUNNERS = {
    "multiplicity": _run_multiplicity,
    "sampling-check": _run_sampling_check,
    "classify": _run_classify,
    "classify-union": _run_classify_union,
    "mux-demo": _run_mux,
    "wavelet-disjoint": _run_wavelet,
    "wh-disjoint": _run_wh,
    "quasi-affine": _run_quasi_affine,
    "msf-check": _run_msf,
}


def execute(spec) -> Outcome:
    """Run a validated spec and return the library-level outcome."""
    return RUNNERS[spec.command](spec)


def build_report(spec, outcome: Outcome, reproducible: bool = False) -> dict:
    report = {
        "schema": SCHEMA_VERSION,
        "command": spec.command,
        "version": __version__,
        "spec": serialize(spec),
        "result": outcome.result,
    }
    if not reproducible:
        report["generated"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run_spec(spec, assert_claim=None, reproducible=False, report_path=None, csv_path=None,
             out=sys.stdout) -> int:
    """Execute one spec, write artifacts, and return the exit status."""
    try:
        outcome = execute(spec)
    except (NumericFailure, RankAmbiguity) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FrameRangeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    report = build_report(spec, outcome, reproducible)
    report_path = report_path or spec.get("report")
    csv_path = csv_path or spec.get("csv")
    if report_path:
        Path(report_path).write_text(dump_report(report))
    if csv_path and outcome.csv is not None:
        Path(csv_path).write_text(outcome.csv)
    print(f"{spec.command}: {outcome.summary}", file=out)
    if not report_path:
        out.write(dump_report(report))
    if assert_claim is None:
        return EXIT_OK
    claim = assert_claim
    if claim not in outcome.claims:
        print(f"error: claim {claim!r} does not apply to {spec.command}; "
              f"choose from {sorted(outcome.claims)}", file=sys.stderr)
        return EXIT_MALFORMED
    return EXIT_OK if outcome.claims[claim] else EXIT_NOT_CERTIFIED


def _load(path, overrides=(), command=None):
    text = Path(path).read_text(encoding="utf-8") if path else ""
    if overrides or command:
        try:
            raw = tomllib.loads(text) if text else {}
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(f"invalid TOML: {exc}") from None
        for item in overrides:
            key, _, value = item.partition("=")
            if not _:
                raise ParseError(f"override {item!r} is not key=value", key=item)
            try:
                parsed = tomllib.loads(f"v = {value}")["v"]
            except tomllib.TOMLDecodeError:
                parsed = value  # bare strings such as bands
            node = raw
            parts = key.strip().split(".")
            for p in parts[:-1]:
                node = node.setdefault(p, {})
            node[parts[-1]] = parsed
        if command:
            if raw.get("command", command) != command:
                raise ParseError(f"spec is for {raw['command']!r}, not {command!r}", key="command")
            raw["command"] = command
        return validate(raw, text)
    return parse_spec(text)


def _run_file(args):
    path, assert_claim, reproducible, out_dir = args
    try:
        spec = _load(path)
    except FrameRangeError as exc:
        print(f"{path}: malformed spec: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    report_path = None
    if out_dir:
        report_path = str(Path(out_dir) / (Path(path).stem + ".json"))
    return run_spec(spec, assert_claim, reproducible, report_path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framerange", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--assert", dest="assert_claim", metavar="CLAIM",
                       help="exit 0 iff CLAIM is certified, 1 otherwise")
        p.add_argument("--reproducible", action="store_true", help="omit timestamps from reports")

    run = sub.add_parser("run", help="execute scenario spec files")
    run.add_argument("specs", nargs="+")
    run.add_argument("--out-dir", help="write one JSON report per spec here")
    run.add_argument("--jobs", type=int, default=1, help="process spec files in parallel")
    common(run)

    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run a {name} scenario")
        p.add_argument("spec", nargs="?", help="optional spec file")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--report", help="JSON report path")
        p.add_argument("--csv", help="CSV dump path")
        common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.cmd == "run":
        jobs = [(p, args.assert_claim, args.reproducible, args.out_dir) for p in args.specs]
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                codes = list(pool.map(_run_file, jobs))
        else:
            codes = [_run_file(j) for j in jobs]
        return max(codes)
    try:
        spec = _load(args.spec, args.overrides, args.cmd)
    except (FrameRangeError, OSError) as exc:
        print(f"malformed spec: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    return run_spec(spec, args.assert_claim, args.reproducible, args.report, args.csv)


if __name__ == "__main__":
    sys.exit(main())
