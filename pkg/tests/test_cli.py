import json
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SHANNON, bands, rationals
from framerange import cli
from framerange.bands import format_band, format_fraction, parse_band
from framerange.classify import classify_single, classify_union
from framerange.errors import ParseError, SingularMatrix, UnknownKey
from framerange.generators import affine_verdict, wh_verdict
from framerange.profiles import Characteristic, MeyerBell
from framerange.scenario import parse_spec, serialize

DOCS = sorted((Path(__file__).parent.parent / "docs" / "specs").glob("*.toml"))

SAMPLING = '''command = "sampling-check"
band = "[-1,-1/2) u [1/2,1)"
lattice = "3/4"
'''

UNION = '''command = "classify-union"
claim = "orthogonal"

[first]
band = "[-1,-1/2) u [1/2,1)"
lattices = ["1/3", "2/3"]

[second]
band = "[-1,-1/2) u [1/2,1)"
lattices = ["2/3", "1/3"]
'''


def _run(tmp_path, text, *flags):
    spec = tmp_path / "spec.toml"
    spec.write_text(text)
    report = tmp_path / "spec.json"
    code = cli.main(["run", str(spec), "--out-dir", str(tmp_path), *flags])
    return code, (json.loads(report.read_text()) if report.exists() else None)


def test_sampling_check_exit_codes(tmp_path):
    code, rep = _run(tmp_path, SAMPLING, "--assert", "sampling", "--reproducible")
    assert code == 1
    assert rep["result"]["sampling"] is False
    assert rep["result"]["certificate"]["max"] == "2"
    assert rep["result"]["certificate"]["attained_on"] == ["[3/8,5/8)"]
    assert rep["schema"] == 1 and "generated" not in rep
    assert cli.main(["run", str(tmp_path / "spec.toml"), "--out-dir", str(tmp_path)]) == 0


def test_classify_union_exit(tmp_path):
    code, rep = _run(tmp_path, UNION, "--assert", "orthogonal")
    assert code == 0 and rep["result"]["kind"] == "CertifiedOrthogonal"
    assert rep["spec"] == serialize(parse_spec(UNION))
    assert "generated" in rep


def test_empty_band_names_field(tmp_path, capsys):
    code, _ = _run(tmp_path, 'command = "sampling-check"\nband = "empty"\nlattice = "1"\n')
    assert code == 2
    assert "band" in capsys.readouterr().err


def test_bad_claim_for_command(tmp_path):
    code, _ = _run(tmp_path, SAMPLING, "--assert", "orthogonal")
    assert code == 2


def test_numeric_failure_exit(tmp_path, monkeypatch):
    def boom(spec):
        raise cli.NumericFailure("forced")
    monkeypatch.setitem(cli.RUNNERS, "sampling-check", boom)
    code, _ = _run(tmp_path, SAMPLING)
    assert code == 3


def test_parse_errors():
    with pytest.raises(UnknownKey) as info:
        parse_spec(SAMPLING + "colour = \"red\"\n")
    assert info.value.line == 4 and info.value.key == "colour"
    with pytest.raises(UnknownKey) as info:
        parse_spec(UNION.replace("lattices = [\"2/3\"", "latices = [\"2/3\""))
    assert info.value.key == "second.latices" and info.value.line == 10
    with pytest.raises(SingularMatrix):
        parse_spec(SAMPLING.replace('"3/4"', '"0"'))
    with pytest.raises(ParseError):
        parse_spec(SAMPLING.replace('"3/4"', "0.75"))
    with pytest.raises(ParseError) as info:
        parse_spec("command = [")
    assert info.value.line == 1
    assert parse_spec(SAMPLING).data["band"] == format_band(SHANNON)


@pytest.mark.parametrize("path", DOCS, ids=lambda p: p.stem)
def test_docs_specs_run(path, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    spec = parse_spec(path.read_text())
    assert serialize(parse_spec(serialize(spec))) == serialize(spec)
    assert cli.main(["run", str(path), "--reproducible", "--out-dir", str(tmp_path)]) == 0
    first = (tmp_path / (path.stem + ".json")).read_text()
    cli.main(["run", str(path), "--reproducible", "--out-dir", str(tmp_path)])
    assert (tmp_path / (path.stem + ".json")).read_text() == first


def test_jobs(tmp_path):
    paths = []
    for name, text in (("a", SAMPLING), ("b", UNION)):
        p = tmp_path / f"{name}.toml"
        p.write_text(text)
        paths.append(str(p))
    assert cli.main(["run", *paths, "--jobs", "2", "--out-dir", str(tmp_path), "--reproducible"]) == 0
    assert json.loads((tmp_path / "b.json").read_text())["result"]["kind"] == "CertifiedOrthogonal"


def test_subcommand_with_overrides(tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["classify", "--set", "first.band=[-1,-1/2) u [1/2,1)", "--set", 'first.lattice="1/3"',
                     "--set", "second.band=[-1/4,1/4)", "--set", 'second.lattice="1/2"',
                     "--set", 'period="12"', "--report", str(out), "--assert", "orthogonal"])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["result"]["oracle"]["cross_gram"] <= 1e-12


# -- thin-shell property: CLI verdicts equal library verdicts ---------------------

sampling_steps = st.sampled_from([F(1, 6), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)])


@given(bands(nonempty=True), sampling_steps, bands(nonempty=True), sampling_steps)
def test_classify_thin_shell(E, a, Fb, b):
    text = (f'command = "classify"\nmode = "bessel"\n[first]\nband = "{format_band(E)}"\n'
            f'lattice = "{format_fraction(a)}"\n[second]\nband = "{format_band(Fb)}"\n'
            f'lattice = "{format_fraction(b)}"\n')
    out = cli.execute(parse_spec(text))
    from framerange.classify import classify_bessel
    assert out.result == classify_bessel(E, a, Fb, b).to_report()


@given(st.lists(sampling_steps, min_size=1, max_size=3), st.lists(sampling_steps, min_size=1, max_size=3),
       st.sampled_from(["equal", "orthogonal", "contained", "overlap"]))
def test_union_thin_shell(As, Bs, claim):
    lst = lambda xs: "[" + ", ".join(f'"{format_fraction(x)}"' for x in xs) + "]"
    text = (f'command = "classify-union"\nclaim = "{claim}"\n[first]\nband = "[-1,-1/2) u [1/2,1)"\n'
            f'lattices = {lst(As)}\n[second]\nband = "[-1,-1/2) u [1/2,1)"\nlattices = {lst(Bs)}\n')
    out = cli.execute(parse_spec(text))
    assert out.result == classify_union(SHANNON, As, SHANNON, Bs, claim).to_report()


def test_wavelet_and_wh_thin_shell():
    spec = parse_spec((Path(__file__).parent.parent / "docs/specs/wavelet-disjoint.toml").read_text())
    assert cli.execute(spec).result == affine_verdict([MeyerBell()], F(1, 3), [MeyerBell()], F(1, 13)).to_report()
    spec = parse_spec((Path(__file__).parent.parent / "docs/specs/wh-disjoint.toml").read_text())
    f = Characteristic(parse_band("[0,1/3)"), "time")
    g = Characteristic(parse_band("[1/3,2/3)"), "time")
    assert cli.execute(spec).result == wh_verdict([f], 1, 1, [g], 1, 1, route="time").to_report()


# -- serialize . parse fixed point ------------------------------------------------

@st.composite
def mux_specs(draw):
    def side():
        return {"band": format_band(draw(bands(nonempty=True))),
                "step": format_fraction(draw(rationals(1, 3).filter(lambda x: x > 0)))}
    d = {"command": "mux-demo", "period": format_fraction(draw(rationals(1, 12).filter(lambda x: x > 0))),
         "first": side(), "second": side()}
    if draw(st.booleans()):
        d["seed"] = draw(st.integers(0, 1000))
    if draw(st.booleans()):
        d["tolerance"] = draw(st.floats(1e-15, 1e-3))
    if draw(st.booleans()):
        d["force"] = draw(st.booleans())
    return d


@given(mux_specs())
def test_serialize_parse_fixed_point(d):
    import tomli_w
    text = tomli_w.dumps(d)
    once = serialize(parse_spec(text))
    assert serialize(parse_spec(once)) == once
    assert parse_spec(once).data == parse_spec(text).data
