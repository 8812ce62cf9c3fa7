import json
from fractions import Fraction

import pytest

from fcgerm import cli
from fcgerm.errors import InputError, SchemaError
from fcgerm.gallery import cone_over, link_octahedron
from fcgerm.io import (canonical_json, complex_to_dict, model_from_dict, model_to_dict, off_mesh,
                       parse_rational)


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def hexagon_file(tmp_path, **extra):
    d = model_to_dict(cone_over("hexagon"))
    d.update(extra)
    return write(tmp_path, "hex.json", d)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(2) == 2
    assert parse_rational("-1.25") == Fraction(-5, 4)
    for bad in (0.5, True, "x", None):
        with pytest.raises(SchemaError):
            parse_rational(bad)


def test_model_round_trip(models):
    for m in models.values():
        d = model_to_dict(m, "q", 3)
        mf = model_from_dict(json.loads(canonical_json(d)))
        assert mf.ring == "q" and mf.subdivision == 3
        assert mf.model.complex == m.complex
        assert [mf.model.radius(v) for v in range(m.n_vertices)] == [m.radius(v) for v in range(m.n_vertices)]
        assert model_to_dict(mf.model, "q", 3) == d


@pytest.mark.parametrize("mutate, text", [
    (lambda d: d.pop("simplices"), "simplices"),
    (lambda d: d["vertices"][0].pop("r"), "vertices[0]"),
    (lambda d: d["vertices"][1].update(id=0), "duplicate"),
    (lambda d: d["vertices"][2].update(u=[1]), "coordinates"),
    (lambda d: d.update(ring="r"), "ring"),
    (lambda d: d.update(subdivision=-1), "subdivision"),
    (lambda d: d["simplices"].append([0, 99]), "simplices"),
])
def test_schema_errors_name_the_location(mutate, text):
    d = model_to_dict(cone_over("hexagon"))
    mutate(d)
    with pytest.raises(InputError) as exc:
        model_from_dict(d)
    assert text in str(exc.value)


def test_off_mesh_of_cone():
    text = off_mesh(cone_over("hexagon"))
    lines = text.splitlines()
    assert lines[0] == "OFF" and lines[1].startswith("#")
    nv, nf, _ = map(int, lines[2].split())
    assert (nv, nf) == (12, 12)
    for row in lines[3:9]:
        assert [float(x) for x in row.split()] == [0.0, 0.0, 0.0]
    assert all(row.startswith("3 ") for row in lines[3 + nv:])


def test_validate_ok(tmp_path, capsys):
    assert cli.main(["validate", hexagon_file(tmp_path)]) == 0
    assert "THICK" in capsys.readouterr().out


def test_validate_negative_radius(tmp_path, capsys):
    d = model_to_dict(cone_over("hexagon"))
    d["vertices"][3]["r"] = "-1/2"
    assert cli.main(["validate", write(tmp_path, "bad.json", d)]) == 1
    assert "negative radius" in capsys.readouterr().err


def test_validate_not_a_strict_transform(tmp_path):
    d = model_to_dict(cone_over("hexagon"))
    d["simplices"].append([0, 3])
    assert cli.main(["validate", write(tmp_path, "bad.json", d)]) == 1


def test_input_errors(tmp_path):
    assert cli.main(["validate", str(tmp_path / "missing.json")]) == 1
    (tmp_path / "junk.json").write_text("{not json")
    assert cli.main(["validate", str(tmp_path / "junk.json")]) == 1
    assert cli.main(["bogus"]) == 1
    assert cli.main(["fc", hexagon_file(tmp_path)]) == 1  # -k is required


def test_inconclusive_exit(tmp_path, capsys):
    assert cli.main(["example", "cone_over", "--param", "link=sphere3", "--out", str(tmp_path / "s3.json")]) == 0
    assert cli.main(["analyze", str(tmp_path / "s3.json"), "--format", "json"]) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "inconclusive"
    assert report["inconclusive"]["reason"] == "unknown_locus"
    assert cli.main(["check-sc", str(tmp_path / "s3.json")]) == 2


def test_internal_error_exit(tmp_path, monkeypatch):
    import fcgerm.model

    def boom(*a, **k):
        raise RuntimeError("boom")
    monkeypatch.setattr(fcgerm.model, "tangent_link", boom)
    assert cli.main(["validate", hexagon_file(tmp_path)]) == 3


def test_fc_command(tmp_path, capsys):
    assert cli.main(["fc", hexagon_file(tmp_path), "-k", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rank"] == 0 and out["complement_rank"] == 1 and out["subdivision"] == 2


def test_ring_and_subdivision_from_file(tmp_path, capsys):
    path = hexagon_file(tmp_path, ring="q", subdivision=1)
    assert cli.main(["fc", path, "-k", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ring"] == "q" and out["subdivision"] == 1
    assert cli.main(["fc", path, "-k", "1", "--ring", "gf2", "--subdiv", "0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ring"] == "gf2" and out["subdivision"] == 0


def test_fc_clamp_warns_on_stderr(tmp_path, capsys):
    path = tmp_path / "pinched.json"
    assert cli.main(["example", "pinched_handle", "--out", str(path)]) == 0
    assert cli.main(["fc", str(path), "-k", "1", "--delta", "0"]) == 0
    cap = capsys.readouterr()
    assert json.loads(cap.out)["rank"] == 1
    assert "ClampWarning" in cap.err


def test_thin_zone_and_sep_set(tmp_path, capsys):
    path = tmp_path / "pinched.json"
    cli.main(["example", "pinched_handle", "--out", str(path)])
    assert cli.main(["thin-zone", str(path), "--out", str(tmp_path / "zone.json")]) == 0
    zone = json.loads((tmp_path / "zone.json").read_text())
    assert zone["empty"] is False
    assert model_from_dict(zone["model"]).model.dim == 2
    assert cli.main(["sep-set", str(path)]) == 0
    assert json.loads(capsys.readouterr().out) == {"witness": None}
    assert cli.main(["check-sc", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["sc"] is False


def test_example_errors(tmp_path):
    assert cli.main(["example", "nope"]) == 1
    assert cli.main(["example", "beta_horn", "--param", "colour=red"]) == 1
    assert cli.main(["example", "beta_horn", "--param", "sides"]) == 1


def _octahedron_files(tmp_path, pts):
    from fcgerm.complex import SimplicialComplex
    from fcgerm.geometry import GeometricComplex
    tris, verts = link_octahedron()
    gc = GeometricComplex.from_points(SimplicialComplex.from_simplices(tris), verts)
    cpath = write(tmp_path, "octa.json", complex_to_dict(gc))
    cells = [{"points": [[str(x) for x in pts[i]], [str(x) for x in pts[(i + 1) % len(pts)]]],
              "carrier": [0, 2, 4], "coeff": 1} for i in range(len(pts))]
    ypath = write(tmp_path, "cycle.json", {"k": 1, "ring": "gf2", "cells": cells})
    return cpath, ypath


SMALL = [(Fraction(5, 14), Fraction(9, 28), Fraction(9, 28)),
         (Fraction(9, 28), Fraction(5, 14), Fraction(9, 28)),
         (Fraction(9, 28), Fraction(9, 28), Fraction(5, 14))]


def test_ff_certify(tmp_path):
    c, y = _octahedron_files(tmp_path, SMALL)
    out = tmp_path / "cert.json"
    assert cli.main(["ff-certify", c, y, "--out", str(out)]) == 0
    cert = json.loads(out.read_text())
    assert cert["verification"]["ok"] and cert["final_cycle_empty"]


def test_ff_certify_equator_inconclusive(tmp_path):
    from fcgerm.complex import SimplicialComplex
    from fcgerm.geometry import GeometricComplex
    tris, verts = link_octahedron()
    gc = GeometricComplex.from_points(SimplicialComplex.from_simplices(tris), verts)
    cpath = write(tmp_path, "octa.json", complex_to_dict(gc))
    ring = [0, 2, 1, 3]
    cells = [{"points": [list(map(str, verts[ring[i]])), list(map(str, verts[ring[(i + 1) % 4]]))],
              "carrier": sorted([ring[i], ring[(i + 1) % 4]]), "coeff": 1} for i in range(4)]
    ypath = write(tmp_path, "eq.json", {"k": 1, "cells": cells})
    assert cli.main(["ff-certify", cpath, ypath]) == 2


def test_ff_certify_failed_verification(tmp_path, monkeypatch):
    import fcgerm.certificate
    from fcgerm.certificate import VerificationReport
    monkeypatch.setattr(fcgerm.certificate, "verify_certificate",
                        lambda gc, cert: VerificationReport(False, 0, ["forced"]))
    c, y = _octahedron_files(tmp_path, SMALL)
    assert cli.main(["ff-certify", c, y]) == 3


def test_analyze_writes_reports(tmp_path):
    path = hexagon_file(tmp_path)
    out = tmp_path / "out"
    assert cli.main(["analyze", path, "--out", str(out), "--mesh"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["status"] == "ok"
    assert {"k": 1, "delta": 1, "rank": 0, "stable": True}.items() <= report["fc_ranks"][0].items()
    text = (out / "report.txt").read_text()
    assert "k delta rank stable" in " ".join(text.split())
    assert (out / "blow_down.off").read_text().startswith("OFF")


def test_analyze_is_byte_identical(tmp_path):
    path = str(tmp_path / "pinched.json")
    cli.main(["example", "pinched_handle", "--out", path])
    for i in range(2):
        assert cli.main(["analyze", path, "--out", str(tmp_path / f"r{i}")]) == 0
    assert (tmp_path / "r0" / "report.json").read_bytes() == (tmp_path / "r1" / "report.json").read_bytes()
    assert (tmp_path / "r0" / "report.txt").read_bytes() == (tmp_path / "r1" / "report.txt").read_bytes()


def test_analyze_bad_skip(tmp_path):
    assert cli.main(["analyze", hexagon_file(tmp_path), "--skip", "nothing"]) == 1


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "fcgerm", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("fcgerm")
