import json

import pytest

from ballmaps.catalog import get
from ballmaps.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_map(tmp_path, name, g):
    path = tmp_path / name
    path.write_text(json.dumps(g.to_json()))
    return str(path)


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify", "--r", "2", "--degree", "2")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["representatives"]) == 2
    assert payload["rejected_count"] == 0
    assert len(payload["candidate_cofactors"]) == 9


def test_classify_is_byte_identical(capsys):
    _, first, _ = run(capsys, "classify", "--r", "2", "--degree", "2")
    _, second, _ = run(capsys, "classify", "--r", "2", "--degree", "2")
    assert first == second


def test_classify_usage_error(capsys):
    code, _, err = run(capsys, "classify", "--r", "3", "--degree", "2")
    assert code == 2
    assert "implemented" in err


def test_check_proper_map(tmp_path, capsys):
    path = write_map(tmp_path, "whitney.json", get("whitney_2x2").build().g)
    code, out, _ = run(capsys, "check", path)
    assert code == 0
    payload = json.loads(out)
    assert payload["proper"] is True
    assert payload["m"] == 1
    assert payload["q_p"] == "x1 + x3"
    assert payload["seed"] == 2024


def test_check_not_proper_exit_one(tmp_path, capsys):
    # [z1^2, z1*z3 | z2^2, z2*z3] on D(2,1): balance is (x1-x2)(x1+x2+x3),
    # not divisible by the signature form x1+x2-x3
    payload = {
        "r": 2, "s": 1, "rp": 2, "sp": 2,
        "positive": [
            {"coeff": {"rat": "1", "sqrt": 1}, "exp": [2, 0, 0]},
            {"coeff": {"rat": "1", "sqrt": 1}, "exp": [1, 0, 1]},
        ],
        "negative": [
            {"coeff": {"rat": "1", "sqrt": 1}, "exp": [0, 2, 0]},
            {"coeff": {"rat": "1", "sqrt": 1}, "exp": [0, 1, 1]},
        ],
    }
    path = tmp_path / "notproper.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1
    assert json.loads(out)["proper"] is False
    assert json.loads(out)["reason"] == "not_divisible"


def test_check_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "check", str(path))
    assert code == 2
    assert "line" in err and "column" in err


def test_induce_and_verify_round_trip(tmp_path, capsys):
    g = get("whitney_2x2").build().g
    map_path = write_map(tmp_path, "whitney.json", g)
    out_path = tmp_path / "f.json"
    code, out, _ = run(capsys, "induce", map_path, "-o", str(out_path))
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "Unique"
    assert payload["f"]["entries"][0] == ["z1^2", "z1*z2", "z2"]
    assert out_path.exists()

    code, out, _ = run(capsys, "verify", str(out_path), "--against", map_path,
                       "--trials", "200", "--seed", "5")
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "Pass"
    assert report["seed"] == 5


def test_induce_underdetermined(tmp_path, capsys):
    g = get("standard").build().g
    map_path = write_map(tmp_path, "standard.json", g)
    code, out, _ = run(capsys, "induce", map_path)
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "Underdetermined"
    assert payload["free_entries"] == [[2, 0], [2, 1], [2, 2]]


def test_verify_mismatch_fails(tmp_path, capsys):
    whitney = get("whitney_2x2").build()
    square = get("square_2x2").build().g
    f_path = tmp_path / "f.json"
    data = whitney.f_expected.to_json()
    data["arity"] = 4
    f_path.write_text(json.dumps(data))
    map_path = write_map(tmp_path, "square.json", square)
    code, out, _ = run(capsys, "verify", str(f_path), "--against", map_path,
                       "--trials", "60", "--seed", "3")
    assert code == 1
    assert json.loads(out)["verdict"] == "Fail"


def test_catalog_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert "whitney_2x2" in json.loads(out)["entries"]

    code, out, _ = run(capsys, "catalog", "show", "square_2x2")
    assert code == 0
    payload = json.loads(out)
    assert payload["f_expected"]["entries"][1][1] == "z1*z4 + z2*z3"

    code, out, _ = run(capsys, "catalog", "verify", "whitney_2x2")
    assert code == 0
    payload = json.loads(out)
    assert payload["matches_expected"] is True
    assert payload["residual_zero_solver"] is True

    code, out, _ = run(capsys, "catalog", "show", "family_t_2244",
                       "--t", "1/2")
    assert code == 0
    payload = json.loads(out)
    assert payload["t"] == "1/2"

    code, out, _ = run(capsys, "catalog", "verify", "family_t_2244",
                       "--t", "1")
    assert code == 1
    assert json.loads(out)["reason"] == "IndeterminateEntry"

    code, _, err = run(capsys, "catalog", "show", "missing_entry")
    assert code == 2
    assert "unknown catalog entry" in err


def test_catalog_verify_degree3_typos(capsys):
    code, out, _ = run(capsys, "catalog", "verify", "degree3_2244")
    assert code == 0
    payload = json.loads(out)
    assert payload["matches_expected"] is True
    assert any("not homogeneous" in flag for flag in payload["typo_flags"])
    assert any("authoritative" in flag for flag in payload["typo_flags"])


def test_lemmas_command(capsys):
    code, out, _ = run(capsys, "lemmas", "--which", "3.2", "--trials", "100",
                       "--seed", "9")
    assert code == 0
    payload = json.loads(out)
    assert payload["violations"] == []
    assert payload["seed"] == 9


def test_lemmas_reproducible(capsys):
    _, first, _ = run(capsys, "lemmas", "--which", "3.5", "--trials", "50",
                      "--seed", "4")
    _, second, _ = run(capsys, "lemmas", "--which", "3.5", "--trials", "50",
                       "--seed", "4")
    assert first == second


def test_search_command(capsys):
    code, out, _ = run(capsys, "search", "--sig", "2", "2", "3", "3",
                       "--degree", "2", "--grid", "1,2")
    assert code == 0
    payload = json.loads(out)
    degree2 = [rec for rec in payload["results"]
               if sum(rec["map"]["positive"][0]["exp"]) == 2]
    assert len(degree2) == 2

    code, _, err = run(capsys, "search", "--sig", "3", "2", "4", "4",
                       "--degree", "2", "--grid", "1")
    assert code == 2


def test_round_trip_emitted_map_json(tmp_path, capsys):
    g = get("square_2x2").build().g
    map_path = write_map(tmp_path, "square.json", g)
    code, out, _ = run(capsys, "check", map_path)
    assert code == 0
    # the emitted certificate quotes the map's own grammar back
    payload = json.loads(out)
    from ballmaps.poly import parse_polynomial

    assert parse_polynomial(payload["q_p"], 4) == parse_polynomial(
        "x1 + x2 + x3 + x4", 4)
