import json
import os
from importlib import resources

import pytest

from qslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def packaged_model_text():
    return resources.files("qslab.data").joinpath("g32_27.alg").read_text()


def packaged_reference():
    return json.loads(
        resources.files("qslab.data").joinpath("g32_27_chartable.json").read_text()
    )


def assert_no_floats(value):
    assert not isinstance(value, float)
    if isinstance(value, list):
        for v in value:
            assert_no_floats(v)
    elif isinstance(value, dict):
        for v in value.values():
            assert_no_floats(v)


# -- basic commands -----------------------------------------------------


def test_info_text(capsys):
    code, out, err = run(capsys, "info")
    assert code == 0 and err == ""
    assert out.startswith("group g32_27: order 32, exponent 4, 14 conjugacy classes")
    assert "structure T1: type (2, 2, 2, 4)" in out
    assert "structure T2: type (2, 2, 4, 4)" in out
    assert "subgroup H1: order 8, normal" in out


def test_info_accepts_group_name(capsys):
    code, out, _ = run(capsys, "info", "g32_27")
    assert code == 0


def test_classes_published_order(capsys):
    code, out, _ = run(capsys, "classes")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "14 conjugacy classes of g32_27 (published order)"
    assert lines[1].startswith("  1: rep 1, size 1")
    assert lines[2].startswith("  2: rep g5, size 1")
    assert len(lines) == 15


def test_chartable_grid(capsys):
    code, out, _ = run(capsys, "chartable")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "character table of g32_27 (published order)"
    assert lines[2].split() == ["chi1"] + ["1"] * 14
    assert lines[10].split()[0] == "chi9"
    assert len(lines) == 16


def test_chartable_json(capsys):
    code, out, _ = run(capsys, "chartable", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert_no_floats(data)
    assert [r["degree"] for r in data["rows"]] == [1] * 8 + [2] * 6
    grid = [r["values"] for r in data["rows"]]
    assert grid == packaged_reference()["rows"]


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "--structure", "T1")
    assert code == 0
    assert out.startswith("stabilizer set of T1: 14 elements")
    code, out, _ = run(capsys, "sigma", "--structure", "T2", "--format", "json")
    data = json.loads(out)
    assert data["size"] == 15 and len(data["elements"]) == 15


def test_disjoint(capsys):
    code, out, _ = run(capsys, "disjoint", "--structure", "T1", "--structure", "T2")
    assert code == 0
    assert "share only: 1" in out
    assert "disjoint away from the identity: yes" in out


def test_fixed_points_row(capsys):
    code, out, _ = run(capsys, "fixed-points", "--structure", "T1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "fixed points on the genus 5 curve of T1 (published order)"
    assert lines[1].split() == ["1", "whole", "curve"]
    counts = [line.split()[-1] for line in lines[2:]]
    assert counts == ["8", "0", "0", "0", "0", "8", "0", "8", "0", "4", "0", "0", "4"]


def test_canonical(capsys):
    code, out, _ = run(capsys, "canonical", "--structure", "T2")
    assert code == 0
    assert "genus 9" in out
    assert out.splitlines()[1].split() == [
        "9", "1", "-3", "-3", "-3", "-3", "1", "1", "1", "1", "1", "-1", "-1", "1",
    ]
    assert "decomposition: chi4 + chi10 + chi12 + chi13 + chi14" in out


def test_quotient_genus_named_and_inline(capsys):
    code, out, _ = run(capsys, "quotient-genus", "--structure", "T1", "--subgroup", "H")
    assert code == 0 and "genus 0" in out
    code, out, _ = run(
        capsys, "quotient-genus", "--structure", "T1", "--subgroup", "g2*g5, g4"
    )
    assert code == 0 and "genus 0" in out
    code, out, _ = run(
        capsys, "quotient-genus", "--structure", "T1", "--subgroup", "g5"
    )
    assert code == 0 and "genus 1" in out


def test_fiber_orbits(capsys):
    code, out, _ = run(
        capsys,
        "fiber-orbits", "--structure", "T2", "--branch", "3", "--subgroup", "H1",
    )
    assert code == 0
    assert "4 points" not in out  # fiber has 8 points over an order-4 entry
    assert "8 points" in out
    assert "2 x (size 4, stabilizer order 2)" in out
    assert "acts freely: no" in out
    code, out, _ = run(
        capsys,
        "fiber-orbits", "--structure", "T1", "--branch", "4", "--subgroup", "H",
    )
    assert "2 x (size 4, stabilizer order 1)" in out
    assert "acts freely: yes" in out


def test_search_defaults_to_declared_structures(capsys):
    code, out, _ = run(capsys, "search")
    assert code == 0
    assert "every pair admits an admissible twist: yes" in out
    assert "trivial twist admissible somewhere: no" in out
    assert "euler-flat pairs: (chi9, chi14), (chi11, chi13)" in out
    assert "A=chi9 B=chi9: admissible chi3, chi4, chi7, chi8" in out


def test_search_json(capsys):
    code, out, _ = run(capsys, "search", "--format", "json")
    data = json.loads(out)
    assert_no_floats(data)
    assert data["pair_count"] == 36
    assert data["all_pairs_admit_twist"] is True
    assert data["trivial_twist_admissible_somewhere"] is False
    by_b = {}
    for pair in data["pairs"]:
        by_b.setdefault(pair["b"], set()).add(tuple(pair["admissible"]))
    assert by_b["chi13"] == {("chi2", "chi5")}


def test_markdown_format(capsys):
    code, out, _ = run(capsys, "chartable", "--format", "md")
    assert code == 0
    assert out.splitlines()[0].startswith("# Character table")
    assert "| chi1 |" in out


# -- verify-paper -------------------------------------------------------


def test_verify_paper_passes(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0
    assert out.startswith("verification PASS: 41/41")


def test_verify_paper_json(capsys):
    code, out, _ = run(capsys, "verify-paper", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "qslab-report/1"
    assert_no_floats(data)


def test_verify_paper_detects_bad_reference(capsys, tmp_path):
    raw = packaged_reference()
    raw["rows"][5][3] = 7
    bad = tmp_path / "ref.json"
    bad.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "verify-paper", "--reference", str(bad))
    assert code == 1
    assert "[FAIL] character-table-reference" in out
    assert "[PASS] class-membership" in out


def test_verify_paper_detects_bad_spec(capsys, tmp_path):
    text = packaged_model_text().replace(
        "[1000; 0100; 1010; 0101]", "[1010; 0101; 0010; 0001]"
    )
    model = tmp_path / "transposed.alg"
    model.write_text(text)
    code, out, _ = run(capsys, "verify-paper", "--input", str(model))
    assert code == 1
    assert out.splitlines()[1].startswith("[FAIL] relation-g2-conjugate")


# -- error handling -----------------------------------------------------


def test_unknown_group_exits_2(capsys):
    code, out, err = run(capsys, "info", "nosuch")
    assert code == 2 and out == ""
    assert "unknown group 'nosuch'" in err


def test_unknown_structure_exits_2(capsys):
    code, _, err = run(capsys, "sigma", "--structure", "T9")
    assert code == 2
    assert "unknown structure 'T9'" in err
    assert "declared: T1, T2" in err


def test_bad_subgroup_fragment_exits_2(capsys):
    code, _, err = run(
        capsys, "quotient-genus", "--structure", "T1", "--subgroup", "g2, zz"
    )
    assert code == 2
    assert "unknown generator 'zz'" in err


def test_parse_error_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("group broken on")
    code, _, err = run(capsys, "info", "--input", str(bad))
    assert code == 2
    assert "line 1, col 14" in err


def test_missing_input_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "info", "--input", str(tmp_path / "nope.alg"))
    assert code == 2
    assert "cannot read" in err


def test_branch_out_of_range_exits_2(capsys):
    code, _, err = run(
        capsys,
        "fiber-orbits", "--structure", "T1", "--branch", "9", "--subgroup", "H",
    )
    assert code == 2
    assert "out of range" in err


def test_single_structure_search_exits_2(capsys):
    code, _, err = run(capsys, "search", "--structure", "T1")
    assert code == 2
    assert "exactly 2 structures" in err


# -- cache --------------------------------------------------------------


def cache_file(cache_dir):
    files = [f for f in os.listdir(cache_dir) if f.startswith("chartable-")]
    assert len(files) == 1
    return os.path.join(cache_dir, files[0])


def test_cache_write_and_hit(capsys, tmp_path):
    cache = str(tmp_path)
    code, first, _ = run(capsys, "chartable", "--cache", cache)
    assert code == 0
    path = cache_file(cache)
    stamp = os.stat(path).st_mtime_ns
    code, second, _ = run(capsys, "chartable", "--cache", cache)
    assert code == 0 and second == first
    # a valid cache entry is read, not rewritten
    assert os.stat(path).st_mtime_ns == stamp


def test_cache_corruption_recovers(capsys, tmp_path):
    cache = str(tmp_path)
    code, first, _ = run(capsys, "chartable", "--cache", cache)
    path = cache_file(cache)
    with open(path, "w") as fh:
        fh.write("{not json")
    code, again, _ = run(capsys, "chartable", "--cache", cache)
    assert code == 0 and again == first
    with open(path) as fh:
        data = json.load(fh)
    assert data["format"] == "qslab-chartable-cache/1"


def test_cache_rejects_tampered_rows(capsys, tmp_path):
    cache = str(tmp_path)
    run(capsys, "chartable", "--cache", cache)
    path = cache_file(cache)
    with open(path) as fh:
        data = json.load(fh)
    data["rows"][0][0] = 99  # breaks orthogonality, must be recomputed
    with open(path, "w") as fh:
        json.dump(data, fh)
    code, out, _ = run(capsys, "chartable", "--cache", cache)
    assert code == 0
    assert "99" not in out


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QSLAB_CACHE", str(tmp_path))
    code, _, _ = run(capsys, "chartable")
    assert code == 0
    assert os.path.exists(cache_file(str(tmp_path)))
