import json

import pytest

from k3strata import cli
from k3strata.oracles import brute_force_point_count, brute_force_sums


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    assert code == 0, err
    return json.loads(out)


def run_error(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, err


def test_kummer_degree(capsys):
    assert run_json(capsys, "kummer", "degree", "--n", "9", "--dprime", "26", "--parts", "1*16") == {"d": 4196}
    assert run_json(capsys, "kummer", "degree", "--n", "1", "--dprime", "512", "--parts", "1,2*15") == {"d": 963}


def test_kummer_degree_from_input(capsys, tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps({"n": 9, "dprime": 26, "parts": [1] * 16}))
    result = run_json(capsys, "kummer", "degree", "--input", str(path), "--self-intersection")
    assert result == {"d": 4196, "self_intersection": 4 * 4196}


def test_polygon_classify_supersingular(capsys):
    assert run_json(capsys, "polygon", "classify", "--slopes", "1*22") == {"class": "supersingular", "height": "infinite"}


def test_polygon_classify_height_two(capsys):
    assert run_json(capsys, "polygon", "classify", "--slopes", "1/2*2,1*18,3/2*2") == {"class": "finite_height", "height": 2}


def test_polygon_from_height(capsys):
    result = run_json(capsys, "polygon", "from-height", "--height", "infinite")
    assert result == {"weight": 2, "rank": 22, "segments": [[1, 1, 22]]}


def test_domain_error_names_the_class(capsys):
    code, err = run_error(capsys, "polygon", "classify", "--slopes", "0,1*21")
    assert code == 1
    assert json.loads(err.strip().splitlines()[-1])["error"] == "SymmetryViolation"


def test_kummer_slopes(capsys):
    result = run_json(capsys, "kummer", "slopes", "--type", "p-rank-one")
    assert result["height"] == 2
    assert result["polygon"]["segments"][-1] == [3, 2, 2]


def test_check_ampleness(capsys):
    result = run_json(capsys, "kummer", "check-ampleness", "--n", "1", "--dprime", "32", "--variant", "min_elliptic_intersection", "--m", "3")
    assert result["ample"] is False
    assert result["failures"] == ["elliptic", "generic"]


def test_verify_lemma_res(capsys):
    assert run_json(capsys, "coverage", "verify-lemma-res")["verified"] is True
    assert run_json(capsys, "coverage", "verify-lemma-res", "--max-part", "1")["verified"] is False


def test_verify_remark_range(capsys):
    result = run_json(capsys, "coverage", "verify-remark", "--n", "9", "--through", "14")
    assert result["verified"] is True
    assert [row["n"] for row in result["results"]] == list(range(9, 15))


def test_residues(capsys):
    result = run_json(capsys, "coverage", "residues", "--modulus", "7", "--k", "2", "--max-part", "2")
    assert result["members"] == sorted({s % 7 for s in brute_force_sums(2, 2)})
    assert result["full"] is False


def test_threshold(capsys):
    result = run_json(capsys, "coverage", "threshold", "--n", "9", "--dprime-min", "26", "--max-part", "4")
    assert result["threshold"] == 4196
    assert result["witness_count"] == 162
    assert len(result["witnesses"]) == 162


def test_threshold_incomplete(capsys):
    code, err = run_error(capsys, "coverage", "threshold", "--n", "9", "--dprime-min", "26", "--max-part", "1")
    assert code == 1
    assert json.loads(err.strip().splitlines()[-1])["error"] == "IncompleteResidueCoverage"


def test_degrees(capsys):
    result = run_json(capsys, "coverage", "degrees", "--n", "1", "--dprime-low", "32", "--dprime-high", "40", "--max-part", "1", "--parity", "even")
    assert result["degrees"] == list(range(48, 65, 2))


def test_report_paper_bounds(capsys):
    result = run_json(capsys, "coverage", "report-paper-bounds")
    thresholds = {name: row["threshold"] for name, row in result["families"].items()}
    assert thresholds == {"general": 4196, "even": 48, "odd": 963}


def test_report_csv(capsys):
    assert cli.run(["--format", "csv", "coverage", "report-paper-bounds"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "family,n,dprime_min,part_bound,threshold,witness_count"
    assert lines[1] == "general,9,26,4,4196,162"
    assert lines[2] == "even,1,32,,48,1"


def test_output_is_deterministic(capsys):
    argv = ["coverage", "threshold", "--n", "9", "--dprime-min", "26", "--max-part", "4"]
    cli.run(argv)
    first = capsys.readouterr().out
    cli.run(argv)
    assert capsys.readouterr().out == first


def test_curve_count(capsys):
    result = run_json(capsys, "curve", "count", "--p", "5", "--a", "1", "--b", "1")
    assert result["count"] == brute_force_point_count(5, 1, 1)
    assert result["trace"] == -3


def test_curve_count_batch(capsys, tmp_path):
    path = tmp_path / "curves.jsonl"
    path.write_text('{"p": 7, "a": 1, "b": 0}\n{"p": 5, "a": 0, "b": 1}\n')
    result = run_json(capsys, "curve", "count", "--input", str(path))
    assert [row["count"] for row in result] == [8, 6]


def test_surface_classify(capsys):
    result = run_json(capsys, "surface", "classify", "--p", "7", "--a1", "1", "--b1", "0", "--a2", "1", "--b2", "0")
    assert result["stratum"]["stratum"] == "Sigma(10)"
    assert result["height"] == "infinite"


def test_surface_classify_profile(capsys):
    result = run_json(capsys, "surface", "classify", "--profile", "0,1/2,1/2,1")
    assert result["stratum"]["label"] == "M(2) \\ M(3)"


def test_singular_curve_is_a_domain_error(capsys):
    code, err = run_error(capsys, "curve", "count", "--p", "5", "--a", "0", "--b", "0")
    assert code == 1
    assert "SingularCurve" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["polygon"],
        ["kummer", "degree", "--bogus"],
        ["coverage", "threshold", "--n", "9"],
        ["--format", "xml", "coverage", "verify-lemma-res"],
        ["kummer", "degree", "--n", "9"],
        ["kummer", "degree", "--n", "9", "--dprime", "26", "--parts", "x"],
        ["curve", "count", "--p", "5"],
        ["--config"],
    ],
)
def test_usage_errors(capsys, argv):
    assert cli.run(argv) == 2
    capsys.readouterr()


def test_missing_config_file(capsys, tmp_path):
    code, err = run_error(capsys, "--config", str(tmp_path / "absent.yaml"), "coverage", "verify-lemma-res")
    assert code == 1
    assert "FileNotFoundError" in err


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    assert cli.run(["--output", str(path), "kummer", "degree", "--n", "9", "--dprime", "26"]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text()) == {"d": 4196}


def test_config_file_sets_format(capsys, tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("output:\n  format: csv\n")
    assert cli.run(["--config", str(path), "kummer", "degree", "--n", "9", "--dprime", "26"]) == 0
    assert capsys.readouterr().out.splitlines() == ["d", "4196"]


def test_seed_fixtures(capsys, tmp_path):
    result = run_json(capsys, "--seed-fixtures", str(tmp_path))
    with open(result["fixtures"]) as handle:
        fixtures = json.load(handle)
    assert fixtures["reachable_sums_2_2"] == [2, 5, 8]
    assert fixtures["reachable_residues_7_2_2"] == [1, 2, 5]
    assert fixtures["lemma_res_part_bound_3"] is False
    assert fixtures["remark_n_4"] is False
    assert fixtures["computed_threshold_9_4"] == 2090
    assert [row["count"] for row in fixtures["point_counts"]] == [8, 6, 9]
    assert all(count == 1 for _, count in fixtures["polygons_per_height"])
    assert fixtures["degrees_9_26_4_prime_to_5"]["count"] == len(fixtures["degrees_9_26_4_prime_to_5"]["degrees"])
    assert fixtures["degrees_9_26_4_prime_to_5"]["count"] == 171


def test_verify_remark_empty_range_is_an_error(capsys):
    code, err = run_error(capsys, "coverage", "verify-remark", "--n", "50", "--through", "40")
    assert code == 1
    assert json.loads(err.strip().splitlines()[-1])["error"] == "CoverageError"


def test_verify_remark_without_remark_settings(capsys, tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("output:\n  format: json\n")
    result = run_json(capsys, "--config", str(path), "coverage", "verify-remark")
    assert result["verified"] is True
    assert [row["n"] for row in result["results"]] == list(range(9, 46))


def test_zero_denominator_slope_is_a_domain_error(capsys):
    code, err = run_error(capsys, "polygon", "classify", "--slopes", "1/0*22")
    assert code == 1
    assert json.loads(err.strip().splitlines()[-1])["error"] == "PolygonError"
