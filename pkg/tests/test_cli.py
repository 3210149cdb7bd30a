import pytest

from linrem.cli import main
from linrem.hrep import parse_host_export, render_host_export

TRIANGLE = "systems/triangle.sys"
AP4 = "systems/ap4.sys"
PINNED = "systems/pinned.sys"
FOLD = "systems/fold.sys"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_system(tmp_path, text):
    path = tmp_path / "input.sys"
    path.write_text(text)
    return str(path)


# ---------------------------------------------------------------------------
# count


def test_count_triangle(capsys):
    assert run(capsys, "count", TRIANGLE) == (0, "T=1\n", "")


def test_count_degenerate_inputs(capsys):
    assert run(capsys, "count", PINNED) == (0, "T=7\n", "")
    assert run(capsys, "count", FOLD) == (0, "T=25\n", "")


def test_count_naive_agrees(capsys):
    baseline = run(capsys, "count", AP4)
    assert baseline == (0, "T=25\n", "")
    assert run(capsys, "count", AP4, "--naive") == baseline


def test_count_guard(capsys):
    code, out, err = run(capsys, "count", AP4, "--naive", "--guard", "3")
    assert code == 2
    assert out == ""
    assert err.startswith("SearchBudgetExceeded:")


# ---------------------------------------------------------------------------
# normalize


def test_normalize_triangle_golden(capsys):
    code, out, err = run(capsys, "normalize", TRIANGLE)
    assert (code, err) == (0, "")
    assert out == (
        "# columns 1,2,3\n"
        "# r 2 k 3\n"
        "# row 1: pivot 2 support 1 diag 3\n"
        "field 5\n"
        "system 1 3\n"
        "1 1 4\n"
        "rhs 0\n"
        "set 1,2\n"
        "set 1,2\n"
        "set 1,2\n"
    )


def test_normalize_reorders_columns(capsys, tmp_path):
    path = write_system(
        tmp_path,
        "field 7\nsystem 1 4\n1 2 3 0\nrhs 4\nset all\nset all\nset 1,2\nset all\n",
    )
    code, out, _ = run(capsys, "normalize", path)
    assert code == 0
    lines = out.splitlines()
    # Column 4 has a zero coefficient, so column 3 takes the diagonal slot
    # and its admissible set travels with it to the last position.
    assert lines[0] == "# columns 1,2,4,3"
    assert lines[1] == "# r 2 k 4"
    assert lines[2] == "# row 1: pivot 2 support 1 diag 4"
    assert lines[5:] == ["4 1 0 5", "rhs 2", "set all", "set all", "set all", "set 1,2"]


# ---------------------------------------------------------------------------
# represent / translate


def test_represent_summary(capsys):
    assert run(capsys, "represent", TRIANGLE) == (
        0,
        "r=2 k=3 colors=3 edges=30 labels=6\n",
        "",
    )


def test_represent_dump_round_trip(capsys, tmp_path):
    dump = tmp_path / "host.edges"
    code, out, _ = run(capsys, "represent", TRIANGLE, "--dump", str(dump))
    assert code == 0
    text = dump.read_text()
    assert len(text.splitlines()) == 30
    assert render_host_export(parse_host_export(text)) == text


def test_translate_threshold_crossed(capsys, tmp_path):
    # All five diagonal edges labeled 2: the per-set rule evicts the label.
    edges = tmp_path / "deleted.edges"
    edges.write_text(
        "".join(f"3 2 U1:{y} U2:{(2 - y) % 5}\n" for y in range(5))
    )
    code, out, _ = run(capsys, "translate", TRIANGLE, str(edges))
    assert code == 0
    assert out == (
        "field 5\nsystem 1 3\n1 1 4\nrhs 0\nset 1,2\nset 1,2\nset 1\n"
    )


def test_translate_below_threshold(capsys, tmp_path):
    edges = tmp_path / "deleted.edges"
    edges.write_text("1 1 V1:0 U1:1\n")
    code, out, _ = run(capsys, "translate", TRIANGLE, str(edges))
    assert code == 0
    assert out.endswith("set 1,2\nset 1,2\nset 1,2\n")


def test_translate_rejects_foreign_edge(capsys, tmp_path):
    edges = tmp_path / "deleted.edges"
    edges.write_text("1 1 V1:0 U1:3\n")
    code, out, err = run(capsys, "translate", TRIANGLE, str(edges))
    assert code == 2
    assert err.startswith("EdgeNotInHost:")


# ---------------------------------------------------------------------------
# verify


def test_verify_triangle(capsys):
    code, out, _ = run(capsys, "verify", TRIANGLE)
    assert code == 0
    assert out == (
        "CHECK simple PASS\n"
        "CHECK edge-counts PASS\n"
        "CHECK copy-count PASS\n"
        "CHECK per-solution PASS\n"
        "CHECK copy-structure PASS\n"
        "CHECK edge-equation PASS\n"
        "COUNTS edges=30 T=1 copies=5\n"
    )


def test_verify_modes_agree(capsys):
    base = run(capsys, "verify", TRIANGLE)
    assert run(capsys, "verify", TRIANGLE, "--naive") == base
    assert run(capsys, "verify", TRIANGLE, "--workers", "2") == base


# ---------------------------------------------------------------------------
# removal


def test_removal_triangle(capsys):
    code, out, _ = run(capsys, "removal", TRIANGLE)
    assert code == 0
    assert out == (
        "remove set 1: 1\n"
        "remove set 2: \n"
        "remove set 3: \n"
        "budget=1 total=1 mode=per-set-max\n"
    )


def test_removal_pinned(capsys):
    code, out, _ = run(capsys, "removal", PINNED)
    assert code == 0
    assert out.splitlines()[2] == "remove set 3: 3"
    assert out.splitlines()[3] == "budget=1 total=1 mode=per-set-max"


def test_removal_fold_total_mode(capsys):
    code, out, _ = run(capsys, "removal", FOLD, "--mode", "total")
    assert code == 0
    assert out.splitlines()[1] == "remove set 2: 0,1,2,3,4"
    assert out.splitlines()[-1] == "budget=5 total=5 mode=total"


# ---------------------------------------------------------------------------
# epsdelta


def test_epsdelta_deterministic(capsys):
    first = run(capsys, "epsdelta", TRIANGLE, "--trials", "3", "--seed", "7")
    assert first == (0, "5,0.0,0.0\n5,0.0,0.0\n5,0.12,0.2\n", "")
    assert run(capsys, "epsdelta", TRIANGLE, "--trials", "3", "--seed", "7") == first


def test_epsdelta_seed_changes_stream(capsys):
    a = run(capsys, "epsdelta", TRIANGLE, "--trials", "5", "--seed", "1")[1]
    b = run(capsys, "epsdelta", TRIANGLE, "--trials", "5", "--seed", "2")[1]
    assert len(a.splitlines()) == len(b.splitlines()) == 5
    assert a != b


# ---------------------------------------------------------------------------
# behrend


def test_behrend_default_and_elements(capsys):
    golden = (0, "16 2 2 8 16 8 128\n", "")
    assert run(capsys, "behrend", "16", "2") == golden
    assert run(capsys, "behrend", "16", "2", "--elements", "1,2") == golden


def test_behrend_sphere(capsys):
    assert run(capsys, "behrend", "5000", "25", "--sphere", "3", "2") == (
        0,
        "5000 25 2 200 10000 9800 12800\n",
        "",
    )


def test_behrend_error_paths(capsys):
    code, _, err = run(capsys, "behrend", "15", "2")
    assert code == 2 and err.startswith("IndivisibleAmbient:")
    code, _, err = run(capsys, "behrend", "16", "2", "--elements", "1,3")
    assert code == 2 and err.startswith("ValueError:")
    code, _, err = run(capsys, "behrend", "9", "9", "--sphere", "3", "2")
    assert code == 2 and "radix" in err


def test_behrend_out_of_regime_fails_check(capsys):
    code, _, err = run(capsys, "behrend", "72", "9", "--elements", "1,3")
    assert code == 1
    assert err.startswith("AssertionError: progression count 16 exceeds")


# ---------------------------------------------------------------------------
# shared error handling


def test_missing_file(capsys):
    code, _, err = run(capsys, "count", "systems/absent.sys")
    assert code == 2
    assert err.startswith("FileNotFoundError:")


def test_parse_error_carries_line(capsys, tmp_path):
    path = write_system(tmp_path, "field 5\nsystem 1 2\n1 x\nrhs 0\nset all\nset all\n")
    code, _, err = run(capsys, "count", path)
    assert code == 2
    assert err.startswith("ParseError:") and "line 3" in err


def test_rank_deficient_input(capsys, tmp_path):
    path = write_system(
        tmp_path,
        "field 5\nsystem 2 3\n1 1 1\n2 2 2\nrhs 0 0\nset all\nset all\nset all\n",
    )
    code, _, err = run(capsys, "normalize", path)
    assert code == 2
    assert err.startswith("RankDeficient:")


def test_non_prime_field(capsys, tmp_path):
    path = write_system(tmp_path, "field 6\nsystem 1 2\n1 1\nrhs 0\nset all\nset all\n")
    code, _, err = run(capsys, "count", path)
    assert code == 2
    assert err.startswith("NonPrimeModulus:")


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
