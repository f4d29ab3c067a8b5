import subprocess
import sys

import pytest

from fpp.cli import EXIT_USAGE, dispatch, main


def run(*argv):
    return dispatch(list(argv))


@pytest.mark.parametrize("argv", [["nosuchcmd"], [], ["cube-check", "--bogus"], ["check-smooth", "--charts", "12x"],
                                  ["check-free", "--primes", "32004"], ["build-w", "--params", "1,2"],
                                  ["cube-check", "-p", "5"]])
def test_usage_errors_exit_64(argv):
    code, text = run(*argv)
    assert code == EXIT_USAGE
    assert "usage" in text or "error" in text or "bad" in text or "not" in text


def test_eigentable_is_raw_tables():
    from fpp.grassmann import tables

    assert run("eigentable") == (0, tables())


def test_reports_are_byte_deterministic():
    a = run("cube-check", "--prime", "5", "--seed", "4")
    b = run("cube-check", "--prime", "5", "--seed", "4")
    assert a == b and a[0] == 0
    assert "## timings" not in a[1]
    assert "## timings" in run("cube-check", "--prime", "5", "--timings")[1]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nprime = 5\nseed = 9\n")
    code, text = run("cube-check", "--config", str(cfg))
    assert code == 0 and "config.seed = 9" in text and "F_5" in text
    code, text = run("cube-check", "--config", str(cfg), "--prime", "7")
    assert "F_7" in text
    cfg.write_text("nonsense = 1\n")
    assert run("cube-check", "--config", str(cfg))[0] == EXIT_USAGE


def test_out_file(tmp_path):
    out = tmp_path / "r.txt"
    code, text = run("hensel", "--trials", "2", "--out", str(out))
    assert code == 0 and out.read_text() == text
    assert "status=pass" in text


def test_build_w_output_parses():
    from fpp.multipoly import read_poly_text

    code, text = run("build-w", "--p0", "2", "--p3", "1/3")
    assert code == 0
    assert len(read_poly_text(text).polys) == 7


def test_cover_check_toy_and_user():
    assert run("cover-check")[0] == 0
    assert run("cover-check", "--f", "a^3", "--d", "a*b*c")[0] == 0
    assert run("cover-check", "--f", "a", "--d", "a")[0] == 1


def test_surfacex_negative_control(tmp_path):
    from fpp import surfacex as sx

    bad = tmp_path / "x.txt"
    bad.write_text(sx.raw_text().replace("799064 W1^2", "799065 W1^2", 1))
    code, text = run("surfacex", "verify", "--input", str(bad))
    assert code == 1 and "status=fail" in text
    assert run("surfacex", "verify")[0] == 0


def test_relation_search_demo():
    code, text = run("relation-search")
    assert code == 0 and "found=1" in text


def test_check_free_exit_code():
    code, text = run("check-free", "--params", "1,1,1,1,1,1,1", "--primes", "32003")
    assert code == 2 and "status=inconclusive" in text


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "fpp.cli", "nosuchcmd"], capture_output=True, text=True)
    assert r.returncode == EXIT_USAGE and "usage" in r.stderr
    assert main(["cube-check", "--prime", "5"]) == 0
    assert main(["cube-check", "--prime", "3"]) == EXIT_USAGE


def test_run_all_quick_and_corrupted_x(tmp_path):
    from fpp import surfacex as sx

    code, text = run("run-all", "--trials", "5")
    assert code == 0 and "status=pass" in text
    bad = tmp_path / "x.txt"
    bad.write_text(sx.raw_text().replace("-98948224478443260", "-98948224478443261", 1))
    code, text = run("run-all", "--trials", "5", "--input", str(bad))
    assert code == 1 and "DataCorrupt" in text
