"""Golden inputs for the plot tests, produced by invoking the primary CLI
as a subprocess (the plotting package never imports it)."""
import shutil
import subprocess

import pytest

SPHULL = shutil.which("sphull")


def run_sphull(args, out_path):
    assert SPHULL is not None, "the sphull CLI must be installed"
    subprocess.run([SPHULL, *args, "--out", str(out_path)], check=True,
                   capture_output=True)
    return out_path


@pytest.fixture(scope="session")
def golden_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("golden")


@pytest.fixture(scope="session")
def hist_csv(golden_dir):
    return run_sphull(["hist", "--model", "uniform", "--n", "1000",
                       "--trials", "400", "--seed", "501", "--bins", "40"],
                      golden_dir / "hist.csv")


@pytest.fixture(scope="session")
def curve_csv(golden_dir):
    return run_sphull(["curve", "--n-list", "10,40,100,200",
                       "--trials-each", "25", "--seed", "502"],
                      golden_dir / "curve.csv")


@pytest.fixture(scope="session")
def curve_single_csv(golden_dir):
    return run_sphull(["curve", "--n-list", "30", "--trials-each", "20",
                       "--seed", "503"], golden_dir / "curve1.csv")


@pytest.fixture(scope="session")
def deficiency_csv(golden_dir):
    return run_sphull(["deficiency", "--n-list", "4,10,100,1000,100000"],
                      golden_dir / "def.csv")


@pytest.fixture(scope="session")
def deficiency_single_csv(golden_dir):
    return run_sphull(["deficiency", "--n-list", "50"],
                      golden_dir / "def1.csv")


@pytest.fixture(scope="session")
def hist_json(golden_dir):
    return run_sphull(["hist", "--model", "uniform", "--n", "50",
                       "--trials", "200", "--seed", "504", "--format",
                       "json"], golden_dir / "hist.json")
