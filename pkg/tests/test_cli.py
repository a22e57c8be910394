import json
import os
import subprocess
import sys

import pytest

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def run(*args):
    r = subprocess.run(
        [sys.executable, "-m", "delooper.cli", *args],
        capture_output=True,
        text=True,
        cwd=os.path.join(os.path.dirname(__file__), ".."),
    )
    return r.returncode, r.stdout


def corpus(name):
    return os.path.join(CORPUS, name)


@pytest.mark.parametrize(
    "args,expected",
    [
        (("verify", "corpus/s1.sset.json"), 0),
        (("verify", "corpus/delta1.sset.json"), 0),
        (("verify", "corpus/zs1.dsab.json"), 0),
        (("verify", "corpus/fibrant_full.dsab.json"), 0),
        (("moore", "corpus/zs1.dsab.json"), 0),
        (("match", "corpus/zs1.dsab.json", "-n", "1"), 0),
        (("reedy", "corpus/fibrant.dsab.json"), 0),
        (("reedy", "corpus/zs1.dsab.json"), 1),
        (("extend", "corpus/zs1.dsab.json"), 0),
        (("perm", "enum", "2"), 0),
        (("perm", "label", "3:0,0,0"), 0),
        (("perm", "schema", "3:0,0,0"), 0),
        (("simplex", "index", "2"), 0),
        (("deloop", "corpus/eta_chain.pialg.json"), 1),
        (("deloop", "corpus/loop_s3.pialg.json"), 0),
        (
            (
                "star-check",
                "--f",
                "corpus/star_f.freehom.json",
                "--g",
                "corpus/star_g.freehom.json",
                "--h",
                "corpus/star_h.targetmap.json",
                "--target",
                "corpus/star_target.dsab.json",
            ),
            0,
        ),
        (("synthesize", "--input", "corpus/fibrant.dsab.json", "--hdeg", "corpus/fibrant.hdeg.json"), 0),
        (("e2", "corpus/resolution.bisab.json"), 0),
        (("perm", "enum", "9"), 2),
        (("perm", "label", "garbage"), 2),
        (("verify", "corpus/does_not_exist.json"), 2),
        (("deloop", "corpus/s1.sset.json"), 2),
    ],
)
def test_exit_code_contract(args, expected):
    rc, out = run(*args)
    assert rc == expected, out


def test_reports_are_json_with_witnesses():
    rc, out = run("deloop", "corpus/eta_chain.pialg.json")
    rep = json.loads(out)
    assert rc == 1
    assert rep["verdict"] == "obstruction"
    assert rep["witnesses"]
    assert rep["degree"] == 6


def test_reports_deterministic():
    rc1, out1 = run("moore", "corpus/zs1.dsab.json")
    rc2, out2 = run("moore", "corpus/zs1.dsab.json")
    rep1, rep2 = json.loads(out1), json.loads(out2)
    rep1.pop("timing_s")
    rep2.pop("timing_s")
    assert rep1 == rep2


def test_moore_window_flag():
    # global flags precede the subcommand
    rc, out = run("--window", "0,1", "moore", "corpus/zs1.dsab.json")
    rep = json.loads(out)
    assert rc == 0
    assert rep["homotopy"] == {"0": [], "1": [0]}


def test_global_cap_flag_truncates():
    rc, out = run("--cap", "2", "moore", "corpus/zs1.dsab.json")
    rep = json.loads(out)
    assert rc == 0
    assert rep["caps"] == 2
    assert rep["homotopy"] == {"0": [], "1": [0]}


def test_synthesize_emits_verifiable_object(tmp_path):
    rc, out = run("synthesize", "--input", "corpus/fibrant.dsab.json", "--hdeg", "corpus/fibrant.hdeg.json")
    rep = json.loads(out)
    assert rc == 0
    path = tmp_path / "out.dsab.json"
    with open(path, "w") as fh:
        json.dump(rep["object"], fh)
    rc2, out2 = run("verify", str(path))
    assert rc2 == 0
