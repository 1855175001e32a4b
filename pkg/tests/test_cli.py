import json
import os
import subprocess
import sys

import pytest

from hodge_neron.cli import execute, Outcome, COMMANDS
from hodge_neron.errors import ValidationError
from hodge_neron.scenario import load_scenario, SCENARIO_DIR

ROOT = os.path.join(os.path.dirname(__file__), "..")
sys.path.insert(0, os.path.join(ROOT, "scripts"))
import make_goldens  # noqa: E402

GOLDEN = list(make_goldens.cases())


def _bundled(name):
    with open(os.path.join(SCENARIO_DIR, name + ".json")) as fh:
        return json.load(fh)


def _write(tmp_path, data, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.mark.parametrize("d,name,cmd,extra,stem", [c for c in GOLDEN if c[2] == "report-all"],
                         ids=lambda x: x if isinstance(x, str) else None)
def test_report_all_golden(d, name, cmd, extra, stem):
    path = os.path.join(ROOT, "golden", d, stem)
    code, text = execute([cmd, name] + extra)
    with open(path) as fh:
        assert text == fh.read()
    assert code == 0


@pytest.mark.parametrize("d,name,cmd,extra,stem", [c for c in GOLDEN if c[2] != "report-all"])
def test_command_golden(d, name, cmd, extra, stem):
    path = os.path.join(ROOT, "golden", d, stem)
    code, text = execute([cmd, name] + extra)
    if not os.path.exists(path):
        assert text.startswith("n/a:") and code == 2
        return
    with open(path) as fh:
        assert text == fh.read()


def test_report_all_is_deterministic():
    assert execute(["report-all", "example2"]) == execute(["report-all", "example2"])


def test_console_script_matches_golden():
    out = subprocess.run(["hodge-neron", "report-all", "example1"], capture_output=True, text=True)
    with open(os.path.join(ROOT, "golden", "example1", "report-all")) as fh:
        assert out.stdout == fh.read()
    assert out.returncode == 0


def test_fiber_point_option():
    code, text = execute(["fiber", "example2", "--point", "0,0", "--format", "json"])
    data = json.loads(text)
    assert code == 0 and data["results"]["fibers"][0]["vector_dim"] == 3


def test_json_and_out(tmp_path):
    out = tmp_path / "o.json"
    code, text = execute(["monodromy", "example1", "--format", "json", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["results"]["order"] == 6 and json.loads(text) == data


def test_non_commuting_is_validation_error(tmp_path):
    d = _bundled("example2")
    d["N"][1] = [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    p = _write(tmp_path, d)
    with pytest.raises(ValidationError) as exc:
        load_scenario(p)
    assert "commuting" in [e[0] for e in exc.value.errors]
    code, text = execute(["validate", p])
    assert code == 2 and "[commuting]" in text


def test_float_entries_rejected(tmp_path):
    d = _bundled("example3")
    d["Q"][0][1] = -1.0
    code, text = execute(["wfilt", _write(tmp_path, d)])
    assert code == 2 and "float" in text


@pytest.mark.parametrize("code_name,mutate", [
    ("alternating", lambda d: d.__setitem__("Q", [[1, -1], [1, 0]])),
    ("nondegenerate", lambda d: d.__setitem__("Q", [[0, 0], [0, 0]])),
    ("nilpotent", lambda d: d["N"].__setitem__(0, [[1, 1], [0, 0]])),
    ("last-coordinate", lambda d: d["mixed"].__setitem__("v", ["0", "0", "2"])),
])
def test_validation_codes(tmp_path, code_name, mutate):
    d = _bundled("example3")
    mutate(d)
    code, text = execute(["validate", _write(tmp_path, d), "--format", "json"])
    assert code == 2
    assert code_name in [e["code"] for e in json.loads(text)["errors"]]


def test_failing_check_is_flagged_exit_3(tmp_path):
    # N = 0 but the splitting has weights 0 and -2: the limit W is not W(N)[-1]
    d = _bundled("example3")
    d.pop("mixed")
    d["N"] = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    code, text = execute(["wfilt", _write(tmp_path, d)])
    assert code == 3 and "flagged: limit W equals W(N)[-1]" in text


def test_outcome_exit_codes():
    o = Outcome("x", "y")
    assert o.exit_code == 0
    o.flag("a", False)
    assert o.exit_code == 3
    o.validation_failed = True
    assert o.exit_code == 2


def test_unknown_command_and_missing_file():
    assert execute(["bogus", "example2"])[0] == 2
    assert execute(["wfilt", "no-such-scenario"])[0] == 2


def test_not_applicable():
    code, text = execute(["monodromy", "example2"])
    assert code == 2 and text.startswith("n/a:")
    code, text = execute(["report-all", "example2"])
    assert "n/a:" in text and code == 0


def test_every_command_registered():
    for c in COMMANDS:
        code, _ = execute([c, "example3"])
        assert code in (0, 2)
