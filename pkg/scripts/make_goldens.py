"""Regenerate golden/<scenario>/<command> from the CLI (text format)."""

import os
import sys

from hodge_neron.cli import COMMANDS, execute
from hodge_neron.scenario import BUNDLED

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "golden")

# (directory, scenario, extra argv, file stem)
EXTRA = [
    ("example3-lambda1", "example3", ["--lambda", "1"], None),
    ("example2", "example2", ["--no-derivative-sections"], "tz-closure-no-derivatives"),
]


def cases():
    for name in BUNDLED:
        for cmd in COMMANDS + ("report-all",):
            yield name, name, cmd, [], cmd
    for d, name, extra, stem in EXTRA:
        cmds = [c for c in COMMANDS if c.startswith("nf-")] + ["report-all"] if stem is None else ["tz-closure"]
        for cmd in cmds:
            yield d, name, cmd, extra, stem or cmd


def main(check=False):
    bad = 0
    for d, name, cmd, extra, stem in cases():
        code, text = execute([cmd, name] + extra)
        if cmd != "report-all" and text.startswith("n/a:"):
            continue
        path = os.path.join(ROOT, d, stem)
        if check:
            with open(path) as fh:
                if fh.read() != text:
                    print("differs:", path)
                    bad += 1
            continue
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
        print(f"{code}  {os.path.relpath(path, ROOT)}")
    return bad


if __name__ == "__main__":
    sys.exit(1 if main(check="--check" in sys.argv) else 0)
