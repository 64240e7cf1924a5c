"""Command-line surface: golden tests for every documented example,
plus exit-code contracts."""

import os
import re
import subprocess
import sys

import pytest

README = os.path.join(os.path.dirname(__file__), os.pardir, "README.md")


def _console_examples():
    """(command, expected_stdout) pairs from every console block in the
    README; each documented example runs verbatim as a golden test."""
    with open(README) as fh:
        text = fh.read()
    examples = []
    for block in re.findall(r"```console\n(.*?)```", text, flags=re.S):
        lines = block.splitlines()
        i = 0
        while i < len(lines):
            assert lines[i].startswith("$ "), f"stray line in console block: {lines[i]!r}"
            cmd = lines[i][2:]
            i += 1
            out = []
            while i < len(lines) and not lines[i].startswith("$ "):
                out.append(lines[i])
                i += 1
            examples.append((cmd, "\n".join(out)))
    return examples


EXAMPLES = _console_examples()


def test_readme_has_examples():
    assert len(EXAMPLES) >= 15


@pytest.mark.parametrize("cmd,expected", EXAMPLES,
                         ids=[e[0][:40] for e in EXAMPLES])
def test_readme_example_byte_stable(cmd, expected, tmp_path_factory):
    # all examples of one session share a directory so that files written
    # by one command (dec.txt, geom.txt) are visible to later commands
    workdir = tmp_path_factory.getbasetemp() / "cli_golden"
    workdir.mkdir(exist_ok=True)
    proc = subprocess.run(cmd, shell=True, cwd=str(workdir),
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.rstrip("\n") == expected.rstrip("\n")


# ---------------------------------------------------------------------------
# exit codes and error surfaces
# ---------------------------------------------------------------------------


def _run(*argv):
    from dtower.cli import run
    import io
    from contextlib import redirect_stderr, redirect_stdout
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_exit_zero_on_success():
    code, out, _ = _run("adjoint", "Dx")
    assert code == 0 and out.strip() == "Dx"


def test_exit_one_on_not_found():
    code, _, err = _run("ratsols", "Dx - 1")
    assert code == 1
    assert "no rational solutions" in err


def test_exit_one_on_empty_search():
    code, _, err = _run("intertwine", "Dx^3 + x*Dx^2 + 7",
                        "--order", "0", "--deg", "2")
    assert code == 1
    assert "no intertwiner" in err


def test_exit_two_on_parse_error():
    code, _, err = _run("adjoint", "Dx +* oops")
    assert code == 2
    assert "error" in err


def test_exit_two_on_usage_error():
    code, _, _ = _run("no-such-command")
    assert code == 2


def test_extract_failure_is_exit_one():
    code, _, err = _run("extract", "Dx^2", "Dx")
    assert code == 1
    assert "extraction failed" in err


def test_at_file_argument(tmp_path):
    p = tmp_path / "op.txt"
    p.write_text("x*Dx + 1/2\n")
    code, out, _ = _run("adjoint", f"@{p}")
    assert code == 0 and out.strip() == "(x)*Dx + 1/2"
