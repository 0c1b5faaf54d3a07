import contextlib
import io

import pytest

from conftest import CORPUS_FILES
from fuzzing import mutated_plans
from hopf_forge.cli import main
from hopf_forge.dsl import parse


def check_quietly(path) -> int:
    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(["check", str(path), "--bound", "2,1"])


@pytest.mark.parametrize("seed", [1, 2])
def test_mutated_plans_never_crash(seed, tmp_path, monkeypatch):
    monkeypatch.setenv("HOPF_FORGE_MAX_COSETS", "5000")
    sources = [p.read_text() for p in CORPUS_FILES]
    codes = []
    for i, text in enumerate(mutated_plans(sources, 100, seed=seed)):
        path = tmp_path / f"m{i}.plan"
        path.write_text(text)
        code = check_quietly(path)
        assert code in (0, 1, 2), text
        if code == 0:
            # a mutation that leaves a valid, passing plan (a comment edit, a duplicated check)
            parse(text)
        codes.append(code)
    assert codes.count(2) > len(codes) // 2


def test_deep_nesting_is_a_plan_error(tmp_path):
    path = tmp_path / "deep.plan"
    path.write_text("group F = free(a)\ncheck \"deep\" { identity F: " + "(" * 5000 + "a" + ")" * 5000 + " }\n")
    assert check_quietly(path) == 2


def test_huge_exponents_are_handled(tmp_path, monkeypatch):
    monkeypatch.setenv("HOPF_FORGE_MAX_COSETS", "5000")
    path = tmp_path / "big.plan"
    path.write_text(
        "group Q = presentation { gens b; rels b^1000000000; }\n")
    assert check_quietly(path) == 2
    path.write_text(
        "group F = free(s)\ngroup H = hnn(F, t, cyclic { s -> s^2 })\n"
        'check "long run" { nontrivial H: t^1000000000 s }\n'
        'check "long commutator power" { identity H: [s, t]^1000000000 }\n')
    assert check_quietly(path) in (1, 2)
