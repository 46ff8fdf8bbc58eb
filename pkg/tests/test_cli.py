"""Tests for CLI functionality."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from slodowy.cli import EXIT_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE, build_parser, main


def _records(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_cli_help() -> None:
    """Test CLI help message."""
    result = subprocess.run(
        [sys.executable, "-m", "slodowy.cli", "--help"],
        capture_output=True,
        text=True,
        timeout=30,
    )
    assert result.returncode == 0
    assert "Hamiltonian reduction by stages" in result.stdout
    assert "verify-all" in result.stdout
    assert "SLODOWY_MAX_DIM" in result.stdout


def test_subcommands_share_output_options() -> None:
    parser = build_parser()
    args = parser.parse_args(["covers", "2,1", "--format", "text"])
    assert args.format == "text"
    assert args.out is None


def test_invalid_partition_is_a_usage_error() -> None:
    with pytest.raises(SystemExit) as exc_info:
        main(["covers", "1,2"])
    assert exc_info.value.code == 2


class TestCovers:
    def test_json(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["covers", "2,2,2"]) == EXIT_OK
        (record,) = _records(capsys.readouterr().out)
        assert record == {"mu": [2, 2, 2], "covers": [[3, 2, 1]]}

    def test_text(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["covers", "2,2,2", "--format", "text"]) == EXIT_OK
        assert "(3,2,1)" in capsys.readouterr().out

    def test_out_file(self, tmp_path: Path) -> None:
        target = tmp_path / "covers.jsonl"
        assert main(["covers", "3,1", "--out", str(target)]) == EXIT_OK
        (record,) = _records(target.read_text())
        assert record["covers"] == [[4]]

    def test_unwritable_out_file(self, tmp_path: Path) -> None:
        target = tmp_path / "missing" / "covers.jsonl"
        assert main(["covers", "3,1", "--out", str(target)]) == EXIT_IO


class TestConstruct:
    def test_subregular(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["construct", "2,1", "3"]) == EXIT_OK
        (record,) = _records(capsys.readouterr().out)
        assert record["mu"] == [2, 1]
        assert record["lam"] == [3]
        assert record["K_source"] == "trace"
        assert sorted(tuple(e) for e in record["e2"]["entries"]) == [(1, 2, "1"), (2, 3, "1")]

    def test_text_panel(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["construct", "2,2,2", "3,2,1", "--format", "text"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "h2'" in out
        assert "K = -1" in out

    def test_non_cover(self) -> None:
        assert main(["construct", "2,2,2", "3,3"]) == EXIT_USAGE

    def test_different_sizes(self) -> None:
        assert main(["construct", "2,1", "4"]) == EXIT_USAGE


class TestVerifyAll:
    def test_small_n(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["verify-all", "3"]) == EXIT_OK
        records = _records(capsys.readouterr().out)
        assert [(r["data"]["mu"], r["data"]["lam"]) for r in records] == [([1, 1, 1], [2, 1]), ([2, 1], [3])]
        assert all(r["passed"] for r in records)

    @pytest.mark.parametrize("n", ["1", "9"])
    def test_out_of_range(self, n: str) -> None:
        assert main(["verify-all", n]) == EXIT_USAGE

    @pytest.mark.slow
    def test_parallel_matches_serial(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["verify-all", "5"]) == EXIT_OK
        serial = _records(capsys.readouterr().out)
        assert main(["verify-all", "5", "--jobs", "2"]) == EXIT_OK
        assert _records(capsys.readouterr().out) == serial


class TestRender:
    def test_pyramids(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["render", "pyramids", "2,1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("[  ]") == 9

    def test_hasse(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["render", "hasse", "3", "--format", "dot"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith('digraph "dominance_3"')
        assert '"(2,1)" -> "(3)";' in out

    def test_hasse_needs_integer(self) -> None:
        assert main(["render", "hasse", "x", "--format", "dot"]) == EXIT_USAGE

    def test_hasse_only_as_dot(self) -> None:
        assert main(["render", "hasse", "3"]) == EXIT_USAGE


class TestQuantumCommands:
    def test_invariants(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["invariants", "2,1", "3", "--degree", "3"]) == EXIT_OK
        (record,) = _records(capsys.readouterr().out)
        assert record["one_shot_dims"] == [1, 1, 2, 3]
        assert record["two_stage_dims"] == [1, 1, 2, 3]
        assert record["generators"][0] == "1"

    def test_size_limit(self) -> None:
        assert main(["invariants", "3,2", "4,1"]) == EXIT_USAGE

    def test_reduce_constant(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        element = tmp_path / "u.json"
        element.write_text("[[5, [], 1]]")
        assert main(["reduce", "2,1", "3", "--element", str(element)]) == EXIT_OK
        (record,) = _records(capsys.readouterr().out)
        assert record["pretty"] == "5*ħ"
        assert record["stage"] == 2

    def test_reduce_zero(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        element = tmp_path / "u.json"
        element.write_text("[]")
        assert main(["reduce", "2,1", "3", "--element", str(element), "--stage", "1"]) == EXIT_OK
        (record,) = _records(capsys.readouterr().out)
        assert record["reduced"] == []
        assert record["pretty"] == "0"

    def test_reduce_bad_json(self, tmp_path: Path) -> None:
        element = tmp_path / "u.json"
        element.write_text("{not json")
        assert main(["reduce", "2,1", "3", "--element", str(element)]) == EXIT_USAGE

    def test_reduce_missing_file(self, tmp_path: Path) -> None:
        assert main(["reduce", "2,1", "3", "--element", str(tmp_path / "nope.json")]) == EXIT_IO


class TestExamples:
    def test_missing_fixture_dir(self, tmp_path: Path) -> None:
        assert main(["examples", "sl3", "--fixture-dir", str(tmp_path)]) == EXIT_IO

    def test_sl3_low_degree(self, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(["examples", "sl3", "--degree", "2"])
        (record,) = _records(capsys.readouterr().out)
        assert record["checks"]["z1_invariant"]
        assert record["data"]["one_shot_dims"] == [1, 1, 2]
        assert code in (EXIT_OK, EXIT_FAILED)
