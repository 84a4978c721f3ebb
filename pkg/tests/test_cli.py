"""Tests for the command-line surface: formats, determinism, exit codes."""

import json
import random

import pytest

from entombed import __version__, cli, romscan


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_envelope(out: str) -> dict:
    envelope = json.loads(out)
    assert set(envelope) == {"command", "parameters", "results", "version"}
    assert envelope["version"] == __version__
    return envelope


class TestMazeRender:
    def test_ascii_has_rows_times_41_chars(self, capsys):
        code, out, _ = run_cli(capsys, "maze-render", "--seed", "1", "--rows", "60")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 60
        assert all(len(line) == 41 for line in lines)
        assert all(set(line) <= {"X", "_", " "} for line in lines)

    def test_zeros_source_repeats_byte_identically(self, capsys):
        _, out_a, _ = run_cli(capsys, "maze-render", "--source", "zeros", "--rows", "10")
        _, out_b, _ = run_cli(capsys, "maze-render", "--source", "zeros", "--rows", "10")
        assert out_a == out_b

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "maze-render", "--seed", "0x0b5b", "--rows", "5", "--format", "json"
        )
        assert code == 0
        envelope = parse_envelope(out)
        assert envelope["command"] == "maze-render"
        assert envelope["parameters"]["seed"] == 0x0B5B
        assert len(envelope["results"]["rows"]) == 5
        assert len(envelope["results"]["traces"]) == 5
        trace = envelope["results"]["traces"][0]
        assert set(trace) == {
            "left_bit",
            "right_bit",
            "mid_bits",
            "row_before_postprocess",
            "postprocess_fired",
        }

    def test_rows_zero_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["maze-render", "--rows", "0"])
        assert exc.value.code == 2

    def test_bad_seed_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["maze-render", "--seed", "70000"])
        assert exc.value.code == 2


class TestPrng:
    def test_survey_reports_observed_maximum(self, capsys):
        code, out, _ = run_cli(capsys, "prng", "--mode", "survey")
        assert code == 0
        results = parse_envelope(out)["results"]
        assert results["max_distinct"] == 1200
        assert results["argmax_seed"] == 0xB5B5
        assert len(results["per_seed_distinct"]) == 256

    def test_compare_reports_agreement(self, capsys):
        code, out, _ = run_cli(capsys, "prng", "--mode", "compare")
        assert code == 0
        results = parse_envelope(out)["results"]
        assert abs(results["fraction_equal"] - 0.503) < 0.001
        assert results["all_mismatch_low_bytes_equal"] is True
        assert results["mismatch_count"] == (
            results["high_delta_plus_one"] + results["high_delta_minus_one"]
        )

    def test_oracle_check_reports_equivalence(self, capsys):
        code, out, _ = run_cli(capsys, "prng", "--mode", "oracle-check")
        assert code == 0
        results = parse_envelope(out)["results"]
        assert results == {
            "states_checked": 65536,
            "historical_carry_matches_buggy": True,
            "fixed_carry_matches_correct": True,
        }

    def test_mode_is_required(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["prng"])
        assert exc.value.code == 2


class TestScan:
    @pytest.fixture()
    def corpus(self, tmp_path):
        rng = random.Random(200)
        sig = romscan.prng_signature()
        blob = sig.instantiate({"W": 0xDD, "X": 0xDE, "Y": 0xDF, "Z": 0xE0})
        plant_offsets = {}
        for i in range(5):
            noise = bytes(rng.randrange(0x100) for _ in range(512))
            data = noise
            if i < 3:
                offset = 32 + i * 100
                data = noise[:offset] + blob + noise[offset + len(blob) :]
                plant_offsets[f"rom{i}.bin"] = offset
            (tmp_path / f"rom{i}.bin").write_bytes(data)
        return tmp_path, plant_offsets

    def test_scan_dir_finds_planted(self, capsys, corpus):
        tmp_path, plant_offsets = corpus
        code, out, _ = run_cli(capsys, "scan", "--dir", str(tmp_path))
        assert code == 0
        results = parse_envelope(out)["results"]
        assert results["files_scanned"] == 5
        found = {hit["source"].rsplit("/", 1)[-1]: hit["offset"] for hit in results["hits"]}
        assert found == plant_offsets
        for hit in results["hits"]:
            assert hit["bindings"] == {"W": 0xDD, "X": 0xDE, "Y": 0xDF, "Z": 0xE0}
            assert hit["bindings_distinct"] is True
            assert hit["bindings_consecutive"] is True

    def test_scan_single_empty_file(self, capsys, tmp_path):
        empty = tmp_path / "empty.bin"
        empty.write_bytes(b"")
        code, out, _ = run_cli(capsys, "scan", "--file", str(empty))
        assert code == 0
        results = parse_envelope(out)["results"]
        assert results["hits"] == []

    def test_missing_dir_is_runtime_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "scan", "--dir", str(tmp_path / "absent"))
        assert code == 1
        assert "no such directory" in err

    def test_missing_file_is_runtime_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "scan", "--file", str(tmp_path / "absent.bin"))
        assert code == 1

    def test_custom_signature_file(self, capsys, tmp_path):
        sig_file = tmp_path / "sig.txt"
        sig_file.write_text("01 ?a 02 ?a")
        target = tmp_path / "data.bin"
        target.write_bytes(bytes([0x01, 0x55, 0x02, 0x55, 0x01, 0x55, 0x02, 0x56]))
        code, out, _ = run_cli(
            capsys, "scan", "--file", str(target), "--signature", str(sig_file)
        )
        assert code == 0
        results = parse_envelope(out)["results"]
        assert [(h["offset"], h["bindings"]) for h in results["hits"]] == [(0, {"a": 0x55})]

    def test_bad_signature_file_is_runtime_error(self, capsys, tmp_path):
        sig_file = tmp_path / "sig.txt"
        sig_file.write_text("not hex tokens!")
        target = tmp_path / "data.bin"
        target.write_bytes(b"\x00")
        code, _, err = run_cli(capsys, "scan", "--file", str(target), "--signature", str(sig_file))
        assert code == 1

    def test_dir_and_file_are_mutually_exclusive(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["scan", "--dir", str(tmp_path), "--file", "x"])
        assert exc.value.code == 2


class TestStats:
    def test_small_survey(self, capsys):
        code, out, _ = run_cli(capsys, "stats", "--mazes", "3", "--seed", "1")
        assert code == 0
        results = parse_envelope(out)["results"]
        assert results["mazes_generated"] == 3
        assert results["rows_generated"] == 180
        assert results["condition1_fires"] + results["condition2_fires"] <= 180
        assert 0.0 <= results["unsolvable_fraction"] <= 1.0

    def test_byte_identical_across_runs(self, capsys):
        _, out_a, _ = run_cli(capsys, "stats", "--mazes", "2", "--seed", "7")
        _, out_b, _ = run_cli(capsys, "stats", "--mazes", "2", "--seed", "7")
        assert out_a == out_b

    def test_mazes_required_and_positive(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["stats", "--mazes", "0"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            cli.main(["stats"])
        assert exc.value.code == 2


class TestEnvelope:
    @pytest.mark.parametrize(
        "argv",
        [
            ["maze-render", "--rows", "3", "--format", "json"],
            ["stats", "--mazes", "1", "--seed", "3"],
        ],
    )
    def test_json_round_trips_byte_identically(self, capsys, argv):
        code, out, _ = run_cli(capsys, *argv)
        assert code == 0
        reparsed = json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n"
        assert reparsed == out

    def test_unknown_command_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2
