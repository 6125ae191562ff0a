import io
import json

import pytest

from pursuit import bounds as bounds_module
from pursuit.cli import main
from pursuit.decomposition import grid_path_decomposition
from pursuit.formats import read_gr, write_gr, write_td
from pursuit.generators import grid
from pursuit.sim import SimulationTrace


def run(*argv, stdin: str | None = None):
    out = io.StringIO()
    code = main(list(argv), out=out, inp=io.StringIO(stdin) if stdin is not None else None)
    return code, out.getvalue()


def error_of(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


class TestBound:
    def test_grid(self):
        code, text = run("bound", "--gen", "grid:4")
        doc = json.loads(text)
        assert code == 0
        assert doc["exact_c"] == 2 and doc["bounds"]["thm1"]["value"] == 2
        assert doc["bounds"]["eq1"]["value"] == 3
        assert doc["bounds"]["capt_bound"] is not None

    def test_clique(self):
        code, text = run("bound", "--gen", "clique:6")
        doc = json.loads(text)
        assert doc["bounds"]["thm_i_copwin"]["copwin"] and doc["bounds"]["eq1"]["value"] == 3

    def test_user_files(self, tmp_path):
        g = grid(3)
        write_gr(g, tmp_path / "g.gr")
        write_td(grid_path_decomposition(3, g), tmp_path / "t.td")
        code, text = run("bound", "--gr", str(tmp_path / "g.gr"), "--td", str(tmp_path / "t.td"))
        doc = json.loads(text)
        assert code == 0
        assert doc["graph"]["id"] == "g"
        assert doc["bounds"]["thm1"]["pool_relative"]
        assert doc["bounds"]["thm1_per_decomposition"]

    def test_text_format_and_out_file(self, tmp_path):
        target = tmp_path / "report.txt"
        code, text = run("bound", "--gen", "cycle:5", "--format", "text", "--out", str(target))
        assert code == 0 and text == ""
        assert "soundness: ok" in target.read_text()

    def test_byte_identical_repeats(self):
        first = run("bound", "--gen", "rconn:8,0.3", "--seed", "5")[1]
        second = run("bound", "--gen", "rconn:8,0.3", "--seed", "5")[1]
        assert first == second

    def test_soundness_failure_exit_code(self, monkeypatch):
        monkeypatch.setattr(bounds_module, "cop_number", lambda *a, **k: 7)
        code, text = run("bound", "--gen", "cycle:4")
        assert code == 4 and not json.loads(text)["soundness_ok"]


class TestSimulate:
    def test_grid_greedy(self):
        code, text = run("simulate", "--gen", "grid:5", "--robber", "greedy")
        doc = json.loads(text)
        assert code == 0 and doc["outcome"] == "captured" and doc["within_bound"]
        assert doc["capture_round"] <= doc["capture_time_bound"]["applicable"]

    def test_one_cop_on_k_tree(self):
        code, text = run("simulate", "--gen", "ktree:2,10", "--strategy", "thm-i")
        doc = json.loads(text)
        assert doc["cops"] == 1 and doc["outcome"] == "captured"

    def test_robber_wins_four_cycle(self):
        code, text = run("simulate", "--gen", "cycle:4", "--cops", "1", "--max-rounds", "30")
        assert code == 0 and json.loads(text)["outcome"] == "timeout"

    def test_relay_strategy(self):
        code, text = run("simulate", "--gen", "ktree:3,9", "--strategy", "thm-main2", "--robber", "random")
        doc = json.loads(text)
        assert doc["cops"] == 2 and doc["outcome"] == "captured"

    def test_trace_file(self, tmp_path):
        target = tmp_path / "trace.jsonl"
        run("simulate", "--gen", "grid:3", "--robber", "random", "--seed", "3", "--trace", str(target))
        trace = SimulationTrace.from_jsonl(target.read_text())
        assert trace.captured and trace.seed == 3

    def test_non_chordal_one_cop_strategy(self, capsys):
        code, _ = run("simulate", "--gen", "cycle:5", "--strategy", "thm-i")
        assert code == 2 and error_of(capsys)["error"] == "InvalidInputError"


class TestPlay:
    def test_passing_robber_is_caught(self):
        code, text = run("play", "--gen", "grid:3", stdin="8\n" + "p\n" * 20)
        assert code == 0 and "captured" in text

    def test_quit_saves_incomplete_transcript(self, tmp_path):
        target = tmp_path / "game.jsonl"
        code, text = run("play", "--gen", "grid:4", "--out", str(target), stdin="15\nq\n")
        assert code == 1
        trace = SimulationTrace.from_jsonl(target.read_text())
        assert trace.outcome == "incomplete" and trace.rounds[0].robber == 15

    def test_end_of_input_is_graceful(self):
        code, text = run("play", "--gen", "grid:3", stdin="")
        assert code == 1 and "incomplete" in text

    def test_bad_input_is_reprompted(self):
        code, text = run("play", "--gen", "grid:3", stdin="zebra\n99\n8\n" + "p\n" * 20)
        assert "not a vertex" in text and "99 is not a legal choice" in text
        assert code == 0


class TestErrors:
    def test_unknown_family(self, capsys):
        assert run("bound", "--gen", "blob:3")[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run("bound", "--gr", str(tmp_path / "none.gr"))[0] == 2
        assert "cannot read" in error_of(capsys)["message"]

    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.gr"
        bad.write_text("p tw 2 1\n1 1\n")
        assert run("bound", "--gr", str(bad))[0] == 2
        assert "line 2" in error_of(capsys)["message"]

    def test_budget(self, capsys):
        assert run("simulate", "--gen", "grid:4", "--budget-states", "10")[0] == 3
        assert error_of(capsys)["exit_code"] == 3

    def test_nonpositive_budget_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            run("bound", "--gen", "grid:3", "--budget-states", "0")


def test_generate_writes_gr(tmp_path):
    target = tmp_path / "k.gr"
    assert run("generate", "--gen", "ktree:2,7", "--seed", "1", "--out", str(target))[0] == 0
    g = read_gr(target)
    assert (g.n, g.m) == (7, 11)
