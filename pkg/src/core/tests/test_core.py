import json

import pytest
from django.core.management import CommandError, call_command, execute_from_command_line

from core.checks import check_bundled_graphs, check_cyclewalk_settings
from core.exceptions import ConfigError, DiagnosticsError, GraphLoadError, StateError
from core.files import NDJSONWriter, dump_record, file_digest, read_ndjson
from core.rng import chain_rng, draw_index, draw_weighted
from graphs.lattices import make_grid
from graphs.loaders import write_graph_file


class TestChainRng:
    def test_streams_are_reproducible(self):
        assert chain_rng(7, 2).random(5).tolist() == chain_rng(7, 2).random(5).tolist()

    def test_chain_index_changes_the_stream(self):
        assert chain_rng(7, 0).random(5).tolist() != chain_rng(7, 1).random(5).tolist()

    def test_draw_index_range(self):
        rng = chain_rng(1)
        draws = {draw_index(rng, 3) for _ in range(500)}
        assert draws == {0, 1, 2}

    def test_draw_weighted_follows_increments(self):
        rng = chain_rng(2)
        cumulative = [1.0, 1.0, 4.0]
        counts = [0, 0, 0]
        for _ in range(20_000):
            counts[draw_weighted(rng, cumulative)] += 1
        assert counts[1] == 0
        assert abs(counts[0] / 20_000 - 0.25) < 0.02


class TestFiles:
    def test_ndjson(self, tmp_path):
        path = tmp_path / "log.jsonl"
        with NDJSONWriter(path) as log:
            log.write({"b": 1, "a": [1, 2]})
            log.write({"step": 2})
        assert log.count == 2
        assert path.read_text().splitlines()[0] == '{"a":[1,2],"b":1}'
        assert list(read_ndjson(path)) == [{"a": [1, 2], "b": 1}, {"step": 2}]

    def test_malformed_record(self, tmp_path):
        path = tmp_path / "log.jsonl"
        path.write_text('{"step": 0}\n{oops\n')
        with pytest.raises(DiagnosticsError, match=":2:"):
            list(read_ndjson(path))

    def test_digest(self, tmp_path):
        path = tmp_path / "a.txt"
        path.write_text("same")
        other = tmp_path / "b.txt"
        other.write_text("same")
        assert file_digest(path) == file_digest(other)

    def test_dump_record_is_canonical(self):
        assert dump_record({"z": 1, "a": None}) == json.dumps({"a": None, "z": 1}, separators=(",", ":"))


class TestExceptions:
    def test_messages(self):
        assert str(ConfigError("steps", "must be >= 0")) == "steps: must be >= 0"
        assert str(StateError("empty district", 3)) == "district 3: empty district"
        assert str(GraphLoadError("bad weight", edge=(1, 2))) == "bad weight (edge 1-2)"


class TestChecks:
    def test_defaults_pass(self):
        assert check_cyclewalk_settings(None) == []

    def test_bad_values(self, settings):
        settings.CYCLEWALK = {**settings.CYCLEWALK, "DEFAULT_BINS": 0, "AUDIT_EVERY": -1}
        ids = {error.id for error in check_cyclewalk_settings(None)}
        assert ids == {"cyclewalk.E002", "cyclewalk.E003"}

    def test_bundled_graphs(self, tmp_path, settings):
        good = write_graph_file(make_grid(2, 2), tmp_path / "good.json")
        settings.CYCLEWALK = {
            **settings.CYCLEWALK,
            "CHECK_GRAPHS": [str(good), str(tmp_path / "missing.json")],
        }
        errors = check_bundled_graphs(None)
        assert [error.id for error in errors] == ["cyclewalk.E010"]


class TestSamplerCommand:
    def test_missing_argument_exits_with_one(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            execute_from_command_line(["manage.py", "validate", "--exact", "exact.csv"])
        assert excinfo.value.code == 1
        err = capsys.readouterr().err
        assert "usage:" in err
        assert "--logs" in err

    def test_unknown_option_exits_with_one(self):
        with pytest.raises(SystemExit) as excinfo:
            execute_from_command_line(["manage.py", "make_grid", "--no-such-option"])
        assert excinfo.value.code == 1

    def test_call_command_raises(self):
        with pytest.raises(CommandError) as excinfo:
            call_command("validate")
        assert excinfo.value.returncode == 1
