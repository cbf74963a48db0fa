import json

import pytest
from click.testing import CliRunner

from conftest import GOLDEN, NIXON_JSON, NIXON_WAV, STUB_DIR
from scribeview.cli import main

TRANSCRIPT_ID = "t-edb7279beda9"


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def data_dir(tmp_path):
    return str(tmp_path / "data")


def invoke(runner, data_dir, *args, expect=0):
    result = runner.invoke(main, ["--data-dir", data_dir, *args])
    assert result.exit_code == expect, result.output + str(result.exception)
    return result


@pytest.fixture()
def seeded(runner, data_dir):
    invoke(runner, data_dir, "ingest", str(NIXON_JSON))
    return data_dir


class TestIngest:
    def test_json_ingest(self, runner, data_dir):
        result = invoke(runner, data_dir, "ingest", str(NIXON_JSON))
        assert result.output == f"transcript {TRANSCRIPT_ID} revision 0 (created)\n"

    def test_reingest_reports_already_present(self, runner, seeded):
        result = invoke(runner, seeded, "ingest", str(NIXON_JSON))
        assert "(already present)" in result.output

    def test_audio_ingest_via_stub(self, runner, data_dir):
        result = invoke(
            runner, data_dir,
            "ingest", str(NIXON_WAV), "--stub-dir", str(STUB_DIR),
        )
        assert f"transcript {TRANSCRIPT_ID} ready" in result.output

    def test_audio_without_stub_dir_is_a_config_error(self, runner, data_dir):
        result = invoke(runner, data_dir, "ingest", str(NIXON_WAV), expect=1)
        assert "config_error" in result.output

    def test_missing_file_is_a_usage_error(self, runner, data_dir):
        result = invoke(runner, data_dir, "ingest", "/nope.json", expect=2)


class TestList:
    def test_empty(self, runner, data_dir):
        assert invoke(runner, data_dir, "list").output == "no transcripts\n"

    def test_human_line(self, runner, seeded):
        out = invoke(runner, seeded, "list").output
        assert TRANSCRIPT_ID in out and "3 segments" in out

    def test_json_is_exact_payload(self, runner, seeded):
        out = invoke(runner, seeded, "list", "--json").stdout_bytes
        body = json.loads(out)
        assert body["transcripts"][0]["id"] == TRANSCRIPT_ID
        assert not out.endswith(b"\n")


class TestStats:
    def test_human(self, runner, seeded):
        out = invoke(runner, seeded, "stats", TRANSCRIPT_ID).output
        assert "line 1: 0.8920" in out
        assert "line 3: 0.6900  (low)" in out

    def test_unknown_transcript(self, runner, data_dir):
        result = invoke(runner, data_dir, "stats", "t-missing00000", expect=1)
        assert "not_found" in result.output


class TestSearch:
    def test_human(self, runner, seeded):
        out = invoke(runner, seeded, "search", TRANSCRIPT_ID, "pandas").output
        assert "(0,1) pandas  0.52" in out
        assert "(1,1) pandas  0.88" in out
        assert "2 hit(s), keyword confidence 0.70" in out

    def test_no_matches(self, runner, seeded):
        out = invoke(runner, seeded, "search", TRANSCRIPT_ID, "nixon").output
        assert out == "no matches\n"

    def test_empty_term_is_a_usage_error(self, runner, seeded):
        invoke(runner, seeded, "search", TRANSCRIPT_ID, "  ", expect=2)

    def test_json_payload(self, runner, seeded):
        out = invoke(
            runner, seeded, "search", TRANSCRIPT_ID, "pandas", "--json"
        ).stdout_bytes
        assert json.loads(out)["keyword_confidence"] == pytest.approx(0.70)


class TestWordTree:
    def test_matches_golden(self, runner, seeded):
        out = invoke(runner, seeded, "wordtree", TRANSCRIPT_ID, "pandas").output
        assert out == (GOLDEN / "wordtree_pandas_following.txt").read_text()

    def test_preceding(self, runner, seeded):
        out = invoke(
            runner, seeded, "wordtree", TRANSCRIPT_ID, "pandas", "--dir", "preceding"
        ).output
        assert out == "pandas (2)\n  the (2)\n"

    def test_empty_term_is_a_usage_error(self, runner, seeded):
        invoke(runner, seeded, "wordtree", TRANSCRIPT_ID, "", expect=2)

    def test_json_payload(self, runner, seeded):
        out = invoke(
            runner, seeded, "wordtree", TRANSCRIPT_ID, "pandas", "--json"
        ).stdout_bytes
        assert json.loads(out)["tree"]["count"] == 2


class TestExport:
    def test_file_matches_api_bytes(self, runner, seeded, tmp_path):
        out_path = tmp_path / "export.json"
        invoke(runner, seeded, "export", TRANSCRIPT_ID, str(out_path))
        doc = json.loads(out_path.read_bytes())
        assert doc["id"] == TRANSCRIPT_ID
        assert doc["format"] == "scribeview.transcript.v1"

    def test_two_exports_are_byte_identical(self, runner, seeded, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        invoke(runner, seeded, "export", TRANSCRIPT_ID, str(a))
        invoke(runner, seeded, "export", TRANSCRIPT_ID, str(b))
        assert a.read_bytes() == b.read_bytes()


def test_config_file_sets_data_dir(runner, tmp_path):
    config = tmp_path / "scribeview.toml"
    config.write_text(f'data_dir = "{tmp_path / "d"}"\n')
    result = runner.invoke(main, ["--config", str(config), "list"])
    assert result.exit_code == 0
    assert result.output == "no transcripts\n"


def test_bad_config_is_a_clean_error(runner, tmp_path):
    config = tmp_path / "scribeview.toml"
    config.write_text("nonsense_key = 1\n")
    result = runner.invoke(main, ["--config", str(config), "list"])
    assert result.exit_code == 1
    assert "config_error" in result.output
