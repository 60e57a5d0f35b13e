from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from poetone.cli import main
from poetone.registry import default_data_path, dump_templates, load_templates


@pytest.fixture
def runner():
    return CliRunner()


class TestValidate:
    def test_packaged_data_is_valid(self, runner):
        result = runner.invoke(main, ["validate"])
        assert result.exit_code == 0, result.output
        assert "OK" in result.output

    def test_broken_template_exits_nonzero(self, runner, tmp_path):
        broken = json.loads(default_data_path("templates.json").read_text(encoding="utf-8"))
        broken[0]["variants"][0]["stanzas"] = broken[0]["variants"][0]["stanzas"][:1]
        path = tmp_path / "templates.json"
        path.write_text(json.dumps(broken, ensure_ascii=False), encoding="utf-8")
        result = runner.invoke(main, ["validate", "--templates", str(path)])
        assert result.exit_code == 1


class TestScore:
    def test_score_from_stdin_json(self, runner, corpus):
        poem = corpus.get("busuanzi-04")
        result = runner.invoke(
            main, ["score", "--cipai", "busuanzi", "--json"], input=poem.text
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["total"] == 1.0
        assert report["best_variant_id"] == "standard"

    def test_score_human_readable(self, runner, corpus):
        poem = corpus.get("huanxisha-01")
        result = runner.invoke(main, ["score", "--cipai", "huanxisha"], input=poem.text)
        assert result.exit_code == 0
        assert "total:" in result.output
        assert "structure:" in result.output

    def test_score_with_range(self, runner):
        text = "无意苦争春，一任群芳妒。零落成泥碾作尘，只有香如故。"
        result = runner.invoke(
            main,
            ["score", "--cipai", "busuanzi", "--range", "4..", "--json"],
            input=text,
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["per_variant"]["standard"]["structure"] == 1.0

    def test_unknown_cipai_fails(self, runner):
        result = runner.invoke(main, ["score", "--cipai", "nope"], input="明月。")
        assert result.exit_code != 0
        assert "unknown cipai" in result.output

    def test_custom_weights(self, runner, corpus):
        poem = corpus.get("busuanzi-04")
        result = runner.invoke(
            main,
            ["score", "--cipai", "busuanzi", "--weights", "1.0,0.0,0.0", "--json"],
            input=poem.text,
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["weights"]["structure"] == 1.0


class TestBenchAndBon:
    BENCH_TOML = """
[bench]
run_id = "cli-demo"
strategies = ["zero-shot", "completion"]
themes = ["SorrowGrief"]
cipai = ["busuanzi"]

[models.mockgen]
model_name = "mock"
base_url = "mock://corpus"
"""

    def test_bench_offline_roundtrip(self, runner, tmp_path):
        config = tmp_path / "bench.toml"
        config.write_text(self.BENCH_TOML, encoding="utf-8")
        out = tmp_path / "run"
        result = runner.invoke(
            main, ["bench", "--config", str(config), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        journal = (out / "records.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(journal) == 2
        table = json.loads((out / "conformity.json").read_text(encoding="utf-8"))
        assert "mockgen" in table["models"]

    BON_TOML = """
[bon]
n = 2

[generator]
provider_id = "mockgen"
model_name = "mock"
base_url = "mock://corpus"

[prompts]
cipai = ["busuanzi"]
themes = ["SorrowGrief"]
strategies = ["zero-shot"]
"""

    def test_bon_offline_roundtrip(self, runner, tmp_path):
        config = tmp_path / "bon.toml"
        config.write_text(self.BON_TOML, encoding="utf-8")
        out = tmp_path / "sft.jsonl"
        result = runner.invoke(main, ["bon", "--config", str(config), "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = [json.loads(l) for l in out.read_text(encoding="utf-8").splitlines()]
        assert len(rows) == 1
        manifest = json.loads(
            (tmp_path / "sft_manifest.json").read_text(encoding="utf-8")
        )
        assert manifest["record_count"] == 1


class TestJudgeCommand:
    PROVIDERS_TOML = """
[providers.mockjudge]
model_name = "mock"
base_url = "mock://corpus"
"""

    def test_judge_offline(self, runner, tmp_path, corpus):
        providers = tmp_path / "providers.toml"
        providers.write_text(self.PROVIDERS_TOML, encoding="utf-8")
        poems = tmp_path / "poems.jsonl"
        poem = corpus.get("busuanzi-02")
        poems.write_text(
            json.dumps(
                {"text": poem.text, "cipai_id": "busuanzi", "theme": "SorrowGrief"},
                ensure_ascii=False,
            )
            + "\n",
            encoding="utf-8",
        )
        out = tmp_path / "scores.jsonl"
        result = runner.invoke(
            main,
            ["judge", "--in", str(poems), "--judges", "mockjudge",
             "--providers", str(providers), "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        row = json.loads(out.read_text(encoding="utf-8").splitlines()[0])
        assert set(row["quality"]["per_judge"]) == {"mockjudge"}
        for dim in ("fluency", "coherence", "poetic_quality"):
            assert 1 <= row["quality"][dim] <= 5


class TestProbeCommand:
    def test_probe_theme_on_packaged_corpus(self, runner, tmp_path):
        out = tmp_path / "probe.json"
        result = runner.invoke(
            main, ["probe", "--task", "theme", "--seed", "4", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["task"] == "theme"
        assert 0.0 <= report["accuracy"] <= 1.0
        assert len(report["split"]["test_doc_ids"]) == 6  # one per theme


class TestPairsCommand:
    def test_pairs_from_judged_records(self, runner, tmp_path, corpus):
        rows = []
        for i, poem_id in enumerate(["busuanzi-02", "huanxisha-03"]):
            poem = corpus.get(poem_id)
            rows.append(
                {
                    "provider_id": "mockgen",
                    "cipai_id": poem.cipai_id,
                    "theme": poem.theme.value,
                    "total": 0.9,
                    "quality": {"fluency": 4, "coherence": 4, "poetic_quality": 4},
                    "record": {"extracted_poem": poem.text},
                }
            )
        records = tmp_path / "records.jsonl"
        records.write_text(
            "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows),
            encoding="utf-8",
        )
        out = tmp_path / "pairs.json"
        result = runner.invoke(
            main, ["pairs", "--records", str(records), "--k", "2", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        pairs = json.loads(out.read_text(encoding="utf-8"))
        assert len(pairs) == 2
