#!/usr/bin/env python3
"""End-to-end offline demo: benchmark two mock providers, judge the
outputs, export summary tables, and build human-evaluation pairs.

Everything runs against the packaged fixtures and the in-process mock
providers (no network, no keys). Outputs land in ./demo_run/.

Usage: python scripts/run_mock_benchmark.py [out_dir]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from poetone.bench import BenchConfig, export_tables, run_benchmark
from poetone.evalservice import build_pairs, dump_pairs, entries_from_records
from poetone.gateway import LlmClient, ProviderConfig, ResponseCache
from poetone.mockprovider import RoutingTransport
from poetone.phonology import load_default_lexicon
from poetone.prompts import PromptStrategy
from poetone.registry import Theme, default_data_path, load_corpus, load_templates


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_run")
    templates = load_templates(default_data_path("templates.json"))
    corpus = load_corpus(default_data_path("corpus.jsonl"), templates)
    lexicon = load_default_lexicon()

    def mock(provider_id: str, kind: str) -> ProviderConfig:
        return ProviderConfig(
            provider_id=provider_id, model_name=provider_id,
            base_url=f"mock://{kind}", requests_per_minute=1_000_000,
        )

    config = BenchConfig(
        run_id="mock-demo",
        models=(mock("fixture-poet", "corpus"), mock("prose-only", "garbage")),
        strategies=tuple(PromptStrategy),
        cipai_ids=tuple(templates.cipai_ids),
        themes=tuple(Theme),
        judges=(mock("judge-a", "corpus"), mock("judge-b", "corpus")),
    )
    client = LlmClient(
        transport=RoutingTransport(templates, corpus),
        cache=ResponseCache(out_dir / "cache.jsonl"),
    )
    run = run_benchmark(config, templates, corpus, lexicon, client, out_dir)
    paths = export_tables(run, out_dir)
    print(f"benchmark: {len(run)} records -> {out_dir}/records.jsonl")

    aggregate = run.aggregate()
    for model_id, row in aggregate["models"].items():
        cells = "  ".join(
            f"{s}={row['cells'][s]:.2f}" for s in aggregate["strategies"]
        )
        best = row["best"]
        print(f"  {model_id}: {cells}  best={best['score']:.2f} ({best['strategy']})")

    rows = [
        json.loads(line)
        for line in (out_dir / "records.jsonl").read_text(encoding="utf-8").splitlines()
    ]
    entries = entries_from_records(rows)
    pairs, skipped = build_pairs(entries, corpus, templates, per_model_k=5)
    dump_pairs(pairs, out_dir / "pairs.json")
    print(f"pairs: {len(pairs)} built, {len(skipped)} skipped -> {out_dir}/pairs.json")
    print(f"tables: {paths['conformity_csv']}")
    print(f"serve the study with: poetone serve --pairs {out_dir}/pairs.json")


if __name__ == "__main__":
    main()
