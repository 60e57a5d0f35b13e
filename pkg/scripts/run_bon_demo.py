#!/usr/bin/env python3
"""Offline best-of-N demo: curate an SFT dataset with the critic as
reward, using the corpus-backed mock generator.

Usage: python scripts/run_bon_demo.py [out_dir] [n]
"""

from __future__ import annotations

import sys
from pathlib import Path

from poetone.bon import BonConfig, build_sft_dataset
from poetone.gateway import LlmClient, ProviderConfig, ResponseCache
from poetone.mockprovider import RoutingTransport
from poetone.phonology import load_default_lexicon
from poetone.prompts import PromptStrategy
from poetone.registry import Theme, default_data_path, load_corpus, load_templates


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_bon")
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    templates = load_templates(default_data_path("templates.json"))
    corpus = load_corpus(default_data_path("corpus.jsonl"), templates)
    lexicon = load_default_lexicon()

    generator = ProviderConfig(
        provider_id="fixture-poet", model_name="fixture-poet",
        base_url="mock://corpus", temperature=0.9, requests_per_minute=1_000_000,
    )
    config = BonConfig(
        n=n,
        generator=generator,
        prompts=tuple(
            (cipai_id, theme, PromptStrategy.ZERO_SHOT)
            for cipai_id in templates.cipai_ids
            for theme in Theme
        ),
    )
    client = LlmClient(
        transport=RoutingTransport(templates, corpus),
        cache=ResponseCache(out_dir / "cache.jsonl"),
    )
    records, manifest = build_sft_dataset(
        config, templates, corpus, lexicon, client,
        out_dir / "sft_dataset.jsonl", out_dir / "sft_manifest.json",
    )
    stats = manifest["score_stats"]
    print(f"records: {len(records)} -> {out_dir}/sft_dataset.jsonl")
    print(f"scores:  min={stats['min']:.4f} mean={stats['mean']:.4f} max={stats['max']:.4f}")
    print(f"skips:   {len(manifest['skipped'])}")


if __name__ == "__main__":
    main()
