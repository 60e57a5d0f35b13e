"""Command-line entry points.

Subcommands: validate, score, judge, bench, bon, probe, pairs, serve.
Template, corpus, and lexicon paths default to the packaged data files
so everything runs out of the box; pass explicit paths to swap data.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .bench import export_tables, load_bench_config, load_run, run_benchmark
from .bon import build_sft_dataset, load_bon_config
from .critic import LineRangeError, ScoreWeights, conformity, conformity_partial
from .evalservice import (
    EvalService,
    build_pairs,
    dump_pairs,
    entries_from_records,
    load_pairs,
)
from .gateway import LlmClient, ResponseCache, judge as judge_poem, load_provider_configs
from .mockprovider import RoutingTransport
from .phonology import load_lexicon
from .probing import (
    ProbeTask,
    probe_document_from_record,
    probe_documents_from_corpus,
    run_probe,
)
from .registry import (
    Theme,
    default_data_path,
    load_corpus,
    load_templates,
    validate_template,
)


def _load_world(templates_path, corpus_path, tones_path, rhymes_path):
    templates = load_templates(templates_path or default_data_path("templates.json"))
    corpus = load_corpus(corpus_path or default_data_path("corpus.jsonl"), templates)
    lexicon = load_lexicon(
        tones_path or default_data_path("tones.tsv"),
        rhymes_path or default_data_path("rhymes.tsv"),
    )
    return templates, corpus, lexicon


def _parse_weights(text: str) -> ScoreWeights:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise click.BadParameter("expected three comma-separated weights")
    return ScoreWeights(*parts)


def _parse_range(text: str) -> tuple[int, int | None]:
    if ".." not in text:
        raise click.BadParameter("expected a..b or a..")
    start_text, stop_text = text.split("..", 1)
    return int(start_text), int(stop_text) if stop_text else None


data_options = [
    click.option("--templates", "templates_path", type=click.Path(exists=True), default=None,
                 help="Template JSON file (default: packaged)."),
    click.option("--corpus", "corpus_path", type=click.Path(exists=True), default=None,
                 help="Corpus JSONL file (default: packaged)."),
    click.option("--tones", "tones_path", type=click.Path(exists=True), default=None,
                 help="Tone TSV file (default: packaged)."),
    click.option("--rhymes", "rhymes_path", type=click.Path(exists=True), default=None,
                 help="Rhyme TSV file (default: packaged)."),
]


def with_data_options(command):
    for option in reversed(data_options):
        command = option(command)
    return command


@click.group()
@click.version_option(__version__)
def main():
    """Critic and evaluation toolkit for Cipai-constrained verse."""


@main.command()
@with_data_options
def validate(templates_path, corpus_path, tones_path, rhymes_path):
    """Validate templates and corpus; exit nonzero on any violation."""
    try:
        templates, corpus, _ = _load_world(
            templates_path, corpus_path, tones_path, rhymes_path
        )
    except Exception as exc:
        click.echo(f"INVALID: {exc}", err=True)
        sys.exit(1)
    problems = 0
    for template in templates:
        report = validate_template(template)
        for violation in report.violations:
            problems += 1
            click.echo(f"violation: {violation}", err=True)
    if problems:
        sys.exit(1)
    click.echo(
        f"OK: {len(templates)} templates, {len(corpus)} corpus poems, no violations"
    )


@main.command()
@click.option("--cipai", required=True, help="Cipai id to score against.")
@click.option("--text", "text_path", default="-",
              help="Poem file, or - for stdin (default).")
@click.option("--weights", default="0.4,0.3,0.3", show_default=True,
              help="structure,tonal,rhyme weights.")
@click.option("--range", "line_range", default=None,
              help="Flattened line range a..b (b empty = to end) for partial scoring.")
@click.option("--json", "as_json", is_flag=True, help="Emit the full report as JSON.")
@with_data_options
def score(cipai, text_path, weights, line_range, as_json,
          templates_path, corpus_path, tones_path, rhymes_path):
    """Score one poem's conformity against a Cipai template."""
    templates, _, lexicon = _load_world(
        templates_path, corpus_path, tones_path, rhymes_path
    )
    if cipai not in templates:
        raise click.ClickException(
            f"unknown cipai {cipai!r}; known: {', '.join(templates.cipai_ids)}"
        )
    raw_text = (
        sys.stdin.read() if text_path == "-" else Path(text_path).read_text(encoding="utf-8")
    )
    parsed_weights = _parse_weights(weights)
    try:
        if line_range:
            report = conformity_partial(
                raw_text, templates.get(cipai), lexicon, parsed_weights,
                line_range=_parse_range(line_range),
            )
        else:
            report = conformity(raw_text, templates.get(cipai), lexicon, parsed_weights)
    except LineRangeError as exc:
        raise click.ClickException(str(exc))
    if as_json:
        click.echo(json.dumps(report.to_obj(), ensure_ascii=False, indent=2))
        return
    best = report.best
    click.echo(f"total: {report.total:.4f}  (best variant: {report.best_variant_id})")
    click.echo(
        f"structure: {best.structure:.4f}  tonal: {best.tonal:.4f}  rhyme: {best.rhyme:.4f}"
    )
    if best.evaluated_rhyme_positions == 0:
        click.echo("note: no rhyme positions evaluated")


@main.command(name="judge")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True),
              help="JSONL of poems: {text, cipai_id, theme, ...}.")
@click.option("--judges", required=True, help="Comma-separated judge provider ids.")
@click.option("--providers", "providers_path", required=True, type=click.Path(exists=True),
              help="providers.toml with judge configs.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--cache", "cache_path", default=None, type=click.Path(),
              help="Response cache JSONL.")
@with_data_options
def judge_cmd(in_path, judges, providers_path, out_path, cache_path,
              templates_path, corpus_path, tones_path, rhymes_path):
    """Score poems with LLM judges; append aggregate + per-judge scores."""
    templates, corpus, _ = _load_world(
        templates_path, corpus_path, tones_path, rhymes_path
    )
    configs = load_provider_configs(providers_path)
    judge_ids = [j.strip() for j in judges.split(",") if j.strip()]
    missing = [j for j in judge_ids if j not in configs]
    if missing:
        raise click.ClickException(f"judges not in providers file: {', '.join(missing)}")
    judge_configs = [configs[j] for j in judge_ids]
    client = LlmClient(
        transport=RoutingTransport(templates, corpus),
        cache=ResponseCache(cache_path) if cache_path else None,
    )
    n = 0
    with Path(out_path).open("w", encoding="utf-8") as out:
        for line in Path(in_path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            cipai_id = obj["cipai_id"]
            scores = judge_poem(
                obj["text"], cipai_id, Theme(obj["theme"]), judge_configs, client,
                cipai_name=(
                    templates.get(cipai_id).display_name if cipai_id in templates else None
                ),
            )
            out.write(
                json.dumps({**obj, "quality": scores.to_obj()}, ensure_ascii=False) + "\n"
            )
            n += 1
    click.echo(f"judged {n} poems -> {out_path}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True),
              help="bench.toml run description.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Run directory (journal + exports).")
@with_data_options
def bench(config_path, out_dir, templates_path, corpus_path, tones_path, rhymes_path):
    """Run (or resume) a benchmark and export summary tables."""
    templates, corpus, lexicon = _load_world(
        templates_path, corpus_path, tones_path, rhymes_path
    )
    config = load_bench_config(config_path, templates)
    out = Path(out_dir)
    client = LlmClient(
        transport=RoutingTransport(templates, corpus),
        cache=ResponseCache(out / "cache.jsonl"),
    )
    run = run_benchmark(config, templates, corpus, lexicon, client, out)
    paths = export_tables(run, out)
    click.echo(f"run {config.run_id}: {len(run)} records")
    for name, path in paths.items():
        click.echo(f"  {name}: {path}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True),
              help="bon.toml best-of-N description.")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="SFT dataset JSONL output.")
@click.option("--manifest", "manifest_path", default=None, type=click.Path(),
              help="Manifest JSON path (default: alongside --out).")
@click.option("--cache", "cache_path", default=None, type=click.Path())
@with_data_options
def bon(config_path, out_path, manifest_path, cache_path,
        templates_path, corpus_path, tones_path, rhymes_path):
    """Curate a best-of-N fine-tuning dataset using the critic as reward."""
    templates, corpus, lexicon = _load_world(
        templates_path, corpus_path, tones_path, rhymes_path
    )
    config = load_bon_config(config_path, templates)
    manifest_path = manifest_path or str(Path(out_path).with_name("sft_manifest.json"))
    client = LlmClient(
        transport=RoutingTransport(templates, corpus),
        cache=ResponseCache(cache_path) if cache_path else None,
    )
    records, manifest = build_sft_dataset(
        config, templates, corpus, lexicon, client, out_path, manifest_path
    )
    stats = manifest["score_stats"]
    click.echo(
        f"wrote {len(records)} records -> {out_path} "
        f"(scores min/mean/max: {stats['min']}/{stats['mean']}/{stats['max']})"
    )


@main.command()
@click.option("--task", type=click.Choice([t.value for t in ProbeTask]), required=True)
@click.option("--human", "human_path", default=None, type=click.Path(exists=True),
              help="Corpus JSONL (default: packaged corpus).")
@click.option("--generated", "generated_path", default=None, type=click.Path(exists=True),
              help="Benchmark records JSONL of generated poems.")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--alpha", default=1.0, show_default=True, type=float)
@click.option("--out", "out_path", required=True, type=click.Path())
@with_data_options
def probe(task, human_path, generated_path, seed, alpha, out_path,
          templates_path, corpus_path, tones_path, rhymes_path):
    """Run a classification probe and export accuracy + confusion matrix."""
    templates, corpus, _ = _load_world(
        templates_path, human_path or corpus_path, tones_path, rhymes_path
    )
    human_documents = probe_documents_from_corpus(corpus)
    generated_documents = []
    if generated_path:
        for i, line in enumerate(
            Path(generated_path).read_text(encoding="utf-8").splitlines()
        ):
            if not line.strip():
                continue
            document = probe_document_from_record(json.loads(line), doc_id=f"gen-{i:04d}")
            if document.text:
                generated_documents.append(document)
    result = run_probe(
        ProbeTask(task), human_documents, generated_documents, seed, alpha
    )
    Path(out_path).write_text(
        json.dumps(result.to_obj(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    message = f"{task} probe accuracy: {result.accuracy:.4f}"
    if result.human_likeness is not None:
        message += f"  human-likeness: {result.human_likeness:.4f}"
    click.echo(message + f" -> {out_path}")


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(exists=True),
              help="Benchmark records JSONL (rows must carry quality scores).")
@click.option("--k", default=5, show_default=True, type=int,
              help="Pairs per model.")
@click.option("--out", "out_path", required=True, type=click.Path())
@with_data_options
def pairs(records_path, k, out_path, templates_path, corpus_path, tones_path, rhymes_path):
    """Build anonymization-ready human/generated pairs from a bench run."""
    templates, corpus, _ = _load_world(
        templates_path, corpus_path, tones_path, rhymes_path
    )
    rows = [
        json.loads(line)
        for line in Path(records_path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    entries = entries_from_records(rows)
    built, skipped = build_pairs(entries, corpus, templates, k)
    dump_pairs(built, out_path)
    click.echo(f"built {len(built)} pairs ({len(skipped)} skipped) -> {out_path}")
    for skip in skipped:
        click.echo(f"  skipped: {skip}", err=True)


@main.command()
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--port", default=8040, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--log", "log_path", default="eval_events.jsonl", show_default=True,
              type=click.Path(), help="Append-only event log.")
@click.option("--static", "static_dir", default=None, type=click.Path(),
              help="Directory with the built UI bundle.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(pairs_path, port, seed, log_path, static_dir, host):
    """Serve the two-stage human evaluation study."""
    import uvicorn

    from .webapp import create_app

    service = EvalService(load_pairs(pairs_path), log_path, seed=seed)
    default_static = Path(__file__).parent.parent.parent / "frontend" / "dist"
    static = static_dir or (str(default_static) if default_static.is_dir() else None)
    app = create_app(service, static)
    click.echo(f"serving {len(service.pairs)} pairs on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
