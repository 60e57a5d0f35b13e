"""Benchmark orchestration: models x strategies x (cipai x themes).

Every cell generates one poem (configurable samples per cell), scores
it with the critic, optionally judges it, and appends the outcome to a
JSONL journal keyed by cell id. Reruns skip journaled cells, so an
interrupted run resumes without re-billing providers. Aggregation is a
pure fold over the journal, so summary tables can always be recomputed
from the raw records.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .critic import ScoreWeights
from .gateway import (
    AuthError,
    GatewayError,
    JudgeParseFailureError,
    LlmClient,
    ProviderConfig,
    judge,
)
from .phonology import Lexicon
from .prompts import (
    ExtractionFailureError,
    GenerationRecord,
    MissingExemplarError,
    PromptStrategy,
    build_prompt,
    extract_poem,
)
from .registry import Corpus, TemplateSet, Theme
from .scoring import score_extracted_poem

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

STRATEGY_ORDER = [
    PromptStrategy.ZERO_SHOT,
    PromptStrategy.ONE_SHOT,
    PromptStrategy.COMPLETION,
    PromptStrategy.INSTRUCTION,
    PromptStrategy.CHAIN_OF_THOUGHT,
]


@dataclass(frozen=True)
class BenchConfig:
    run_id: str
    models: tuple[ProviderConfig, ...]
    strategies: tuple[PromptStrategy, ...]
    cipai_ids: tuple[str, ...]
    themes: tuple[Theme, ...]
    weights: ScoreWeights = ScoreWeights()
    judges: tuple[ProviderConfig, ...] = ()
    samples_per_cell: int = 1
    max_workers: int = 1

    def __post_init__(self):
        if not self.models or not self.strategies or not self.cipai_ids or not self.themes:
            raise ValueError("benchmark axes must all be non-empty")
        if self.samples_per_cell < 1:
            raise ValueError("samples_per_cell must be >= 1")


@dataclass(frozen=True)
class Cell:
    model: ProviderConfig
    strategy: PromptStrategy
    cipai_id: str
    theme: Theme
    sample_index: int

    @property
    def cell_id(self) -> str:
        return "|".join(
            [self.model.provider_id, self.strategy.value, self.cipai_id,
             self.theme.value, str(self.sample_index)]
        )


def iter_cells(config: BenchConfig) -> list[Cell]:
    cells = [
        Cell(model, strategy, cipai_id, theme, sample)
        for model in config.models
        for strategy in config.strategies
        for cipai_id in config.cipai_ids
        for theme in config.themes
        for sample in range(config.samples_per_cell)
    ]
    return sorted(cells, key=lambda c: c.cell_id)


class BenchmarkRun:
    """Journal-backed view of a (possibly partial) benchmark run."""

    def __init__(self, run_id: str, rows: dict[str, dict]):
        self.run_id = run_id
        self.rows = rows

    def __len__(self) -> int:
        return len(self.rows)

    def aggregate(self) -> dict:
        """Fold the journal into the model x strategy summary table.

        Cell value: mean conformity over the (cipai, theme, sample)
        grid, as a percentage. ``average`` is the mean of the strategy
        cells and only appears when every strategy has records; ``best``
        is the highest cell with its strategy label.
        """
        by_model: dict[str, dict[str, list[float]]] = {}
        for row in self.rows.values():
            by_model.setdefault(row["provider_id"], {}).setdefault(
                row["strategy"], []
            ).append(row["total"])
        strategies = [s.value for s in STRATEGY_ORDER]
        table: dict[str, dict] = {}
        for model_id in sorted(by_model):
            cells: dict[str, float | None] = {}
            for strategy in strategies:
                scores = by_model[model_id].get(strategy)
                cells[strategy] = 100.0 * sum(scores) / len(scores) if scores else None
            present = [v for v in cells.values() if v is not None]
            average = (
                sum(present) / len(present)
                if present and all(v is not None for v in cells.values())
                else None
            )
            best = None
            scored = [(v, s) for s, v in cells.items() if v is not None]
            if scored:
                best_value = max(v for v, _ in scored)
                best_strategy = next(s for v, s in scored if v == best_value)
                best = {"score": best_value, "strategy": best_strategy}
            table[model_id] = {"cells": cells, "average": average, "best": best}
        return {"run_id": self.run_id, "strategies": strategies, "models": table}

    def quality_aggregate(self) -> dict:
        by_model: dict[str, dict[str, list]] = {}
        for row in self.rows.values():
            quality = row.get("quality")
            if not quality:
                continue
            bucket = by_model.setdefault(row["provider_id"], {}).setdefault(
                row["strategy"], []
            )
            bucket.append(
                (quality["fluency"], quality["coherence"], quality["poetic_quality"])
            )
        table: dict[str, dict] = {}
        for model_id, strategies in sorted(by_model.items()):
            table[model_id] = {}
            for strategy, triples in sorted(strategies.items()):
                n = len(triples)
                table[model_id][strategy] = {
                    "fluency": sum(t[0] for t in triples) / n,
                    "coherence": sum(t[1] for t in triples) / n,
                    "poetic_quality": sum(t[2] for t in triples) / n,
                    "n": n,
                }
        return table


def load_run(journal_path: str | Path, run_id: str = "") -> BenchmarkRun:
    rows: dict[str, dict] = {}
    path = Path(journal_path)
    if path.exists():
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                obj = json.loads(line)
                rows[obj["cell_id"]] = obj
                run_id = run_id or obj.get("run_id", "")
    return BenchmarkRun(run_id=run_id, rows=rows)


class _Journal:
    def __init__(self, path: Path):
        self.path = path
        self._lock = threading.Lock()
        path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, row: dict) -> None:
        with self._lock:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(row, ensure_ascii=False) + "\n")
                handle.flush()


def _execute_cell(
    cell: Cell,
    config: BenchConfig,
    registry: TemplateSet,
    corpus: Corpus,
    lexicon: Lexicon,
    client: LlmClient,
) -> dict:
    row: dict = {
        "cell_id": cell.cell_id,
        "run_id": config.run_id,
        "provider_id": cell.model.provider_id,
        "model_name": cell.model.model_name,
        "strategy": cell.strategy.value,
        "cipai_id": cell.cipai_id,
        "theme": cell.theme.value,
        "sample_index": cell.sample_index,
        "total": 0.0,
        "conformity": None,
        "flags": [],
        "quality": None,
        "error": None,
        "record": None,
    }
    try:
        prompt = build_prompt(cell.strategy, cell.cipai_id, cell.theme, registry, corpus)
    except MissingExemplarError as exc:
        row["flags"].append("missing_exemplar")
        row["error"] = str(exc)
        return row

    salt = f"{config.run_id}:{cell.sample_index}"
    try:
        raw = client.complete(cell.model, prompt.rendered_text, cache_salt=salt)
    except AuthError:
        raise  # configuration problem: abort the run
    except GatewayError as exc:
        row["flags"].append("provider_error")
        row["error"] = str(exc)
        return row

    extracted, reasoning, extraction_ok = "", None, True
    try:
        extracted, reasoning = extract_poem(raw, cell.strategy, prompt.output_markers)
    except ExtractionFailureError:
        extraction_ok = False
        row["flags"].append("extraction_failure")

    record = GenerationRecord(
        prompt=prompt,
        model_id=cell.model.provider_id,
        raw_output=raw,
        extracted_poem=extracted,
        reasoning_text=reasoning,
        extraction_ok=extraction_ok,
    )
    row["record"] = record.to_obj()
    if not extraction_ok:
        return row

    scored = score_extracted_poem(
        extracted, prompt, registry, corpus, lexicon, config.weights
    )
    row["total"] = scored.total
    row["conformity"] = scored.report.to_obj()
    if scored.similarity_to_original is not None:
        row["similarity_to_original"] = scored.similarity_to_original
    if scored.near_duplicate_of_original:
        row["flags"].append("near_duplicate")

    if config.judges and "near_duplicate" not in row["flags"]:
        try:
            quality = judge(
                extracted, cell.cipai_id, cell.theme, list(config.judges), client,
                cipai_name=registry.get(cell.cipai_id).display_name,
            )
            row["quality"] = quality.to_obj()
        except (JudgeParseFailureError, GatewayError) as exc:
            row["flags"].append("judge_failure")
            row["error"] = str(exc)
    return row


def run_benchmark(
    config: BenchConfig,
    registry: TemplateSet,
    corpus: Corpus,
    lexicon: Lexicon,
    client: LlmClient,
    out_dir: str | Path,
) -> BenchmarkRun:
    """Execute (or resume) a benchmark into ``out_dir/records.jsonl``.

    Cells already present in the journal are not re-executed, so a
    resumed run performs zero duplicate provider calls. Per-cell
    failures are recorded as rows; only configuration errors abort.
    """
    out_dir = Path(out_dir)
    journal_path = out_dir / "records.jsonl"
    existing = load_run(journal_path, config.run_id)
    journal = _Journal(journal_path)

    pending = [c for c in iter_cells(config) if c.cell_id not in existing.rows]

    def work(cell: Cell) -> tuple[str, dict]:
        row = _execute_cell(cell, config, registry, corpus, lexicon, client)
        journal.append(row)
        return cell.cell_id, row

    rows = dict(existing.rows)
    if config.max_workers <= 1:
        for cell in pending:
            cell_id, row = work(cell)
            rows[cell_id] = row
    else:
        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            for cell_id, row in pool.map(work, pending):
                rows[cell_id] = row
    return BenchmarkRun(run_id=config.run_id, rows=rows)


# ---------------------------------------------------------------------------
# Exports


def _format_cell(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def export_tables(run: BenchmarkRun, out_dir: str | Path) -> dict[str, Path]:
    """Write conformity (CSV + JSON) and quality (CSV) summaries."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    aggregate = run.aggregate()
    strategies = aggregate["strategies"]

    conformity_csv = out_dir / "conformity.csv"
    lines = [",".join(["model"] + strategies + ["average", "best"])]
    for model_id, row in aggregate["models"].items():
        cells = [_format_cell(row["cells"][s]) for s in strategies]
        best = row["best"]
        best_text = f"{best['score']:.2f} ({best['strategy']})" if best else "n/a"
        lines.append(",".join([model_id] + cells + [_format_cell(row["average"]), f'"{best_text}"']))
    conformity_csv.write_text("\n".join(lines) + "\n", encoding="utf-8")

    conformity_json = out_dir / "conformity.json"
    conformity_json.write_text(
        json.dumps(aggregate, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )

    quality_csv = out_dir / "quality.csv"
    quality = run.quality_aggregate()
    qlines = ["model,strategy,fluency,coherence,poetic_quality,n"]
    for model_id, strategies_table in quality.items():
        for strategy, values in strategies_table.items():
            qlines.append(
                f"{model_id},{strategy},{values['fluency']:.2f},"
                f"{values['coherence']:.2f},{values['poetic_quality']:.2f},{values['n']}"
            )
    quality_csv.write_text("\n".join(qlines) + "\n", encoding="utf-8")
    return {
        "conformity_csv": conformity_csv,
        "conformity_json": conformity_json,
        "quality_csv": quality_csv,
    }


def load_bench_config(path: str | Path, registry: TemplateSet) -> BenchConfig:
    with Path(path).open("rb") as handle:
        data = tomllib.load(handle)
    bench = data.get("bench", {})
    models = tuple(
        ProviderConfig(provider_id=pid, **table)
        for pid, table in data.get("models", {}).items()
    )
    judges = tuple(
        ProviderConfig(provider_id=pid, **table)
        for pid, table in data.get("judges", {}).items()
    )
    weights_table = data.get("weights", {})
    weights = ScoreWeights(
        structure=weights_table.get("structure", 0.4),
        tonal=weights_table.get("tonal", 0.3),
        rhyme=weights_table.get("rhyme", 0.3),
    )
    strategies = tuple(
        PromptStrategy(s)
        for s in bench.get("strategies", [s.value for s in STRATEGY_ORDER])
    )
    themes = tuple(Theme(t) for t in bench.get("themes", [t.value for t in Theme]))
    return BenchConfig(
        run_id=bench.get("run_id", "run"),
        models=models,
        strategies=strategies,
        cipai_ids=tuple(bench.get("cipai", registry.cipai_ids)),
        themes=themes,
        weights=weights,
        judges=judges,
        samples_per_cell=bench.get("samples_per_cell", 1),
        max_workers=bench.get("max_workers", 1),
    )
