"""Best-of-N rejection sampling with the critic as reward.

For each prompt, sample N candidates from the generator, score each
with the rule-based critic, keep the argmax, and export the chosen
prompt-response pairs as a JSONL fine-tuning dataset plus a manifest.
Training itself happens elsewhere; the dataset format is deliberately
trainer-neutral. Iterations re-point the generator config at a newly
fine-tuned endpoint and tag records with the iteration index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .critic import ConformityReport, ScoreWeights
from .gateway import ExhaustedRetriesError, GatewayError, LlmClient, ProviderConfig
from .phonology import Lexicon
from .prompts import (
    ExtractionFailureError,
    MissingExemplarError,
    PromptSpec,
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


class AllCandidatesFailedError(GatewayError):
    """Every one of the N samples failed hard (transport level)."""


@dataclass
class Candidate:
    index: int
    raw_output: str
    poem_text: str | None
    extraction_ok: bool
    hard_failure: str | None = None


@dataclass(frozen=True)
class BonConfig:
    n: int
    generator: ProviderConfig
    prompts: tuple[tuple[str, Theme, PromptStrategy], ...]
    weights: ScoreWeights = ScoreWeights()
    iteration_index: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.prompts:
            raise ValueError("prompt set is empty")


@dataclass
class SftRecord:
    prompt_text: str
    chosen_response: str
    critic_score: float
    cipai_id: str
    theme: str
    strategy: str
    best_variant_id: str
    iteration_index: int
    candidate_count: int

    def to_obj(self) -> dict:
        return {
            "prompt": self.prompt_text,
            "response": self.chosen_response,
            "critic_score": self.critic_score,
            "cipai_id": self.cipai_id,
            "theme": self.theme,
            "strategy": self.strategy,
            "best_variant_id": self.best_variant_id,
            "iteration_index": self.iteration_index,
            "candidate_count": self.candidate_count,
        }


@dataclass
class SelectionResult:
    candidate: Candidate
    report: ConformityReport | None
    score: float
    pool_scores: list[float] = field(default_factory=list)


def bon_generate(
    prompt: PromptSpec,
    n: int,
    generator: ProviderConfig,
    client: LlmClient,
    salt_prefix: str = "",
) -> list[Candidate]:
    """Sample N candidates; extraction failures stay in the pool with a
    zero-score marker, hard transport failures are recorded per slot."""
    if n < 1:
        raise ValueError("n must be >= 1")
    candidates: list[Candidate] = []
    hard_failures = 0
    for j in range(n):
        try:
            raw = client.complete(
                generator, prompt.rendered_text, cache_salt=f"{salt_prefix}sample:{j}"
            )
        except GatewayError as exc:
            hard_failures += 1
            candidates.append(
                Candidate(index=j, raw_output="", poem_text=None,
                          extraction_ok=False, hard_failure=str(exc))
            )
            continue
        try:
            poem, _reasoning = extract_poem(raw, prompt.strategy, prompt.output_markers)
            candidates.append(
                Candidate(index=j, raw_output=raw, poem_text=poem, extraction_ok=True)
            )
        except ExtractionFailureError:
            candidates.append(
                Candidate(index=j, raw_output=raw, poem_text=None, extraction_ok=False)
            )
    if hard_failures == n:
        raise AllCandidatesFailedError(
            f"all {n} samples failed hard for prompt {prompt.cipai_id}/{prompt.theme.value}"
        )
    return candidates


def bon_select(
    candidates: list[Candidate],
    prompt: PromptSpec,
    registry: TemplateSet,
    corpus: Corpus,
    lexicon: Lexicon,
    weights: ScoreWeights = ScoreWeights(),
) -> SelectionResult:
    """Critic argmax over the pool; ties resolve to the lowest index."""
    if not candidates:
        raise ValueError("empty candidate pool")
    best: SelectionResult | None = None
    pool_scores: list[float] = []
    for candidate in candidates:
        if candidate.poem_text is None:
            score, report = 0.0, None
        else:
            scored = score_extracted_poem(
                candidate.poem_text, prompt, registry, corpus, lexicon, weights
            )
            score, report = scored.total, scored.report
        pool_scores.append(score)
        if best is None or score > best.score:
            best = SelectionResult(candidate=candidate, report=report, score=score)
    assert best is not None
    best.pool_scores = pool_scores
    return best


def build_sft_dataset(
    config: BonConfig,
    registry: TemplateSet,
    corpus: Corpus,
    lexicon: Lexicon,
    client: LlmClient,
    out_path: str | Path,
    manifest_path: str | Path | None = None,
) -> tuple[list[SftRecord], dict]:
    """One record per prompt (argmax of its pool); hard-failed prompts
    are skipped and listed in the manifest."""
    out_path = Path(out_path)
    records: list[SftRecord] = []
    skipped: list[dict] = []
    for cipai_id, theme, strategy in config.prompts:
        label = {"cipai_id": cipai_id, "theme": theme.value, "strategy": strategy.value}
        try:
            prompt = build_prompt(strategy, cipai_id, theme, registry, corpus)
            pool = bon_generate(
                prompt, config.n, config.generator, client,
                salt_prefix=f"iter{config.iteration_index}:",
            )
            selection = bon_select(pool, prompt, registry, corpus, lexicon, config.weights)
        except (MissingExemplarError, AllCandidatesFailedError, ExhaustedRetriesError) as exc:
            skipped.append({**label, "reason": str(exc)})
            continue
        records.append(
            SftRecord(
                prompt_text=prompt.rendered_text,
                chosen_response=selection.candidate.poem_text or "",
                critic_score=selection.score,
                cipai_id=cipai_id,
                theme=theme.value,
                strategy=strategy.value,
                best_variant_id=selection.report.best_variant_id if selection.report else "",
                iteration_index=config.iteration_index,
                candidate_count=len(pool),
            )
        )

    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record.to_obj(), ensure_ascii=False) + "\n")

    scores = [r.critic_score for r in records]
    manifest = {
        "n": config.n,
        "iteration_index": config.iteration_index,
        "generator": {
            "provider_id": config.generator.provider_id,
            "model_name": config.generator.model_name,
            "temperature": config.generator.temperature,
        },
        "weights": {
            "structure": config.weights.structure,
            "tonal": config.weights.tonal,
            "rhyme": config.weights.rhyme,
        },
        "prompt_count": len(config.prompts),
        "record_count": len(records),
        "skipped": skipped,
        "score_stats": {
            "min": min(scores) if scores else None,
            "mean": sum(scores) / len(scores) if scores else None,
            "max": max(scores) if scores else None,
        },
        "defaults_note": (
            "n, sampling temperature, and prompt-set composition are local "
            "defaults, not values taken from any published run"
        ),
    }
    if manifest_path is not None:
        Path(manifest_path).write_text(
            json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return records, manifest


def load_bon_config(path: str | Path, registry: TemplateSet) -> BonConfig:
    """Parse a BoN TOML config; unset axes default to the full grid."""
    with Path(path).open("rb") as handle:
        data = tomllib.load(handle)
    bon = data.get("bon", {})
    gen_table = data.get("generator")
    if not gen_table:
        raise ValueError(f"{path}: missing [generator] table")
    generator = ProviderConfig(**gen_table)
    prompts_table = data.get("prompts", {})
    cipai_ids = prompts_table.get("cipai", registry.cipai_ids)
    themes = [Theme(t) for t in prompts_table.get("themes", [t.value for t in Theme])]
    strategies = [
        PromptStrategy(s)
        for s in prompts_table.get("strategies", [s.value for s in PromptStrategy])
    ]
    weights_table = data.get("weights", {})
    weights = ScoreWeights(
        structure=weights_table.get("structure", 0.4),
        tonal=weights_table.get("tonal", 0.3),
        rhyme=weights_table.get("rhyme", 0.3),
    )
    prompts = tuple(
        (cipai_id, theme, strategy)
        for cipai_id in cipai_ids
        for theme in themes
        for strategy in strategies
    )
    return BonConfig(
        n=bon.get("n", 8),
        generator=generator,
        prompts=prompts,
        weights=weights,
        iteration_index=bon.get("iteration_index", 1),
    )
