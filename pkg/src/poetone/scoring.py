"""Strategy-aware conformity scoring shared by the benchmark and the
best-of-N loop.

Completion prompts only generate the second stanza, so their output is
scored against the sub-template starting at the exemplar's stanza
boundary and checked against the original continuation for verbatim
reproduction; every other strategy scores against the full template.
"""

from __future__ import annotations

from dataclasses import dataclass

from .critic import (
    ConformityReport,
    ScoreWeights,
    conformity,
    conformity_partial,
    near_duplicate,
)
from .phonology import Lexicon
from .prompts import PromptSpec, PromptStrategy, split_stanzas
from .registry import Corpus, TemplateSet


@dataclass(frozen=True)
class ScoredText:
    report: ConformityReport
    similarity_to_original: float | None = None
    near_duplicate_of_original: bool = False

    @property
    def total(self) -> float:
        return self.report.total


def score_extracted_poem(
    poem_text: str,
    prompt: PromptSpec,
    registry: TemplateSet,
    corpus: Corpus,
    lexicon: Lexicon,
    weights: ScoreWeights,
) -> ScoredText:
    template = registry.get(prompt.cipai_id)
    if prompt.strategy is not PromptStrategy.COMPLETION:
        return ScoredText(report=conformity(poem_text, template, lexicon, weights))

    exemplar = corpus.get(prompt.exemplar_poem_id)
    boundary = exemplar.stanza_boundary_line_index
    report = conformity_partial(
        poem_text, template, lexicon, weights, line_range=(boundary, None)
    )
    _, original_second = split_stanzas(exemplar.text, boundary)
    try:
        similarity, flagged = near_duplicate(poem_text, original_second)
    except ValueError:
        similarity, flagged = None, False
    return ScoredText(
        report=report,
        similarity_to_original=similarity,
        near_duplicate_of_original=flagged,
    )
