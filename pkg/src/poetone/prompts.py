"""Prompt construction for the five generation strategies, plus output
extraction.

Prompt wording lives in versioned text files (``data/prompts/``), one
per strategy, with named placeholders; rendering is a pure function of
(strategy, cipai, theme, exemplar). Generated text comes back wrapped
in explicit output markers; extraction falls back to fenced blocks and
then to the longest run of verse-like lines when a model ignores the
markers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .critic import DEFAULT_SEPARATORS, is_han
from .registry import CipaiTemplate, Corpus, CorpusPoem, TemplateSet, Theme, TonalRequirement

DEFAULT_MARKERS = ("《POEM》", "《/POEM》")

THEME_ZH = {
    Theme.LOVE_LONGING: "爱情与思念",
    Theme.PATRIOTISM_HEROISM: "爱国与豪情",
    Theme.NATURE_LANDSCAPES: "自然与山水",
    Theme.HISTORY_NOSTALGIA: "怀古与追忆",
    Theme.SORROW_GRIEF: "离愁与哀伤",
    Theme.PHILOSOPHICAL_REFLECTION: "哲思与超然",
}

TONE_ZH = {
    TonalRequirement.PING: "平",
    TonalRequirement.ZE: "仄",
    TonalRequirement.ZHONG: "中",
}


class PromptStrategy(Enum):
    ZERO_SHOT = "zero-shot"
    ONE_SHOT = "one-shot"
    COMPLETION = "completion"
    INSTRUCTION = "instruction"
    CHAIN_OF_THOUGHT = "chain-of-thought"


STRATEGY_FILES = {
    PromptStrategy.ZERO_SHOT: "zero_shot.txt",
    PromptStrategy.ONE_SHOT: "one_shot.txt",
    PromptStrategy.COMPLETION: "completion.txt",
    PromptStrategy.INSTRUCTION: "instruction.txt",
    PromptStrategy.CHAIN_OF_THOUGHT: "chain_of_thought.txt",
}

_EXEMPLAR_STRATEGIES = (PromptStrategy.ONE_SHOT, PromptStrategy.COMPLETION)


class MissingExemplarError(LookupError):
    """One-shot/completion prompt requested for a cipai with no corpus poem."""


class ExtractionFailureError(ValueError):
    """No poem-like region could be located in the model output."""


@dataclass(frozen=True)
class PromptSpec:
    strategy: PromptStrategy
    cipai_id: str
    theme: Theme
    rendered_text: str
    output_markers: tuple[str, str] = DEFAULT_MARKERS
    exemplar_poem_id: str | None = None

    def to_obj(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "cipai_id": self.cipai_id,
            "theme": self.theme.value,
            "rendered_text": self.rendered_text,
            "output_markers": list(self.output_markers),
            "exemplar_poem_id": self.exemplar_poem_id,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "PromptSpec":
        return cls(
            strategy=PromptStrategy(obj["strategy"]),
            cipai_id=obj["cipai_id"],
            theme=Theme(obj["theme"]),
            rendered_text=obj["rendered_text"],
            output_markers=tuple(obj["output_markers"]),
            exemplar_poem_id=obj.get("exemplar_poem_id"),
        )


@dataclass
class GenerationRecord:
    prompt: PromptSpec
    model_id: str
    raw_output: str
    extracted_poem: str
    reasoning_text: str | None = None
    extraction_ok: bool = True
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )
    meta: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "prompt": self.prompt.to_obj(),
            "model_id": self.model_id,
            "raw_output": self.raw_output,
            "extracted_poem": self.extracted_poem,
            "reasoning_text": self.reasoning_text,
            "extraction_ok": self.extraction_ok,
            "timestamp": self.timestamp,
            "meta": self.meta,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "GenerationRecord":
        return cls(
            prompt=PromptSpec.from_obj(obj["prompt"]),
            model_id=obj["model_id"],
            raw_output=obj["raw_output"],
            extracted_poem=obj["extracted_poem"],
            reasoning_text=obj.get("reasoning_text"),
            extraction_ok=obj.get("extraction_ok", True),
            timestamp=obj.get("timestamp", ""),
            meta=obj.get("meta", {}),
        )


def theme_label(theme: Theme) -> str:
    return f"{THEME_ZH[theme]} ({theme.value})"


def render_rules(template: CipaiTemplate) -> str:
    """Human-readable constraint listing for every variant."""
    blocks: list[str] = []
    for variant in template.variants:
        lines = [f"变体 {variant.variant_id}（两阕，共 {variant.line_count} 句）："]
        for i, spec in enumerate(variant.lines, start=1):
            pattern = "".join(TONE_ZH[t] for t in spec.tones)
            lines.append(f"  第{i}句：{spec.char_count}字，平仄：{pattern}")
        if variant.rhyme_positions:
            spots = "、".join(
                f"第{li + 1}句第{ci + 1}字" for li, ci in variant.rhyme_positions
            )
            section = TONE_ZH[variant.rhyme_section]
            lines.append(f"  押韵位置（{section}声韵，须一韵到底）：{spots}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def split_stanzas(
    text: str,
    boundary_line_index: int,
    separators: frozenset[str] = DEFAULT_SEPARATORS,
) -> tuple[str, str]:
    """Split raw poem text into stanza halves, punctuation preserved.

    ``boundary_line_index`` counts non-empty punctuation-terminated
    segments belonging to the first stanza.
    """
    completed = 0
    in_segment = False
    for pos, char in enumerate(text):
        if char in separators:
            if in_segment:
                completed += 1
                in_segment = False
            if completed == boundary_line_index:
                return text[: pos + 1], text[pos + 1 :].strip()
        elif is_han(char):
            in_segment = True
    raise ValueError(
        f"poem has fewer than {boundary_line_index} lines; cannot split stanzas"
    )


def select_exemplar(corpus: Corpus, cipai_id: str, theme: Theme) -> CorpusPoem | None:
    """Deterministic exemplar: smallest poem_id for (cipai, theme), then cipai."""
    for pool in (corpus.exemplars(cipai_id, theme), corpus.exemplars(cipai_id)):
        if pool:
            return pool[0]
    return None


def _format_exemplar(poem: CorpusPoem) -> str:
    return f"《{poem.title}》（{poem.author}）\n{poem.text}"


def build_prompt(
    strategy: PromptStrategy,
    cipai_id: str,
    theme: Theme,
    registry: TemplateSet,
    corpus: Corpus,
    markers: tuple[str, str] = DEFAULT_MARKERS,
    prompts_dir: str | Path | None = None,
) -> PromptSpec:
    """Render one strategy for a (cipai, theme) cell.

    One-shot and completion require a corpus exemplar with a matching
    cipai and raise MissingExemplarError without one; instruction and
    chain-of-thought embed the registry's variant constraints.
    """
    template = registry.get(cipai_id)
    base = Path(prompts_dir) if prompts_dir else Path(__file__).parent / "data" / "prompts"
    prompt_text = (base / STRATEGY_FILES[strategy]).read_text(encoding="utf-8")

    exemplar: CorpusPoem | None = None
    exemplar_text = ""
    first_stanza = ""
    if strategy in _EXEMPLAR_STRATEGIES:
        exemplar = select_exemplar(corpus, cipai_id, theme)
        if exemplar is None:
            raise MissingExemplarError(
                f"no corpus exemplar for cipai {cipai_id!r} ({strategy.value})"
            )
        exemplar_text = _format_exemplar(exemplar)
        if strategy is PromptStrategy.COMPLETION:
            first_stanza, _ = split_stanzas(
                exemplar.text, exemplar.stanza_boundary_line_index
            )

    rules = ""
    if strategy in (PromptStrategy.INSTRUCTION, PromptStrategy.CHAIN_OF_THOUGHT):
        rules = render_rules(template)

    rendered = prompt_text.format(
        cipai_name=template.display_name,
        theme=theme_label(theme),
        rules=rules,
        exemplar=exemplar_text,
        first_stanza=first_stanza,
        begin_marker=markers[0],
        end_marker=markers[1],
    ).strip() + "\n"

    return PromptSpec(
        strategy=strategy,
        cipai_id=cipai_id,
        theme=theme,
        rendered_text=rendered,
        output_markers=markers,
        exemplar_poem_id=exemplar.poem_id if exemplar else None,
    )


_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


def _last_marker_region(raw: str, markers: tuple[str, str]) -> tuple[int, int] | None:
    begin, end = markers
    start = raw.rfind(begin)
    while start != -1:
        close = raw.find(end, start + len(begin))
        if close != -1:
            return start + len(begin), close
        start = raw.rfind(begin, 0, start)
    return None


def _verse_line(text_line: str) -> bool:
    stripped = text_line.strip()
    if not stripped:
        return False
    has_han = False
    for char in stripped:
        if is_han(char):
            has_han = True
        elif char in DEFAULT_SEPARATORS or char.isspace():
            continue
        else:
            return False
    return has_han


def _longest_verse_run(raw: str) -> str | None:
    lines = raw.splitlines()
    best: tuple[int, int] | None = None
    run_start: int | None = None
    for i, text_line in enumerate(lines + [""]):
        if _verse_line(text_line):
            if run_start is None:
                run_start = i
        elif run_start is not None:
            length = i - run_start
            if best is None or length >= best[1] - best[0]:
                best = (run_start, i)
            run_start = None
    if best is None:
        return None
    return "\n".join(line.strip() for line in lines[best[0] : best[1]])


def extract_poem(
    raw_output: str,
    strategy: PromptStrategy,
    markers: tuple[str, str] = DEFAULT_MARKERS,
) -> tuple[str, str | None]:
    """Pull the poem (and, for chain-of-thought, the reasoning) out of
    raw model output.

    Preference order: content of the last marker pair, then the last
    fenced code block, then the longest run of verse-like lines. The
    returned poem never contains the markers themselves.
    """
    if not raw_output.strip():
        raise ExtractionFailureError("model output is empty")

    poem: str | None = None
    prefix = ""

    span = _last_marker_region(raw_output, markers)
    if span is not None:
        poem = raw_output[span[0] : span[1]]
        prefix = raw_output[: span[0] - len(markers[0])]
    else:
        # markers absent or unpaired: drop stray marker text, then fall
        # back to fenced blocks and finally verse-shaped line runs
        cleaned = raw_output
        for marker in markers:
            cleaned = cleaned.replace(marker, "")
        fences = list(_FENCE_RE.finditer(cleaned))
        if fences:
            poem = fences[-1].group(1)
            prefix = cleaned[: fences[-1].start()]
        else:
            run = _longest_verse_run(cleaned)
            if run is not None:
                poem = run
                prefix = cleaned[: cleaned.find(run.splitlines()[0])]

    if poem is not None:
        for marker in markers:
            poem = poem.replace(marker, "")
        poem = poem.strip()
    if not poem:
        raise ExtractionFailureError("no poem-like region found in model output")

    reasoning: str | None = None
    if strategy is PromptStrategy.CHAIN_OF_THOUGHT:
        for marker in markers:
            prefix = prefix.replace(marker, "")
        reasoning = prefix.strip()
    return poem, reasoning
