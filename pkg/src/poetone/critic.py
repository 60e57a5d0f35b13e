"""Rule-based conformity critic for template-constrained verse.

Scores a generated poem against every variant of a Cipai template along
three dimensions and keeps the best-fit variant:

* structure: line count and exact per-line character counts,
  ``matches / max(generated_lines, template_lines)``, which penalizes
  both missing and superfluous lines;
* tonal: over structurally matched lines only, the fraction of
  characters whose tonal category satisfies the template requirement
  (a ``zhong`` slot accepts both categories);
* rhyme: the fraction of resolvable rhyme-position characters falling
  into the largest single rhyme group.

The total is the weighted sum, maximized over variants. All scores are
deterministic, pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .phonology import Lexicon, TonalCategory
from .registry import CipaiTemplate, LineSpec, TonalRequirement, Variant

DEFAULT_SEPARATORS = frozenset("，。？,.?！；、!;")

_HAN_RANGES = (
    ("一", "鿿"),   # CJK Unified Ideographs
    ("㐀", "䶿"),   # Extension A
    ("豈", "﫿"),   # Compatibility Ideographs
)


def is_han(char: str) -> bool:
    return any(lo <= char <= hi for lo, hi in _HAN_RANGES)


class EmptyPoemError(ValueError):
    """Raised when the input text is empty after whitespace stripping."""


class WeightError(ValueError):
    """Component weights are negative or do not sum to one."""


class LineRangeError(ValueError):
    """A partial-scoring range selects no line of any variant."""


@dataclass(frozen=True)
class ScoreWeights:
    structure: float = 0.4
    tonal: float = 0.3
    rhyme: float = 0.3

    def validate(self) -> None:
        parts = (self.structure, self.tonal, self.rhyme)
        if any(w < 0 for w in parts):
            raise WeightError(f"weights must be non-negative, got {parts}")
        if abs(sum(parts) - 1.0) > 1e-9:
            raise WeightError(f"weights must sum to 1.0, got {sum(parts)!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.structure, self.tonal, self.rhyme)


DEFAULT_WEIGHTS = ScoreWeights()


@dataclass(frozen=True)
class SegmentedPoem:
    """Punctuation-segmented poem normalized to Han-only lines."""

    raw_text: str
    lines: tuple[str, ...]
    dropped_chars: tuple[tuple[int, str], ...]

    @property
    def line_count(self) -> int:
        return len(self.lines)

    @property
    def has_dropped(self) -> bool:
        return bool(self.dropped_chars)


@dataclass(frozen=True)
class ComponentScores:
    structure: float
    tonal: float
    rhyme: float
    matched_line_indices: frozenset[int]
    evaluated_rhyme_positions: int

    def weighted_total(self, weights: ScoreWeights) -> float:
        return (
            weights.structure * self.structure
            + weights.tonal * self.tonal
            + weights.rhyme * self.rhyme
        )


@dataclass(frozen=True)
class ConformityReport:
    total: float
    best_variant_id: str
    per_variant: dict[str, ComponentScores]
    weights: ScoreWeights

    @property
    def best(self) -> ComponentScores:
        return self.per_variant[self.best_variant_id]

    def to_obj(self, precision: int | None = None) -> dict:
        """JSON-ready representation; full precision unless rounded."""

        def fmt(x: float) -> float:
            return round(x, precision) if precision is not None else x

        return {
            "total": fmt(self.total),
            "best_variant_id": self.best_variant_id,
            "weights": {
                "structure": self.weights.structure,
                "tonal": self.weights.tonal,
                "rhyme": self.weights.rhyme,
            },
            "per_variant": {
                vid: {
                    "structure": fmt(s.structure),
                    "tonal": fmt(s.tonal),
                    "rhyme": fmt(s.rhyme),
                    "weighted_total": fmt(s.weighted_total(self.weights)),
                    "matched_line_indices": sorted(s.matched_line_indices),
                    "evaluated_rhyme_positions": s.evaluated_rhyme_positions,
                }
                for vid, s in sorted(self.per_variant.items())
            },
        }


def segment(raw_text: str, separators: frozenset[str] = DEFAULT_SEPARATORS) -> SegmentedPoem:
    """Split text into lines at separator punctuation.

    Han characters accumulate into lines; separators end the current
    line (empty segments are discarded); whitespace is skipped; every
    other character is recorded in ``dropped_chars`` with its original
    position.
    """
    if not raw_text.strip():
        raise EmptyPoemError("poem text is empty")
    lines: list[str] = []
    dropped: list[tuple[int, str]] = []
    current: list[str] = []
    for pos, char in enumerate(raw_text):
        if char in separators:
            if current:
                lines.append("".join(current))
                current = []
        elif is_han(char):
            current.append(char)
        elif char.isspace():
            continue
        else:
            dropped.append((pos, char))
    if current:
        lines.append("".join(current))
    return SegmentedPoem(raw_text=raw_text, lines=tuple(lines), dropped_chars=tuple(dropped))


def _structure(lines: Sequence[str], specs: Sequence[LineSpec]) -> tuple[float, frozenset[int]]:
    n_g, n_v = len(lines), len(specs)
    matched = frozenset(
        i for i in range(min(n_g, n_v)) if len(lines[i]) == specs[i].char_count
    )
    denom = max(n_g, n_v)
    if denom == 0:
        return 0.0, matched
    return len(matched) / denom, matched


def _tonal(
    lines: Sequence[str],
    specs: Sequence[LineSpec],
    matched: frozenset[int],
    lexicon: Lexicon,
) -> float:
    total_chars = 0
    hits = 0
    required_to_category = {
        TonalRequirement.PING: TonalCategory.PING,
        TonalRequirement.ZE: TonalCategory.ZE,
    }
    for i in sorted(matched):
        line, spec = lines[i], specs[i]
        total_chars += len(line)
        for char, requirement in zip(line, spec.tones):
            if requirement is TonalRequirement.ZHONG:
                hits += 1
                continue
            categories = lexicon.tone_categories(char)
            if categories and required_to_category[requirement] in categories:
                hits += 1
    if total_chars == 0:
        return 0.0
    return hits / total_chars


def _rhyme(
    lines: Sequence[str],
    rhyme_positions: Sequence[tuple[int, int]],
    lexicon: Lexicon,
) -> tuple[float, int]:
    resolved: list[str] = []
    for line_idx, char_idx in rhyme_positions:
        if line_idx < len(lines) and char_idx < len(lines[line_idx]):
            resolved.append(lines[line_idx][char_idx])
    if not resolved:
        return 0.0, 0
    # Polyphones count toward every group they belong to; each resolved
    # occurrence contributes at most once per group. Unknown characters
    # form identity groups so they only rhyme with themselves.
    counts: dict[object, int] = {}
    for char in resolved:
        groups = lexicon.rhyme_groups(char)
        keys: list[object] = list(groups) if groups else [("unknown", char)]
        for key in keys:
            counts[key] = counts.get(key, 0) + 1
    largest = max(counts.values())
    return largest / len(resolved), len(resolved)


def structure_score(poem: SegmentedPoem, variant: Variant) -> tuple[float, frozenset[int]]:
    """Line-count conformity plus the matched-line index set."""
    return _structure(poem.lines, variant.lines)


def tonal_score(
    poem: SegmentedPoem,
    variant: Variant,
    matched_line_indices: frozenset[int],
    lexicon: Lexicon,
) -> float:
    """Tone conformity over structurally matched lines (0 when none)."""
    return _tonal(poem.lines, variant.lines, matched_line_indices, lexicon)


def rhyme_score(
    poem: SegmentedPoem, variant: Variant, lexicon: Lexicon
) -> tuple[float, int]:
    """Largest-rhyme-group share over resolvable rhyme positions."""
    return _rhyme(poem.lines, variant.rhyme_positions, lexicon)


def _score_variant(
    lines: Sequence[str],
    specs: Sequence[LineSpec],
    rhyme_positions: Sequence[tuple[int, int]],
    lexicon: Lexicon,
) -> ComponentScores:
    structure, matched = _structure(lines, specs)
    tonal = _tonal(lines, specs, matched, lexicon)
    rhyme, evaluated = _rhyme(lines, rhyme_positions, lexicon)
    return ComponentScores(
        structure=structure,
        tonal=tonal,
        rhyme=rhyme,
        matched_line_indices=matched,
        evaluated_rhyme_positions=evaluated,
    )


_TIE_EPS = 1e-12


def _best_fit(
    per_variant: dict[str, ComponentScores], weights: ScoreWeights
) -> tuple[float, str]:
    totals = {vid: s.weighted_total(weights) for vid, s in per_variant.items()}
    best_total = max(totals.values())
    # Totals within a 1e-12 window count as tied so that rescaling the
    # weights by a positive constant (float noise ~1e-16) cannot flip
    # the winner; ties resolve to the lexicographically smallest id.
    best_id = min(vid for vid, t in totals.items() if t >= best_total - _TIE_EPS)
    return best_total, best_id


def conformity(
    raw_text: str,
    template: CipaiTemplate,
    lexicon: Lexicon,
    weights: ScoreWeights = DEFAULT_WEIGHTS,
    separators: frozenset[str] = DEFAULT_SEPARATORS,
) -> ConformityReport:
    """Score a poem against every variant; keep the best weighted total.

    Ties between variants resolve to the lexicographically smallest
    variant id, so reports are deterministic across platforms.
    """
    weights.validate()
    poem = segment(raw_text, separators)
    per_variant = {
        v.variant_id: _score_variant(poem.lines, v.lines, v.rhyme_positions, lexicon)
        for v in template.variants
    }
    total, best_id = _best_fit(per_variant, weights)
    return ConformityReport(
        total=total, best_variant_id=best_id, per_variant=per_variant, weights=weights
    )


def conformity_partial(
    raw_text: str,
    template: CipaiTemplate,
    lexicon: Lexicon,
    weights: ScoreWeights = DEFAULT_WEIGHTS,
    line_range: tuple[int, int | None] = (0, None),
    separators: frozenset[str] = DEFAULT_SEPARATORS,
) -> ConformityReport:
    """Score against the sub-template formed by a flattened line range.

    ``line_range`` is (start, stop), 0-based over each variant's
    flattened lines; ``stop=None`` runs to each variant's end (the
    second-stanza case). Rhyme positions outside the range are dropped
    and re-indexed. Variants entirely outside the range are skipped;
    if the range excludes every variant, raises LineRangeError.
    """
    weights.validate()
    start, stop = line_range
    if start < 0 or (stop is not None and stop <= start):
        raise LineRangeError(f"invalid line range {line_range!r}")
    poem = segment(raw_text, separators)

    per_variant: dict[str, ComponentScores] = {}
    for variant in template.variants:
        n_v = variant.line_count
        if start >= n_v:
            continue
        effective_stop = n_v if stop is None else min(stop, n_v)
        specs = variant.lines[start:effective_stop]
        positions = [
            (line_idx - start, char_idx)
            for line_idx, char_idx in variant.rhyme_positions
            if start <= line_idx < effective_stop
        ]
        per_variant[variant.variant_id] = _score_variant(
            poem.lines, specs, positions, lexicon
        )
    if not per_variant:
        raise LineRangeError(
            f"range {line_range!r} exceeds every variant's line count in {template.cipai_id!r}"
        )
    total, best_id = _best_fit(per_variant, weights)
    return ConformityReport(
        total=total, best_variant_id=best_id, per_variant=per_variant, weights=weights
    )


def han_only(text: str) -> str:
    return "".join(ch for ch in text if is_han(ch))


def _edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


NEAR_DUPLICATE_THRESHOLD = 0.9


def near_duplicate(candidate_half: str, original_half: str) -> tuple[float, bool]:
    """Similarity of two stanza texts over Han characters only.

    Similarity is 1 minus the edit distance normalized by the longer
    sequence; values at or above 0.9 are flagged as direct reproduction.
    """
    a, b = han_only(candidate_half), han_only(original_half)
    if not a or not b:
        raise ValueError("near_duplicate requires non-empty Han content on both sides")
    distance = _edit_distance(a, b)
    similarity = 1.0 - distance / max(len(a), len(b))
    return similarity, similarity >= NEAR_DUPLICATE_THRESHOLD
