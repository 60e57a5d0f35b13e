"""Shared test machinery.

``reference_total`` is an independent, direct transcription of the four
scoring formulas (structure ratio, tonal ratio over matched lines,
largest-rhyme-group share, weighted best-fit max). It deliberately
works on primitive dicts and lists, not package types, so it shares no
code path with the implementation it checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from poetone.phonology import Lexicon, RhymeGroupId, TonalCategory
from poetone.registry import CipaiTemplate, LineSpec, TonalRequirement, Variant

# ---------------------------------------------------------------------------
# Independent direct evaluator (primitive types only)


def reference_structure(lines: list[str], char_counts: list[int]) -> tuple[float, list[int]]:
    n_g, n_v = len(lines), len(char_counts)
    matched = [i for i in range(min(n_g, n_v)) if len(lines[i]) == char_counts[i]]
    if max(n_g, n_v) == 0:
        return 0.0, matched
    return len(matched) / max(n_g, n_v), matched


def reference_tonal(
    lines: list[str],
    tone_reqs: list[list[str]],
    matched: list[int],
    tone_lookup: dict[str, set[str]],
) -> float:
    numer = 0
    denom = 0
    for i in matched:
        denom += len(lines[i])
        for j, char in enumerate(lines[i]):
            req = tone_reqs[i][j]
            if req == "zhong":
                numer += 1
            elif req in tone_lookup.get(char, set()):
                numer += 1
    return numer / denom if denom else 0.0


def reference_rhyme(
    lines: list[str],
    rhyme_positions: list[tuple[int, int]],
    rhyme_lookup: dict[str, set[str]],
) -> float:
    chars = [
        lines[li][ci]
        for li, ci in rhyme_positions
        if li < len(lines) and ci < len(lines[li])
    ]
    if not chars:
        return 0.0
    all_groups: set[str] = set()
    for c in chars:
        groups = rhyme_lookup.get(c) or {f"<only:{c}>"}
        all_groups.update(groups)
    best = 0
    for g in all_groups:
        size = sum(1 for c in chars if g in (rhyme_lookup.get(c) or {f"<only:{c}>"}))
        best = max(best, size)
    return best / len(chars)


@dataclass
class VariantView:
    """Primitive projection of a Variant for the reference evaluator."""

    variant_id: str
    char_counts: list[int]
    tone_reqs: list[list[str]]
    rhyme_positions: list[tuple[int, int]]


def variant_view(variant: Variant) -> VariantView:
    return VariantView(
        variant_id=variant.variant_id,
        char_counts=[spec.char_count for spec in variant.lines],
        tone_reqs=[[t.value for t in spec.tones] for spec in variant.lines],
        rhyme_positions=list(variant.rhyme_positions),
    )


def lexicon_lookups(lexicon: Lexicon) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    tone_lookup = {
        ch: {c.value for c in cats} for ch, cats in lexicon.tone_map.items()
    }
    rhyme_lookup = {
        ch: {g.group for g in groups} for ch, groups in lexicon.rhyme_map.items()
    }
    return tone_lookup, rhyme_lookup


def reference_total(
    lines: list[str],
    views: list[VariantView],
    weights: tuple[float, float, float],
    tone_lookup: dict[str, set[str]],
    rhyme_lookup: dict[str, set[str]],
) -> float:
    w_s, w_t, w_r = weights
    best = None
    for view in views:
        s, matched = reference_structure(lines, view.char_counts)
        t = reference_tonal(lines, view.tone_reqs, matched, tone_lookup)
        r = reference_rhyme(lines, view.rhyme_positions, rhyme_lookup)
        total = w_s * s + w_t * t + w_r * r
        if best is None or total > best:
            best = total
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Synthetic poem construction


class CharPools:
    """Character pools indexed by tonal category and rhyme group."""

    def __init__(self, lexicon: Lexicon):
        self.mono: dict[TonalCategory, list[str]] = {
            TonalCategory.PING: [],
            TonalCategory.ZE: [],
        }
        for char, cats in sorted(lexicon.tone_map.items()):
            if len(cats) == 1:
                self.mono[next(iter(cats))].append(char)
        self.by_group: dict[RhymeGroupId, list[str]] = {}
        for char, groups in sorted(lexicon.rhyme_map.items()):
            cats = lexicon.tone_map.get(char)
            if not cats or len(cats) != 1:
                continue
            category = next(iter(cats))
            for group in groups:
                if group.section == category:
                    self.by_group.setdefault(group, []).append(char)

    def rhyme_group_for(self, section: TonalCategory, min_size: int = 8) -> RhymeGroupId:
        candidates = sorted(
            (g for g, chars in self.by_group.items()
             if g.section == section and len(chars) >= min_size),
            key=lambda g: g.group,
        )
        assert candidates, f"no rhyme group with section {section}"
        return candidates[0]


def synthesize_poem_lines(
    variant: Variant,
    lexicon: Lexicon,
    pools: CharPools | None = None,
    seed: int = 0,
) -> list[str]:
    """Lines of a poem that satisfies one variant perfectly.

    Every line has the exact required length, every character's tonal
    category matches its slot, and all rhyme-position characters come
    from one rhyme group of the variant's section.
    """
    pools = pools or CharPools(lexicon)
    rng = random.Random(seed)
    section = TonalCategory(variant.rhyme_section.value)
    group = pools.rhyme_group_for(section)
    group_chars = pools.by_group[group]
    rhyme_at = {(li, ci) for li, ci in variant.rhyme_positions}

    lines: list[str] = []
    for li, spec in enumerate(variant.lines):
        chars: list[str] = []
        for ci, req in enumerate(spec.tones):
            if (li, ci) in rhyme_at:
                if req is not TonalRequirement.ZHONG and req.value != section.value:
                    raise AssertionError(
                        "variant requires a tone at a rhyme slot that its rhyme section cannot satisfy"
                    )
                chars.append(rng.choice(group_chars))
            elif req is TonalRequirement.ZHONG:
                chars.append(rng.choice(pools.mono[TonalCategory.ZE]))
            else:
                chars.append(rng.choice(pools.mono[TonalCategory(req.value)]))
        lines.append("".join(chars))
    return lines


def synthesize_poem(
    variant: Variant,
    lexicon: Lexicon,
    pools: CharPools | None = None,
    seed: int = 0,
    separator: str = "，",
) -> str:
    lines = synthesize_poem_lines(variant, lexicon, pools, seed)
    return separator.join(lines) + "。"


# ---------------------------------------------------------------------------
# Random template/poem generation for oracle-equivalence checks

UNKNOWN_CHARS = "㐀㐁㐂㐃㐄㐅㐆㐇"  # Extension A: absent from the lexicon on purpose


def random_variant(
    rng: random.Random,
    variant_id: str,
    max_lines: int = 8,
    max_chars: int = 9,
) -> Variant:
    total_lines = rng.randint(2, max_lines)
    first = rng.randint(1, total_lines - 1)
    counts = [rng.randint(1, max_chars) for _ in range(total_lines)]
    tone_values = [TonalRequirement.PING, TonalRequirement.ZE, TonalRequirement.ZHONG]
    tones = [[rng.choice(tone_values) for _ in range(c)] for c in counts]
    rhyme_lines = sorted(rng.sample(range(total_lines), rng.randint(1, total_lines)))
    rhyme_positions = tuple(
        (li, rng.randrange(counts[li])) for li in rhyme_lines
    )
    section = rng.choice([TonalRequirement.PING, TonalRequirement.ZE])
    # keep rhyme slots satisfiable: their tone requirement must accept
    # a character drawn from the rhyme section
    for li, ci in rhyme_positions:
        tones[li][ci] = rng.choice([section, TonalRequirement.ZHONG])
    specs = [
        LineSpec(char_count=c, tones=tuple(t)) for c, t in zip(counts, tones)
    ]
    return Variant(
        variant_id=variant_id,
        stanzas=(tuple(specs[:first]), tuple(specs[first:])),
        rhyme_positions=rhyme_positions,
        rhyme_section=section,
    )


def random_template(
    rng: random.Random,
    lexicon: Lexicon,
    cipai_id: str = "synthetic",
    max_variants: int = 3,
) -> CipaiTemplate:
    n = rng.randint(1, max_variants)
    return CipaiTemplate(
        cipai_id=cipai_id,
        display_name=cipai_id,
        variants=tuple(random_variant(rng, f"v{i}") for i in range(n)),
    )


def random_poem_lines(
    rng: random.Random,
    variant: Variant,
    lexicon: Lexicon,
    pools: CharPools,
) -> list[str]:
    """Messy poem loosely related to a variant: jittered counts, mixed chars."""
    char_pool = (
        pools.mono[TonalCategory.PING][:40]
        + pools.mono[TonalCategory.ZE][:40]
        + list(UNKNOWN_CHARS)
        + ["行", "好", "中", "相"]  # polyphones
    )
    n_lines = max(1, variant.line_count + rng.randint(-2, 2))
    lines = []
    for i in range(n_lines):
        target = variant.lines[i].char_count if i < variant.line_count else rng.randint(1, 9)
        length = max(1, target + rng.choice([-1, 0, 0, 0, 1]))
        lines.append("".join(rng.choice(char_pool) for _ in range(length)))
    return lines
