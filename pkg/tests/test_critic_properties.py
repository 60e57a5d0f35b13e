from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from poetone.critic import ScoreWeights, conformity, segment
from poetone.phonology import load_default_lexicon
from poetone.registry import CipaiTemplate

from support import (
    CharPools,
    lexicon_lookups,
    random_poem_lines,
    random_template,
    random_variant,
    reference_total,
    synthesize_poem,
    variant_view,
)

LEXICON = load_default_lexicon()
POOLS = CharPools(LEXICON)
TONE_LOOKUP, RHYME_LOOKUP = lexicon_lookups(LEXICON)

seeds = st.integers(min_value=0, max_value=10_000_000)


def build_case(seed: int) -> tuple[CipaiTemplate, str, list[str]]:
    rng = random.Random(seed)
    template = random_template(rng, LEXICON)
    lines = random_poem_lines(rng, rng.choice(template.variants), LEXICON, POOLS)
    return template, "，".join(lines) + "。", lines


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_scores_stay_in_unit_interval(seed):
    template, text, _ = build_case(seed)
    report = conformity(text, template, LEXICON)
    assert 0.0 <= report.total <= 1.0
    for scores in report.per_variant.values():
        assert 0.0 <= scores.structure <= 1.0
        assert 0.0 <= scores.tonal <= 1.0
        assert 0.0 <= scores.rhyme <= 1.0


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_reports_are_deterministic(seed):
    template, text, _ = build_case(seed)
    first = conformity(text, template, LEXICON)
    second = conformity(text, template, LEXICON)
    assert first == second


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_matches_independent_direct_evaluator(seed):
    template, text, lines = build_case(seed)
    report = conformity(text, template, LEXICON)
    expected = reference_total(
        lines,
        [variant_view(v) for v in template.variants],
        (0.4, 0.3, 0.3),
        TONE_LOOKUP,
        RHYME_LOOKUP,
    )
    assert abs(report.total - expected) <= 1e-9


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_synthesized_perfect_poem_scores_one(seed):
    rng = random.Random(seed)
    variant = random_variant(rng, "only")
    template = CipaiTemplate(cipai_id="c", display_name="c", variants=(variant,))
    text = synthesize_poem(variant, LEXICON, POOLS, seed=seed)
    report = conformity(text, template, LEXICON)
    assert report.total == 1.0


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_adding_a_variant_never_lowers_the_total(seed):
    rng = random.Random(seed)
    template, text, _ = build_case(seed)
    extra = random_variant(rng, "zz_extra")
    widened = CipaiTemplate(
        cipai_id=template.cipai_id,
        display_name=template.display_name,
        variants=template.variants + (extra,),
    )
    base = conformity(text, template, LEXICON).total
    wide = conformity(text, widened, LEXICON).total
    assert wide >= base - 1e-12


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_appending_a_line_strictly_lowers_structure(seed):
    rng = random.Random(seed)
    variant = random_variant(rng, "only")
    template = CipaiTemplate(cipai_id="c", display_name="c", variants=(variant,))
    text = synthesize_poem(variant, LEXICON, POOLS, seed=seed)
    longer = text + "多余其一行。"
    base = conformity(text, template, LEXICON)
    grown = conformity(longer, template, LEXICON)
    # poem already has N_g >= N_v lines; one more line grows the
    # denominator while the match count cannot grow
    assert grown.best.structure < base.best.structure


@given(seeds, st.sampled_from([0.5, 2.0, 3.0, 7.0, 11.0]))
@settings(max_examples=50, deadline=None)
def test_weight_rescaling_keeps_best_variant(seed, scale):
    template, text, _ = build_case(seed)
    base = conformity(text, template, LEXICON)
    w = (0.4 * scale, 0.3 * scale, 0.3 * scale)
    total = sum(w)
    rescaled = ScoreWeights(w[0] / total, w[1] / total, w[2] / total)
    again = conformity(text, template, LEXICON, rescaled)
    assert again.best_variant_id == base.best_variant_id


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_segment_lines_contain_only_han(seed):
    rng = random.Random(seed)
    fragments = []
    alphabet = "明月清风ABC 12，。？!；好"
    for _ in range(rng.randint(1, 40)):
        fragments.append(rng.choice(alphabet))
    raw = "".join(fragments)
    if not raw.strip():
        return
    try:
        poem = segment(raw)
    except Exception:
        assert raw.strip() == ""
        return
    for poem_line in poem.lines:
        assert poem_line
        assert all("一" <= c <= "鿿" for c in poem_line)
