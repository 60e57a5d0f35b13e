"""Cipai constraint templates and the thematic canonical corpus.

Templates are machine-readable descriptions of a tune pattern: per-line
character counts, per-position tonal requirements, and rhyme positions.
A Cipai may carry several variants; scoring later best-fits against all
of them. The corpus is a JSONL file of human-authored poems annotated
with one of six themes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

MAX_VARIANTS = 15
STANZAS_PER_CIPAI = 2


class TonalRequirement(Enum):
    """Required tonal category at one character position.

    ZHONG marks a free position: both level (ping) and oblique (ze)
    tones are accepted there.
    """

    PING = "ping"
    ZE = "ze"
    ZHONG = "zhong"


class Theme(Enum):
    LOVE_LONGING = "LoveLonging"
    PATRIOTISM_HEROISM = "PatriotismHeroism"
    NATURE_LANDSCAPES = "NatureLandscapes"
    HISTORY_NOSTALGIA = "HistoryNostalgia"
    SORROW_GRIEF = "SorrowGrief"
    PHILOSOPHICAL_REFLECTION = "PhilosophicalReflection"


THEME_LABELS = [t.value for t in Theme]


@dataclass(frozen=True)
class LineSpec:
    """Constraint for a single line: length plus per-position tones."""

    char_count: int
    tones: tuple[TonalRequirement, ...]


@dataclass(frozen=True)
class Variant:
    """One concrete form of a Cipai.

    ``rhyme_positions`` are (line, char) pairs, 0-based, with the line
    index running over the flattened two-stanza line sequence.
    """

    variant_id: str
    stanzas: tuple[tuple[LineSpec, ...], ...]
    rhyme_positions: tuple[tuple[int, int], ...]
    rhyme_section: TonalRequirement

    @property
    def lines(self) -> tuple[LineSpec, ...]:
        """Flattened line specs across both stanzas."""
        return tuple(spec for stanza in self.stanzas for spec in stanza)

    @property
    def line_count(self) -> int:
        return sum(len(stanza) for stanza in self.stanzas)


@dataclass(frozen=True)
class CipaiTemplate:
    cipai_id: str
    display_name: str
    variants: tuple[Variant, ...]


@dataclass(frozen=True)
class CorpusPoem:
    poem_id: str
    cipai_id: str
    theme: Theme
    author: str
    title: str
    text: str
    stanza_boundary_line_index: int


@dataclass(frozen=True)
class Violation:
    """A single schema violation, addressed by template id + field path."""

    template_id: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.template_id}:{self.path}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class TemplateError(ValueError):
    """Malformed template file or schema violation on load."""


class CorpusError(ValueError):
    """Malformed corpus file or a poem failing validation."""


class TemplateSet:
    """Immutable registry of loaded templates, indexable by cipai id."""

    def __init__(self, templates: Iterable[CipaiTemplate]):
        self._by_id: dict[str, CipaiTemplate] = {}
        for template in templates:
            if template.cipai_id in self._by_id:
                raise TemplateError(f"duplicate cipai_id {template.cipai_id!r}")
            self._by_id[template.cipai_id] = template

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[CipaiTemplate]:
        return iter(self._by_id.values())

    def __contains__(self, cipai_id: str) -> bool:
        return cipai_id in self._by_id

    def get(self, cipai_id: str) -> CipaiTemplate:
        if cipai_id not in self._by_id:
            raise KeyError(f"unknown cipai_id {cipai_id!r}")
        return self._by_id[cipai_id]

    @property
    def cipai_ids(self) -> list[str]:
        return sorted(self._by_id)


class Corpus:
    """Loaded canonical poems with a (cipai, theme) exemplar index."""

    def __init__(self, poems: Iterable[CorpusPoem]):
        self._poems: list[CorpusPoem] = list(poems)
        self._by_id = {p.poem_id: p for p in self._poems}
        if len(self._by_id) != len(self._poems):
            raise CorpusError("duplicate poem_id in corpus")
        self._index: dict[tuple[str, Theme], list[CorpusPoem]] = {}
        self._by_cipai: dict[str, list[CorpusPoem]] = {}
        for poem in self._poems:
            self._index.setdefault((poem.cipai_id, poem.theme), []).append(poem)
            self._by_cipai.setdefault(poem.cipai_id, []).append(poem)

    def __len__(self) -> int:
        return len(self._poems)

    def __iter__(self) -> Iterator[CorpusPoem]:
        return iter(self._poems)

    def get(self, poem_id: str) -> CorpusPoem:
        if poem_id not in self._by_id:
            raise KeyError(f"unknown poem_id {poem_id!r}")
        return self._by_id[poem_id]

    def exemplars(self, cipai_id: str, theme: Theme | None = None) -> list[CorpusPoem]:
        """Poems for a cipai, optionally restricted to a theme.

        Returns an empty list (not an error) when the slice is empty.
        Results are sorted by poem_id so exemplar choice is deterministic.
        """
        if theme is None:
            pool = self._by_cipai.get(cipai_id, [])
        else:
            pool = self._index.get((cipai_id, theme), [])
        return sorted(pool, key=lambda p: p.poem_id)

    def theme_counts(self) -> dict[Theme, int]:
        counts: dict[Theme, int] = {theme: 0 for theme in Theme}
        for poem in self._poems:
            counts[poem.theme] += 1
        return counts


def validate_template(template: CipaiTemplate) -> ValidationReport:
    """Check every structural invariant; collect all violations.

    Never raises: violations are data. An empty report means the
    template is well-formed.
    """
    report = ValidationReport()
    tid = template.cipai_id

    def flag(path: str, message: str) -> None:
        report.violations.append(Violation(tid, path, message))

    if not template.cipai_id:
        flag("cipai_id", "cipai_id must be non-empty")
    if not template.variants:
        flag("variants", "template must declare at least one variant")
    if len(template.variants) > MAX_VARIANTS:
        flag("variants", f"variant count exceeds {MAX_VARIANTS}")

    seen_ids: set[str] = set()
    for v_idx, variant in enumerate(template.variants):
        vpath = f"variants[{v_idx}]"
        if variant.variant_id in seen_ids:
            flag(vpath, f"duplicate variant_id {variant.variant_id!r}")
        seen_ids.add(variant.variant_id)

        if len(variant.stanzas) != STANZAS_PER_CIPAI:
            flag(f"{vpath}.stanzas", f"stanza count must be {STANZAS_PER_CIPAI}, got {len(variant.stanzas)}")

        lines = variant.lines
        for l_idx, spec in enumerate(lines):
            lpath = f"{vpath}.lines[{l_idx}]"
            if spec.char_count < 1:
                flag(lpath, f"char_count must be >= 1, got {spec.char_count}")
            if len(spec.tones) != spec.char_count:
                flag(
                    lpath,
                    f"tones length {len(spec.tones)} != char_count {spec.char_count}",
                )

        prev_line = -1
        for r_idx, (line_idx, char_idx) in enumerate(variant.rhyme_positions):
            rpath = f"{vpath}.rhyme_positions[{r_idx}]"
            if line_idx <= prev_line:
                flag(rpath, f"line indices must be strictly increasing, got {line_idx} after {prev_line}")
            prev_line = line_idx
            if not 0 <= line_idx < len(lines):
                flag(rpath, f"line index {line_idx} out of bounds for {len(lines)} lines")
                continue
            if not 0 <= char_idx < lines[line_idx].char_count:
                flag(
                    rpath,
                    f"char index {char_idx} out of bounds for line of {lines[line_idx].char_count} characters",
                )
        if variant.rhyme_section not in (TonalRequirement.PING, TonalRequirement.ZE):
            flag(f"{vpath}.rhyme_section", "rhyme_section must be ping or ze")

    return report


def _parse_tone(value: object, path: str, tid: str) -> TonalRequirement:
    try:
        return TonalRequirement(value)
    except ValueError:
        raise TemplateError(
            f"{tid}:{path}: tone must be one of ping/ze/zhong, got {value!r}"
        ) from None


def _parse_template(obj: dict, index: int) -> CipaiTemplate:
    tid = obj.get("cipai_id") or f"<templates[{index}]>"
    try:
        variants = []
        for v_idx, v_obj in enumerate(obj["variants"]):
            stanzas = []
            for s_idx, s_obj in enumerate(v_obj["stanzas"]):
                specs = []
                for l_idx, l_obj in enumerate(s_obj):
                    path = f"variants[{v_idx}].stanzas[{s_idx}][{l_idx}]"
                    tones = tuple(
                        _parse_tone(t, f"{path}.tones[{t_idx}]", tid)
                        for t_idx, t in enumerate(l_obj["tones"])
                    )
                    specs.append(LineSpec(char_count=int(l_obj["char_count"]), tones=tones))
                stanzas.append(tuple(specs))
            rhyme_positions = tuple(
                (int(pos[0]), int(pos[1])) for pos in v_obj["rhyme_positions"]
            )
            section = _parse_tone(
                v_obj["rhyme_section"], f"variants[{v_idx}].rhyme_section", tid
            )
            variants.append(
                Variant(
                    variant_id=str(v_obj["variant_id"]),
                    stanzas=tuple(stanzas),
                    rhyme_positions=rhyme_positions,
                    rhyme_section=section,
                )
            )
        return CipaiTemplate(
            cipai_id=str(obj["cipai_id"]),
            display_name=str(obj["display_name"]),
            variants=tuple(variants),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TemplateError):
            raise
        raise TemplateError(f"{tid}: malformed template object: {exc}") from exc


def load_templates(path: str | Path) -> TemplateSet:
    """Load and validate a template JSON file.

    Raises TemplateError on parse failure or on any schema violation;
    the message names the template id and field path of each violation.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TemplateError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise TemplateError(f"{path}: top level must be a list of templates")

    templates = [_parse_template(obj, i) for i, obj in enumerate(raw)]
    problems: list[Violation] = []
    for template in templates:
        problems.extend(validate_template(template).violations)
    if problems:
        detail = "; ".join(str(v) for v in problems)
        raise TemplateError(f"{path}: schema violations: {detail}")
    return TemplateSet(templates)


def template_to_obj(template: CipaiTemplate) -> dict:
    """Serialize one template back to the documented JSON layout."""
    return {
        "cipai_id": template.cipai_id,
        "display_name": template.display_name,
        "variants": [
            {
                "variant_id": v.variant_id,
                "stanzas": [
                    [
                        {"char_count": spec.char_count, "tones": [t.value for t in spec.tones]}
                        for spec in stanza
                    ]
                    for stanza in v.stanzas
                ],
                "rhyme_positions": [[line, char] for line, char in v.rhyme_positions],
                "rhyme_section": v.rhyme_section.value,
            }
            for v in template.variants
        ],
    }


def dump_templates(templates: TemplateSet, path: str | Path) -> None:
    objs = [template_to_obj(t) for t in templates]
    Path(path).write_text(
        json.dumps(objs, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def load_corpus(path: str | Path, templates: TemplateSet) -> Corpus:
    """Load the JSONL corpus, validating themes and cipai references."""
    path = Path(path)
    poems: list[CorpusPoem] = []
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
            theme_label = obj.get("theme")
            try:
                theme = Theme(theme_label)
            except ValueError:
                raise CorpusError(
                    f"{path}:{line_no}: unknown theme {theme_label!r}; "
                    f"legal themes: {', '.join(THEME_LABELS)}"
                ) from None
            cipai_id = str(obj.get("cipai_id", ""))
            if cipai_id not in templates:
                raise CorpusError(
                    f"{path}:{line_no}: cipai_id {cipai_id!r} does not resolve in the registry"
                )
            try:
                poems.append(
                    CorpusPoem(
                        poem_id=str(obj["poem_id"]),
                        cipai_id=cipai_id,
                        theme=theme,
                        author=str(obj["author"]),
                        title=str(obj["title"]),
                        text=str(obj["text"]),
                        stanza_boundary_line_index=int(obj["stanza_boundary_line_index"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise CorpusError(f"{path}:{line_no}: malformed poem object: {exc}") from exc
    return Corpus(poems)


def default_data_path(name: str) -> Path:
    """Path of a packaged data file (templates, corpus, lexicon, prompts)."""
    return Path(__file__).parent / "data" / name
