"""Character-level Mandarin tonal categories and rhyme-group lookup.

Backs the tonal and rhyme scorers: Mandarin tones 1-2 map to the level
category (ping), tones 3-4 to the oblique category (ze). Rhyme groups
come from a pluggable data file; the packaged default merges pinyin
finals into thirteen classes split by tonal section, approximating a
classical rhyme dictionary. Swapping in a scholarly table requires no
code change, only different TSV files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .registry import default_data_path


class TonalCategory(Enum):
    PING = "ping"
    ZE = "ze"


@dataclass(frozen=True)
class RhymeGroupId:
    """Opaque rhyme-group identifier carrying its tonal section."""

    group: str
    section: TonalCategory

    def __str__(self) -> str:
        return self.group


class LexiconError(ValueError):
    """Malformed lexicon data file."""


@dataclass
class Lexicon:
    """Immutable per-character tone and rhyme-group maps."""

    tone_map: dict[str, frozenset[TonalCategory]] = field(default_factory=dict)
    rhyme_map: dict[str, frozenset[RhymeGroupId]] = field(default_factory=dict)

    def tone_categories(self, char: str) -> frozenset[TonalCategory] | None:
        """All tonal categories over the character's recorded readings.

        Returns None when the character is absent from the lexicon.
        """
        if len(char) != 1:
            raise ValueError(f"expected a single character, got {char!r}")
        return self.tone_map.get(char)

    def rhyme_groups(self, char: str) -> frozenset[RhymeGroupId]:
        """All rhyme groups of the character; empty set when unknown."""
        if len(char) != 1:
            raise ValueError(f"expected a single character, got {char!r}")
        return self.rhyme_map.get(char, frozenset())


def _category_for_tone(tone: int) -> TonalCategory:
    return TonalCategory.PING if tone in (1, 2) else TonalCategory.ZE


def load_lexicon(tone_path: str | Path, rhyme_path: str | Path) -> Lexicon:
    """Load the documented TSV pair; duplicate rows merge by set union.

    ``tones.tsv`` rows are ``<char>\\t<tone 1-5>``; tone 5 (neutral)
    contributes the character's citation category when one is listed,
    otherwise it is stored as oblique. ``rhymes.tsv`` rows are
    ``<char>\\t<group>\\t<ping|ze>``.
    """
    tone_path, rhyme_path = Path(tone_path), Path(rhyme_path)

    raw_tones: dict[str, set[int]] = {}
    for line_no, line in enumerate(_read_rows(tone_path), start=1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{tone_path}:{line_no}: expected 2 fields, got {len(parts)}")
        char, tone_text = parts
        if len(char) != 1:
            raise LexiconError(f"{tone_path}:{line_no}: key must be a single character")
        try:
            tone = int(tone_text)
        except ValueError:
            raise LexiconError(f"{tone_path}:{line_no}: tone must be an integer") from None
        if not 1 <= tone <= 5:
            raise LexiconError(f"{tone_path}:{line_no}: tone {tone} outside 1-5")
        raw_tones.setdefault(char, set()).add(tone)
    if not raw_tones:
        raise LexiconError(f"{tone_path}: empty tone file")

    tone_map: dict[str, frozenset[TonalCategory]] = {}
    for char, tones in raw_tones.items():
        citation = {t for t in tones if t != 5}
        if citation:
            cats = {_category_for_tone(t) for t in citation}
        else:
            cats = {TonalCategory.ZE}  # neutral-tone-only entry
        tone_map[char] = frozenset(cats)

    rhyme_map: dict[str, set[RhymeGroupId]] = {}
    section_of_group: dict[str, TonalCategory] = {}
    for line_no, line in enumerate(_read_rows(rhyme_path), start=1):
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconError(f"{rhyme_path}:{line_no}: expected 3 fields, got {len(parts)}")
        char, group, section_text = parts
        if len(char) != 1:
            raise LexiconError(f"{rhyme_path}:{line_no}: key must be a single character")
        try:
            section = TonalCategory(section_text)
        except ValueError:
            raise LexiconError(
                f"{rhyme_path}:{line_no}: section must be ping or ze, got {section_text!r}"
            ) from None
        known = section_of_group.setdefault(group, section)
        if known != section:
            raise LexiconError(
                f"{rhyme_path}:{line_no}: group {group!r} declared with two sections"
            )
        rhyme_map.setdefault(char, set()).add(RhymeGroupId(group, section))
    if not rhyme_map:
        raise LexiconError(f"{rhyme_path}: empty rhyme file")

    return Lexicon(
        tone_map=tone_map,
        rhyme_map={c: frozenset(groups) for c, groups in rhyme_map.items()},
    )


def _read_rows(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"{path}: {exc}") from exc
    for line in text.splitlines():
        line = line.rstrip("\n")
        if line.strip():
            yield line


def load_default_lexicon() -> Lexicon:
    """Load the lexicon packaged with the distribution."""
    return load_lexicon(default_data_path("tones.tsv"), default_data_path("rhymes.tsv"))
