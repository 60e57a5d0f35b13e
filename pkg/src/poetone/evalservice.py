"""Two-stage human evaluation service.

Evaluators see anonymized generated/human poem pairs, pick which one
they believe is human-authored with a 1-5 confidence (stage one), then
rate the generated poem on three 1-5 dimensions after the reveal
(stage two). Every state transition is one line in an append-only
JSONL event log; all aggregates are pure folds over that log, so the
served numbers can always be recomputed from the raw export.

The single reported aggregate is the fooled rate (how often the
generated poem was picked as the human one) plus confidence and Likert
means; no attempt is made to reproduce any externally defined scalar
"Turing test score", since raw trials are exported for recomputation.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .critic import segment
from .registry import Corpus, TemplateSet, Theme

FIRST = "First"
SECOND = "Second"
GENERATED_FIRST = "GeneratedFirst"
HUMAN_FIRST = "HumanFirst"

STAGE_CHOICE_PENDING = "choice_pending"
STAGE_REVEALED = "revealed"
STAGE_RATINGS_SUBMITTED = "ratings_submitted"

RATING_DIMENSIONS = ("thematic_faithfulness", "artistic_merit", "overall_quality")

# keys that must never appear in a pre-reveal trial payload
FORBIDDEN_PAYLOAD_KEYS = frozenset(
    {"model_id", "poem_id", "source", "author", "generated", "human"}
)


class EvalServiceError(Exception):
    pass


class UnknownEvaluatorError(EvalServiceError):
    pass


class UnknownTrialError(EvalServiceError):
    pass


class InvalidStageError(EvalServiceError):
    pass


class RangeViolationError(EvalServiceError):
    pass


class ExhaustedError(EvalServiceError):
    """The evaluator has been served every pair."""


@dataclass(frozen=True)
class EvalPair:
    pair_id: str
    cipai_id: str
    cipai_name: str
    theme: str
    generated_model_id: str
    generated_text: str
    human_poem_id: str
    human_text: str

    def to_obj(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "cipai_id": self.cipai_id,
            "cipai_name": self.cipai_name,
            "theme": self.theme,
            "generated": {"model_id": self.generated_model_id, "text": self.generated_text},
            "human": {"poem_id": self.human_poem_id, "text": self.human_text},
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "EvalPair":
        return cls(
            pair_id=obj["pair_id"],
            cipai_id=obj["cipai_id"],
            cipai_name=obj.get("cipai_name", obj["cipai_id"]),
            theme=obj["theme"],
            generated_model_id=obj["generated"]["model_id"],
            generated_text=obj["generated"]["text"],
            human_poem_id=obj["human"]["poem_id"],
            human_text=obj["human"]["text"],
        )


@dataclass
class TuringTrial:
    trial_id: str
    pair_id: str
    evaluator_id: str
    presentation_order: str  # GeneratedFirst | HumanFirst
    stage: str = STAGE_CHOICE_PENDING
    choice: str | None = None
    confidence: int | None = None
    ratings: dict[str, int] | None = None
    created_at: str = ""
    choice_at: str | None = None
    ratings_at: str | None = None


# ---------------------------------------------------------------------------
# Pair construction


@dataclass(frozen=True)
class GeneratedPoemEntry:
    """A generated poem carrying both scores used for selection."""

    model_id: str
    cipai_id: str
    theme: str
    text: str
    conformity: float
    judge_mean: float  # 1-5 scale

    @property
    def combined(self) -> float:
        # judge mean rescaled from [1,5] to [0,1] before summing
        return self.conformity + (self.judge_mean - 1.0) / 4.0


def entries_from_records(rows: list[dict]) -> list[GeneratedPoemEntry]:
    """Adapt benchmark journal rows that carry quality scores."""
    entries = []
    for row in rows:
        quality = row.get("quality")
        record = row.get("record") or {}
        text = record.get("extracted_poem", "")
        if not quality or not text:
            continue
        judge_mean = (
            quality["fluency"] + quality["coherence"] + quality["poetic_quality"]
        ) / 3.0
        entries.append(
            GeneratedPoemEntry(
                model_id=row["provider_id"],
                cipai_id=row["cipai_id"],
                theme=row["theme"],
                text=text,
                conformity=row["total"],
                judge_mean=judge_mean,
            )
        )
    return entries


def build_pairs(
    selected_generated: list[GeneratedPoemEntry],
    corpus: Corpus,
    registry: TemplateSet,
    per_model_k: int,
) -> tuple[list[EvalPair], list[dict]]:
    """Top-k generated poems per model, each matched to the human poem
    with the same cipai and theme (smallest poem_id). Unmatched poems
    are skipped and listed in the returned manifest."""
    if per_model_k < 1:
        raise ValueError("per_model_k must be >= 1")
    by_model: dict[str, list[GeneratedPoemEntry]] = {}
    for entry in selected_generated:
        by_model.setdefault(entry.model_id, []).append(entry)

    pairs: list[EvalPair] = []
    skipped: list[dict] = []
    counter = 0
    for model_id in sorted(by_model):
        ranked = sorted(
            by_model[model_id],
            key=lambda e: (-e.combined, e.cipai_id, e.theme, e.text),
        )
        taken = 0
        for entry in ranked:
            if taken == per_model_k:
                break
            matches = corpus.exemplars(entry.cipai_id, Theme(entry.theme))
            if not matches:
                skipped.append(
                    {
                        "model_id": model_id,
                        "cipai_id": entry.cipai_id,
                        "theme": entry.theme,
                        "reason": "no matching human poem",
                    }
                )
                continue
            human = matches[0]
            cipai_name = (
                registry.get(entry.cipai_id).display_name
                if entry.cipai_id in registry
                else entry.cipai_id
            )
            pairs.append(
                EvalPair(
                    pair_id=f"pair-{counter:03d}",
                    cipai_id=entry.cipai_id,
                    cipai_name=cipai_name,
                    theme=entry.theme,
                    generated_model_id=model_id,
                    generated_text=entry.text,
                    human_poem_id=human.poem_id,
                    human_text=human.text,
                )
            )
            counter += 1
            taken += 1
    return pairs, skipped


def dump_pairs(pairs: list[EvalPair], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps([p.to_obj() for p in pairs], ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_pairs(path: str | Path) -> list[EvalPair]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [EvalPair.from_obj(obj) for obj in data]


# ---------------------------------------------------------------------------
# Service


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _check_range(name: str, value) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
        raise RangeViolationError(f"{name} must be an integer in 1..5, got {value!r}")
    return value


class EvalService:
    """In-memory state over an append-only event log.

    All writes serialize through one lock; the log is replayed on
    construction so a restarted service resumes exactly where it was.
    """

    def __init__(self, pairs: list[EvalPair], log_path: str | Path, seed: int = 0):
        if not pairs:
            raise ValueError("at least one pair is required")
        self.pairs = {p.pair_id: p for p in pairs}
        if len(self.pairs) != len(pairs):
            raise ValueError("duplicate pair_id")
        self.pair_order = [p.pair_id for p in pairs]
        self.log_path = Path(log_path)
        self._lock = threading.Lock()
        self._rng = random.Random(seed)
        self.evaluators: set[str] = set()
        self.trials: dict[str, TuringTrial] = {}
        self._served: dict[str, list[str]] = {}  # evaluator -> pair ids in order
        self._trial_counter = 0
        if self.log_path.exists():
            for line in self.log_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._apply(json.loads(line), replay=True)

    # -- event handling -----------------------------------------------------

    def _append(self, event: dict) -> None:
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        with self.log_path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(event, ensure_ascii=False) + "\n")
            handle.flush()

    def _apply(self, event: dict, replay: bool = False) -> None:
        kind = event["event"]
        if kind == "evaluator_registered":
            self.evaluators.add(event["evaluator_id"])
            self._served.setdefault(event["evaluator_id"], [])
        elif kind == "trial_created":
            trial = TuringTrial(
                trial_id=event["trial_id"],
                pair_id=event["pair_id"],
                evaluator_id=event["evaluator_id"],
                presentation_order=event["presentation_order"],
                created_at=event.get("ts", ""),
            )
            self.trials[trial.trial_id] = trial
            self._served.setdefault(trial.evaluator_id, []).append(trial.pair_id)
            self._trial_counter += 1
            if replay:
                self._rng.random()  # keep the draw sequence aligned
        elif kind == "choice_submitted":
            trial = self.trials[event["trial_id"]]
            trial.choice = event["choice"]
            trial.confidence = event["confidence"]
            trial.stage = STAGE_REVEALED
            trial.choice_at = event.get("ts")
        elif kind == "ratings_submitted":
            trial = self.trials[event["trial_id"]]
            trial.ratings = {dim: event[dim] for dim in RATING_DIMENSIONS}
            trial.stage = STAGE_RATINGS_SUBMITTED
            trial.ratings_at = event.get("ts")
        else:
            raise ValueError(f"unknown event type {kind!r}")

    def _record(self, event: dict) -> None:
        event = {**event, "ts": _now()}
        self._apply(event)
        self._append(event)

    # -- operations ----------------------------------------------------------

    def register_evaluator(self, evaluator_id: str) -> dict:
        if not evaluator_id or not evaluator_id.strip():
            raise RangeViolationError("evaluator_id must be a non-empty token")
        evaluator_id = evaluator_id.strip()
        with self._lock:
            if evaluator_id not in self.evaluators:
                self._record(
                    {"event": "evaluator_registered", "evaluator_id": evaluator_id}
                )
        return {"evaluator_id": evaluator_id, "total_pairs": len(self.pairs)}

    def _pending_trial(self, evaluator_id: str) -> TuringTrial | None:
        for trial in self.trials.values():
            if (
                trial.evaluator_id == evaluator_id
                and trial.stage == STAGE_CHOICE_PENDING
            ):
                return trial
        return None

    def next_trial(self, evaluator_id: str) -> dict:
        """Serve the evaluator's current pending trial, or create one for
        the next unserved pair. The payload never names sources."""
        with self._lock:
            if evaluator_id not in self.evaluators:
                raise UnknownEvaluatorError(f"evaluator {evaluator_id!r} not registered")
            trial = self._pending_trial(evaluator_id)
            if trial is None:
                served = set(self._served.get(evaluator_id, []))
                remaining = [pid for pid in self.pair_order if pid not in served]
                if not remaining:
                    raise ExhaustedError(
                        f"evaluator {evaluator_id!r} has judged all pairs"
                    )
                order = GENERATED_FIRST if self._rng.random() < 0.5 else HUMAN_FIRST
                trial = TuringTrial(
                    trial_id=f"trial-{self._trial_counter:05d}",
                    pair_id=remaining[0],
                    evaluator_id=evaluator_id,
                    presentation_order=order,
                )
                self._record(
                    {
                        "event": "trial_created",
                        "trial_id": trial.trial_id,
                        "pair_id": trial.pair_id,
                        "evaluator_id": evaluator_id,
                        "presentation_order": order,
                    }
                )
            return self.trial_payload(trial)

    def trial_payload(self, trial: TuringTrial) -> dict:
        pair = self.pairs[trial.pair_id]
        if trial.presentation_order == GENERATED_FIRST:
            first_text, second_text = pair.generated_text, pair.human_text
        else:
            first_text, second_text = pair.human_text, pair.generated_text
        completed = sum(
            1
            for t in self.trials.values()
            if t.evaluator_id == trial.evaluator_id
            and t.stage != STAGE_CHOICE_PENDING
        )
        return {
            "trial_id": trial.trial_id,
            "cipai_name": pair.cipai_name,
            "theme": pair.theme,
            "poems": [
                {"label": "A", "lines": list(segment(first_text).lines)},
                {"label": "B", "lines": list(segment(second_text).lines)},
            ],
            "progress": {"completed": completed, "total": len(self.pairs)},
        }

    def _get_trial(self, trial_id: str) -> TuringTrial:
        if trial_id not in self.trials:
            raise UnknownTrialError(f"unknown trial {trial_id!r}")
        return self.trials[trial_id]

    def submit_choice(self, trial_id: str, choice: str, confidence) -> dict:
        with self._lock:
            trial = self._get_trial(trial_id)
            if trial.stage != STAGE_CHOICE_PENDING:
                raise InvalidStageError(
                    f"trial {trial_id} is in stage {trial.stage}; choice already submitted"
                )
            if choice not in (FIRST, SECOND):
                raise RangeViolationError(
                    f"choice must be {FIRST!r} or {SECOND!r}, got {choice!r}"
                )
            confidence = _check_range("confidence", confidence)
            self._record(
                {
                    "event": "choice_submitted",
                    "trial_id": trial_id,
                    "choice": choice,
                    "confidence": confidence,
                }
            )
            human_position = (
                SECOND if trial.presentation_order == GENERATED_FIRST else FIRST
            )
            return {
                "trial_id": trial_id,
                "human": human_position,
                "correct": choice == human_position,
            }

    def submit_ratings(self, trial_id: str, **ratings) -> dict:
        with self._lock:
            trial = self._get_trial(trial_id)
            if trial.stage == STAGE_CHOICE_PENDING:
                raise InvalidStageError(
                    f"trial {trial_id} has no submitted choice yet"
                )
            if trial.stage == STAGE_RATINGS_SUBMITTED:
                raise InvalidStageError(f"trial {trial_id} already has ratings")
            values = {}
            for dim in RATING_DIMENSIONS:
                if dim not in ratings:
                    raise RangeViolationError(f"missing rating dimension {dim!r}")
                values[dim] = _check_range(dim, ratings[dim])
            self._record(
                {"event": "ratings_submitted", "trial_id": trial_id, **values}
            )
            return {"trial_id": trial_id, "stage": STAGE_RATINGS_SUBMITTED}

    # -- aggregation ----------------------------------------------------------

    def completed_count(self, evaluator_id: str) -> int:
        with self._lock:
            return sum(
                1
                for t in self.trials.values()
                if t.evaluator_id == evaluator_id and t.stage != STAGE_CHOICE_PENDING
            )

    def summary(self) -> dict:
        with self._lock:
            return summarize_trials(list(self.trials.values()), self.pairs)

    def export_lines(self) -> list[str]:
        if not self.log_path.exists():
            return []
        return [
            line
            for line in self.log_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]


def _mean(values: list) -> float | None:
    return sum(values) / len(values) if values else None


def summarize_trials(trials: list[TuringTrial], pairs: dict[str, EvalPair]) -> dict:
    """Pure fold from trials to the served summary shape."""
    model_ids = sorted({p.generated_model_id for p in pairs.values()})
    per_model: dict[str, dict] = {}
    for model_id in model_ids:
        model_trials = [
            t
            for t in trials
            if pairs[t.pair_id].generated_model_id == model_id
            and t.stage != STAGE_CHOICE_PENDING
        ]
        fooled_flags: list[bool] = []
        confidences: list[int] = []
        for trial in model_trials:
            generated_position = (
                FIRST if trial.presentation_order == GENERATED_FIRST else SECOND
            )
            fooled_flags.append(trial.choice == generated_position)
            confidences.append(trial.confidence)
        rated = [t for t in model_trials if t.ratings is not None]
        per_model[model_id] = {
            "trials": len(model_trials),
            "rated_trials": len(rated),
            "fooled_rate": _mean([1.0 if f else 0.0 for f in fooled_flags]),
            "mean_confidence": _mean(confidences),
            "mean_confidence_fooled": _mean(
                [c for c, f in zip(confidences, fooled_flags) if f]
            ),
            "mean_confidence_not_fooled": _mean(
                [c for c, f in zip(confidences, fooled_flags) if not f]
            ),
            **{
                dim: _mean([t.ratings[dim] for t in rated])
                for dim in RATING_DIMENSIONS
            },
        }
    stages = {
        STAGE_CHOICE_PENDING: 0,
        STAGE_REVEALED: 0,
        STAGE_RATINGS_SUBMITTED: 0,
    }
    for trial in trials:
        stages[trial.stage] += 1
    return {
        "pairs": len(pairs),
        "trials_by_stage": stages,
        "models": per_model,
    }


def summarize_event_log(log_path: str | Path, pairs: list[EvalPair]) -> dict:
    """Recompute the summary directly from the raw event log."""
    pair_map = {p.pair_id: p for p in pairs}
    trials: dict[str, TuringTrial] = {}
    for line in Path(log_path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        event = json.loads(line)
        kind = event["event"]
        if kind == "trial_created":
            trials[event["trial_id"]] = TuringTrial(
                trial_id=event["trial_id"],
                pair_id=event["pair_id"],
                evaluator_id=event["evaluator_id"],
                presentation_order=event["presentation_order"],
            )
        elif kind == "choice_submitted":
            trial = trials[event["trial_id"]]
            trial.choice = event["choice"]
            trial.confidence = event["confidence"]
            trial.stage = STAGE_REVEALED
        elif kind == "ratings_submitted":
            trial = trials[event["trial_id"]]
            trial.ratings = {dim: event[dim] for dim in RATING_DIMENSIONS}
            trial.stage = STAGE_RATINGS_SUBMITTED
    return summarize_trials(list(trials.values()), pair_map)
