"""Classification-based probing of generated poems.

Trains lightweight classifiers (character-unigram TF-IDF features into
a Multinomial Naive Bayes) to test which signals are recoverable from
poem text: which tune template it follows, which theme it was written
to, and whether it was human- or machine-authored. For the source task
a LOWER accuracy is the desirable outcome (harder to tell generated
poems apart from human ones), surfaced as ``human_likeness``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .registry import Corpus, Theme


class ProbeTask(Enum):
    CIPAI_ID = "cipai"
    THEME = "theme"
    SOURCE_ATTRIBUTION = "source"


@dataclass(frozen=True)
class ProbeDocument:
    doc_id: str
    text: str
    cipai_id: str
    theme: str
    source: str  # "human" | "generated"


class ProbeDataError(ValueError):
    """Dataset cannot support the requested probe (labels, class sizes)."""


# ---------------------------------------------------------------------------
# TF-IDF over character unigrams


@dataclass
class TfidfModel:
    vocabulary: dict[str, int]
    idf: np.ndarray
    document_count: int


def tfidf_fit(documents: list[str]) -> TfidfModel:
    """Build the vocabulary and smoothed idf: ln((1+n)/(1+df)) + 1."""
    non_empty = [d for d in documents if d]
    if not non_empty:
        raise ProbeDataError("cannot fit tf-idf on an empty corpus")
    df: dict[str, int] = {}
    for doc in documents:
        for char in set(doc):
            df[char] = df.get(char, 0) + 1
    vocabulary = {char: i for i, char in enumerate(sorted(df))}
    n = len(documents)
    idf = np.empty(len(vocabulary))
    for char, i in vocabulary.items():
        idf[i] = math.log((1 + n) / (1 + df[char])) + 1.0
    return TfidfModel(vocabulary=vocabulary, idf=idf, document_count=n)


def tfidf_transform(model: TfidfModel, document: str) -> dict[int, float]:
    """Sparse tf*idf weights; characters outside the vocabulary drop out."""
    counts: dict[int, int] = {}
    for char in document:
        index = model.vocabulary.get(char)
        if index is not None:
            counts[index] = counts.get(index, 0) + 1
    return {i: count * model.idf[i] for i, count in counts.items()}


# ---------------------------------------------------------------------------
# Multinomial Naive Bayes


@dataclass
class NbModel:
    class_labels: list[str]  # sorted; argmax ties resolve to the first
    class_log_priors: np.ndarray
    feature_log_likelihood: np.ndarray  # (n_classes, n_features)

    @property
    def n_features(self) -> int:
        return self.feature_log_likelihood.shape[1]


def nb_train(
    features: list[dict[int, float]],
    labels: list[str],
    n_features: int,
    alpha: float = 1.0,
) -> NbModel:
    """Standard multinomial NB with additive smoothing."""
    if not labels or len(features) != len(labels):
        raise ProbeDataError("features and labels must be non-empty and aligned")
    if alpha <= 0:
        raise ProbeDataError("alpha must be > 0")
    class_labels = sorted(set(labels))
    label_index = {label: i for i, label in enumerate(class_labels)}
    counts = np.zeros((len(class_labels), n_features))
    doc_counts = np.zeros(len(class_labels))
    for vector, label in zip(features, labels):
        row = label_index[label]
        doc_counts[row] += 1
        for index, value in vector.items():
            if index >= n_features:
                raise ProbeDataError(
                    f"feature index {index} out of range for {n_features} features"
                )
            counts[row, index] += value
    log_priors = np.log(doc_counts / doc_counts.sum())
    smoothed = counts + alpha
    log_likelihood = np.log(smoothed / smoothed.sum(axis=1, keepdims=True))
    return NbModel(
        class_labels=class_labels,
        class_log_priors=log_priors,
        feature_log_likelihood=log_likelihood,
    )


def nb_scores(model: NbModel, vector: dict[int, float]) -> np.ndarray:
    scores = model.class_log_priors.copy()
    for index, value in vector.items():
        if index >= model.n_features:
            raise ProbeDataError(
                f"feature index {index} out of range for {model.n_features} features"
            )
        scores += model.feature_log_likelihood[:, index] * value
    return scores


def nb_predict(model: NbModel, vector: dict[int, float]) -> str:
    """Argmax posterior; exact ties go to the lexicographically smallest label."""
    scores = nb_scores(model, vector)
    return model.class_labels[int(np.argmax(scores))]


# ---------------------------------------------------------------------------
# Probe driver


@dataclass
class ProbeResult:
    task: ProbeTask
    accuracy: float
    confusion_matrix: dict[str, dict[str, int]]
    predictions: list[dict]
    train_doc_ids: list[str]
    test_doc_ids: list[str]
    split_seed: int
    human_likeness: float | None = None
    meta: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "task": self.task.value,
            "accuracy": self.accuracy,
            "human_likeness": self.human_likeness,
            "confusion_matrix": self.confusion_matrix,
            "predictions": self.predictions,
            "split": {
                "seed": self.split_seed,
                "train_doc_ids": self.train_doc_ids,
                "test_doc_ids": self.test_doc_ids,
            },
            "meta": self.meta,
        }


def probe_documents_from_corpus(corpus: Corpus) -> list[ProbeDocument]:
    return [
        ProbeDocument(
            doc_id=p.poem_id,
            text=p.text,
            cipai_id=p.cipai_id,
            theme=p.theme.value,
            source="human",
        )
        for p in corpus
    ]


def probe_document_from_record(obj: dict, doc_id: str) -> ProbeDocument:
    """Adapt one benchmark journal row into a probe document."""
    theme = obj.get("theme", "")
    if isinstance(theme, Theme):
        theme = theme.value
    return ProbeDocument(
        doc_id=doc_id,
        text=obj.get("extracted_poem") or obj.get("text", ""),
        cipai_id=obj.get("cipai_id", ""),
        theme=theme,
        source="generated",
    )


def _label_for(task: ProbeTask, doc: ProbeDocument) -> str:
    if task is ProbeTask.CIPAI_ID:
        return doc.cipai_id
    if task is ProbeTask.THEME:
        return doc.theme
    return doc.source


def stratified_split(
    labels: list[str], seed: int, test_fraction: float = 0.2
) -> tuple[list[int], list[int]]:
    """Deterministic per-class split; every class keeps at least one
    document on each side (classes of size < 2 are rejected)."""
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    rng = random.Random(seed)
    train: list[int] = []
    test: list[int] = []
    for label in sorted(by_label):
        indices = by_label[label]
        if len(indices) < 2:
            raise ProbeDataError(
                f"class {label!r} has {len(indices)} document(s); need >= 2 to stratify"
            )
        shuffled = indices[:]
        rng.shuffle(shuffled)
        n_test = min(len(indices) - 1, max(1, round(test_fraction * len(indices))))
        test.extend(shuffled[:n_test])
        train.extend(shuffled[n_test:])
    return sorted(train), sorted(test)


def run_probe(
    task: ProbeTask,
    human_poems: list[ProbeDocument],
    generated_poems: list[ProbeDocument],
    split_seed: int,
    alpha: float = 1.0,
    test_fraction: float = 0.2,
) -> ProbeResult:
    """Train on a stratified 80/20 split of the combined set and report
    held-out accuracy, the confusion matrix, and per-document calls."""
    documents = sorted(human_poems + generated_poems, key=lambda d: d.doc_id)
    if not documents:
        raise ProbeDataError("no documents to probe")
    labels = [_label_for(task, d) for d in documents]
    train_idx, test_idx = stratified_split(labels, split_seed, test_fraction)

    tfidf = tfidf_fit([documents[i].text for i in train_idx])
    train_vectors = [tfidf_transform(tfidf, documents[i].text) for i in train_idx]
    model = nb_train(
        train_vectors, [labels[i] for i in train_idx], len(tfidf.vocabulary), alpha
    )

    label_set = sorted(set(labels))
    confusion = {true: {pred: 0 for pred in label_set} for true in label_set}
    predictions = []
    hits = 0
    for i in test_idx:
        predicted = nb_predict(model, tfidf_transform(tfidf, documents[i].text))
        confusion[labels[i]][predicted] += 1
        hit = predicted == labels[i]
        hits += hit
        predictions.append(
            {"doc_id": documents[i].doc_id, "true": labels[i], "predicted": predicted}
        )
    accuracy = hits / len(test_idx)
    return ProbeResult(
        task=task,
        accuracy=accuracy,
        confusion_matrix=confusion,
        predictions=predictions,
        train_doc_ids=[documents[i].doc_id for i in train_idx],
        test_doc_ids=[documents[i].doc_id for i in test_idx],
        split_seed=split_seed,
        human_likeness=(1.0 - accuracy) if task is ProbeTask.SOURCE_ATTRIBUTION else None,
        meta={
            "alpha": alpha,
            "test_fraction": test_fraction,
            "n_documents": len(documents),
            "n_classes": len(label_set),
        },
    )
