"""Bernoulli naive Bayes over fingerprint bits for target ranking.

Counts are stored as exact integers so a saved model reloads to
bit-identical predictions. Scoring uses the standard decomposition

    score(c) = log P(c) + sum_j log(1 - P(j|c)) + sum_{j set} logit-ish shift

so a prediction costs O(popcount) per class after one vectorized pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chemserve.errors import EmptyTrainingSet, FormatError, InvalidParameter
from chemserve.molgraph import Molecule
from chemserve.search.fingerprint import Fingerprint, fingerprint

MAGIC = "CHEMSERVE-NB"
SUPPORTED_VERSIONS = (1,)


@dataclass(frozen=True, eq=False)
class NBModel:
    version: int
    radius: int
    nbits: int
    alpha: float
    classes: tuple[str, ...]  # target ids, sorted
    class_doc_count: np.ndarray  # shape (K,), int64
    class_bit_count: np.ndarray  # shape (K, nbits), int64
    total_docs: int

    def __post_init__(self):
        if len(self.classes) == 0:
            raise InvalidParameter("model needs at least one class")
        if int(self.class_doc_count.sum()) != self.total_docs:
            raise InvalidParameter("class document counts do not sum to total_docs")
        if ((self.class_bit_count < 0) | (self.class_bit_count > self.class_doc_count[:, None])).any():
            raise InvalidParameter("bit counts must lie in [0, class doc count]")

    def __eq__(self, other) -> bool:
        if not isinstance(other, NBModel):
            return NotImplemented
        return (
            self.version == other.version
            and self.radius == other.radius
            and self.nbits == other.nbits
            and self.alpha == other.alpha
            and self.classes == other.classes
            and self.total_docs == other.total_docs
            and np.array_equal(self.class_doc_count, other.class_doc_count)
            and np.array_equal(self.class_bit_count, other.class_bit_count)
        )


@dataclass(frozen=True)
class Prediction:
    target_chembl_id: str
    log_score: float
    probability: float


def train(
    examples: list[tuple[Fingerprint, str]],
    alpha: float = 1.0,
    radius: int = 2,
) -> NBModel:
    """Fit class priors and per-bit Laplace-smoothed likelihood counts.

    `radius` must be the radius the example fingerprints were computed at;
    it is carried so prediction can fingerprint queries consistently.
    """
    if alpha <= 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    if not examples:
        raise EmptyTrainingSet("no training examples")
    nbits = examples[0][0].nbits
    if any(fp.nbits != nbits for fp, _ in examples):
        raise InvalidParameter("all example fingerprints must share nbits")

    classes = tuple(sorted({label for _, label in examples}))
    class_index = {label: i for i, label in enumerate(classes)}
    doc_count = np.zeros(len(classes), dtype=np.int64)
    bit_count = np.zeros((len(classes), nbits), dtype=np.int64)
    for fp, label in examples:
        row = class_index[label]
        doc_count[row] += 1
        bits = fp.bits
        while bits:
            low = bits & -bits
            bit_count[row, low.bit_length() - 1] += 1
            bits ^= low
    return NBModel(
        version=1,
        radius=radius,
        nbits=nbits,
        alpha=alpha,
        classes=classes,
        class_doc_count=doc_count,
        class_bit_count=bit_count,
        total_docs=len(examples),
    )


def _log_likelihoods(model: NBModel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(log prior, per-class sum of log(1-P), log P - log(1-P) per bit)."""
    n_c = model.class_doc_count.astype(np.float64)[:, None]
    p = (model.class_bit_count + model.alpha) / (n_c + 2 * model.alpha)
    log_p = np.log(p)
    log_q = np.log1p(-p)
    prior = np.log(model.class_doc_count / model.total_docs)
    return prior, log_q.sum(axis=1), log_p - log_q


def score_bits(model: NBModel, bits: int) -> np.ndarray:
    """Unnormalized log posterior per class for a set of fingerprint bits."""
    prior, base, shift = _log_likelihoods(model)
    scores = prior + base
    b = bits
    while b:
        low = b & -b
        scores = scores + shift[:, low.bit_length() - 1]
        b ^= low
    return scores


def predict(model: NBModel, mol: Molecule, top_k: int = 10) -> list[Prediction]:
    """Rank likely targets for a structure; probabilities sum to 1 over all classes."""
    if top_k < 1:
        raise InvalidParameter(f"top_k must be >= 1, got {top_k}")
    fp = fingerprint(mol, model.radius, model.nbits)
    scores = score_bits(model, fp.bits)
    peak = scores.max()
    probs = np.exp(scores - (peak + np.log(np.exp(scores - peak).sum())))
    ranked = sorted(
        range(len(model.classes)), key=lambda i: (-scores[i], model.classes[i])
    )
    return [
        Prediction(model.classes[i], float(scores[i]), float(probs[i]))
        for i in ranked[:top_k]
    ]


def save_model(model: NBModel, path: str) -> None:
    """Write the self-describing text format (magic, dims, sparse counts)."""
    lines = [
        MAGIC,
        f"version {model.version}",
        f"radius {model.radius}",
        f"nbits {model.nbits}",
        f"alpha {model.alpha!r}",
        f"total_docs {model.total_docs}",
        f"classes {len(model.classes)}",
    ]
    for i, label in enumerate(model.classes):
        lines.append(f"class {label} {int(model.class_doc_count[i])}")
        row = model.class_bit_count[i]
        nonzero = np.flatnonzero(row)
        lines.append("bits " + " ".join(f"{j}:{int(row[j])}" for j in nonzero))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path: str) -> NBModel:
    """Inverse of save_model; rejects unknown magic or version."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != MAGIC:
        raise FormatError(f"not a {MAGIC} file")

    def take(idx: int, key: str) -> str:
        if idx >= len(lines):
            raise FormatError(f"missing {key} line", line=idx + 1)
        parts = lines[idx].split(None, 1)
        if len(parts) != 2 or parts[0] != key:
            raise FormatError(f"expected {key} line", line=idx + 1)
        return parts[1]

    try:
        version = int(take(1, "version"))
    except ValueError:
        raise FormatError("version is not an integer", line=2) from None
    if version not in SUPPORTED_VERSIONS:
        raise FormatError(
            f"unsupported version {version}; supported: {', '.join(map(str, SUPPORTED_VERSIONS))}"
        )
    try:
        radius = int(take(2, "radius"))
        nbits = int(take(3, "nbits"))
        alpha = float(take(4, "alpha"))
        total_docs = int(take(5, "total_docs"))
        n_classes = int(take(6, "classes"))
    except ValueError as exc:
        raise FormatError(f"malformed header: {exc}") from None

    classes: list[str] = []
    doc_count = np.zeros(n_classes, dtype=np.int64)
    bit_count = np.zeros((n_classes, nbits), dtype=np.int64)
    idx = 7
    for row in range(n_classes):
        head = take(idx, "class").rsplit(" ", 1)
        if len(head) != 2:
            raise FormatError("malformed class line", line=idx + 1)
        classes.append(head[0])
        try:
            doc_count[row] = int(head[1])
        except ValueError:
            raise FormatError("class count is not an integer", line=idx + 1) from None
        idx += 1
        if idx >= len(lines) or not lines[idx].startswith("bits"):
            raise FormatError("expected bits line", line=idx + 1)
        body = lines[idx][4:].strip()
        if body:
            for pair in body.split():
                j, _, count = pair.partition(":")
                try:
                    bit_count[row, int(j)] = int(count)
                except (ValueError, IndexError):
                    raise FormatError(f"malformed bits entry {pair!r}", line=idx + 1) from None
        idx += 1

    try:
        return NBModel(
            version=version,
            radius=radius,
            nbits=nbits,
            alpha=alpha,
            classes=tuple(classes),
            class_doc_count=doc_count,
            class_bit_count=bit_count,
            total_docs=total_docs,
        )
    except InvalidParameter as exc:
        raise FormatError(f"inconsistent model file: {exc}") from None
