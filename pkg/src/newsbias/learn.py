"""Classifier training and stratified cross-validated evaluation.

Three model families are implemented from first principles so that
every quantity is inspectable: a linear SVM fit by Pegasos-style
stochastic sub-gradient descent on the hinge loss, Naive Bayes in
Bernoulli and multinomial variants, and a C4.5-flavoured decision tree
over presence/absence splits. Evaluation is stratified k-fold
cross-validation with optional under-sampling of the training portion.

Determinism: every randomized step keys off an explicit 64-bit seed via
the generators in newsbias.rng. cross_validate derives its sub-seeds
from the master seed with SplitMix64, consuming them in a fixed order
(fold shuffle first, then one under-sampling seed and one training seed
per fold), so a report is byte-for-byte reproducible.

Ties (zero scores, equal posteriors, equal leaf counts) always resolve
to "female", the lexicographically smaller label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import FEMALE, GENDERS, MALE
from .errors import ConfigError, DataError
from .features import FeatureSpace, FeatureVector
from .rng import Rng, derive_seeds

DEFAULT_SVM_LAMBDA = 1e-4
DEFAULT_SVM_EPOCHS = 20
DEFAULT_NB_ALPHA = 1.0
DEFAULT_TREE_MAX_DEPTH = 10
DEFAULT_TREE_MIN_LEAF = 2

CLASSIFIERS = ("svm", "nb-bernoulli", "nb-multinomial", "tree")

# guards against float noise masquerading as information gain
_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class Dataset:
    """Parallel vectors/labels over one feature space."""

    vectors: tuple[FeatureVector, ...]
    labels: tuple[str, ...]
    space: FeatureSpace

    def __post_init__(self):
        if len(self.vectors) != len(self.labels):
            raise ValueError("vectors and labels must be parallel")
        if len(self.vectors) < 2:
            raise ValueError("a dataset needs at least two instances")
        for label in self.labels:
            if label not in GENDERS:
                raise ValueError(f"unknown label {label!r}")

    def __len__(self) -> int:
        return len(self.vectors)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        return Dataset(
            vectors=tuple(self.vectors[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
            space=self.space,
        )

    def class_counts(self) -> dict[str, int]:
        counts = {FEMALE: 0, MALE: 0}
        for label in self.labels:
            counts[label] += 1
        return counts


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Dense linear separator; scores > 0 (and exact ties) mean female."""

    weights: np.ndarray
    bias: float
    positive_class: str = FEMALE
    epoch_objectives: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class BayesModel:
    variant: str
    class_log_prior: np.ndarray          # aligned with GENDERS
    feature_log_prob: np.ndarray         # (2, V): log P(feature | class)
    absent_log_prob: np.ndarray | None   # (2, V): bernoulli only
    alpha: float
    n_features: int


@dataclass(frozen=True)
class TreeNode:
    """Internal node (feature split) or leaf (feature is None)."""

    n_female: int
    n_male: int
    feature: int | None = None
    present: "TreeNode | None" = None
    absent: "TreeNode | None" = None

    @property
    def label(self) -> str:
        return FEMALE if self.n_female >= self.n_male else MALE


@dataclass(frozen=True)
class TreeModel:
    root: TreeNode
    max_depth: int
    min_leaf: int
    n_features: int


@dataclass(frozen=True)
class CVReport:
    """Per-fold accuracies plus an aggregate confusion matrix."""

    per_fold_accuracy: tuple[float, ...]
    mean_accuracy: float
    confusion: dict
    seed: int
    descriptor: str
    n_instances: int

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "seed": self.seed,
            "n_instances": self.n_instances,
            "per_fold_accuracy": list(self.per_fold_accuracy),
            "mean_accuracy": self.mean_accuracy,
            "confusion": self.confusion,
        }


def _as_arrays(vector: FeatureVector) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.asarray(vector.ids, dtype=np.int64),
        np.asarray(vector.values, dtype=np.float64),
    )


def _check_dimensions(vector: FeatureVector, n_features: int) -> None:
    if vector.ids and vector.ids[-1] >= n_features:
        raise ValueError(
            f"vector id {vector.ids[-1]} out of range for {n_features} features"
        )


def undersample(dataset: Dataset, seed: int) -> Dataset:
    """Balance classes by uniform down-sampling of the majority class.

    The minority class is kept whole; the surviving subset preserves
    dataset order, so the result is a sub-multiset of the input and is
    identical for identical seeds.
    """
    counts = dataset.class_counts()
    if counts[FEMALE] == 0 or counts[MALE] == 0:
        raise DataError("undersample needs both classes present")
    if counts[FEMALE] == counts[MALE]:
        return dataset
    minority = FEMALE if counts[FEMALE] < counts[MALE] else MALE
    majority_idx = [i for i, lab in enumerate(dataset.labels) if lab != minority]
    keep = set(i for i, lab in enumerate(dataset.labels) if lab == minority)
    rng = Rng(seed)
    chosen = rng.sample_indices(len(majority_idx), counts[minority])
    keep.update(majority_idx[p] for p in chosen)
    return dataset.subset(sorted(keep))


def stratified_folds(dataset: Dataset, k: int, seed: int) -> list[list[int]]:
    """Partition indices into k folds with per-fold class counts within 1 of proportional.

    Each class's indices are shuffled with the seeded generator (females
    first, males second, one shared stream) and dealt round-robin.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = Rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for label in GENDERS:
        idx = [i for i, lab in enumerate(dataset.labels) if lab == label]
        if len(idx) < k:
            raise DataError(f"class {label!r} has {len(idx)} members, fewer than k={k}")
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            folds[pos % k].append(i)
    return [sorted(f) for f in folds]


def svm_objective(
    weights: np.ndarray, bias: float, dataset: Dataset, lam: float
) -> float:
    """Regularized hinge objective: lam/2 ||w||^2 + mean hinge loss."""
    total = 0.0
    for vector, label in zip(dataset.vectors, dataset.labels):
        ids, values = _as_arrays(vector)
        margin = float(weights[ids] @ values) + bias if len(ids) else bias
        y = 1.0 if label == FEMALE else -1.0
        total += max(0.0, 1.0 - y * margin)
    return 0.5 * lam * float(weights @ weights) + total / len(dataset)


def train_svm(
    dataset: Dataset,
    *,
    lam: float = DEFAULT_SVM_LAMBDA,
    epochs: int = DEFAULT_SVM_EPOCHS,
    seed: int = 0,
) -> LinearModel:
    """Pegasos-style SGD on the hinge loss with learning rate 1/(lam*t).

    One pass per epoch in seeded-shuffled order; weights are kept in
    scaled form so per-step decay is O(nnz). Iterates are projected onto
    the ball of radius 1/sqrt(lam) (the bias is unregularized and not
    projected). The returned model is the epoch-end snapshot with the
    lowest objective; the raw epoch-end objective values are recorded on
    the model for inspection.
    """
    if lam <= 0 or epochs < 1:
        raise ConfigError("svm needs lam > 0 and epochs >= 1")
    n = len(dataset)
    dim = len(dataset.space)
    xs = [_as_arrays(v) for v in dataset.vectors]
    for v in dataset.vectors:
        _check_dimensions(v, dim)
    ys = np.array([1.0 if lab == FEMALE else -1.0 for lab in dataset.labels])

    v = np.zeros(dim)
    scale = 1.0
    vnorm2 = 0.0  # ||v||^2, maintained incrementally
    bias = 0.0
    radius2 = 1.0 / lam

    rng = Rng(seed)
    order = list(range(n))
    t = 1
    best: tuple[float, np.ndarray, float] | None = None
    history: list[float] = []
    for _ in range(epochs):
        rng.shuffle(order)
        for i in order:
            t += 1
            eta = 1.0 / (lam * t)
            ids, values = xs[i]
            y = ys[i]
            margin = scale * float(v[ids] @ values) + bias if len(ids) else bias
            scale *= 1.0 - 1.0 / t  # (1 - eta*lam) decay
            if y * margin < 1.0:
                old = v[ids]
                new = old + (eta * y / scale) * values
                vnorm2 += float(new @ new) - float(old @ old)
                v[ids] = new
                bias += eta * y
            wnorm2 = scale * scale * vnorm2
            if wnorm2 > radius2:
                scale *= math.sqrt(radius2 / wnorm2)
            if scale < 1e-60:  # renormalize to avoid underflow
                v *= scale
                vnorm2 *= scale * scale
                scale = 1.0
        weights = scale * v
        objective = svm_objective(weights, bias, dataset, lam)
        history.append(objective)
        if best is None or objective < best[0]:
            best = (objective, weights.copy(), bias)
    assert best is not None
    return LinearModel(
        weights=best[1],
        bias=best[2],
        positive_class=FEMALE,
        epoch_objectives=tuple(history),
    )


def train_nb(
    dataset: Dataset, variant: str = "bernoulli", alpha: float = DEFAULT_NB_ALPHA
) -> BayesModel:
    """Naive Bayes with Laplace smoothing alpha and empirical class priors."""
    if variant not in ("bernoulli", "multinomial"):
        raise ConfigError(f"unknown naive bayes variant {variant!r}")
    if alpha <= 0:
        raise ConfigError("alpha must be positive")
    reps = {v.representation for v in dataset.vectors}
    if variant == "bernoulli" and reps != {"boolean"}:
        raise ConfigError("bernoulli naive bayes requires boolean vectors")
    if variant == "multinomial" and not reps <= {"boolean", "count"}:
        raise ConfigError("multinomial naive bayes requires count (or boolean) vectors")

    dim = len(dataset.space)
    counts = dataset.class_counts()
    if counts[FEMALE] == 0 or counts[MALE] == 0:
        raise DataError("training needs both classes present")
    n = len(dataset)
    prior = np.array([counts[g] / n for g in GENDERS])

    accum = np.zeros((2, dim))
    for vector, label in zip(dataset.vectors, dataset.labels):
        _check_dimensions(vector, dim)
        row = 0 if label == FEMALE else 1
        ids, values = _as_arrays(vector)
        if variant == "bernoulli":
            accum[row][ids] += 1.0
        else:
            accum[row][ids] += values

    if variant == "bernoulli":
        class_n = np.array([[counts[FEMALE]], [counts[MALE]]], dtype=float)
        theta = (accum + alpha) / (class_n + 2.0 * alpha)
        return BayesModel(
            variant=variant,
            class_log_prior=np.log(prior),
            feature_log_prob=np.log(theta),
            absent_log_prob=np.log1p(-theta),
            alpha=alpha,
            n_features=dim,
        )
    totals = accum.sum(axis=1, keepdims=True)
    theta = (accum + alpha) / (totals + alpha * dim)
    return BayesModel(
        variant=variant,
        class_log_prior=np.log(prior),
        feature_log_prob=np.log(theta),
        absent_log_prob=None,
        alpha=alpha,
        n_features=dim,
    )


def nb_log_joint(model: BayesModel, vector: FeatureVector) -> np.ndarray:
    _check_dimensions(vector, model.n_features)
    ids, values = _as_arrays(vector)
    if model.variant == "bernoulli":
        joint = model.class_log_prior + model.absent_log_prob.sum(axis=1)
        if len(ids):
            delta = model.feature_log_prob[:, ids] - model.absent_log_prob[:, ids]
            joint = joint + delta.sum(axis=1)
        return joint
    joint = model.class_log_prior.copy()
    if len(ids):
        joint = joint + model.feature_log_prob[:, ids] @ values
    return joint


def nb_log_posterior(model: BayesModel, vector: FeatureVector) -> dict[str, float]:
    """Normalized log P(class | vector) for both classes."""
    joint = nb_log_joint(model, vector)
    m = float(joint.max())
    norm = m + math.log(float(np.exp(joint - m).sum()))
    return {g: float(joint[i] - norm) for i, g in enumerate(GENDERS)}


def _entropy(counts_a: np.ndarray, counts_b: np.ndarray) -> np.ndarray:
    total = counts_a + counts_b
    out = np.zeros_like(total, dtype=float)
    nz = total > 0
    for part in (counts_a, counts_b):
        p = np.zeros_like(out)
        p[nz] = part[nz] / total[nz]
        pos = p > 0
        out[pos] -= p[pos] * np.log2(p[pos])
    return out


def _grow_tree(
    member_ids: list[np.ndarray],
    labels: np.ndarray,
    indices: np.ndarray,
    depth: int,
    max_depth: int,
    min_leaf: int,
    dim: int,
) -> TreeNode:
    nf = int((labels[indices] == 0).sum())
    nm = len(indices) - nf
    if nf == 0 or nm == 0 or depth >= max_depth or len(indices) < 2 * min_leaf:
        return TreeNode(nf, nm)

    f_counts = np.zeros(dim)
    m_counts = np.zeros(dim)
    for i in indices:
        target = f_counts if labels[i] == 0 else m_counts
        ids = member_ids[i]
        if len(ids):
            target[ids] += 1.0

    n = float(len(indices))
    pf, pm = f_counts, m_counts
    af, am = nf - pf, nm - pm
    n_present = pf + pm
    n_absent = af + am
    node_entropy = _entropy(np.array([float(nf)]), np.array([float(nm)]))[0]
    child_entropy = (
        n_present * _entropy(pf, pm) + n_absent * _entropy(af, am)
    ) / n
    gain = node_entropy - child_entropy
    split_info = _entropy(n_present, n_absent)
    valid = (n_present > 0) & (n_absent > 0) & (gain > _GAIN_EPS) & (split_info > 0)
    if not valid.any():
        return TreeNode(nf, nm)
    ratio = np.where(valid, gain / np.where(split_info > 0, split_info, 1.0), -np.inf)
    feature = int(np.argmax(ratio))  # argmax takes the lowest id on ties

    present_mask = np.array(
        [bool(len(member_ids[i])) and _contains(member_ids[i], feature) for i in indices]
    )
    present_idx = indices[present_mask]
    absent_idx = indices[~present_mask]
    return TreeNode(
        n_female=nf,
        n_male=nm,
        feature=feature,
        present=_grow_tree(member_ids, labels, present_idx, depth + 1, max_depth, min_leaf, dim),
        absent=_grow_tree(member_ids, labels, absent_idx, depth + 1, max_depth, min_leaf, dim),
    )


def _contains(sorted_ids: np.ndarray, feature: int) -> bool:
    pos = np.searchsorted(sorted_ids, feature)
    return pos < len(sorted_ids) and sorted_ids[pos] == feature


def train_tree(
    dataset: Dataset,
    *,
    max_depth: int = DEFAULT_TREE_MAX_DEPTH,
    min_leaf: int = DEFAULT_TREE_MIN_LEAF,
) -> TreeModel:
    """Greedy top-down induction maximizing information gain ratio.

    Splits are on feature presence/absence, so vectors must be boolean.
    Growth stops at purity, zero gain, max_depth, or nodes smaller than
    2*min_leaf; leaves predict their majority label (ties: female).
    """
    if max_depth < 1 or min_leaf < 1:
        raise ConfigError("tree needs max_depth >= 1 and min_leaf >= 1")
    reps = {v.representation for v in dataset.vectors}
    if reps != {"boolean"}:
        raise ConfigError("decision tree requires boolean vectors")
    dim = len(dataset.space)
    for v in dataset.vectors:
        _check_dimensions(v, dim)
    member_ids = [np.asarray(v.ids, dtype=np.int64) for v in dataset.vectors]
    labels = np.array([0 if lab == FEMALE else 1 for lab in dataset.labels])
    root = _grow_tree(
        member_ids, labels, np.arange(len(dataset)), 0, max_depth, min_leaf, dim
    )
    return TreeModel(root=root, max_depth=max_depth, min_leaf=min_leaf, n_features=dim)


def predict(model, vector: FeatureVector) -> str:
    """Predicted label for one vector; all ties resolve to female."""
    if isinstance(model, LinearModel):
        _check_dimensions(vector, len(model.weights))
        ids, values = _as_arrays(vector)
        score = float(model.weights[ids] @ values) + model.bias if len(ids) else model.bias
        return FEMALE if score >= 0 else MALE
    if isinstance(model, BayesModel):
        joint = nb_log_joint(model, vector)
        return FEMALE if joint[0] >= joint[1] else MALE
    if isinstance(model, TreeModel):
        _check_dimensions(vector, model.n_features)
        ids = np.asarray(vector.ids, dtype=np.int64)
        node = model.root
        while node.feature is not None:
            node = node.present if _contains(ids, node.feature) else node.absent
        return node.label
    raise TypeError(f"unknown model type {type(model).__name__}")


def _train_for(classifier: str, dataset: Dataset, params: dict, seed: int):
    if classifier == "svm":
        return train_svm(
            dataset,
            lam=params.get("lam", DEFAULT_SVM_LAMBDA),
            epochs=params.get("epochs", DEFAULT_SVM_EPOCHS),
            seed=seed,
        )
    if classifier in ("nb-bernoulli", "nb-multinomial"):
        return train_nb(
            dataset,
            variant=classifier.split("-", 1)[1],
            alpha=params.get("alpha", DEFAULT_NB_ALPHA),
        )
    if classifier == "tree":
        return train_tree(
            dataset,
            max_depth=params.get("max_depth", DEFAULT_TREE_MAX_DEPTH),
            min_leaf=params.get("min_leaf", DEFAULT_TREE_MIN_LEAF),
        )
    raise ConfigError(f"unknown classifier {classifier!r}")


def train_classifier(classifier: str, dataset: Dataset, params: dict | None = None, seed: int = 0):
    return _train_for(classifier, dataset, params or {}, seed)


def cross_validate(
    dataset: Dataset,
    classifier: str,
    *,
    params: dict | None = None,
    k: int = 10,
    seed: int = 0,
    undersample_train: bool = False,
    descriptor: str = "",
) -> CVReport:
    """Stratified k-fold evaluation; test folds are never under-sampled."""
    params = params or {}
    sub_seeds = derive_seeds(seed, 1 + 2 * k)
    folds = stratified_folds(dataset, k, sub_seeds[0])
    confusion = {a: {p: 0 for p in GENDERS} for a in GENDERS}
    per_fold: list[float] = []
    for fold_no, test_idx in enumerate(folds):
        test_set = set(test_idx)
        train_idx = [i for i in range(len(dataset)) if i not in test_set]
        train_ds = dataset.subset(train_idx)
        if undersample_train:
            train_ds = undersample(train_ds, sub_seeds[1 + 2 * fold_no])
        model = _train_for(classifier, train_ds, params, sub_seeds[2 + 2 * fold_no])
        correct = 0
        for i in test_idx:
            got = predict(model, dataset.vectors[i])
            actual = dataset.labels[i]
            confusion[actual][got] += 1
            if got == actual:
                correct += 1
        per_fold.append(correct / len(test_idx))
    return CVReport(
        per_fold_accuracy=tuple(per_fold),
        mean_accuracy=sum(per_fold) / len(per_fold),
        confusion=confusion,
        seed=seed,
        descriptor=descriptor,
        n_instances=len(dataset),
    )


def majority_baseline(dataset: Dataset) -> float:
    """Accuracy of always predicting the most frequent class."""
    counts = dataset.class_counts()
    return max(counts.values()) / len(dataset)
