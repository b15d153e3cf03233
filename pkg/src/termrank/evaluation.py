"""Ranking evaluation: average precision at K and cross-validated
parameter selection by relative goodness."""

import itertools
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .corpus import lemmatize_word

__all__ = [
    "GoldStandard",
    "EvalResult",
    "load_gold",
    "choose_k",
    "avp",
    "param_grid",
    "param_key",
    "grid_search",
    "cv_select",
]


@dataclass(frozen=True)
class GoldStandard:
    name: str
    terms: frozenset

    def __post_init__(self):
        if not self.terms:
            raise DataError(f"gold standard {self.name!r} is empty")


def load_gold(path, name=None, lemmatize=False):
    """One expected term per line; spaces become underscores on load.

    ``lemmatize`` runs each word through the fallback lemmatizer, for gold
    files that are not already lemma-based.
    """
    path = Path(path)
    terms = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        words = line.strip().lower().split()
        if not words:
            continue
        if lemmatize:
            words = [lemmatize_word(w) for w in words]
        terms.add("_".join(words))
    return GoldStandard(name or path.stem, frozenset(terms))


def choose_k(cset, gold):
    """K = number of gold terms present among the candidates."""
    k = len(gold.terms & set(cset.candidates))
    if k == 0:
        raise DataError(
            f"no overlap between gold standard {gold.name!r} and the candidates"
        )
    return k


@dataclass
class EvalResult:
    avp: float
    k: int
    precision_at: list
    recall_at: list


def avp(ranking, gold, k):
    """Average precision over the top k with recall normalized by k,
    so a ranking with all reachable gold terms first scores exactly 1."""
    if k <= 0:
        raise DataError(f"K must be positive, got {k}")
    if k > len(ranking):
        raise DataError(f"K={k} exceeds ranking length {len(ranking)}")
    hits = 0
    precision_at = []
    recall_at = []
    hit_precision_sum = 0.0
    for i, canonical in enumerate(ranking[:k], start=1):
        if canonical in gold.terms:
            hits += 1
            hit_precision_sum += hits / i
        precision_at.append(hits / i)
        recall_at.append(hits / k)
    return EvalResult(hit_precision_sum / k, k, precision_at, recall_at)


# ---------------------------------------------------------------------------
# Parameter search
# ---------------------------------------------------------------------------

def param_grid(axes):
    """Cartesian product of ``{name: values}`` in the given axis order."""
    names = list(axes)
    combos = itertools.product(*(axes[name] for name in names))
    return [dict(zip(names, combo)) for combo in combos]


def param_key(params):
    """Hashable, order-independent identity of a parameter set."""
    return tuple(sorted(params.items()))


def grid_search(param_sets, dataset_ids, evaluate, cache=None):
    """Evaluate every parameter set on every dataset.

    ``evaluate(params, dataset_id)`` returns the AvP; ``cache`` (a mutable
    mapping) memoizes cells across calls.
    """
    results = {}
    for params in param_sets:
        key = param_key(params)
        for dataset in dataset_ids:
            cell = (key, dataset)
            if cache is not None and cell in cache:
                results[cell] = cache[cell]
                continue
            value = evaluate(params, dataset)
            results[cell] = value
            if cache is not None:
                cache[cell] = value
    return results


def cv_select(results, held_out=None):
    """Pick the parameter set with the best product of per-dataset
    relative goodness (AvP divided by the dataset's best AvP).

    Datasets whose best AvP is 0 carry no signal and are excluded with a
    warning.  Ties keep the earliest parameter set in ``results`` order.
    """
    param_order = []
    seen = set()
    datasets = []
    for key, dataset in results:
        if key not in seen:
            seen.add(key)
            param_order.append(key)
        if dataset != held_out and dataset not in datasets:
            datasets.append(dataset)
    if not param_order or not datasets:
        raise DataError("cv_select needs at least one parameter set and one "
                        "validation dataset")

    maxima = {}
    for dataset in datasets:
        try:
            maxima[dataset] = max(results[(key, dataset)] for key in param_order)
        except KeyError as exc:
            raise DataError(
                f"missing AvP for parameter set {exc.args[0]!r}"
            ) from exc
    usable = [d for d in datasets if maxima[d] > 0]
    for dataset in datasets:
        if maxima[dataset] <= 0:
            warnings.warn(f"cv_select: dataset {dataset!r} has max AvP 0; excluded")

    best_key = None
    best_goodness = -1.0
    for key in param_order:
        goodness = 1.0
        for dataset in usable:
            goodness *= results[(key, dataset)] / maxima[dataset]
        if goodness > best_goodness:
            best_goodness = goodness
            best_key = key
    return best_key
