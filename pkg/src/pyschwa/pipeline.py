"""
Glue between lexicon entries, feature encoding, models and scoring.

Learned models and rule sets are wrapped in predictor objects with a common
interface, so both are evaluated and applied through the same code path.
"""

import logging
from collections import namedtuple
from itertools import product

import numpy as np

from pyschwa import models
from pyschwa.align import align_lexicon, apply_deletions
from pyschwa.baseline import RuleSet, rule_predict
from pyschwa.evaluation import evaluate, weakened_slice
from pyschwa.features import FeatureConfig, FeatureEncoder, FeatureMatrix
from pyschwa.lexicon import split_lexicon
from pyschwa.types import DELETED


__all__ = [
    'Dataset',
    'build_dataset',
    'split_dataset',
    'ModelPredictor',
    'RulePredictor',
    'make_predictor',
    'train_model',
    'evaluate_predictor',
    'transcribe',
    'grid_search',
]

logger = logging.getLogger(__name__)


class Dataset(namedtuple('Dataset', ['entries', 'instances'])):

    """Lexicon entries together with their labeled schwa instances."""

    __slots__ = ()

    @property
    def by_id(self) -> dict:
        return {e.id: e for e in self.entries}

    @property
    def labels(self):
        return np.array([i.label for i in self.instances], dtype=np.int64)

    def restrict(self, entries):
        """Sub-dataset of the given entries."""
        entries = list(entries)
        ids = {e.id for e in entries}
        return Dataset(entries,
                       [i for i in self.instances if i.entry_id in ids])


def build_dataset(entries, weak_policy='retain'):
    """
    Align ``entries``; discarded entries are left out of the dataset.

    :returns: ``(dataset, discarded)``
    """
    entries = list(entries)
    instances, discarded = align_lexicon(entries, weak_policy)
    dropped = {entry.id for entry, _ in discarded}
    kept = [e for e in entries if e.id not in dropped]
    return Dataset(kept, instances), discarded


def split_dataset(dataset, spec):
    """Split by entry into train, dev and test datasets."""
    return tuple(dataset.restrict(part)
                 for part in split_lexicon(dataset.entries, spec))


class ModelPredictor:

    """Predictor backed by a trained model and its stored encoding."""

    def __init__(self, model, name=None):
        self.model = model
        self.name = name or model.kind
        self.encoder = FeatureEncoder.from_dict(model.encoding)

    def matrix(self, instances, entries):
        return self.encoder.matrix(instances, entries)

    def predict(self, instances, entries):
        """Labels of ``instances``; ``entries`` maps ids to entries."""
        if not instances:
            return np.zeros(0, dtype=np.int64)
        return self.model.predict(self.matrix(instances, entries))

    def predict_orth(self, orth, indices):
        """Labels of the schwas at ``indices`` of one token sequence."""
        if not indices:
            return np.zeros(0, dtype=np.int64)
        X = FeatureMatrix.from_rows(
            (self.encoder.encode_at(orth, i) for i in indices),
            self.encoder.dimension)
        return self.model.predict(X)


class RulePredictor:

    """Predictor backed by a :class:`~pyschwa.baseline.RuleSet`."""

    def __init__(self, ruleset: RuleSet, name='baseline'):
        self.ruleset = ruleset
        self.name = name

    def predict(self, instances, entries):
        return np.array([
            rule_predict(self.ruleset, entries[i.entry_id].orth, i.orth_index)
            for i in instances
        ], dtype=np.int64)

    def predict_orth(self, orth, indices):
        return np.array([rule_predict(self.ruleset, orth, i) for i in indices],
                        dtype=np.int64)


def make_predictor(obj, name=None):
    """Wrap a model or rule set in a predictor."""
    if isinstance(obj, RuleSet):
        return RulePredictor(obj, name or 'baseline')
    return ModelPredictor(obj, name)


def train_model(kind, train, dev=None, config=FeatureConfig(), hyper=None,
                n_jobs=1):
    """
    Build the vocabulary from ``train`` and fit a model of the given kind.

    :param train: training :class:`Dataset`
    :param dev: optional dev :class:`Dataset`
    :returns: ``(model, report)``
    """
    encoder = FeatureEncoder.from_entries(train.entries, config,
                                          train.instances)
    X = encoder.matrix(train.instances, train.by_id)
    dev_pair = None
    if dev is not None and dev.instances:
        dev_pair = (encoder.matrix(dev.instances, dev.by_id), dev.labels)
    logger.info("training %s on %d schwas, dimension %d",
                kind, len(X), encoder.dimension)
    return models.train(kind, X, train.labels, dev_pair, hyper,
                        encoding=encoder.to_dict(), n_jobs=n_jobs)


def evaluate_predictor(predictor, dataset):
    """
    :returns: ``(metrics, weak_metrics, predictions)``, ``weak_metrics`` is
              ``None`` without weak schwas
    """
    predictions = predictor.predict(dataset.instances, dataset.by_id)
    return (evaluate(predictions, dataset.instances),
            weakened_slice(predictions, dataset.instances),
            predictions)


def transcribe(predictor, orth) -> tuple:
    """Phonemic tokens of ``orth``: the schwas classified deleted removed."""
    indices = [i for i, t in enumerate(orth) if t.is_inherent]
    labels = predictor.predict_orth(orth, indices)
    return apply_deletions(
        orth, [i for i, label in zip(indices, labels) if label == DELETED])


def grid_search(kind, train, dev, windows=(3, 4, 5), phon_features=(False, True),
                hyper=None, n_jobs=1):
    """
    Train one model per window size and feature setting and score each on
    ``dev``.

    :returns: list of ``(FeatureConfig, Metrics)``
    """
    results = []
    for window, phon in product(windows, phon_features):
        config = FeatureConfig(window, window, phon)
        model, _ = train_model(kind, train, None, config, hyper, n_jobs)
        metrics, _, _ = evaluate_predictor(ModelPredictor(model), dev)
        logger.info("grid window=%d phon_features=%s: accuracy %s",
                    window, phon, metrics.accuracy)
        results.append((config, metrics))
    return results
