"""
Tests for the functionality in :mod:`pyschwa.pipeline`.
"""

import numpy as np
from numpy.testing import assert_equal
from pytest import fixture

from pyschwa.baseline import load_rules
from pyschwa.features import FeatureConfig
from pyschwa.lexicon import SplitSpec
from pyschwa.models import GbdtHyper, LogisticHyper
from pyschwa.pipeline import (
    Dataset, build_dataset, split_dataset, ModelPredictor, RulePredictor,
    make_predictor, train_model, evaluate_predictor, transcribe, grid_search)
from pyschwa.script import decode_devanagari, parse_token_string, render
from pyschwa.synthetic import generate_corpus
from pyschwa.types import LexEntry


@fixture(scope='module')
def dataset():
    dataset, discarded = build_dataset(generate_corpus(600, seed=11))
    assert discarded == []
    return dataset


@fixture(scope='module')
def parts(dataset):
    return split_dataset(dataset, SplitSpec(seed=2))


@fixture(scope='module')
def gbdt(parts):
    train, dev, _ = parts
    model, _ = train_model('gbdt', train, dev, FeatureConfig(3, 3),
                           GbdtHyper(rounds=40, max_depth=5))
    return model


def test_build_dataset_discards():
    entries = [
        LexEntry(0, 'a', parse_token_string('k a l a'),
                 parse_token_string('k a l')),
        LexEntry(1, 'b', parse_token_string('k a'), parse_token_string('g')),
    ]
    dataset, discarded = build_dataset(entries)
    assert [e.id for e in dataset.entries] == [0]
    assert len(dataset.instances) == 2
    assert_equal(dataset.labels, [1, 0])
    assert [e.id for e, _ in discarded] == [1]


def test_split_dataset(dataset, parts):
    assert sum(len(p.entries) for p in parts) == len(dataset.entries)
    assert sum(len(p.instances) for p in parts) == len(dataset.instances)
    for part in parts:
        ids = {e.id for e in part.entries}
        assert all(i.entry_id in ids for i in part.instances)


def test_restrict(dataset):
    sub = dataset.restrict(dataset.entries[:10])
    assert isinstance(sub, Dataset)
    assert {i.entry_id for i in sub.instances} <= set(range(10))


def test_model_predictor(parts, gbdt):
    _, _, test = parts
    predictor = make_predictor(gbdt)
    assert isinstance(predictor, ModelPredictor)
    assert predictor.name == 'gbdt'
    assert predictor.encoder.config == FeatureConfig(3, 3)
    metrics, weak, predictions = evaluate_predictor(predictor, test)
    assert weak is None
    assert len(predictions) == len(test.instances)
    # the word-final rule alone beats labeling every schwa retained
    assert metrics.accuracy > np.mean(test.labels == 1)
    assert_equal(predictor.predict([], {}), [])


def test_predict_orth_matches_predict(parts, gbdt):
    _, _, test = parts
    predictor = ModelPredictor(gbdt)
    by_id = test.by_id
    batch = predictor.predict(test.instances, by_id)
    single = [predictor.predict_orth(by_id[i.entry_id].orth, [i.orth_index])[0]
              for i in test.instances]
    assert_equal(batch, single)


def test_rule_predictor(dataset):
    predictor = make_predictor(load_rules())
    assert isinstance(predictor, RulePredictor)
    assert predictor.name == 'baseline'
    metrics, _, _ = evaluate_predictor(predictor, dataset)
    assert metrics.accuracy == 1.0


def test_transcribe():
    rules = make_predictor(load_rules())
    assert render(transcribe(rules, decode_devanagari('पेपर'))) == 'p e p a r'
    assert transcribe(rules, ()) == ()
    orth = parse_token_string('k aa l ii')
    assert transcribe(rules, orth) == orth


def test_transcribe_drops_deleted_schwas(parts, gbdt):
    _, _, test = parts
    model = make_predictor(gbdt)
    for e in test.entries[:30]:
        indices = [i for i, t in enumerate(e.orth) if t.is_inherent]
        deleted = int(np.sum(model.predict_orth(e.orth, indices) == 0))
        assert len(transcribe(model, e.orth)) == len(e.orth) - deleted


def test_train_model_logistic(parts):
    train, dev, _ = parts
    model, report = train_model('logistic', train, dev, FeatureConfig(2, 2),
                                LogisticHyper(epochs=50))
    assert model.encoding['left'] == 2
    assert report.dev_accuracy is not None
    assert model.dimension == ModelPredictor(model).encoder.dimension


def test_grid_search(parts):
    train, dev, _ = parts
    results = grid_search('logistic', train, dev, windows=(1, 2),
                          hyper=LogisticHyper(epochs=20))
    assert [(c.left, c.right, c.phon_features) for c, _ in results] == [
        (1, 1, False), (1, 1, True), (2, 2, False), (2, 2, True)]
    for _, metrics in results:
        assert metrics.n_instances == len(dev.instances)
        assert 0 <= metrics.accuracy <= 1


def test_labels_dtype(dataset):
    assert dataset.labels.dtype == np.int64
