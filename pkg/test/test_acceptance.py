"""
End-to-end checks on golden words and on rule-labeled synthetic lexicons.
"""

import time

import numpy as np
from numpy.testing import assert_allclose, assert_equal
from pytest import fixture

from pyschwa.align import extract_instances
from pyschwa.baseline import evaluate_baseline
from pyschwa.features import FeatureConfig, FeatureMatrix
from pyschwa.lexicon import SplitSpec, parse_lexicon_lines, LEXICON_HEADER
from pyschwa.models import (
    GbdtHyper, LogisticHyper, logistic_loss_and_grad, mlp_loss_and_grad,
    model_from_bytes, model_to_bytes)
from pyschwa.pipeline import (
    build_dataset, split_dataset, train_model, evaluate_predictor,
    make_predictor)
from pyschwa.script import decode_devanagari
from pyschwa.synthetic import generate_corpus
from pyschwa.types import RETAINED, DELETED


@fixture(scope='module')
def corpus():
    dataset, discarded = build_dataset(generate_corpus(2000, seed=0))
    assert discarded == []
    return split_dataset(dataset, SplitSpec(seed=0))


@fixture(scope='module')
def gbdt(corpus):
    train, dev, _ = corpus
    return train_model('gbdt', train, dev, FeatureConfig(5, 5),
                       GbdtHyper(rounds=200, max_depth=11))


def test_golden_words():
    assert len(decode_devanagari('पेपर')) == 6
    entries, _ = parse_lexicon_lines([
        LEXICON_HEADER,
        'अँकड़ाहट\ta ~ k a rr aa h a tt a\ta ~ k rr aa h a tt',
        'जंगली\tj a M g a l ii\tj a M g l ii',
    ])
    assert [i.label for i in extract_instances(entries[0])] == [
        DELETED, RETAINED, DELETED]
    assert [i.label for i in extract_instances(entries[1])] == [
        RETAINED, DELETED]


def test_gradient_checks():
    rng = np.random.RandomState(42)
    eps = 1e-6
    for _ in range(100):
        n, d = rng.randint(2, 8), rng.randint(1, 6)
        X = FeatureMatrix.from_dense(rng.rand(n, d) < 0.5)
        y = rng.randint(2, size=n).astype(float)
        w, b = rng.randn(d), rng.randn()
        _, gw, gb = logistic_loss_and_grad(w, b, X, y, 0.1)
        for k in range(d):
            step = np.eye(d)[k] * eps
            num = (logistic_loss_and_grad(w + step, b, X, y, 0.1)[0] -
                   logistic_loss_and_grad(w - step, b, X, y, 0.1)[0]) / (2 * eps)
            assert_allclose(gw[k], num, rtol=1e-5, atol=1e-8)
        num = (logistic_loss_and_grad(w, b + eps, X, y, 0.1)[0] -
               logistic_loss_and_grad(w, b - eps, X, y, 0.1)[0]) / (2 * eps)
        assert_allclose(gb, num, rtol=1e-5, atol=1e-8)

        h = rng.randint(1, 5)
        Xd = X.toarray()
        params = (rng.randn(d, h), rng.randn(h), rng.randn(h), rng.randn())
        _, grads = mlp_loss_and_grad(params, Xd, y, 0.1)
        for k, p in enumerate(params[:3]):
            for index in np.ndindex(p.shape):
                step = np.zeros_like(p)
                step[index] = eps
                up = list(params)
                down = list(params)
                up[k] = p + step
                down[k] = p - step
                num = (mlp_loss_and_grad(up, Xd, y, 0.1)[0] -
                       mlp_loss_and_grad(down, Xd, y, 0.1)[0]) / (2 * eps)
                assert_allclose(grads[k][index], num, rtol=1e-5, atol=1e-8)


def test_gbdt_loss_non_increasing(gbdt):
    _, report = gbdt
    assert report.iterations == 200
    losses = [report.initial_loss] + report.losses
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_synthetic_learnability(corpus, gbdt):
    started = time.perf_counter()
    train, dev, test = corpus
    model, _ = gbdt
    gbdt_metrics, _, _ = evaluate_predictor(make_predictor(model), test)
    logistic, _ = train_model('logistic', train, dev, FeatureConfig(5, 5),
                              LogisticHyper())
    logistic_metrics, _, _ = evaluate_predictor(make_predictor(logistic), test)
    assert gbdt_metrics.accuracy >= 0.99
    assert logistic_metrics.accuracy >= 0.98
    assert gbdt_metrics.accuracy >= logistic_metrics.accuracy
    assert evaluate_baseline(test.entries).accuracy == 1.0
    assert time.perf_counter() - started < 120


def test_model_bytes_deterministic(corpus, gbdt):
    train, dev, _ = corpus
    model, _ = gbdt
    again, _ = train_model('gbdt', train, dev, FeatureConfig(5, 5),
                           GbdtHyper(rounds=200, max_depth=11), n_jobs=4)
    assert model_to_bytes(again) == model_to_bytes(model)


def test_round_trip_preserves_predictions(gbdt):
    model, _ = gbdt
    copy = model_from_bytes(model_to_bytes(model))
    rng = np.random.RandomState(8)
    X = FeatureMatrix.from_dense(rng.rand(1000, model.dimension) < 0.03)
    assert_equal(copy.predict_proba(X), model.predict_proba(X))
