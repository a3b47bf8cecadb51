"""
Schwa classifiers over sparse binary features.

Three model kinds share one interface (:meth:`Model.predict_proba` gives the
probability that a schwa is retained):

- :class:`LogisticModel`: L2-regularized logistic regression trained by
  full-batch gradient descent,
- :class:`MlpModel`: one rectifier hidden layer with a sigmoid output,
  trained by minibatch Adam with early stopping on dev loss,
- :class:`GbdtModel`: second-order gradient boosted trees whose splits test
  whether a single feature is active.

Models are stored in a versioned, checksummed file (:func:`save_model`,
:func:`load_model`). Boosted trees can be dumped as readable rules
(:func:`dump_trees`) and the dump read back and evaluated
(:func:`parse_dump`, :func:`evaluate_dump`).
"""

import hashlib
import json
import logging
import struct
import time
from collections import namedtuple
from dataclasses import dataclass, asdict, field
from multiprocessing.dummy import Pool as ThreadPool

import numpy as np

from pyschwa.parsing import Parser, ParseError
from pyschwa.util import (
    sigmoid, log_loss, tokenize, regex_matcher, atomic_write)


__all__ = [
    'DimensionMismatch',
    'TrainingDiverged',
    'ModelFileError',
    'VersionMismatch',
    'ChecksumMismatch',
    'NameTableMismatch',
    'LogisticHyper',
    'MlpHyper',
    'GbdtHyper',
    'TrainReport',
    'Model',
    'LogisticModel',
    'MlpModel',
    'GbdtModel',
    'Tree',
    'MODEL_KINDS',
    'logistic_loss_and_grad',
    'mlp_loss_and_grad',
    'train_logistic',
    'train_mlp',
    'train_gbdt',
    'train',
    'predict_proba',
    'save_model',
    'load_model',
    'dump_trees',
    'parse_dump',
    'evaluate_dump',
]

logger = logging.getLogger(__name__)


class DimensionMismatch(ValueError):
    pass


class TrainingDiverged(ArithmeticError):
    pass


class ModelFileError(ValueError):
    pass


class VersionMismatch(ModelFileError):

    def __init__(self, found, expected):
        super().__init__(
            "Model file format version {} is not supported (expected {})"
            .format(found, expected))
        self.found = found
        self.expected = expected


class ChecksumMismatch(ModelFileError):
    pass


class NameTableMismatch(ValueError):
    pass


#----------------------------------------
# Hyperparameters
#----------------------------------------

def _require(condition, message, *args):
    if not condition:
        raise ValueError(message.format(*args))


@dataclass(frozen=True)
class LogisticHyper:

    lr: float = 1.0
    epochs: int = 5000
    l2: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        _require(self.lr > 0, "learning rate must be positive: {}", self.lr)
        _require(self.epochs >= 1, "epochs must be positive: {}", self.epochs)
        _require(self.l2 >= 0, "l2 must be nonnegative: {}", self.l2)


@dataclass(frozen=True)
class MlpHyper:

    hidden: int = 250
    lr: float = 1e-4
    alpha: float = 1e-4
    epochs: int = 200
    batch_size: int = 200
    patience: int = 10
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        _require(self.hidden >= 1, "hidden size must be positive: {}",
                 self.hidden)
        _require(self.lr > 0, "learning rate must be positive: {}", self.lr)
        _require(self.alpha >= 0, "alpha must be nonnegative: {}", self.alpha)
        _require(self.epochs >= 1, "epochs must be positive: {}", self.epochs)
        _require(self.batch_size >= 1, "batch size must be positive: {}",
                 self.batch_size)
        _require(self.patience >= 0, "patience must be nonnegative: {}",
                 self.patience)


@dataclass(frozen=True)
class GbdtHyper:

    rounds: int = 200
    max_depth: int = 11
    shrinkage: float = 0.1
    reg_lambda: float = 1.0
    gamma: float = 0.0
    min_child_hessian: float = 0.0
    seed: int = 0

    def __post_init__(self):
        _require(self.rounds >= 0, "rounds must be nonnegative: {}",
                 self.rounds)
        _require(self.max_depth >= 0, "max depth must be nonnegative: {}",
                 self.max_depth)
        _require(0 < self.shrinkage <= 1, "shrinkage must be in (0, 1]: {}",
                 self.shrinkage)
        _require(self.reg_lambda >= 0, "lambda must be nonnegative: {}",
                 self.reg_lambda)
        _require(self.gamma >= 0, "gamma must be nonnegative: {}", self.gamma)
        _require(self.min_child_hessian >= 0,
                 "min child hessian must be nonnegative: {}",
                 self.min_child_hessian)


@dataclass
class TrainReport:

    """Training history of one model."""

    kind: str
    seed: int
    losses: list = field(default_factory=list)
    dev_losses: list = field(default_factory=list)
    initial_loss: float = None
    dev_accuracy: float = None
    wall_time: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.losses)


#----------------------------------------
# Models
#----------------------------------------

class Model:

    """
    Base class of trained classifiers.

    :ivar int dimension: feature dimension
    :ivar hyper: hyperparameters the model was trained with
    :ivar dict encoding: feature encoding description, stored with the model
    """

    kind = None

    def __init__(self, dimension, hyper, encoding=None):
        self.dimension = int(dimension)
        self.hyper = hyper
        self.encoding = encoding or {}

    def __repr__(self):
        return '<{} dimension={}>'.format(self.__class__.__name__,
                                          self.dimension)

    def margin(self, X):
        """Log-odds of retention for each row of ``X``."""
        raise NotImplementedError

    def predict_proba(self, X):
        """Probability of retention for each row of ``X``."""
        self._check_dimension(X)
        return sigmoid(self.margin(X))

    def predict(self, X):
        """Labels: retained (1) iff the probability is at least 0.5."""
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def _check_dimension(self, X):
        if X.dimension != self.dimension:
            raise DimensionMismatch(
                "Features have dimension {}, model expects {}"
                .format(X.dimension, self.dimension))

    def arrays(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_arrays(cls, dimension, hyper, encoding, arrays):
        raise NotImplementedError


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


class LogisticModel(Model):

    kind = 'logistic'

    def __init__(self, weights, bias, hyper=None, encoding=None):
        super().__init__(len(weights), hyper or LogisticHyper(), encoding)
        self.weights = _frozen(weights)
        self.bias = float(bias)
        if not (np.all(np.isfinite(self.weights)) and np.isfinite(self.bias)):
            raise ValueError("Logistic model parameters must be finite")

    def margin(self, X):
        return X.dot(self.weights) + self.bias

    def arrays(self):
        return {'weights': self.weights, 'bias': np.array([self.bias])}

    @classmethod
    def from_arrays(cls, dimension, hyper, encoding, arrays):
        return cls(arrays['weights'], arrays['bias'][0],
                   LogisticHyper(**hyper), encoding)


class MlpModel(Model):

    """
    :ivar W1: ``(dimension, hidden)`` input weights
    :ivar b1: ``(hidden,)`` hidden bias
    :ivar w2: ``(hidden,)`` output weights
    :ivar float b2: output bias
    """

    kind = 'mlp'

    _batch = 512

    def __init__(self, W1, b1, w2, b2, hyper=None, encoding=None):
        super().__init__(np.shape(W1)[0], hyper or MlpHyper(), encoding)
        self.W1 = _frozen(W1)
        self.b1 = _frozen(b1)
        self.w2 = _frozen(w2)
        self.b2 = float(b2)
        if not all(np.all(np.isfinite(p)) for p in self.params):
            raise ValueError("MLP parameters must be finite")

    @property
    def params(self):
        return (self.W1, self.b1, self.w2, self.b2)

    def margin(self, X):
        out = np.empty(len(X))
        for start in range(0, len(X), self._batch):
            rows = np.arange(start, min(start + self._batch, len(X)))
            out[rows] = _mlp_forward(self.params, X.toarray(rows))[-1]
        return out

    def arrays(self):
        return {'W1': self.W1, 'b1': self.b1, 'w2': self.w2,
                'b2': np.array([self.b2])}

    @classmethod
    def from_arrays(cls, dimension, hyper, encoding, arrays):
        return cls(arrays['W1'], arrays['b1'], arrays['w2'], arrays['b2'][0],
                   MlpHyper(**hyper), encoding)


class Tree(namedtuple('Tree', ['feature', 'left', 'right', 'value'])):

    """
    Binary decision tree in flat arrays, root at node 0.

    Internal nodes test ``feature[node]``: rows where it is inactive go to
    ``left[node]``, rows where it is active to ``right[node]``. Leaves have
    ``feature == -1`` and carry their contribution to the log-odds in
    ``value``.
    """

    __slots__ = ()

    def is_leaf(self, node) -> bool:
        return self.feature[node] < 0

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        def depth(node):
            if self.is_leaf(node):
                return 0
            return 1 + max(depth(self.left[node]), depth(self.right[node]))
        return depth(0)

    def apply(self, X):
        """Leaf index for each row of ``X``."""
        node = np.zeros(len(X), dtype=np.int64)
        while True:
            rows = np.flatnonzero(self.feature[node] >= 0)
            if rows.size == 0:
                return node
            current = node[rows]
            active = (X.indices[rows] ==
                      self.feature[current][:, None]).any(axis=1)
            node[rows] = np.where(active, self.right[current],
                                  self.left[current])

    def predict(self, X):
        return self.value[self.apply(X)]


class GbdtModel(Model):

    """
    Boosted trees. The log-odds of retention are ``base_score`` plus the
    leaf values of all trees, which already include the shrinkage factor.
    """

    kind = 'gbdt'

    def __init__(self, trees, base_score, dimension, hyper=None,
                 encoding=None):
        super().__init__(dimension, hyper or GbdtHyper(), encoding)
        self.trees = tuple(
            Tree(_frozen(t.feature, np.int64), _frozen(t.left, np.int64),
                 _frozen(t.right, np.int64), _frozen(t.value))
            for t in trees)
        self.base_score = float(base_score)
        for t in self.trees:
            if np.any(t.feature >= self.dimension):
                raise ValueError("Tree feature index out of range")
            if not np.all(np.isfinite(t.value)):
                raise ValueError("Tree leaf values must be finite")

    @property
    def shrinkage(self) -> float:
        return self.hyper.shrinkage

    def margin(self, X):
        margin = np.full(len(X), self.base_score)
        for tree in self.trees:
            margin = margin + tree.predict(X)
        return margin

    def arrays(self):
        sizes = [t.n_nodes for t in self.trees]
        def concat(name, dtype):
            parts = [getattr(t, name) for t in self.trees]
            return np.concatenate(parts) if parts else np.zeros(0, dtype)
        return {
            'base_score': np.array([self.base_score]),
            'tree_offsets': np.cumsum([0] + sizes).astype(np.int64),
            'feature': concat('feature', np.int64),
            'left': concat('left', np.int64),
            'right': concat('right', np.int64),
            'value': concat('value', float),
        }

    @classmethod
    def from_arrays(cls, dimension, hyper, encoding, arrays):
        offsets = arrays['tree_offsets']
        trees = [
            Tree(*(arrays[name][lo:hi]
                   for name in ('feature', 'left', 'right', 'value')))
            for lo, hi in zip(offsets[:-1], offsets[1:])
        ]
        return cls(trees, arrays['base_score'][0], dimension,
                   GbdtHyper(**hyper), encoding)


MODEL_KINDS = {
    cls.kind: cls for cls in (LogisticModel, MlpModel, GbdtModel)
}


def predict_proba(model, X):
    """Probability of retention for each row of ``X``."""
    return model.predict_proba(X)


#----------------------------------------
# Training
#----------------------------------------

def _check_training_data(X, y, dev):
    y = np.asarray(y)
    if len(X) != len(y):
        raise DimensionMismatch("{} feature rows but {} labels"
                                .format(len(X), len(y)))
    if len(y) == 0:
        raise ValueError("Empty training set")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("Labels must be 0 (deleted) or 1 (retained)")
    if dev is not None:
        Xd, yd = dev
        if Xd.dimension != X.dimension:
            raise DimensionMismatch(
                "Dev features have dimension {}, training features {}"
                .format(Xd.dimension, X.dimension))
        if len(Xd) != len(yd):
            raise DimensionMismatch("{} dev feature rows but {} labels"
                                    .format(len(Xd), len(yd)))
    return y.astype(float)


def _check_finite(kind, loss, iteration):
    if not np.isfinite(loss):
        raise TrainingDiverged("{} training diverged at iteration {}: loss {}"
                               .format(kind, iteration, loss))


def _finish(model, report, dev, started):
    report.wall_time = time.perf_counter() - started
    if dev is not None and len(dev[1]):
        Xd, yd = dev
        report.dev_accuracy = float(np.mean(model.predict(Xd) == yd))
    logger.info("trained %s model: %d iterations, final loss %.6f, "
                "dev accuracy %s, %.1fs", model.kind, report.iterations,
                report.losses[-1] if report.losses else report.initial_loss,
                report.dev_accuracy, report.wall_time)
    return model, report


def logistic_loss_and_grad(w, b, X, y, l2):
    """
    L2-regularized mean logistic loss and its gradient.

    :returns: ``(loss, grad_w, grad_b)``
    """
    s = X.dot(w) + b
    loss = log_loss(y, s) + 0.5 * l2 * np.dot(w, w)
    r = (sigmoid(s) - y) / len(y)
    return loss, X.rdot(r) + l2 * w, float(np.sum(r))


def train_logistic(X, y, dev=None, hyper=LogisticHyper(), encoding=None):
    """
    Fit a :class:`LogisticModel` by full-batch gradient descent from zero
    weights.

    :param X: :class:`~pyschwa.features.FeatureMatrix`
    :param y: labels, 1 = retained
    :param dev: optional ``(X, y)`` pair for the dev accuracy in the report
    :returns: ``(model, report)``
    :raises TrainingDiverged: if the loss becomes non-finite
    """
    started = time.perf_counter()
    y = _check_training_data(X, y, dev)
    report = TrainReport('logistic', hyper.seed)
    w = np.zeros(X.dimension)
    b = 0.0
    for epoch in range(hyper.epochs):
        loss, grad_w, grad_b = logistic_loss_and_grad(w, b, X, y, hyper.l2)
        _check_finite('logistic', loss, epoch)
        if epoch == 0:
            report.initial_loss = loss
        report.losses.append(loss)
        logger.debug("logistic epoch %d: loss %.6f", epoch, loss)
        w = w - hyper.lr * grad_w
        b = b - hyper.lr * grad_b
    return _finish(LogisticModel(w, b, hyper, encoding), report, dev, started)


def _mlp_forward(params, Xd):
    W1, b1, w2, b2 = params
    z1 = Xd @ W1 + b1
    a1 = np.maximum(z1, 0)
    return z1, a1, a1 @ w2 + b2


def mlp_loss_and_grad(params, Xd, y, alpha):
    """
    Regularized mean logistic loss of a one-hidden-layer network and its
    gradient by backpropagation.

    :param params: ``(W1, b1, w2, b2)``
    :param Xd: dense input rows
    :returns: ``(loss, (dW1, db1, dw2, db2))``
    """
    W1, b1, w2, b2 = params
    z1, a1, s = _mlp_forward(params, Xd)
    loss = (log_loss(y, s) +
            0.5 * alpha * (np.sum(W1 * W1) + np.dot(w2, w2)))
    ds = (sigmoid(s) - y) / len(y)
    dw2 = a1.T @ ds + alpha * w2
    db2 = float(np.sum(ds))
    dz1 = np.outer(ds, w2) * (z1 > 0)
    dW1 = Xd.T @ dz1 + alpha * W1
    db1 = dz1.sum(axis=0)
    return loss, (dW1, db1, dw2, db2)


class _Adam:

    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params, grads):
        self.t += 1
        lr = (self.lr * np.sqrt(1 - self.beta2 ** self.t) /
              (1 - self.beta1 ** self.t))
        updated = []
        for k, (p, g) in enumerate(zip(params, grads)):
            self.m[k] = self.beta1 * self.m[k] + (1 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1 - self.beta2) * g * g
            updated.append(p - lr * self.m[k] / (np.sqrt(self.v[k]) + self.eps))
        return tuple(updated)


def _mlp_init(rng, dimension, hidden):
    bound1 = np.sqrt(6 / (dimension + hidden))
    bound2 = np.sqrt(6 / (hidden + 1))
    return (rng.uniform(-bound1, bound1, (dimension, hidden)),
            rng.uniform(-bound1, bound1, hidden),
            rng.uniform(-bound2, bound2, hidden),
            float(rng.uniform(-bound2, bound2)))


def _mlp_data_loss(params, X, y, batch=512):
    total = 0.0
    for start in range(0, len(X), batch):
        rows = np.arange(start, min(start + batch, len(X)))
        s = _mlp_forward(params, X.toarray(rows))[-1]
        total += log_loss(y[rows], s) * len(rows)
    return total / len(X)


def train_mlp(X, y, dev=None, hyper=MlpHyper(), encoding=None):
    """
    Fit an :class:`MlpModel` with seeded Glorot-uniform initialization and
    minibatch Adam.

    Training stops when the dev loss (training loss without a dev set) has
    not improved by ``tol`` for more than ``patience`` epochs; the
    parameters with the best loss are kept.

    :returns: ``(model, report)``
    :raises TrainingDiverged: if the loss becomes non-finite
    """
    started = time.perf_counter()
    y = _check_training_data(X, y, dev)
    report = TrainReport('mlp', hyper.seed)
    rng = np.random.RandomState(hyper.seed)
    params = _mlp_init(rng, X.dimension, hyper.hidden)
    adam = _Adam(params, hyper.lr)
    has_dev = dev is not None and len(dev[1]) > 0
    if has_dev:
        dev_y = np.asarray(dev[1], dtype=float)
    report.initial_loss = _mlp_data_loss(params, X, y)
    best_loss, best_params, stale = np.inf, params, 0
    for epoch in range(hyper.epochs):
        order = rng.permutation(len(y))
        total = 0.0
        for start in range(0, len(y), hyper.batch_size):
            rows = order[start:start + hyper.batch_size]
            loss, grads = mlp_loss_and_grad(
                params, X.toarray(rows), y[rows], hyper.alpha)
            _check_finite('mlp', loss, epoch)
            total += loss * len(rows)
            params = adam.step(params, grads)
        loss = total / len(y)
        report.losses.append(loss)
        if has_dev:
            check = _mlp_data_loss(params, dev[0], dev_y)
            report.dev_losses.append(check)
        else:
            check = loss
        _check_finite('mlp', check, epoch)
        logger.debug("mlp epoch %d: loss %.6f, check loss %.6f",
                     epoch, loss, check)
        if check < best_loss - hyper.tol:
            best_loss, best_params, stale = check, params, 0
        else:
            stale += 1
            if stale > hyper.patience:
                logger.info("mlp early stop after epoch %d", epoch)
                break
    return _finish(MlpModel(*best_params, hyper, encoding),
                   report, dev, started)


def _scan_features(flat, gw, hw, lo, hi, G, H, count, hyper):
    """Best split among features ``lo .. hi-1``: ``(gain, feature)``."""
    sel = (flat >= lo) & (flat < hi)
    f = flat[sel] - lo
    size = hi - lo
    G_R = np.bincount(f, weights=gw[sel], minlength=size)
    H_R = np.bincount(f, weights=hw[sel], minlength=size)
    n_R = np.bincount(f, minlength=size)
    G_L = G - G_R
    H_L = H - H_R
    lam = hyper.reg_lambda
    gain = 0.5 * (G_L ** 2 / (H_L + lam) + G_R ** 2 / (H_R + lam)
                  - G ** 2 / (H + lam)) - hyper.gamma
    valid = ((n_R > 0) & (n_R < count) & (gain > 0) &
             (H_R >= hyper.min_child_hessian) &
             (H_L >= hyper.min_child_hessian))
    if not valid.any():
        return None, None
    gain = np.where(valid, gain, -np.inf)
    best = int(np.argmax(gain))
    return gain[best], lo + best


class _TreeGrower:

    """Greedy depth-first growth of one tree on gradients and hessians."""

    def __init__(self, X, g, h, hyper, pool=None, n_jobs=1):
        self.X = X
        self.g = g
        self.h = h
        self.hyper = hyper
        self.pool = pool
        bounds = np.linspace(0, X.dimension, max(n_jobs, 1) + 1).astype(int)
        self.chunks = [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])
                       if hi > lo]
        self.feature, self.left, self.right, self.value = [], [], [], []

    def grow(self) -> Tree:
        self._grow(np.arange(len(self.X)), 0)
        return Tree(np.array(self.feature, dtype=np.int64),
                    np.array(self.left, dtype=np.int64),
                    np.array(self.right, dtype=np.int64),
                    np.array(self.value))

    def _grow(self, rows, depth):
        node = len(self.feature)
        self.feature.append(-1)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        G = np.sum(self.g[rows])
        H = np.sum(self.h[rows])
        if depth < self.hyper.max_depth and len(rows) > 1:
            feature = self._best_split(rows, G, H)
            if feature is not None:
                active = self.X.take(rows).has(feature)
                self.feature[node] = feature
                self.left[node] = self._grow(rows[~active], depth + 1)
                self.right[node] = self._grow(rows[active], depth + 1)
                return node
        self.value[node] = -G / (H + self.hyper.reg_lambda) * \
            self.hyper.shrinkage
        return node

    def _best_split(self, rows, G, H):
        indices = self.X.indices[rows]
        k = indices.shape[1]
        flat = indices.ravel()
        gw = np.repeat(self.g[rows], k)
        hw = np.repeat(self.h[rows], k)
        scan = lambda chunk: _scan_features(
            flat, gw, hw, chunk[0], chunk[1], G, H, len(rows), self.hyper)
        if self.pool is None:
            results = map(scan, self.chunks)
        else:
            results = self.pool.map(scan, self.chunks)
        best_gain, best_feature = None, None
        for gain, feature in results:
            # chunks are in feature order: ties keep the lowest index
            if feature is not None and (best_gain is None or gain > best_gain):
                best_gain, best_feature = gain, feature
        return best_feature


def _base_score(y):
    rate = float(np.mean(y))
    rate = min(max(rate, 1e-12), 1 - 1e-12)
    return np.log(rate / (1 - rate))


def train_gbdt(X, y, dev=None, hyper=GbdtHyper(), encoding=None, n_jobs=1):
    """
    Fit a :class:`GbdtModel`.

    Each round grows one tree on the gradients ``g = p - y`` and hessians
    ``h = p (1 - p)`` of the logistic loss. A split on feature ``f`` sends
    rows where ``f`` is active right and is accepted when its gain is
    positive and both children keep at least ``min_child_hessian``. Leaves
    get ``-G / (H + lambda) * shrinkage``.

    :param n_jobs: threads for the split search; the trees are identical
                   for any value
    :returns: ``(model, report)``
    :raises TrainingDiverged: if the loss becomes non-finite
    """
    started = time.perf_counter()
    y = _check_training_data(X, y, dev)
    report = TrainReport('gbdt', hyper.seed)
    base_score = _base_score(y)
    margin = np.full(len(y), base_score)
    report.initial_loss = log_loss(y, margin)
    trees = []
    pool = ThreadPool(n_jobs) if n_jobs > 1 else None
    try:
        for iteration in range(hyper.rounds):
            p = sigmoid(margin)
            tree = _TreeGrower(X, p - y, p * (1 - p), hyper,
                               pool, n_jobs).grow()
            trees.append(tree)
            margin = margin + tree.predict(X)
            loss = log_loss(y, margin)
            _check_finite('gbdt', loss, iteration)
            report.losses.append(loss)
            logger.debug("gbdt round %d: %d nodes, loss %.6f",
                         iteration, tree.n_nodes, loss)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    model = GbdtModel(trees, base_score, X.dimension, hyper, encoding)
    return _finish(model, report, dev, started)


HYPERS = {
    'logistic': LogisticHyper,
    'mlp': MlpHyper,
    'gbdt': GbdtHyper,
}

_TRAINERS = {
    'logistic': train_logistic,
    'mlp': train_mlp,
    'gbdt': train_gbdt,
}


def train(kind, X, y, dev=None, hyper=None, encoding=None, n_jobs=1):
    """Train a model of the given kind (``logistic``, ``mlp`` or ``gbdt``)."""
    try:
        trainer = _TRAINERS[kind]
    except KeyError:
        raise ValueError("Unknown model kind: {!r}".format(kind)) from None
    if hyper is None:
        hyper = HYPERS[kind]()
    if kind == 'gbdt':
        return trainer(X, y, dev, hyper, encoding, n_jobs=n_jobs)
    return trainer(X, y, dev, hyper, encoding)


#----------------------------------------
# Model files
#----------------------------------------

MAGIC = b'PYSCHWA\n'
FORMAT_VERSION = 1

_PREFIX = struct.Struct('>HI')
_DIGEST_SIZE = hashlib.sha256().digest_size


def model_to_bytes(model) -> bytes:
    """Serialize ``model`` to the model file format."""
    arrays = model.arrays()
    specs = []
    payload = []
    for name in sorted(arrays):
        a = np.asarray(arrays[name])
        dtype = '<i8' if a.dtype.kind in 'iu' else '<f8'
        a = np.ascontiguousarray(a, dtype=dtype)
        specs.append({'name': name, 'dtype': dtype, 'shape': list(a.shape)})
        payload.append(a.tobytes())
    header = json.dumps({
        'kind': model.kind,
        'dimension': model.dimension,
        'hyper': asdict(model.hyper),
        'encoding': model.encoding,
        'arrays': specs,
    }, sort_keys=True).encode('utf-8')
    body = b''.join(
        [MAGIC, _PREFIX.pack(FORMAT_VERSION, len(header)), header] + payload)
    return body + hashlib.sha256(body).digest()


def model_from_bytes(data: bytes):
    """
    Inverse of :func:`model_to_bytes`.

    :raises VersionMismatch: for files of another format version
    :raises ChecksumMismatch: for truncated or corrupted files
    :raises ModelFileError: for data that is not a model file
    """
    start = len(MAGIC) + _PREFIX.size
    if data[:len(MAGIC)] != MAGIC[:len(data)]:
        raise ModelFileError("Not a pyschwa model file")
    if len(data) < start:
        raise ChecksumMismatch("Model file is truncated")
    version, header_size = _PREFIX.unpack_from(data, len(MAGIC))
    if version != FORMAT_VERSION:
        raise VersionMismatch(version, FORMAT_VERSION)
    body, digest = data[:-_DIGEST_SIZE], data[-_DIGEST_SIZE:]
    if (len(data) < start + header_size + _DIGEST_SIZE or
            hashlib.sha256(body).digest() != digest):
        raise ChecksumMismatch("Model file checksum does not match")
    meta = json.loads(data[start:start + header_size].decode('utf-8'))
    offset = start + header_size
    arrays = {}
    for spec in meta['arrays']:
        count = int(np.prod(spec['shape'], dtype=np.int64))
        a = np.frombuffer(body, dtype=spec['dtype'], count=count,
                          offset=offset)
        arrays[spec['name']] = a.reshape(spec['shape']).copy()
        offset += a.nbytes
    if offset != len(body):
        raise ModelFileError("Model file payload has unexpected size")
    try:
        cls = MODEL_KINDS[meta['kind']]
    except KeyError:
        raise ModelFileError("Unknown model kind: {!r}"
                             .format(meta['kind'])) from None
    return cls.from_arrays(meta['dimension'], meta['hyper'],
                           meta['encoding'], arrays)


def save_model(model, path):
    """Write ``model`` to ``path``."""
    data = model_to_bytes(model)
    with atomic_write(path, 'wb') as f:
        f.write(data)


def load_model(path):
    """Read a model written by :func:`save_model`."""
    with open(path, 'rb') as f:
        return model_from_bytes(f.read())


#----------------------------------------
# Tree dumps
#----------------------------------------

def _number(x) -> str:
    return '{:+}'.format(float(x))


def dump_trees(model, names) -> str:
    """
    Render a :class:`GbdtModel` as nested if/else rules.

    Each condition ``if NAME`` holds when feature ``NAME`` is active. Leaf
    scores are contributions to the log-odds of retention, so a positive
    score favors pronouncing the schwa::

        base_score -0.1177830346
        tree 0
        if c_{+1}=# then score -0.19
        else score +0.08

    :param names: feature names, one per feature index
    :raises NameTableMismatch: if ``names`` does not fit the model
    """
    names = list(names)
    if len(names) != model.dimension:
        raise NameTableMismatch(
            "{} feature names for a model of dimension {}"
            .format(len(names), model.dimension))
    bad = [n for n in names if not n or n.split() != [n]]
    if bad:
        raise NameTableMismatch("Feature names must be nonempty and contain "
                                "no whitespace: {!r}".format(bad[0]))
    lines = ['base_score ' + _number(model.base_score)]
    for i, tree in enumerate(model.trees):
        lines.append('tree {}'.format(i))
        lines.extend(_dump_branch(tree, 0, names, 0))
    return '\n'.join(lines) + '\n'


def _dump_branch(tree, node, names, depth):
    pad = '  ' * depth
    if tree.is_leaf(node):
        return [pad + 'score ' + _number(tree.value[node])]
    lines = []
    head = pad + 'if {} then'.format(names[tree.feature[node]])
    right, left = tree.right[node], tree.left[node]
    if tree.is_leaf(right):
        lines.append(head + ' score ' + _number(tree.value[right]))
    else:
        lines.append(head)
        lines.extend(_dump_branch(tree, right, names, depth + 1))
    if tree.is_leaf(left):
        lines.append(pad + 'else score ' + _number(tree.value[left]))
    else:
        lines.append(pad + 'else')
        lines.extend(_dump_branch(tree, left, names, depth + 1))
    return lines


_KEYWORDS = ('base_score', 'tree', 'if', 'then', 'else', 'score')

_DUMP_TOKENS = [
    ('space', regex_matcher(r'\s+')),
] + [
    (kw, regex_matcher(kw + r'(?=\s|$)')) for kw in _KEYWORDS
] + [
    ('NUMBER', regex_matcher(
        r'[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan)(?=\s|$)')),
    ('FEATURE', regex_matcher(r'\S+')),
]

_DUMP_GRAMMAR = {
    'dump': [['base_score', 'NUMBER', 'trees', '$']],
    'trees': [['tree', 'NUMBER', 'branch', 'trees'], []],
    'branch': [
        ['score', 'NUMBER'],
        ['if', 'FEATURE', 'then', 'branch', 'else', 'branch'],
    ],
}

_DUMP_PARSER = None


class _End(namedtuple('_End', ['type', 'start', 'length', 'expr'])):
    __slots__ = ()


ParsedDump = namedtuple('ParsedDump', ['base_score', 'trees'])


def parse_dump(text: str) -> ParsedDump:
    """
    Read the output of :func:`dump_trees`.

    Branches are parsed into nested ``(name, then_branch, else_branch)``
    tuples with float leaves.

    :raises ParseError: if ``text`` is not a valid dump
    """
    global _DUMP_PARSER
    if _DUMP_PARSER is None:
        terminals = list(_KEYWORDS) + ['NUMBER', 'FEATURE', '$']
        _DUMP_PARSER = Parser(terminals, _DUMP_GRAMMAR, 'dump')
    try:
        tokens = list(tokenize(_DUMP_TOKENS, text, skip=('space',)))
    except ValueError as e:
        raise ParseError(str(e)) from None
    tokens.append(_End('$', len(text), 0, text))
    root = _DUMP_PARSER.parse(tokens)
    base_score = float(root.children[1].text)
    trees = []
    node = root.children[2]
    while node.children:
        trees.append(_read_branch(node.children[2]))
        node = node.children[3]
    return ParsedDump(base_score, trees)


def _read_branch(node):
    children = node.children
    if children[0].type == 'score':
        return float(children[1].text)
    return (children[1].text,
            _read_branch(children[3]),
            _read_branch(children[5]))


def evaluate_dump(parsed: ParsedDump, active_names) -> float:
    """
    Probability of retention given the set of active feature names, computed
    from a parsed dump alone.
    """
    active_names = set(active_names)
    margin = parsed.base_score
    for branch in parsed.trees:
        while isinstance(branch, tuple):
            name, then, otherwise = branch
            branch = then if name in active_names else otherwise
        margin = margin + branch
    return float(sigmoid(margin))
