"""
Utility functions used in other parts of the pyschwa package.
"""
import os
import re
import tempfile
from collections import namedtuple
from contextlib import contextmanager

import numpy as np


__all__ = [
    'Token',
    'tokenize',
    'regex_matcher',
    'choice_matcher',
    'atomic_write',
    'format_percent',
    'sigmoid',
    'log_loss',
]


class Token(namedtuple('Token', ['type', 'start', 'length', 'expr'])):

    @property
    def text(self):
        return self.expr[self.start:self.start + self.length]

    def __repr__(self):
        return '{}({!r})'.format(self.type, self.text)


def regex_matcher(expr: str) -> callable:
    regex = re.compile(expr)
    def match(text, i):
        m = regex.match(text, i)
        return m.end() - i if m else 0
    return match


def choice_matcher(choices: str) -> callable:
    def match(text, i):
        return 1 if text[i] in choices else 0
    return match


def tokenize(tokens, expr: str, skip=()):
    """
    Split ``expr`` into tokens.

    :param tokens: list of (token type, matcher) pairs, tried in order
    :param expr: input text
    :param skip: token types that are matched but not yielded
    :raises ValueError: if no matcher accepts the input at some position
    """
    i = 0
    stop = len(expr)
    while i < stop:
        for toktype, tokmatch in tokens:
            l = tokmatch(expr, i)
            if l > 0:
                if toktype not in skip:
                    yield Token(toktype, i, l, expr)
                i += l
                break
        else:
            raise ValueError("Unknown token {!r} at {!r}"
                             .format(expr[i], expr[:i+1]))


@contextmanager
def atomic_write(path, mode='wb', **kwargs):
    """
    Open a temporary file next to ``path`` and move it into place when the
    'with' block completes without error.
    """
    dirname = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=dirname, prefix='.pyschwa-')
    try:
        with os.fdopen(fd, mode, **kwargs) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        try:
            os.remove(tmp)
        except OSError:
            pass
        raise


def format_percent(value) -> str:
    """Fixed two-decimal percentage, ``-`` for undefined values."""
    if value is None:
        return '-'
    return '{:.2f}%'.format(100 * value)


def sigmoid(z):
    """Numerically stable logistic function (scalar or array)."""
    z = np.asarray(z, dtype=float)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1 / (1 + e), e / (1 + e))


def log_loss(y, margin) -> float:
    """
    Mean logistic loss of labels ``y`` (0/1) given log-odds ``margin``.

    Computed from the margin as ``log(1 + exp(-s*margin))`` with ``s = +1``
    for retained and ``s = -1`` for deleted labels,
    which stays finite for saturated predictions.
    """
    y = np.asarray(y, dtype=float)
    margin = np.asarray(margin, dtype=float)
    if y.size == 0:
        return 0.0
    return float(np.mean(np.logaddexp(0, -(2 * y - 1) * margin)))
