"""
Per-schwa and word-level scores of schwa predictions.

Retained is the positive class: a true positive is a retained schwa
predicted as retained. A word counts as correct only if all of its schwas
are classified correctly; words without schwas are not counted.
"""

from collections import namedtuple

import numpy as np

from pyschwa.script import render
from pyschwa.types import RETAINED, label_name
from pyschwa.util import format_percent


__all__ = [
    'CountMismatch',
    'Confusion',
    'Metrics',
    'ErrorWord',
    'ErrorReport',
    'evaluate',
    'weakened_slice',
    'error_report',
    'format_table',
    'format_kv',
    'parse_kv',
]


class CountMismatch(ValueError):
    pass


class Confusion(namedtuple('Confusion', ['tp', 'fp', 'tn', 'fn'])):

    __slots__ = ()

    def __add__(self, other):
        return Confusion(*(a + b for a, b in zip(self, other)))


def _ratio(num, den):
    return num / den if den else None


class Metrics(namedtuple('Metrics', [
        'confusion', 'n_instances', 'n_words', 'words_correct'])):

    """
    Scores of one prediction run. Ratios are ``None`` when undefined.
    Metrics of disjoint corpora can be added.
    """

    __slots__ = ()

    @property
    def accuracy(self):
        c = self.confusion
        return _ratio(c.tp + c.tn, self.n_instances)

    @property
    def precision(self):
        c = self.confusion
        return _ratio(c.tp, c.tp + c.fp)

    @property
    def recall(self):
        c = self.confusion
        return _ratio(c.tp, c.tp + c.fn)

    @property
    def word_accuracy(self):
        return _ratio(self.words_correct, self.n_words)

    def __add__(self, other):
        return Metrics(self.confusion + other.confusion,
                       self.n_instances + other.n_instances,
                       self.n_words + other.n_words,
                       self.words_correct + other.words_correct)


def _pairs(predictions, gold):
    predictions = np.asarray(predictions, dtype=np.int64).ravel()
    if len(predictions) != len(gold):
        raise CountMismatch("{} predictions for {} schwa instances"
                            .format(len(predictions), len(gold)))
    return predictions


def evaluate(predictions, gold) -> Metrics:
    """
    Score ``predictions`` (one label per gold instance, in the same order)
    against ``gold`` :class:`~pyschwa.types.SchwaInstance` records.

    :raises CountMismatch: if the lengths differ
    """
    predictions = _pairs(predictions, gold)
    labels = np.array([inst.label for inst in gold], dtype=np.int64)
    pos_pred = predictions == RETAINED
    pos_gold = labels == RETAINED
    confusion = Confusion(
        tp=int(np.sum(pos_pred & pos_gold)),
        fp=int(np.sum(pos_pred & ~pos_gold)),
        tn=int(np.sum(~pos_pred & ~pos_gold)),
        fn=int(np.sum(~pos_pred & pos_gold)))
    words = {}
    for inst, pred in zip(gold, predictions):
        correct = words.get(inst.entry_id, True)
        words[inst.entry_id] = correct and bool(pred == inst.label)
    return Metrics(confusion, len(gold), len(words), sum(words.values()))


def weakened_slice(predictions, gold):
    """:func:`evaluate` on the weak schwas only, ``None`` if there are none."""
    predictions = _pairs(predictions, gold)
    keep = [i for i, inst in enumerate(gold) if inst.weak]
    if not keep:
        return None
    return evaluate(predictions[keep], [gold[i] for i in keep])


# A misclassified word: its entry and (orth_index, gold, predicted, weak)
# for each of its schwas.
ErrorWord = namedtuple('ErrorWord', ['entry', 'schwas'])


class ErrorReport(namedtuple('ErrorReport', ['words', 'total'])):

    """
    Sample of misclassified words.

    :ivar list words: :class:`ErrorWord` records in entry id order
    :ivar int total: number of misclassified words before sampling
    """

    __slots__ = ()

    def render(self) -> str:
        lines = []
        for word in self.words:
            entry = word.entry
            lines.append('{}\t{}'.format(entry.headword, render(entry.orth)))
            for index, gold, pred, weak in word.schwas:
                mark = ' ' if gold == pred else '*'
                lines.append('  {} {:3d} gold={} predicted={}{}'.format(
                    mark, index, label_name(gold), label_name(pred),
                    ' weak' if weak else ''))
        return '\n'.join(lines) + ('\n' if lines else '')


def error_report(predictions, gold, entries, k: int = 20, seed: int = 0):
    """
    Seeded sample of up to ``k`` misclassified words.

    :param entries: mapping entry id -> :class:`~pyschwa.types.LexEntry`
    """
    predictions = _pairs(predictions, gold)
    schwas = {}
    for inst, pred in zip(gold, predictions):
        schwas.setdefault(inst.entry_id, []).append(
            (inst.orth_index, inst.label, int(pred), inst.weak))
    wrong = sorted(eid for eid, items in schwas.items()
                   if any(g != p for _, g, p, _ in items))
    if len(wrong) > k:
        chosen = np.random.RandomState(seed).choice(
            len(wrong), size=k, replace=False)
        wrong = [wrong[i] for i in sorted(chosen)]
    return ErrorReport(
        [ErrorWord(entries[eid], schwas[eid]) for eid in wrong],
        total=sum(1 for items in schwas.values()
                  if any(g != p for _, g, p, _ in items)))


_COLUMNS = (
    ('A', 'accuracy'),
    ('P', 'precision'),
    ('R', 'recall'),
    ('Word A', 'word_accuracy'),
)


def format_table(rows) -> str:
    """
    Fixed-layout table of named metrics with the columns Model, A, P, R and
    Word A.

    :param rows: ``(name, Metrics)`` pairs; a ``None`` metrics row prints
                 dashes
    """
    rows = list(rows)
    width = max([len('Model')] + [len(name) for name, _ in rows])
    header = '{:<{w}}'.format('Model', w=width) + ''.join(
        '  {:>8}'.format(title) for title, _ in _COLUMNS)
    lines = [header, '-' * len(header)]
    for name, metrics in rows:
        cells = [
            format_percent(None if metrics is None else getattr(metrics, attr))
            for _, attr in _COLUMNS
        ]
        lines.append('{:<{w}}'.format(name, w=width) + ''.join(
            '  {:>8}'.format(c) for c in cells))
    return '\n'.join(lines) + '\n'


def format_kv(rows) -> str:
    """
    Machine-readable ``name.key=value`` lines with the same numbers as
    :func:`format_table` plus the raw counts.
    """
    lines = []
    for name, metrics in rows:
        if metrics is None:
            continue
        for _, attr in _COLUMNS:
            value = getattr(metrics, attr)
            lines.append('{}.{}={}'.format(
                name, attr, '-' if value is None else '{:.2f}'.format(100 * value)))
        for key, value in metrics.confusion._asdict().items():
            lines.append('{}.{}={}'.format(name, key, value))
        lines.append('{}.n_instances={}'.format(name, metrics.n_instances))
        lines.append('{}.n_words={}'.format(name, metrics.n_words))
    return '\n'.join(lines) + ('\n' if lines else '')


def parse_kv(text: str) -> dict:
    """Read :func:`format_kv` output into ``{name: {key: value}}``."""
    result = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, value = line.rsplit('=', 1)
        name, attr = key.rsplit('.', 1)
        result.setdefault(name, {})[attr] = value
    return result
