"""
Sparse binary context features of schwa instances.

A schwa at orthographic index ``i`` is described by the symbols at the
window positions ``i-n .. i-1`` and ``i+1 .. i+m`` (the schwa itself is not
encoded). Each position is a one-hot group over the vocabulary; positions
past either word edge take the boundary symbol ``#``. Optionally, every
in-word position also activates the phonological feature values of its
phone.

Index layout for ``W = n + m`` positions ``p = 0 .. W-1`` (offsets
``-n .. -1, +1 .. +m`` in that order)::

    p * |V| + vocabulary index                  symbol groups
    W * |V| + p * F + feature value index       phonological features

where ``F`` is the number of feature values in the table.
"""

import logging
import re
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from pyschwa.script import INVENTORY
from pyschwa.types import BOUNDARY


__all__ = [
    'FeatureIndexError',
    'FeatureConfig',
    'PhonFeatureTable',
    'Vocabulary',
    'FeatureVector',
    'FeatureMatrix',
    'FeatureEncoder',
    'FEATURE_VALUES',
    'load_feature_table',
    'build_vocabulary',
    'encode',
    'dimension',
    'feature_name',
    'feature_index',
]

logger = logging.getLogger(__name__)


class FeatureIndexError(IndexError):
    pass


# feature type -> closed value enumeration, in index order
FEATURE_VALUES = (
    ('height',         ('high', 'mid', 'low')),
    ('backness',       ('front', 'central', 'back')),
    ('roundedness',    ('rounded', 'unrounded')),
    ('length',         ('short', 'long')),
    ('voice',          ('voiced', 'voiceless')),
    ('aspiration',     ('aspirated', 'unaspirated')),
    ('place',          ('labial', 'dental', 'alveolar', 'retroflex',
                        'palatal', 'velar', 'glottal')),
)

_NOT_APPLICABLE = '-'


@dataclass(frozen=True)
class FeatureConfig:

    """Window sizes and whether phonological features are encoded."""

    left: int = 5
    right: int = 5
    phon_features: bool = False

    def __post_init__(self):
        for name in ('left', 'right'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError("{} window must be a positive integer, got {!r}"
                                 .format(name, value))

    @property
    def offsets(self) -> tuple:
        return (tuple(range(-self.left, 0)) +
                tuple(range(1, self.right + 1)))

    @property
    def width(self) -> int:
        return self.left + self.right


class PhonFeatureTable:

    """
    Phonological feature values per phone.

    :param dict rows: symbol -> {feature type: value}, feature types that do
                      not apply are left out
    """

    def __init__(self, rows):
        self.values = tuple(
            (ftype, value)
            for ftype, values in FEATURE_VALUES
            for value in values)
        self._value_index = {fv: i for i, fv in enumerate(self.values)}
        self._active = {}
        missing = [s for s in INVENTORY if s not in rows]
        if missing:
            raise ValueError("Feature table has no row for: {}"
                             .format(' '.join(missing)))
        for symbol, features in rows.items():
            if symbol not in INVENTORY:
                raise ValueError("Feature table row for unknown symbol {!r}"
                                 .format(symbol))
            try:
                self._active[symbol] = tuple(sorted(
                    self._value_index[fv] for fv in features.items()))
            except KeyError as e:
                raise ValueError("Invalid feature value for {!r}: {}={}"
                                 .format(symbol, *e.args[0])) from None

    def __len__(self):
        """Total number of feature values."""
        return len(self.values)

    def active(self, symbol: str) -> tuple:
        """Sorted value indices of ``symbol`` (empty for the boundary)."""
        return self._active.get(symbol, ())

    def features(self, symbol: str) -> dict:
        return dict(self.values[i] for i in self.active(symbol))

    @classmethod
    def from_text(cls, text: str):
        """
        Parse the whitespace separated table format: a column header line
        ``symbol <feature types...>`` followed by one row per phone.
        ``#`` starts a comment line, ``-`` marks a feature that does not
        apply.
        """
        lines = [line.split() for line in text.splitlines()
                 if line.strip() and not line.lstrip().startswith('#')]
        if not lines or lines[0][0] != 'symbol':
            raise ValueError("Feature table must start with a 'symbol' header")
        header, body = lines[0], lines[1:]
        rows = {}
        for fields in body:
            if len(fields) != len(header):
                raise ValueError("Feature table row {!r} has {} columns, "
                                 "expected {}".format(fields[0], len(fields),
                                                      len(header)))
            symbol = fields[0]
            if symbol in rows:
                raise ValueError("Duplicate feature table row: {!r}"
                                 .format(symbol))
            rows[symbol] = {
                ftype: value
                for ftype, value in zip(header[1:], fields[1:])
                if value != _NOT_APPLICABLE
            }
        return cls(rows)


_DEFAULT_TABLE = None


def load_feature_table(path=None) -> PhonFeatureTable:
    """Load a feature table file, by default the shipped ``phonfeatures.tsv``."""
    global _DEFAULT_TABLE
    if path is not None:
        with open(path, encoding='utf-8') as f:
            return PhonFeatureTable.from_text(f.read())
    if _DEFAULT_TABLE is None:
        from importlib_resources import read_text
        _DEFAULT_TABLE = PhonFeatureTable.from_text(
            read_text('pyschwa.data', 'phonfeatures.tsv', encoding='utf-8'))
    return _DEFAULT_TABLE


class Vocabulary:

    """Ordered symbol list; symbols outside it map to ``#``."""

    def __init__(self, symbols):
        symbols = tuple(symbols)
        if BOUNDARY not in symbols:
            raise ValueError("Vocabulary must contain {!r}".format(BOUNDARY))
        if len(set(symbols)) != len(symbols):
            raise ValueError("Duplicate vocabulary symbols")
        self.symbols = symbols
        self._index = {s: i for i, s in enumerate(symbols)}
        self.boundary = self._index[BOUNDARY]

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return 'Vocabulary({!r})'.format(list(self.symbols))

    def index(self, symbol: str) -> int:
        return self._index.get(symbol, self.boundary)


def build_vocabulary(entries, instances=None) -> Vocabulary:
    """
    Vocabulary of the orthographic symbols in ``entries``, sorted, plus
    ``#``. If ``instances`` is given, only entries they refer to count.
    """
    if instances is not None:
        ids = {inst.entry_id for inst in instances}
        entries = [e for e in entries if e.id in ids]
    symbols = {t.symbol for entry in entries for t in entry.orth}
    return Vocabulary(sorted(symbols | {BOUNDARY}))


class FeatureVector(namedtuple('FeatureVector', [
        'active_indices', 'dimension'])):

    __slots__ = ()

    def toarray(self):
        x = np.zeros(self.dimension)
        x[list(self.active_indices)] = 1
        return x


def window_symbols(orth, index: int, config: FeatureConfig) -> tuple:
    """Symbols at the window positions, ``#`` past the word edges."""
    n = len(orth)
    return tuple(
        orth[index + off].symbol if 0 <= index + off < n else BOUNDARY
        for off in config.offsets)


def dimension(config, vocab, table) -> int:
    dim = config.width * len(vocab)
    if config.phon_features:
        dim += config.width * len(table)
    return dim


def encode(instance, entry, config, vocab, table) -> FeatureVector:
    """
    Feature vector of the schwa ``instance`` of ``entry``.

    Out-of-vocabulary symbols activate the ``#`` index of their group, but
    still contribute their phonological features.
    """
    return FeatureVector(
        _active(window_symbols(entry.orth, instance.orth_index, config),
                config, vocab, table),
        dimension(config, vocab, table))


def _active(symbols, config, vocab, table) -> tuple:
    size = len(vocab)
    active = [p * size + vocab.index(s) for p, s in enumerate(symbols)]
    if config.phon_features:
        base = config.width * size
        nvals = len(table)
        for p, s in enumerate(symbols):
            active.extend(base + p * nvals + v for v in table.active(s))
    return tuple(active)


def _offset_name(offset):
    return 'c_{{{:+d}}}'.format(offset)


def feature_name(index, config, vocab, table) -> str:
    """
    Readable name of a feature index, e.g. ``c_{+1}=#`` or
    ``c_{-2}.voice=voiced``.

    :raises FeatureIndexError: for indices outside the dimension
    """
    dim = dimension(config, vocab, table)
    if not 0 <= index < dim:
        raise FeatureIndexError("Feature index {} out of range [0, {})"
                                .format(index, dim))
    offsets = config.offsets
    nsym = config.width * len(vocab)
    if index < nsym:
        p, v = divmod(index, len(vocab))
        return '{}={}'.format(_offset_name(offsets[p]), vocab.symbols[v])
    p, v = divmod(index - nsym, len(table))
    ftype, value = table.values[v]
    return '{}.{}={}'.format(_offset_name(offsets[p]), ftype, value)


_NAME_RE = re.compile(r'^c_\{([+-]\d+)\}(?:\.(\w+))?=(.+)$')


def feature_index(name, config, vocab, table) -> int:
    """
    Inverse of :func:`feature_name`.

    :raises FeatureIndexError: for names that denote no feature
    """
    error = FeatureIndexError("Not a feature name: {!r}".format(name))
    m = _NAME_RE.match(name)
    if m is None:
        raise error
    offset, ftype, value = int(m.group(1)), m.group(2), m.group(3)
    if offset not in config.offsets:
        raise error
    p = config.offsets.index(offset)
    if ftype is None:
        if value not in vocab:
            raise error
        return p * len(vocab) + vocab.index(value)
    if not config.phon_features or (ftype, value) not in table.values:
        raise error
    v = table.values.index((ftype, value))
    return config.width * len(vocab) + p * len(table) + v


class FeatureMatrix:

    """
    Rows of sparse binary feature vectors.

    Stored as an ``(n, k)`` integer array of active indices per row, padded
    with ``dimension`` (one past the last valid index).

    :ivar numpy.ndarray indices: padded active indices
    :ivar int dimension: number of columns
    """

    def __init__(self, indices, dimension):
        indices = np.asarray(indices, dtype=np.int64)
        if indices.ndim != 2:
            raise ValueError("indices must be a 2D array")
        if indices.size and (indices.min() < 0 or indices.max() > dimension):
            raise ValueError("feature indices out of range")
        self.indices = indices
        self.dimension = dimension

    @classmethod
    def from_rows(cls, rows, dimension):
        """Build from an iterable of active index sequences."""
        rows = [tuple(r) for r in rows]
        width = max((len(r) for r in rows), default=0)
        indices = np.full((len(rows), width), dimension, dtype=np.int64)
        for i, r in enumerate(rows):
            indices[i, :len(r)] = r
        return cls(indices, dimension)

    @classmethod
    def from_dense(cls, x):
        """Build from a dense 0/1 array."""
        x = np.asarray(x)
        return cls.from_rows((np.flatnonzero(row) for row in x), x.shape[1])

    def __len__(self):
        return self.indices.shape[0]

    @property
    def shape(self):
        return (len(self), self.dimension)

    def take(self, rows):
        return FeatureMatrix(self.indices[rows], self.dimension)

    def row(self, i) -> tuple:
        r = self.indices[i]
        return tuple(int(j) for j in r[r < self.dimension])

    def toarray(self, rows=None):
        """Dense float matrix of all rows or the selected ``rows``."""
        indices = self.indices if rows is None else self.indices[rows]
        out = np.zeros((indices.shape[0], self.dimension + 1))
        np.put_along_axis(out, indices, 1.0, axis=1)
        return out[:, :self.dimension]

    def dot(self, w):
        """``X @ w`` for a weight vector of length ``dimension``."""
        w = np.append(np.asarray(w, dtype=float), 0.0)
        return w[self.indices].sum(axis=1)

    def rdot(self, v):
        """``X.T @ v`` for a vector of length ``len(self)``."""
        k = self.indices.shape[1]
        out = np.bincount(self.indices.ravel(),
                          weights=np.repeat(np.asarray(v, dtype=float), k),
                          minlength=self.dimension + 1)
        return out[:self.dimension]

    def has(self, feature: int):
        """Boolean mask of rows where ``feature`` is active."""
        return (self.indices == feature).any(axis=1)


class FeatureEncoder:

    """
    Everything needed to turn schwa instances into feature rows: window
    configuration, vocabulary and feature table.
    """

    def __init__(self, config: FeatureConfig, vocab: Vocabulary,
                 table: PhonFeatureTable = None):
        self.config = config
        self.vocab = vocab
        self.table = table or load_feature_table()
        self.dimension = dimension(config, vocab, self.table)

    @classmethod
    def from_entries(cls, entries, config, instances=None, table=None):
        """Encoder with a vocabulary built from training ``entries``."""
        return cls(config, build_vocabulary(entries, instances), table)

    def encode(self, instance, entry) -> FeatureVector:
        return encode(instance, entry, self.config, self.vocab, self.table)

    def encode_at(self, orth, index: int) -> tuple:
        """Active indices for the schwa at ``orth[index]``."""
        return _active(window_symbols(orth, index, self.config),
                       self.config, self.vocab, self.table)

    def matrix(self, instances, entries) -> FeatureMatrix:
        """
        Feature rows of ``instances``.

        :param entries: mapping entry id -> :class:`~pyschwa.types.LexEntry`
        """
        return FeatureMatrix.from_rows(
            (self.encode_at(entries[inst.entry_id].orth, inst.orth_index)
             for inst in instances),
            self.dimension)

    def names(self) -> list:
        return [feature_name(i, self.config, self.vocab, self.table)
                for i in range(self.dimension)]

    def to_dict(self) -> dict:
        return {
            'vocabulary': list(self.vocab.symbols),
            'left': self.config.left,
            'right': self.config.right,
            'phon_features': self.config.phon_features,
            'feature_values': ['{}={}'.format(*fv) for fv in self.table.values],
        }

    @classmethod
    def from_dict(cls, data, table=None):
        table = table or load_feature_table()
        values = ['{}={}'.format(*fv) for fv in table.values]
        if data.get('feature_values', values) != values:
            raise ValueError("Model was trained with a different feature table")
        config = FeatureConfig(data['left'], data['right'],
                               data['phon_features'])
        return cls(config, Vocabulary(data['vocabulary']), table)
