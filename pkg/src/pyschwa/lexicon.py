"""
Pronunciation lexicon files: parsing, writing, splitting and statistics.

A lexicon file is UTF-8 text. The first line is the header
``schwa-lexicon v1``; every other non-empty line that does not start with
``#`` is a tab separated row::

    headword <TAB> orthographic tokens <TAB> phonemic tokens [<TAB> source]

Token columns are space separated inventory symbols, weakened schwas are
written ``a_w`` in the phonemic column.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from pyschwa.align import align_lexicon
from pyschwa.script import parse_token_string, render, UnknownToken
from pyschwa.types import (
    LexEntry, SchwaInstance, DELETED, label_name, label_from_name)
from pyschwa.util import atomic_write


__all__ = [
    'FormatError',
    'Reject',
    'SplitSpec',
    'LexiconStats',
    'LEXICON_HEADER',
    'INSTANCES_HEADER',
    'parse_lexicon',
    'parse_lexicon_lines',
    'write_lexicon',
    'format_lexicon',
    'split_lexicon',
    'stats',
    'stats_by_source',
    'read_instances',
    'write_instances',
]

logger = logging.getLogger(__name__)

LEXICON_HEADER   = 'schwa-lexicon v1'
INSTANCES_HEADER = 'schwa-instances v1'


class FormatError(ValueError):
    pass


# A malformed lexicon line.
Reject = namedtuple('Reject', ['line_number', 'line', 'reason'])


@dataclass(frozen=True)
class SplitSpec:

    """Train/dev/test fractions and the seed of the shuffle."""

    train: float = 0.8
    dev: float = 0.1
    test: float = 0.1
    seed: int = 0

    def __post_init__(self):
        fractions = self.fractions
        if any(f < 0 for f in fractions):
            raise ValueError("Negative split fraction: {}".format(fractions))
        if abs(sum(fractions) - 1) > 1e-9:
            raise ValueError("Split fractions must sum to 1, got {}"
                             .format(sum(fractions)))

    @property
    def fractions(self):
        return (self.train, self.dev, self.test)

    def sizes(self, n: int) -> tuple:
        """Set sizes for ``n`` entries by largest remainder."""
        raw = [f * n for f in self.fractions]
        sizes = [int(np.floor(r)) for r in raw]
        rest = n - sum(sizes)
        order = sorted(range(3), key=lambda k: (sizes[k] - raw[k], k))
        for k in order[:rest]:
            sizes[k] += 1
        return tuple(sizes)


class LexiconStats(namedtuple('LexiconStats', [
        'entry_count', 'schwa_count', 'deleted_count', 'discarded_count'])):

    """
    Summary counts of a lexicon.

    ``entry_count`` counts aligned entries, ``discarded_count`` the entries
    dropped by the aligner. Stats of disjoint lexicons can be added.
    """

    __slots__ = ()

    @property
    def deletion_rate(self):
        """Fraction of deleted schwas, ``None`` without schwas."""
        if self.schwa_count == 0:
            return None
        return self.deleted_count / self.schwa_count

    def __add__(self, other):
        if not isinstance(other, LexiconStats):
            return NotImplemented
        return LexiconStats(*(a + b for a, b in zip(self, other)))


def _parse_row(fields):
    if len(fields) not in (3, 4):
        raise ValueError("expected 3 or 4 tab separated columns, got {}"
                         .format(len(fields)))
    headword, orth, phon = fields[:3]
    source = fields[3] if len(fields) == 4 else ''
    if not headword:
        raise ValueError("empty headword")
    return (headword,
            _parse_column(orth, 'orthographic'),
            _parse_column(phon, 'phonemic'),
            source)


def _parse_column(text, side):
    if not text:
        raise ValueError("empty {} column".format(side))
    try:
        return parse_token_string(text, side)
    except UnknownToken as e:
        raise ValueError("unknown token {!r} at position {} of {} column"
                         .format(e.token, e.position, side)) from None


def parse_lexicon_lines(lines, first_id: int = 0):
    """
    Parse an iterable of lexicon lines (header included).

    :returns: ``(entries, rejects)``
    :raises FormatError: for a missing or unknown header
    """
    lines = iter(lines)
    header = next(lines, None)
    if header is None:
        raise FormatError("Missing lexicon header {!r}".format(LEXICON_HEADER))
    header = header.lstrip('\ufeff').rstrip('\r\n')
    if header != LEXICON_HEADER:
        raise FormatError("Unknown lexicon header: {!r} (expected {!r})"
                          .format(header, LEXICON_HEADER))
    entries = []
    rejects = []
    for number, line in enumerate(lines, 2):
        line = line.rstrip('\r\n')
        if not line.strip() or line.startswith('#'):
            continue
        try:
            headword, orth, phon, source = _parse_row(line.split('\t'))
        except ValueError as e:
            rejects.append(Reject(number, line, str(e)))
            continue
        entries.append(LexEntry(
            first_id + len(entries), headword, orth, phon, source))
    return entries, rejects


def parse_lexicon(path, first_id: int = 0):
    """
    Read a lexicon file.

    Malformed rows are returned as :class:`Reject` records, never dropped
    silently. Entry ids are assigned sequentially from ``first_id``.

    :returns: ``(entries, rejects)``
    :raises FormatError: for a missing or unknown header
    :raises OSError: if the file cannot be read
    """
    with open(path, encoding='utf-8') as f:
        try:
            entries, rejects = parse_lexicon_lines(f, first_id)
        except UnicodeDecodeError as e:
            raise FormatError("{}: not valid UTF-8: {}".format(path, e)) from None
    logger.info("%s: %d entries, %d rejected lines",
                path, len(entries), len(rejects))
    for reject in rejects:
        logger.debug("%s:%d: %s", path, reject.line_number, reject.reason)
    return entries, rejects


def format_lexicon(entries) -> str:
    """Lexicon file contents for ``entries``."""
    lines = [LEXICON_HEADER]
    for entry in entries:
        fields = [entry.headword, render(entry.orth), render(entry.phon)]
        if entry.source:
            fields.append(entry.source)
        lines.append('\t'.join(fields))
    return '\n'.join(lines) + '\n'


def write_lexicon(entries, path):
    """Write ``entries`` in the format read by :func:`parse_lexicon`."""
    with atomic_write(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(format_lexicon(entries))


def split_lexicon(entries, spec: SplitSpec):
    """
    Partition ``entries`` into train, dev and test lists.

    The partition is by entry and deterministic for a fixed seed. Each list
    keeps the input order.
    """
    entries = list(entries)
    if not entries:
        raise ValueError("Cannot split an empty lexicon")
    n_train, n_dev, _ = spec.sizes(len(entries))
    perm = np.random.RandomState(spec.seed).permutation(len(entries))
    parts = np.split(perm, [n_train, n_train + n_dev])
    return tuple([entries[i] for i in np.sort(part)] for part in parts)


def stats(entries, weak_policy: str = 'retain') -> LexiconStats:
    """Align ``entries`` and count entries, schwas and deletions."""
    entries = list(entries)
    instances, discarded = align_lexicon(entries, weak_policy)
    return LexiconStats(
        entry_count=len(entries) - len(discarded),
        schwa_count=len(instances),
        deleted_count=sum(1 for i in instances if i.label == DELETED),
        discarded_count=len(discarded))


def stats_by_source(entries, weak_policy: str = 'retain') -> dict:
    """:class:`LexiconStats` per ``source`` tag, in order of appearance."""
    groups = {}
    for entry in entries:
        groups.setdefault(entry.source, []).append(entry)
    return {source: stats(group, weak_policy)
            for source, group in groups.items()}


def write_instances(instances, path):
    """Write schwa instances as ``entry_id, orth_index, label, weak`` rows."""
    with atomic_write(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(INSTANCES_HEADER + '\n')
        for inst in instances:
            f.write('{}\t{}\t{}\t{}\n'.format(
                inst.entry_id, inst.orth_index,
                label_name(inst.label), int(inst.weak)))


def read_instances(path) -> list:
    """
    Read a file written by :func:`write_instances`.

    :raises FormatError: for a bad header or a malformed row
    """
    instances = []
    with open(path, encoding='utf-8') as f:
        header = f.readline().rstrip('\r\n')
        if header != INSTANCES_HEADER:
            raise FormatError("Unknown instances header: {!r} (expected {!r})"
                              .format(header, INSTANCES_HEADER))
        for number, line in enumerate(f, 2):
            line = line.rstrip('\r\n')
            if not line:
                continue
            try:
                entry_id, index, label, weak = line.split('\t')
                if weak not in ('0', '1'):
                    raise ValueError("weak flag must be 0 or 1")
                instances.append(SchwaInstance(
                    int(entry_id), int(index),
                    label_from_name(label), weak == '1'))
            except ValueError as e:
                raise FormatError("{}:{}: {}".format(path, number, e)) from None
    return instances
