"""
Forced alignment of orthographic and phonemic token sequences.

The only edit the aligner permits is the deletion of an inherent schwa. Each
inherent schwa is labeled retained (it has a phonemic counterpart) or deleted
(it has none). Entries whose pronunciation cannot be explained by schwa
deletions alone are discarded.
"""

import logging
from collections import namedtuple

from pyschwa.types import SchwaInstance, SCHWA, RETAINED, DELETED


__all__ = [
    'AlignmentFailure',
    'AlignmentResult',
    'SchwaLabel',
    'WEAK_POLICIES',
    'align',
    'extract_instances',
    'align_lexicon',
    'apply_deletions',
]

logger = logging.getLogger(__name__)

WEAK_POLICIES = ('retain', 'delete', 'drop')


# failure reasons
MISMATCH  = 'mismatch'
AMBIGUOUS = 'ambiguous'
TRAILING  = 'trailing'


AlignmentFailure = namedtuple('AlignmentFailure', [
    'reason', 'orth_index', 'phon_index'])

SchwaLabel = namedtuple('SchwaLabel', ['orth_index', 'label', 'weak'])


class AlignmentResult(namedtuple('AlignmentResult', [
        'labels', 'failure', 'steps'])):

    """
    Outcome of :func:`align`.

    :ivar tuple labels: :class:`SchwaLabel` per inherent schwa, in increasing
                        ``orth_index`` order (empty on failure)
    :ivar failure: :class:`AlignmentFailure` or ``None``
    :ivar int steps: number of token comparisons performed
    """

    __slots__ = ()

    @property
    def ok(self) -> bool:
        return self.failure is None

    def __bool__(self):
        return self.ok


def _matches(o, p) -> bool:
    # a weak phonemic schwa only stands for an inherent one
    return o.symbol == p.symbol and (not p.weak or o.is_inherent)


def align(orth, phon) -> AlignmentResult:
    """
    Align ``orth`` against ``phon`` with a single left-to-right scan.

    Performs at most one token comparison per orthographic token. For
    ``k a m a l a`` against ``k a m a l`` the schwas at 1 and 3 are labeled
    retained and the one at 5 deleted.
    """
    labels = []
    steps = 0
    i = j = 0
    n_orth, n_phon = len(orth), len(phon)

    def fail(reason):
        logger.debug("alignment failed (%s) at orth %d, phon %d", reason, i, j)
        return AlignmentResult((), AlignmentFailure(reason, i, j), steps)

    while i < n_orth:
        o = orth[i]
        if (o.is_inherent and i + 1 < n_orth
                and orth[i + 1].symbol == SCHWA):
            return fail(AMBIGUOUS)
        if j < n_phon:
            p = phon[j]
            steps += 1
            if _matches(o, p):
                if o.is_inherent:
                    labels.append(SchwaLabel(i, RETAINED, p.weak))
                i += 1
                j += 1
                continue
        if not o.is_inherent:
            return fail(MISMATCH)
        labels.append(SchwaLabel(i, DELETED, False))
        i += 1
    if j < n_phon:
        return fail(TRAILING)
    return AlignmentResult(tuple(labels), None, steps)


def extract_instances(entry, weak_policy: str = 'retain'):
    """
    Labeled schwa instances of ``entry``, or ``None`` if the entry must be
    discarded.

    :param entry: :class:`~pyschwa.types.LexEntry`
    :param weak_policy: how weakened schwas are labeled: ``retain``,
                        ``delete`` or ``drop`` (exclude them)
    """
    if weak_policy not in WEAK_POLICIES:
        raise ValueError("Unknown weak schwa policy: {!r}".format(weak_policy))
    result = align(entry.orth, entry.phon)
    if not result:
        return None
    return _instances(entry, result, weak_policy)


def _instances(entry, result, weak_policy):
    instances = []
    for index, label, weak in result.labels:
        if weak:
            if weak_policy == 'drop':
                continue
            if weak_policy == 'delete':
                label = DELETED
        instances.append(SchwaInstance(entry.id, index, label, weak))
    return instances


def align_lexicon(entries, weak_policy: str = 'retain'):
    """
    Run :func:`extract_instances` over ``entries``.

    :returns: ``(instances, discarded)`` where ``discarded`` lists
              ``(entry, failure)`` pairs
    """
    if weak_policy not in WEAK_POLICIES:
        raise ValueError("Unknown weak schwa policy: {!r}".format(weak_policy))
    instances = []
    discarded = []
    for entry in entries:
        result = align(entry.orth, entry.phon)
        if not result:
            discarded.append((entry, result.failure))
            continue
        instances.extend(_instances(entry, result, weak_policy))
    if discarded:
        logger.info("discarded %d of %d entries as unalignable",
                    len(discarded), len(entries))
    return instances, discarded


def apply_deletions(orth, deleted) -> tuple:
    """Drop the tokens at the orthographic indices in ``deleted``."""
    deleted = set(deleted)
    return tuple(t for i, t in enumerate(orth) if i not in deleted)
