"""
Python records shared by the pyschwa modules.
"""

from collections import namedtuple

__all__ = [
    'PhoneToken',
    'LexEntry',
    'SchwaInstance',

    # constants:
    'CONSONANT',
    'VOWEL',
    'MODIFIER',
    'INHERENT_SCHWA',
    'EXPLICIT_VOWEL',
    'ORIGIN_CONSONANT',
    'ORIGIN_MODIFIER',
    'RETAINED',
    'DELETED',
    'SCHWA',
    'WEAK_SCHWA',
    'BOUNDARY',
    'label_name',
    'label_from_name',
]


# token categories
CONSONANT = 'consonant'
VOWEL     = 'vowel'
MODIFIER  = 'modifier'

# token origins
INHERENT_SCHWA   = 'inherent_schwa'
EXPLICIT_VOWEL   = 'explicit_vowel'
ORIGIN_CONSONANT = 'consonant'
ORIGIN_MODIFIER  = 'modifier'

# schwa labels, retained is the positive class
RETAINED = 1
DELETED  = 0

SCHWA      = 'a'
WEAK_SCHWA = 'a_w'
BOUNDARY   = '#'

_LABEL_NAMES = {RETAINED: 'retained', DELETED: 'deleted'}
_LABEL_VALUES = {name: value for value, name in _LABEL_NAMES.items()}


def label_name(label: int) -> str:
    """Return ``'retained'`` or ``'deleted'``."""
    return _LABEL_NAMES[label]


def label_from_name(name: str) -> int:
    try:
        return _LABEL_VALUES[name]
    except KeyError:
        raise ValueError("Not a schwa label: {!r}".format(name)) from None


class PhoneToken(namedtuple('PhoneToken', [
        'symbol', 'category', 'origin', 'weak'])):

    """
    One orthographic or phonemic unit.

    :ivar str symbol: ASCII symbol from the phone inventory
    :ivar str category: ``consonant``, ``vowel`` or ``modifier``
    :ivar str origin: ``inherent_schwa``, ``explicit_vowel``, ``consonant``
                      or ``modifier``
    :ivar bool weak: weakened-schwa marker (phonemic side only)
    """

    __slots__ = ()

    @property
    def is_inherent(self) -> bool:
        return self.origin == INHERENT_SCHWA

    def render(self) -> str:
        """Token as written in token strings (weak schwas as ``a_w``)."""
        return WEAK_SCHWA if self.weak else self.symbol

    def __str__(self):
        return self.render()


class LexEntry(namedtuple('LexEntry', [
        'id', 'headword', 'orth', 'phon', 'source'])):

    """
    One lexicon row: native-script headword with its orthographic and
    phonemic token tuples.
    """

    __slots__ = ()

    def __new__(cls, id, headword, orth, phon, source=''):
        return super().__new__(
            cls, id, headword, tuple(orth), tuple(phon), source)


# A single labeled schwa occurrence. ``orth_index`` points into the
# orthographic tokens of the entry with id ``entry_id``.
SchwaInstance = namedtuple('SchwaInstance', [
    'entry_id', 'orth_index', 'label', 'weak'])
