"""
Synthetic lexicons labeled by a rule set.

Pseudo-words are strings of aksharas (a consonant, optionally preceded by a
half consonant, carrying either the inherent schwa or a vowel sign). Every
inherent schwa is deleted or retained as the rule set decides from its
orthographic context, which makes the rules an exact oracle for the labels.
"""

import logging

import numpy as np

from pyschwa.align import apply_deletions
from pyschwa.baseline import load_rules, rule_predict
from pyschwa.script import DEVANAGARI, make_token
from pyschwa.types import (
    LexEntry, CONSONANT, VOWEL, INHERENT_SCHWA, SCHWA, DELETED)


__all__ = [
    'CONSONANTS',
    'VOWELS',
    'generate_word',
    'generate_corpus',
    'spell_devanagari',
]

logger = logging.getLogger(__name__)


CONSONANTS = ('k', 'kh', 'g', 'c', 'j', 'tt', 't', 'd', 'n',
              'p', 'b', 'm', 'y', 'r', 'l', 'v', 's', 'h')
VOWELS = ('aa', 'i', 'ii', 'u', 'uu', 'e', 'ai', 'o')

_INHERENT = make_token(SCHWA, INHERENT_SCHWA)


def _spelling_tables():
    letters, signs = {}, {}
    for char, action in DEVANAGARI.actions.items():
        kind = action[0]
        if kind in ('consonant', 'vowel', 'modifier'):
            letters.setdefault(action[1], char)
        elif kind == 'sign':
            signs[action[1]] = char
    return letters, signs


_LETTERS, _SIGNS = _spelling_tables()
_VIRAMA = '\u094d'


def spell_devanagari(tokens) -> str:
    """
    Devanagari spelling of an orthographic token sequence, such that
    :func:`~pyschwa.script.decode_devanagari` gives the tokens back.
    """
    out = []
    for i, t in enumerate(tokens):
        prev = tokens[i - 1] if i > 0 else None
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        if t.category == CONSONANT:
            out.append(_LETTERS[t.symbol])
            if nxt is None or nxt.category != VOWEL:
                out.append(_VIRAMA)
        elif t.category == VOWEL:
            if t.is_inherent:
                continue
            if prev is not None and prev.category == CONSONANT:
                out.append(_SIGNS[t.symbol])
            else:
                out.append(_LETTERS[t.symbol])
        else:
            out.append(_LETTERS[t.symbol])
    return ''.join(out)


def generate_word(rng, max_aksharas=4, p_cluster=0.3, p_inherent=0.45,
                  p_vowel=0.15, p_nasal=0.05) -> tuple:
    """
    Random orthographic token sequence.

    :param rng: :class:`numpy.random.RandomState`
    :param max_aksharas: maximum number of consonant aksharas
    :param p_cluster: probability of a half consonant before an akshara
    :param p_inherent: probability that an akshara keeps its inherent schwa
    :param p_vowel: probability of an independent vowel before an akshara
    :param p_nasal: probability of an anusvara after a vowel sign
    """
    tokens = []
    for _ in range(rng.randint(1, max_aksharas + 1)):
        if rng.rand() < p_vowel:
            # only a word-initial independent vowel may be 'a'
            choices = VOWELS + ((SCHWA,) if not tokens else ())
            tokens.append(make_token(choices[rng.randint(len(choices))]))
        if rng.rand() < p_cluster:
            tokens.append(make_token(CONSONANTS[rng.randint(len(CONSONANTS))]))
        tokens.append(make_token(CONSONANTS[rng.randint(len(CONSONANTS))]))
        if rng.rand() < p_inherent:
            tokens.append(_INHERENT)
        else:
            tokens.append(make_token(VOWELS[rng.randint(len(VOWELS))]))
            if rng.rand() < p_nasal:
                tokens.append(make_token('M'))
    return tuple(tokens)


def generate_corpus(n_words: int, seed: int = 0, ruleset=None,
                    max_aksharas: int = 4, source: str = 'synthetic'):
    """
    ``n_words`` rule-labeled lexicon entries with ids ``0 .. n_words-1``.

    The phonemic side of each entry is its orthography with the schwas the
    rule set deletes removed.
    """
    if ruleset is None:
        ruleset = load_rules()
    rng = np.random.RandomState(seed)
    entries = []
    for i in range(n_words):
        orth = generate_word(rng, max_aksharas)
        deleted = [
            k for k, t in enumerate(orth)
            if t.is_inherent and rule_predict(ruleset, orth, k) == DELETED
        ]
        phon = apply_deletions(orth, deleted)
        entries.append(LexEntry(i, spell_devanagari(orth), orth, phon, source))
    logger.info("generated %d synthetic words", len(entries))
    return entries
