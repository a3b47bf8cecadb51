"""
Decoding of Devanagari and Gurmukhi text into orthographic phone tokens.

Both scripts are abugidas: a bare consonant letter carries an inherent
schwa, which a vowel sign replaces and a virama suppresses. The decoders make
every inherent schwa an explicit ``a`` token with origin ``inherent_schwa``.

The phone inventory and both codepoint maps are listed in
``doc/inventory.rst``.
"""

from pyschwa.types import (
    PhoneToken, SCHWA, WEAK_SCHWA,
    CONSONANT, VOWEL, MODIFIER,
    INHERENT_SCHWA, EXPLICIT_VOWEL, ORIGIN_CONSONANT, ORIGIN_MODIFIER)


__all__ = [
    'PhoneInventory',
    'INVENTORY',
    'DEVANAGARI',
    'GURMUKHI',
    'DecodeError',
    'UnknownCodepoint',
    'MisplacedSign',
    'UnknownToken',
    'decode_devanagari',
    'decode_gurmukhi',
    'decode_words',
    'parse_token_string',
    'render',
    'make_token',
]


class DecodeError(ValueError):

    def __init__(self, message, position, char):
        super().__init__(message)
        self.position = position
        self.char = char


class UnknownCodepoint(DecodeError):

    def __init__(self, position, char):
        super().__init__(
            "Unknown character {!r} (U+{:04X}) at position {}"
            .format(char, ord(char), position), position, char)


class MisplacedSign(DecodeError):

    def __init__(self, position, char):
        super().__init__(
            "Sign {!r} (U+{:04X}) at position {} has no base letter"
            .format(char, ord(char), position), position, char)


class UnknownToken(ValueError):

    def __init__(self, token, position):
        super().__init__("Unknown token {!r} at position {}"
                         .format(token, position))
        self.token = token
        self.position = position


# symbol, category, rule class (V/C, used by the rule baseline)
_PHONES = [
    # vowels
    ('a',   VOWEL, 'V'),
    ('aa',  VOWEL, 'V'),
    ('i',   VOWEL, 'V'),
    ('ii',  VOWEL, 'V'),
    ('u',   VOWEL, 'V'),
    ('uu',  VOWEL, 'V'),
    ('ri',  VOWEL, 'V'),
    ('e',   VOWEL, 'V'),
    ('ai',  VOWEL, 'V'),
    ('o',   VOWEL, 'V'),
    ('au',  VOWEL, 'V'),
    ('ae',  VOWEL, 'V'),
    ('ao',  VOWEL, 'V'),
    # stops, nasals
    ('k',   CONSONANT, 'C'),
    ('kh',  CONSONANT, 'C'),
    ('g',   CONSONANT, 'C'),
    ('gh',  CONSONANT, 'C'),
    ('ng',  CONSONANT, 'C'),
    ('c',   CONSONANT, 'C'),
    ('ch',  CONSONANT, 'C'),
    ('j',   CONSONANT, 'C'),
    ('jh',  CONSONANT, 'C'),
    ('ny',  CONSONANT, 'C'),
    ('tt',  CONSONANT, 'C'),
    ('tth', CONSONANT, 'C'),
    ('dd',  CONSONANT, 'C'),
    ('ddh', CONSONANT, 'C'),
    ('nn',  CONSONANT, 'C'),
    ('t',   CONSONANT, 'C'),
    ('th',  CONSONANT, 'C'),
    ('d',   CONSONANT, 'C'),
    ('dh',  CONSONANT, 'C'),
    ('n',   CONSONANT, 'C'),
    ('p',   CONSONANT, 'C'),
    ('ph',  CONSONANT, 'C'),
    ('b',   CONSONANT, 'C'),
    ('bh',  CONSONANT, 'C'),
    ('m',   CONSONANT, 'C'),
    # approximants, fricatives
    ('y',   CONSONANT, 'C'),
    ('r',   CONSONANT, 'C'),
    ('l',   CONSONANT, 'C'),
    ('ll',  CONSONANT, 'C'),
    ('v',   CONSONANT, 'C'),
    ('sh',  CONSONANT, 'C'),
    ('ss',  CONSONANT, 'C'),
    ('s',   CONSONANT, 'C'),
    ('h',   CONSONANT, 'C'),
    # nukta letters
    ('q',   CONSONANT, 'C'),
    ('x',   CONSONANT, 'C'),
    ('G',   CONSONANT, 'C'),
    ('z',   CONSONANT, 'C'),
    ('f',   CONSONANT, 'C'),
    ('rr',  CONSONANT, 'C'),
    ('rrh', CONSONANT, 'C'),
    # candrabindu nasalizes the vowel it follows
    ('~',   MODIFIER, 'V'),
    ('M',   MODIFIER, 'C'),
    ('H',   MODIFIER, 'C'),
]


# decode actions
_CONSONANT = 'consonant'
_VOWEL     = 'vowel'
_BEARER    = 'bearer'
_SIGN      = 'sign'
_VIRAMA    = 'virama'
_NUKTA     = 'nukta'
_MODIFIER  = 'modifier'
_ADDAK     = 'addak'
_SEPARATOR = 'separator'
_IGNORE    = 'ignore'

_SEPARATORS = {
    ' ': (_SEPARATOR,), '\t': (_SEPARATOR,), '\n': (_SEPARATOR,),
    '\r': (_SEPARATOR,), '-': (_SEPARATOR,),
    '\u0964': (_SEPARATOR,), '\u0965': (_SEPARATOR,),
    '\u200c': (_IGNORE,), '\u200d': (_IGNORE,),
}


def _letters(kind, start, symbols):
    """Map a run of consecutive codepoints to actions, ``None`` = gap."""
    return {
        chr(start + i): (kind, symbol)
        for i, symbol in enumerate(symbols)
        if symbol is not None
    }


class ScriptMap:

    """
    Codepoint table of one abugida.

    :param str name: script name
    :param dict actions: character -> decode action tuple
    :param dict nukta: consonant symbol -> symbol of its nukta variant
    """

    def __init__(self, name, actions, nukta):
        self.name = name
        self.actions = {**_SEPARATORS, **actions}
        self.nukta = nukta

    def __repr__(self):
        return '<{} {}>'.format(self.__class__.__name__, self.name)

    def action(self, char):
        return self.actions.get(char)

    def symbols(self):
        """All symbols any action of this map can emit."""
        emitted = {a[1] for a in self.actions.values()
                   if len(a) > 1 and a[1] is not None}
        return emitted | set(self.nukta.values()) | {SCHWA}


DEVANAGARI = ScriptMap('devanagari', {
    **_letters(_MODIFIER, 0x0901, ['~', 'M', 'H']),
    **_letters(_VOWEL, 0x0905, [
        'a', 'aa', 'i', 'ii', 'u', 'uu', 'ri', None,
        'ae', None, 'e', 'ai', 'ao', None, 'o', 'au']),
    **_letters(_CONSONANT, 0x0915, [
        'k', 'kh', 'g', 'gh', 'ng',
        'c', 'ch', 'j', 'jh', 'ny',
        'tt', 'tth', 'dd', 'ddh', 'nn',
        't', 'th', 'd', 'dh', 'n', None,
        'p', 'ph', 'b', 'bh', 'm',
        'y', 'r', None, 'l', 'll', None, 'v',
        'sh', 'ss', 's', 'h']),
    '\u093c': (_NUKTA,),
    **_letters(_SIGN, 0x093e, [
        'aa', 'i', 'ii', 'u', 'uu', 'ri', None,
        'ae', None, 'e', 'ai', 'ao', None, 'o', 'au']),
    '\u094d': (_VIRAMA,),
    **_letters(_CONSONANT, 0x0958, [
        'q', 'x', 'G', 'z', 'rr', 'rrh', 'f']),
}, nukta={
    'k': 'q', 'kh': 'x', 'g': 'G', 'j': 'z',
    'dd': 'rr', 'ddh': 'rrh', 'ph': 'f',
})


GURMUKHI = ScriptMap('gurmukhi', {
    '\u0a02': (_MODIFIER, 'M'),
    '\u0a03': (_MODIFIER, 'H'),
    '\u0a70': (_MODIFIER, 'M'),
    '\u0a71': (_ADDAK,),
    # vowel bearers: alone, only U+0A05 spells a vowel
    '\u0a05': (_BEARER, 'a'),
    '\u0a72': (_BEARER, None),
    '\u0a73': (_BEARER, None),
    **_letters(_VOWEL, 0x0a06, ['aa', 'i', 'ii', 'u', 'uu']),
    **_letters(_VOWEL, 0x0a0f, ['e', 'ai']),
    **_letters(_VOWEL, 0x0a13, ['o', 'au']),
    **_letters(_CONSONANT, 0x0a15, [
        'k', 'kh', 'g', 'gh', 'ng',
        'c', 'ch', 'j', 'jh', 'ny',
        'tt', 'tth', 'dd', 'ddh', 'nn',
        't', 'th', 'd', 'dh', 'n', None,
        'p', 'ph', 'b', 'bh', 'm',
        'y', 'r', None, 'l', 'll', None, 'v', 'sh', None, 's', 'h']),
    '\u0a3c': (_NUKTA,),
    **_letters(_SIGN, 0x0a3e, ['aa', 'i', 'ii', 'u', 'uu']),
    **_letters(_SIGN, 0x0a47, ['e', 'ai']),
    **_letters(_SIGN, 0x0a4b, ['o', 'au']),
    '\u0a4d': (_VIRAMA,),
    **_letters(_CONSONANT, 0x0a59, ['x', 'G', 'z', 'rr']),
    '\u0a5e': (_CONSONANT, 'f'),
}, nukta={
    'kh': 'x', 'g': 'G', 'j': 'z', 'ph': 'f', 's': 'sh', 'l': 'll',
})


class PhoneInventory:

    """
    Closed table of phone symbols and the codepoint maps decoding into it.

    :param list entries: (symbol, category, rule class) triples
    :param list scripts: :class:`ScriptMap` instances
    """

    def __init__(self, entries, scripts):
        self.entries = tuple((s, c) for s, c, _ in entries)
        self._category = {}
        self._rule_class = {}
        for symbol, category, rule_class in entries:
            if symbol in self._category:
                raise ValueError("Duplicate phone symbol: {!r}".format(symbol))
            self._category[symbol] = category
            self._rule_class[symbol] = rule_class
        self.scripts = {s.name: s for s in scripts}
        for script in scripts:
            unknown = script.symbols() - self._category.keys()
            if unknown:
                raise ValueError("{} map emits unknown symbols: {}"
                                 .format(script.name, sorted(unknown)))

    def __contains__(self, symbol):
        return symbol in self._category

    def __iter__(self):
        return iter(self._category)

    def __len__(self):
        return len(self._category)

    def category(self, symbol: str) -> str:
        return self._category[symbol]

    def rule_class(self, symbol: str) -> str:
        """``'V'`` or ``'C'`` as seen by context rules."""
        return self._rule_class[symbol]


INVENTORY = PhoneInventory(_PHONES, [DEVANAGARI, GURMUKHI])


def make_token(symbol: str, origin: str = None, weak: bool = False
               ) -> PhoneToken:
    """Create a token, deriving the origin from the category by default."""
    category = INVENTORY.category(symbol)
    if origin is None:
        origin = {
            CONSONANT: ORIGIN_CONSONANT,
            VOWEL: EXPLICIT_VOWEL,
            MODIFIER: ORIGIN_MODIFIER,
        }[category]
    return PhoneToken(symbol, category, origin, weak)


_INHERENT = PhoneToken(SCHWA, VOWEL, INHERENT_SCHWA, False)


class _WordDecoder:

    """Left-to-right state machine over the characters of one word."""

    def __init__(self, script):
        self.script = script
        self.tokens = []
        self.pending = False        # last letter may still take a vowel
        self.letter_start = None    # token index of the last consonant letter
        self.geminate = None        # position of an unconsumed addak
        self.bearer = None          # (symbol, position, char)

    def feed(self, pos, char, action):
        kind = action[0]
        if self.bearer is not None and kind != _SIGN:
            self._resolve_bearer()
        if kind == _CONSONANT:
            self._flush()
            self.letter_start = len(self.tokens)
            token = make_token(action[1])
            if self.geminate is not None:
                self.tokens.append(token)
                self.geminate = None
            self.tokens.append(token)
            self.pending = True
        elif kind == _VOWEL:
            self._flush_all()
            self.tokens.append(make_token(action[1]))
        elif kind == _BEARER:
            self._flush_all()
            self.bearer = (action[1], pos, char)
        elif kind == _SIGN:
            if self.bearer is not None:
                self.bearer = None
            elif not self.pending:
                raise MisplacedSign(pos, char)
            self.tokens.append(make_token(action[1]))
            self.pending = False
        elif kind == _VIRAMA:
            if not self.pending:
                raise MisplacedSign(pos, char)
            self.pending = False
        elif kind == _NUKTA:
            if not self.pending:
                raise MisplacedSign(pos, char)
            try:
                symbol = self.script.nukta[self.tokens[-1].symbol]
            except KeyError:
                raise MisplacedSign(pos, char) from None
            for i in range(self.letter_start, len(self.tokens)):
                self.tokens[i] = make_token(symbol)
        elif kind == _MODIFIER:
            self._flush_all()
            if not self.tokens:
                raise MisplacedSign(pos, char)
            self.tokens.append(make_token(action[1]))
        elif kind == _ADDAK:
            self._flush_all()
            self.geminate = (pos, char)

    def finish(self):
        if self.bearer is not None:
            self._resolve_bearer()
        self._flush_all()
        return tuple(self.tokens)

    def _flush(self):
        if self.pending:
            self.tokens.append(_INHERENT)
            self.pending = False

    def _flush_all(self):
        self._flush()
        if self.geminate is not None:
            raise MisplacedSign(*self.geminate)

    def _resolve_bearer(self):
        symbol, pos, char = self.bearer
        self.bearer = None
        if symbol is None:
            raise MisplacedSign(pos, char)
        self.tokens.append(make_token(symbol))


def decode_words(text: str, script: str = 'devanagari') -> list:
    """
    Decode ``text`` into one token tuple per word.

    Words are separated by whitespace, hyphens and dandas.

    :param text: unicode input
    :param script: ``'devanagari'`` or ``'gurmukhi'``
    :raises UnknownCodepoint: for characters outside the codepoint map
    :raises MisplacedSign: for signs without a base letter
    """
    try:
        smap = INVENTORY.scripts[script]
    except KeyError:
        raise ValueError("Unknown script: {!r}".format(script)) from None
    words = []
    decoder = _WordDecoder(smap)
    for pos, char in enumerate(text):
        action = smap.action(char)
        if action is None:
            raise UnknownCodepoint(pos, char)
        if action[0] == _IGNORE:
            continue
        if action[0] == _SEPARATOR:
            word = decoder.finish()
            if word:
                words.append(word)
            decoder = _WordDecoder(smap)
            continue
        decoder.feed(pos, char, action)
    word = decoder.finish()
    if word:
        words.append(word)
    return words


def decode_devanagari(text: str) -> tuple:
    """
    Decode Devanagari text into orthographic phone tokens.

    >>> render(decode_devanagari('पेपर'))
    'p e p a r a'
    """
    return tuple(t for word in decode_words(text, 'devanagari') for t in word)


def decode_gurmukhi(text: str) -> tuple:
    """Decode Gurmukhi text into orthographic phone tokens."""
    return tuple(t for word in decode_words(text, 'gurmukhi') for t in word)


def parse_token_string(s: str, side: str = 'orthographic') -> tuple:
    """
    Parse space separated ASCII tokens.

    On the orthographic side an ``a`` right after a consonant is an
    inherent schwa. On the phonemic side ``a_w`` is a weakened schwa.

    :param s: token string, e.g. ``"a ~ k a rr aa h a tt a"``
    :param side: ``'orthographic'`` or ``'phonemic'``
    :raises UnknownToken: for tokens outside the inventory
    """
    if side not in ('orthographic', 'phonemic'):
        raise ValueError("Unknown side: {!r}".format(side))
    if not s:
        return ()
    tokens = []
    for i, text in enumerate(s.split(' ')):
        weak = False
        if text == WEAK_SCHWA and side == 'phonemic':
            text, weak = SCHWA, True
        if text not in INVENTORY:
            raise UnknownToken(text, i)
        if (text == SCHWA and tokens
                and tokens[-1].category == CONSONANT):
            tokens.append(make_token(text, INHERENT_SCHWA, weak))
        else:
            tokens.append(make_token(text, weak=weak))
    return tuple(tokens)


def render(tokens) -> str:
    """Inverse of :func:`parse_token_string`."""
    return ' '.join(t.render() for t in tokens)
