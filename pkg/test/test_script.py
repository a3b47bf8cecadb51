"""
Tests for the functionality in :mod:`pyschwa.script`.
"""

import numpy as np
import pytest

from pyschwa import script
from pyschwa.script import (
    INVENTORY, DEVANAGARI, GURMUKHI, decode_devanagari, decode_gurmukhi,
    decode_words, parse_token_string, render, make_token)
from pyschwa.synthetic import generate_word, spell_devanagari
from pyschwa.types import (
    CONSONANT, MODIFIER, INHERENT_SCHWA, EXPLICIT_VOWEL, SCHWA)


def inherent_positions(tokens):
    return [i for i, t in enumerate(tokens) if t.is_inherent]


def test_decode_pepar():
    tokens = decode_devanagari('पेपर')
    assert render(tokens) == 'p e p a r a'
    assert len(tokens) == 6
    assert inherent_positions(tokens) == [3, 5]
    assert tokens[1].origin == EXPLICIT_VOWEL


def test_decode_table_entry():
    tokens = decode_devanagari('अँकड़ाहट')
    assert render(tokens) == 'a ~ k a rr aa h a tt a'
    assert tokens[0].origin == EXPLICIT_VOWEL
    assert tokens[1].category == MODIFIER
    assert inherent_positions(tokens) == [3, 7, 9]


def test_decode_anusvara():
    tokens = decode_devanagari('जंगली')
    assert render(tokens) == 'j a M g a l ii'
    assert inherent_positions(tokens) == [1, 4]


def test_decode_virama():
    # k + virama + t + a: one inherent schwa at the end
    tokens = decode_devanagari('\u0915\u094d\u0924')
    assert render(tokens) == 'k t a'
    assert inherent_positions(tokens) == [2]


def test_decode_nukta_letters():
    # precomposed and combining spellings agree
    assert render(decode_devanagari('\u095c')) == 'rr a'
    assert render(decode_devanagari('\u0921\u093c')) == 'rr a'
    assert render(decode_devanagari('\u0915\u093c')) == 'q a'


def test_decode_empty():
    assert decode_devanagari('') == ()
    assert decode_gurmukhi('') == ()
    assert decode_words('   ') == []


def test_decode_unknown_codepoint():
    with pytest.raises(script.UnknownCodepoint) as info:
        decode_devanagari('कx')
    assert info.value.position == 1
    assert info.value.char == 'x'
    # mixed script input
    with pytest.raises(script.UnknownCodepoint) as info:
        decode_devanagari('कਕ')
    assert info.value.position == 1


def test_decode_misplaced_sign():
    with pytest.raises(script.MisplacedSign) as info:
        decode_devanagari('ा')
    assert info.value.position == 0
    with pytest.raises(script.MisplacedSign):
        decode_devanagari('\u0915\u094d\u094d')
    with pytest.raises(script.DecodeError):
        decode_devanagari('ं')


def test_decode_words():
    words = decode_words('पेपर जंगली।कमल-घर')
    assert [render(w) for w in words] == [
        'p e p a r a', 'j a M g a l ii', 'k a m a l a', 'gh a r a']
    assert decode_devanagari('पेपर जंगली') == words[0] + words[1]


def test_decode_unknown_script():
    with pytest.raises(ValueError):
        decode_words('', 'tamil')


def test_decode_gurmukhi_single_letter():
    tokens = decode_gurmukhi('ਕ')
    assert render(tokens) == 'k a'
    assert tokens[1].origin == INHERENT_SCHWA


def test_decode_gurmukhi_word():
    # ka + ma + la, checked against the codepoint chart by hand
    tokens = decode_gurmukhi('ਕਮਲ')
    assert render(tokens) == 'k a m a l a'
    assert inherent_positions(tokens) == [1, 3, 5]


def test_decode_gurmukhi_addak():
    # pa + addak + ka + aa sign: the addak doubles the next consonant
    tokens = decode_gurmukhi('ਪੱਕਾ')
    assert render(tokens) == 'p a k k aa'


def test_decode_gurmukhi_bearers_and_tippi():
    assert render(decode_gurmukhi('ਅ')) == 'a'
    # bearer + sign spells an independent vowel
    assert render(decode_gurmukhi('ੲਿ')) == 'i'
    assert render(decode_gurmukhi('ਕੰ')) == 'k a M'
    with pytest.raises(script.MisplacedSign):
        decode_gurmukhi('ੲ')


def test_parse_token_string_orthographic():
    tokens = parse_token_string('a ~ k a rr aa h a tt a')
    assert len(tokens) == 10
    assert inherent_positions(tokens) == [3, 7, 9]
    assert tokens[0].origin == EXPLICIT_VOWEL
    assert parse_token_string('a')[0].origin == EXPLICIT_VOWEL
    assert parse_token_string('') == ()


def test_parse_token_string_phonemic():
    tokens = parse_token_string('a ~ k rr aa h a tt', 'phonemic')
    assert len(tokens) == 8
    weak = parse_token_string('k a_w l', 'phonemic')
    assert weak[1].symbol == SCHWA
    assert weak[1].weak
    assert render(weak) == 'k a_w l'
    # a_w is only a weak schwa on the phonemic side
    with pytest.raises(script.UnknownToken):
        parse_token_string('k a_w', 'orthographic')


def test_parse_token_string_unknown():
    with pytest.raises(script.UnknownToken) as info:
        parse_token_string('k a zz a')
    assert info.value.token == 'zz'
    assert info.value.position == 2
    with pytest.raises(ValueError):
        parse_token_string('k a', 'sideways')


def test_render_round_trip():
    rng = np.random.RandomState(3)
    for _ in range(500):
        tokens = generate_word(rng)
        assert parse_token_string(render(tokens)) == tokens


def test_inherent_count_matches_codepoint_scan():
    # consonant letters not followed by a vowel sign or virama
    signs = {c for c, a in DEVANAGARI.actions.items() if a[0] == 'sign'}
    rng = np.random.RandomState(5)
    for _ in range(300):
        text = spell_devanagari(generate_word(rng))
        expect = sum(
            1 for i, c in enumerate(text)
            if DEVANAGARI.actions.get(c, ('',))[0] == 'consonant' and
            (i + 1 == len(text) or
             (text[i + 1] not in signs and text[i + 1] != '\u094d')))
        assert len(inherent_positions(decode_devanagari(text))) == expect


def test_inherent_schwa_follows_consonant():
    rng = np.random.RandomState(11)
    for _ in range(300):
        tokens = decode_devanagari(spell_devanagari(generate_word(rng)))
        for i in inherent_positions(tokens):
            assert i > 0 and tokens[i - 1].category == CONSONANT


def test_inventory():
    assert len(set(INVENTORY)) == len(INVENTORY)
    for smap in (DEVANAGARI, GURMUKHI):
        assert smap.symbols() <= set(INVENTORY)
    assert INVENTORY.category('k') == CONSONANT
    assert INVENTORY.rule_class('~') == 'V'
    assert INVENTORY.rule_class('M') == 'C'
    with pytest.raises(ValueError):
        script.PhoneInventory([('k', CONSONANT, 'C'), ('k', CONSONANT, 'C')],
                              [])


def test_make_token():
    assert make_token('k').origin == 'consonant'
    assert make_token('aa').origin == EXPLICIT_VOWEL
    assert make_token('a', INHERENT_SCHWA).is_inherent
    with pytest.raises(KeyError):
        make_token('zz')
