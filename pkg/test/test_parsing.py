"""
Tests for the functionality in :mod:`pyschwa.parsing`.
"""

import pytest

from pyschwa.parsing import (
    Node, Parser, ParseError, GrammarError, analyze_grammar,
    create_parse_table)
from pyschwa.util import Token, tokenize, regex_matcher, choice_matcher


# sums of numbers, e.g. '1 + 2 + 3'
TERMINALS = ['NUM', '+', '$']
GRAMMAR = {
    'expr': [['NUM', 'tail', '$']],
    'tail': [['+', 'NUM', 'tail'], []],
}
TOKENS = [
    ('space', regex_matcher(r'\s+')),
    ('NUM', regex_matcher(r'\d+')),
    ('+', choice_matcher('+')),
]


def parse(text):
    tokens = list(tokenize(TOKENS, text, skip=('space',)))
    tokens.append(Token('$', len(text), 0, text))
    return Parser(TERMINALS, GRAMMAR, 'expr').parse(tokens)


def leaves(node):
    for child in node.children:
        if isinstance(child, Node):
            yield from leaves(child)
        else:
            yield child


def test_parse_tree():
    root = parse('1 + 22')
    assert root.symbol == 'expr'
    assert [t.text for t in leaves(root)] == ['1', '+', '22', '']
    tail = root.children[1]
    assert tail.symbol == 'tail'
    assert tail.children[2] == Node('tail', [])


def test_parse_errors():
    for text in ('', '+', '1 +', '1 2', '1 + + 2'):
        with pytest.raises(ParseError):
            parse(text)


def test_error_message_points_at_token():
    with pytest.raises(ParseError) as info:
        parse('1 + + 2')
    assert info.value.args[0].splitlines()[-1].strip() == '^'


def test_analyze_grammar():
    sets = analyze_grammar(TERMINALS, GRAMMAR)
    assert sets.nullable['tail'] and not sets.nullable['expr']
    assert sets.first['expr'] == {'NUM'}
    assert sets.first['tail'] == {'+'}
    assert sets.follow['tail'] == {'$'}
    assert sets.follow['NUM'] == {'+', '$'}


def test_parse_table():
    table = create_parse_table(TERMINALS, GRAMMAR, 'expr')
    assert table['tail'] == {'+': ['+', 'NUM', 'tail'], '$': []}
    assert table['expr'] == {'NUM': ['NUM', 'tail', '$']}


def test_grammar_errors():
    with pytest.raises(GrammarError):
        create_parse_table(TERMINALS, GRAMMAR, 'missing')
    ambiguous = {'s': [['NUM'], ['NUM', '+']]}
    with pytest.raises(GrammarError):
        create_parse_table(TERMINALS, ambiguous, 's')
