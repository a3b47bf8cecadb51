"""
Implementation of a simple LL(1) parser that builds syntax trees.

Used for the rule-file grammar of :mod:`pyschwa.baseline` and for reading
back tree dumps in :mod:`pyschwa.models`.
"""
from collections import namedtuple


__all__ = [
    'Node',
    'Parser',
    'ParseError',
    'GrammarError',
    'analyze_grammar',
    'create_parse_table',
]


class ParseError(ValueError):
    pass


class GrammarError(ValueError):
    pass


# Inner node of a syntax tree. Leaves are the input tokens themselves.
Node = namedtuple('Node', ['symbol', 'children'])


# Nullable flags, FIRST and FOLLOW sets of every grammar symbol.
GrammarSets = namedtuple('GrammarSets', ['nullable', 'first', 'follow'])


def sequence_first(symbols, sets) -> set:
    """Terminals that the symbol sequence ``symbols`` can start with."""
    result = set()
    for s in symbols:
        result |= sets.first[s]
        if not sets.nullable[s]:
            break
    return result


def analyze_grammar(terminals, grammar) -> GrammarSets:
    """
    Compute nullable flags, FIRST and FOLLOW sets by iterating until none of
    them grows any more.

    :param terminals: list of terminal symbols
    :param grammar: nonterminal -> [productions...]
    """
    symbols = list(terminals) + list(grammar)
    sets = GrammarSets(
        nullable={s: False for s in symbols},
        first={s: {s} if s in terminals else set() for s in symbols},
        follow={s: set() for s in symbols})

    def grow(target, key, value):
        if value - target[key]:
            target[key] |= value
            return True
        return False

    changed = True
    while changed:
        changed = False
        for symbol, productions in grammar.items():
            for production in productions:
                if (not sets.nullable[symbol] and
                        all(sets.nullable[p] for p in production)):
                    sets.nullable[symbol] = True
                    changed = True
                changed |= grow(sets.first, symbol,
                                sequence_first(production, sets))
                for i, p in enumerate(production):
                    rest = production[i + 1:]
                    changed |= grow(sets.follow, p, sequence_first(rest, sets))
                    if all(sets.nullable[r] for r in rest):
                        changed |= grow(sets.follow, p, sets.follow[symbol])
    return sets


def create_parse_table(terminals, grammar, start):
    """
    Create an LL(1) parsing table.

    :param terminals: list of terminal symbols
    :param grammar: nonterminal -> [productions...]
    :param start: nonterminal start symbol
    :returns: parse table nonterminal -> {terminal -> production}
    :raises GrammarError: if the grammar is not LL(1)
    """
    if start not in grammar:
        raise GrammarError("Start symbol {!r} has no productions"
                           .format(start))
    sets = analyze_grammar(terminals, grammar)
    table = {n: {} for n in grammar}
    for symbol, productions in grammar.items():
        row = table[symbol]
        for production in productions:
            lookahead = sequence_first(production, sets)
            if all(sets.nullable[p] for p in production):
                lookahead |= sets.follow[symbol]
            for t in sorted(lookahead):
                if t in row and row[t] != production:
                    raise GrammarError(
                        "Grammar is not LL(1): <{}, {}> -> {} or {}"
                        .format(symbol, t, row[t], production))
                row[t] = production
    return table


class Parser:

    """
    LL(1) parser producing a tree of :class:`Node` objects.

    :param terminals: list of terminal symbols
    :param grammar: nonterminal -> [productions...]
    :param start: nonterminal start symbol
    """

    def __init__(self, terminals, grammar, start):
        self.terminals = set(terminals)
        self.table = create_parse_table(terminals, grammar, start)
        self.start = start

    def parse(self, tokens) -> Node:
        """
        Parse a token list.

        :param list tokens: tokens in input order, each with a ``type``
                            attribute; must end with the end token
        :returns: root node
        :raises ParseError: on unexpected tokens
        """
        tokens = list(reversed(tokens))
        root = None
        stack = [(self.start, None)]
        while stack:
            symbol, into = stack.pop()
            if not tokens:
                raise ParseError("Unexpected end of input, expected {}"
                                 .format(symbol))
            token = tokens[-1]
            if symbol in self.terminals:
                if token.type != symbol:
                    raise self._error(token, symbol)
                into.append(tokens.pop())
                continue
            try:
                production = self.table[symbol][token.type]
            except KeyError:
                raise self._error(token, symbol) from None
            node = Node(symbol, [])
            if into is None:
                root = node
            else:
                into.append(node)
            stack.extend((p, node.children) for p in reversed(production))
        return root

    @staticmethod
    def _error(token, expected):
        return ParseError(
            ("Unexpected {} while parsing {} in:\n"
             "    {!r}\n"
             "     ").format(token.type, expected, token.expr)
            + ' ' * token.start
            + '^' * max(token.length, 1))
