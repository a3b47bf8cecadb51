"""
Rule-based schwa deletion.

A rule set is an ordered list of context rules over the classes ``V``
(vowel), ``C`` (consonant) and ``#`` (word boundary). Rules are written one
per line as::

    ACTION LEFT... _ RIGHT...

where ``ACTION`` is ``delete`` or ``retain`` and ``_`` stands for the schwa.
The left pattern is matched against the classes immediately before the
schwa, the right pattern against those immediately after it. The first
matching rule decides; ``default ACTION`` gives the action when none
matches (``retain`` if omitted). Lines starting with ``#`` are comments.
"""

import logging
from collections import namedtuple

from pyschwa.align import align_lexicon
from pyschwa.evaluation import evaluate
from pyschwa.parsing import Node, Parser
from pyschwa.script import INVENTORY
from pyschwa.types import BOUNDARY, RETAINED, DELETED
from pyschwa.util import Token, tokenize, regex_matcher, choice_matcher


__all__ = [
    'RuleSyntaxError',
    'Rule',
    'RuleSet',
    'parse_rules',
    'load_rules',
    'context_classes',
    'rule_predict',
    'evaluate_baseline',
]

logger = logging.getLogger(__name__)


class RuleSyntaxError(ValueError):
    pass


_ACTIONS = {'delete': DELETED, 'retain': RETAINED}

_CLASSES = ('V', 'C', BOUNDARY)


class Rule(namedtuple('Rule', ['action', 'left', 'right'])):

    """
    :ivar int action: label assigned when the rule matches
    :ivar tuple left: classes at ``c_{-k} .. c_{-1}``
    :ivar tuple right: classes at ``c_{+1} .. c_{+k}``
    """

    __slots__ = ()

    def matches(self, left, right) -> bool:
        """
        :param left: context classes to the left, nearest last
        :param right: context classes to the right, nearest first
        """
        k = len(self.left)
        return (tuple(left[len(left) - k:]) == self.left and
                tuple(right[:len(self.right)]) == self.right)

    def __str__(self):
        action = 'delete' if self.action == DELETED else 'retain'
        return ' '.join((action,) + self.left + ('_',) + self.right)


class RuleSet:

    """Ordered context rules with a default action."""

    def __init__(self, rules, default=RETAINED):
        self.rules = tuple(rules)
        self.default = default
        self.left_window = max((len(r.left) for r in self.rules), default=0)
        self.right_window = max((len(r.right) for r in self.rules), default=0)

    def __repr__(self):
        return '<RuleSet {} rules>'.format(len(self.rules))

    def __str__(self):
        lines = [str(r) for r in self.rules]
        lines.append('default ' + (
            'delete' if self.default == DELETED else 'retain'))
        return '\n'.join(lines) + '\n'

    def decide(self, left, right) -> int:
        """Label of a schwa with the given context classes."""
        for rule in self.rules:
            if rule.matches(left, right):
                return rule.action
        return self.default


_RULE_TOKENS = [
    ('space', regex_matcher(r'[ \t\r]+')),
    ('NL', choice_matcher('\n')),
    ('default', regex_matcher(r'default\b')),
    ('ACTION', regex_matcher(r'(?:delete|retain)\b')),
    ('CLASS', choice_matcher(''.join(_CLASSES))),
    ('_', choice_matcher('_')),
]

_RULE_GRAMMAR = {
    'file': [['lines', '$']],
    'lines': [['line', 'lines'], []],
    'line': [
        ['rule', 'NL'],
        ['default', 'ACTION', 'NL'],
        ['NL'],
    ],
    'rule': [['ACTION', 'context', '_', 'context']],
    'context': [['CLASS', 'context'], []],
}

_RULE_PARSER = Parser(
    ['NL', 'default', 'ACTION', 'CLASS', '_', '$'], _RULE_GRAMMAR, 'file')


def _strip_comments(text):
    return '\n'.join(
        '' if line.lstrip().startswith('#') else line
        for line in text.splitlines()) + '\n'


def _flatten(node):
    for child in node.children:
        if isinstance(child, Node):
            yield from _flatten(child)
        else:
            yield child


def parse_rules(text: str) -> RuleSet:
    """
    Parse rule file contents.

    :raises RuleSyntaxError: for text outside the rule grammar
    """
    text = _strip_comments(text)
    try:
        tokens = list(tokenize(_RULE_TOKENS, text, skip=('space',)))
        tokens.append(Token('$', len(text), 0, text))
        root = _RULE_PARSER.parse(tokens)
    except ValueError as e:
        raise RuleSyntaxError(str(e)) from None
    rules = []
    default = None
    lines = root.children[0]
    while lines.children:
        line, lines = lines.children
        head = line.children[0]
        if isinstance(head, Node):
            tokens = list(_flatten(head))
            action = _ACTIONS[tokens[0].text]
            sep = next(i for i, t in enumerate(tokens) if t.type == '_')
            rules.append(Rule(
                action,
                tuple(t.text for t in tokens[1:sep]),
                tuple(t.text for t in tokens[sep + 1:])))
        elif head.type == 'default':
            if default is not None:
                raise RuleSyntaxError("Duplicate default action")
            default = _ACTIONS[line.children[1].text]
    return RuleSet(rules, RETAINED if default is None else default)


def load_rules(path=None) -> RuleSet:
    """Load a rule file, by default the shipped ``default.rules``."""
    if path is None:
        from importlib_resources import read_text
        return parse_rules(read_text('pyschwa.data', 'default.rules',
                                     encoding='utf-8'))
    with open(path, encoding='utf-8') as f:
        return parse_rules(f.read())


def context_classes(orth, index, left, right):
    """
    Classes of the ``left`` tokens before and the ``right`` tokens after
    ``orth[index]``, ``#`` past the word edges.
    """
    n = len(orth)
    def cls(k):
        return INVENTORY.rule_class(orth[k].symbol) if 0 <= k < n else BOUNDARY
    return (tuple(cls(index - d) for d in range(left, 0, -1)),
            tuple(cls(index + d) for d in range(1, right + 1)))


def rule_predict(ruleset: RuleSet, orth, index: int) -> int:
    """Label of the schwa at ``orth[index]`` under ``ruleset``."""
    left, right = context_classes(
        orth, index, ruleset.left_window, ruleset.right_window)
    return ruleset.decide(left, right)


def evaluate_baseline(entries, ruleset: RuleSet = None,
                      weak_policy: str = 'retain'):
    """
    Align ``entries`` and score ``ruleset`` (the shipped rules by default)
    against the gold labels.

    :returns: :class:`~pyschwa.evaluation.Metrics`
    """
    if ruleset is None:
        ruleset = load_rules()
    entries = list(entries)
    by_id = {e.id: e for e in entries}
    instances, _ = align_lexicon(entries, weak_policy)
    logger.info("rule baseline: %d rules on %d schwas",
                len(ruleset.rules), len(instances))
    predictions = [rule_predict(ruleset, by_id[i.entry_id].orth, i.orth_index)
                   for i in instances]
    return evaluate(predictions, instances)
