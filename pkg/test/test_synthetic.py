"""
Tests for the functionality in :mod:`pyschwa.synthetic`.
"""

import numpy as np

from pyschwa.align import align
from pyschwa.baseline import parse_rules, rule_predict, load_rules
from pyschwa.script import decode_devanagari
from pyschwa.synthetic import generate_corpus, generate_word
from pyschwa.types import CONSONANT, DELETED


def test_corpus_deterministic():
    assert generate_corpus(100, seed=3) == generate_corpus(100, seed=3)
    assert generate_corpus(100, seed=3) != generate_corpus(100, seed=4)
    assert generate_corpus(0) == []


def test_corpus_entries():
    entries = generate_corpus(300, seed=5)
    assert [e.id for e in entries] == list(range(300))
    for e in entries:
        assert decode_devanagari(e.headword) == e.orth
        assert e.source == 'synthetic'


def test_labels_follow_rules():
    rules = load_rules()
    for e in generate_corpus(300, seed=6):
        result = align(e.orth, e.phon)
        assert result.ok
        for label in result.labels:
            assert label.label == rule_predict(rules, e.orth, label.orth_index)


def test_custom_rules():
    delete_all = parse_rules('default delete\n')
    for e in generate_corpus(50, seed=7, ruleset=delete_all):
        assert not any(t.is_inherent for t in e.phon)
        assert all(rule_predict(delete_all, e.orth, i) == DELETED
                   for i, t in enumerate(e.orth) if t.is_inherent)


def test_word_shape():
    rng = np.random.RandomState(8)
    for _ in range(500):
        word = generate_word(rng, max_aksharas=2)
        assert 1 <= len(word)
        # at most two aksharas, each with at most two consonants
        assert sum(t.category == CONSONANT for t in word) <= 4
        assert word[-1].category != CONSONANT
