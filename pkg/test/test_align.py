"""
Tests for the functionality in :mod:`pyschwa.align`.
"""

import time

import numpy as np
import pytest

from pyschwa.align import (
    align, extract_instances, align_lexicon, apply_deletions,
    MISMATCH, AMBIGUOUS, TRAILING)
from pyschwa.script import parse_token_string
from pyschwa.synthetic import generate_word
from pyschwa.types import LexEntry, RETAINED, DELETED


def labels(orth, phon):
    result = align(parse_token_string(orth),
                   parse_token_string(phon, 'phonemic'))
    assert result.ok
    return [(l.orth_index, l.label) for l in result.labels]


def entry(orth, phon, id=0):
    return LexEntry(id, orth, parse_token_string(orth),
                    parse_token_string(phon, 'phonemic'))


def test_align_table_entry():
    assert labels('a ~ k a rr aa h a tt a', 'a ~ k rr aa h a tt') == [
        (3, DELETED), (7, RETAINED), (9, DELETED)]


def test_align_jangli():
    assert labels('j a M g a l ii', 'j a M g l ii') == [
        (1, RETAINED), (4, DELETED)]


def test_align_identity():
    assert labels('p e p a r a', 'p e p a r a') == [
        (3, RETAINED), (5, RETAINED)]


def test_align_mismatch():
    result = align(parse_token_string('k a'), parse_token_string('g'))
    assert not result
    assert result.failure.reason == MISMATCH
    assert result.failure.orth_index == 0
    assert result.failure.phon_index == 0
    assert result.labels == ()


def test_align_explicit_vowel_never_deleted():
    result = align(parse_token_string('k aa l'), parse_token_string('k l'))
    assert result.failure.reason == MISMATCH
    assert result.failure.orth_index == 1


def test_align_trailing_phones():
    result = align(parse_token_string('k a'), parse_token_string('k a l'))
    assert result.failure.reason == TRAILING


def test_align_ambiguous():
    # an inherent schwa next to an orthographic 'a' cannot be told apart
    orth = parse_token_string('k a a')
    assert orth[1].is_inherent and not orth[2].is_inherent
    result = align(orth, parse_token_string('k a'))
    assert result.failure.reason == AMBIGUOUS


def test_align_weak_schwa():
    result = align(parse_token_string('k a l a'),
                   parse_token_string('k a_w l', 'phonemic'))
    assert [tuple(l) for l in result.labels] == [
        (1, RETAINED, True), (3, DELETED, False)]
    # a weak schwa only matches an inherent one
    result = align(parse_token_string('a k'),
                   parse_token_string('a_w k', 'phonemic'))
    assert not result


def test_extract_instances():
    instances = extract_instances(
        entry('a ~ k a rr aa h a tt a', 'a ~ k rr aa h a tt', id=4))
    assert [(i.entry_id, i.orth_index, i.label) for i in instances] == [
        (4, 3, DELETED), (4, 7, RETAINED), (4, 9, DELETED)]
    # consonant in phon that orth does not have
    assert extract_instances(entry('k a', 'k a l')) is None
    assert extract_instances(entry('k aa', 'k aa')) == []


def test_extract_instances_weak_policy():
    e = entry('k a l a', 'k a_w l')
    retain = extract_instances(e, 'retain')
    assert [(i.label, i.weak) for i in retain] == [
        (RETAINED, True), (DELETED, False)]
    delete = extract_instances(e, 'delete')
    assert [(i.label, i.weak) for i in delete] == [
        (DELETED, True), (DELETED, False)]
    drop = extract_instances(e, 'drop')
    assert [i.orth_index for i in drop] == [3]
    with pytest.raises(ValueError):
        extract_instances(e, 'keep')


def test_align_lexicon():
    entries = [
        entry('k a l a', 'k a l', 0),
        entry('k a', 'g', 1),
        entry('m a', 'm a', 2),
    ]
    instances, discarded = align_lexicon(entries)
    assert [i.entry_id for i in instances] == [0, 0, 2]
    assert [(e.id, f.reason) for e, f in discarded] == [(1, MISMATCH)]
    with pytest.raises(ValueError):
        align_lexicon(entries, 'keep')


def test_soundness_and_completeness():
    # aligning a word against itself minus any subset of its inherent schwas
    # recovers exactly that subset
    rng = np.random.RandomState(0)
    started = time.perf_counter()
    for _ in range(10000):
        orth = generate_word(rng, max_aksharas=6)
        schwas = [i for i, t in enumerate(orth) if t.is_inherent]
        deleted = [i for i in schwas if rng.rand() < 0.5]
        phon = apply_deletions(orth, deleted)
        result = align(orth, phon)
        assert result.ok
        assert [l.orth_index for l in result.labels] == schwas
        assert [l.orth_index for l in result.labels
                if l.label == DELETED] == deleted
        dropped = [l.orth_index for l in result.labels if l.label == DELETED]
        assert apply_deletions(orth, dropped) == phon
        assert result.steps <= len(orth) + len(phon)
    assert time.perf_counter() - started < 10


def test_apply_deletions():
    orth = parse_token_string('p e p a r a')
    assert apply_deletions(orth, [5]) == orth[:5]
    assert apply_deletions(orth, []) == orth
