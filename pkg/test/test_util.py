"""
Tests for the functionality in :mod:`pyschwa.util`.
"""

import os

import numpy as np
import pytest

from pyschwa import util


def test_tokenize():
    tokens = [
        ('space', util.regex_matcher(r'\s+')),
        ('word', util.regex_matcher(r'[a-z]+')),
        ('sign', util.choice_matcher('+-')),
    ]
    result = list(util.tokenize(tokens, 'ab + cd-', skip=('space',)))
    assert [(t.type, t.text) for t in result] == [
        ('word', 'ab'), ('sign', '+'), ('word', 'cd'), ('sign', '-')]
    assert repr(result[0]) == "word('ab')"
    with pytest.raises(ValueError):
        list(util.tokenize(tokens, 'ab ? cd'))


def test_format_percent():
    assert util.format_percent(0.5294) == '52.94%'
    assert util.format_percent(1) == '100.00%'
    assert util.format_percent(None) == '-'


def test_sigmoid():
    assert util.sigmoid(0) == 0.5
    z = np.array([-800.0, -1.0, 1.0, 800.0])
    p = util.sigmoid(z)
    assert np.all(np.isfinite(p))
    assert p[0] == 0 and p[3] == 1
    assert p[1] == pytest.approx(1 - p[2])


def test_log_loss():
    assert util.log_loss([1, 0], [0.0, 0.0]) == pytest.approx(np.log(2))
    # saturated predictions stay finite
    assert util.log_loss([1], [-1000.0]) == pytest.approx(1000.0)
    assert util.log_loss([0], [-1000.0]) == pytest.approx(0.0)
    assert util.log_loss([], []) == 0.0


def test_atomic_write(tmp_path):
    path = str(tmp_path / 'out.bin')
    with util.atomic_write(path) as f:
        f.write(b'first')
    with pytest.raises(RuntimeError):
        with util.atomic_write(path) as f:
            f.write(b'second')
            raise RuntimeError
    with open(path, 'rb') as f:
        assert f.read() == b'first'
    assert os.listdir(str(tmp_path)) == ['out.bin']



def test_copyright_notice():
    import pyschwa
    assert 'GNU General Public License' in pyschwa.get_copyright_notice()
