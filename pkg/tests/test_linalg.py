from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torface import linalg
from torface.linalg import Field

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_matches_rref(rows):
    red, piv = linalg.rref(rows)
    assert linalg.rank(np.array(rows, dtype=object)) == len(piv) == len(red)
    # the same over F_p after reducing the pivots mod p
    assert linalg.rank(np.array(rows, dtype=object), 32003) == len(linalg.rref(rows, 32003)[1])


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_against_numpy(rows):
    a = np.array(rows, dtype=float)
    assert linalg.rank(np.array(rows, dtype=object)) == np.linalg.matrix_rank(a)


def test_rank_depends_on_characteristic():
    m = np.array([[2, 0], [0, 2]], dtype=object)
    assert linalg.rank(m) == 2
    assert linalg.rank(m, 2) == 0


def test_det_and_inverse():
    m = [[2, 1], [5, 3]]
    assert linalg.det(m) == 1
    inv = linalg.inverse(np.array(m, dtype=object))
    assert (inv == np.array([[3, -1], [-5, 2]], dtype=object)).all()
    half = linalg.inverse(np.array([[2]], dtype=object))
    assert half[0, 0] == Fraction(1, 2)


def test_field_parse():
    assert Field.parse("q").p is None
    assert Field.parse("fp:7").p == 7
    assert str(Field.parse("fp:32003")) == "fp:32003"
    with pytest.raises(ValueError):
        Field.parse("fp:8")
    with pytest.raises(ValueError):
        Field.parse("real")


def test_left_inverse():
    li = linalg.LeftInverse([[1, 0], [2, 1], [0, 3]], 2)
    assert li.solve((1, 2, 0)) == (1, 0)
    assert li.solve((1, 3, 3)) == (1, 1)
    assert li.solve((1, 0, 0)) is None
