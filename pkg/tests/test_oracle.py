import pytest

from torface.homology import strand_cohomology
from torface.oracle import BruteForce, brute_strand, enumerate_sums, numerical_semigroup_oracle, oracle_diff

from conftest import builder, ring


def test_numerical_semigroup_oracle():
    assert numerical_semigroup_oracle([2, 3], 6) == [-6, -5, -4, -3, -2, -1, 1]
    assert numerical_semigroup_oracle([1], 3) == [-3, -2, -1]
    assert numerical_semigroup_oracle([3, 4, 5], 6) == [-6, -5, -4, -3, -2, -1, 1, 2]


def test_enumerate_sums():
    assert enumerate_sums([(2,), (3,)], 1, 2) == {(0,), (2,), (3,), (4,), (5,), (6,)}


def test_brute_examples():
    R1 = ring("fx1")
    assert strand_cohomology(brute_strand("L", R1.degree("v", [1]), R1, 3)) == {1: 1}
    R2 = ring("fx2")
    assert strand_cohomology(brute_strand("L", R2.zero, R2, 3)) == {1: 1}
    # a degree of the non-normal edge outside every localization
    R4 = ring("fx4")
    st = brute_strand("L", R4.degree("e", [-3, 1]), R4, 3)
    assert st.is_empty() or strand_cohomology(st) == strand_cohomology(builder("fx4").build("L", R4.degree("e", [-3, 1])))


def test_brute_membership_is_enumeration():
    R = ring("fx4")
    bf = BruteForce(R, 3)
    e = R.complex.cell("e")
    assert not bf.member((1, 2), e)
    assert bf.member((2, 4), e)


@pytest.mark.parametrize("name,box", [("fx1", 3), ("fx2", 3), ("fx5", 3), ("fx6", 3), ("fx4", 3), ("fx1n", 3), ("fx3", 1)])
def test_oracle_agrees_with_homology(name, box):
    rep = oracle_diff(builder(name), box)
    assert rep["status"] == "pass", rep["differences"][:3]
    assert rep["compared"] == 3 * len(ring(name).box_degrees(box))
