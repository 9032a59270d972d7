import threading

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from torface import errors
from torface.cellcomplex import validate_complex
from torface.oracle import enumerate_sums
from torface.semigroup import AffineSemigroup, validate_monoidal

from conftest import model

NONNORMAL = AffineSemigroup([(1, 0), (1, 1), (1, 3)])


def test_membership_examples():
    assert AffineSemigroup([(2,), (3,)]).contains((0,))
    assert NONNORMAL.contains((0, 0))
    assert not AffineSemigroup([(2,), (3,)]).contains((1,))
    assert not NONNORMAL.contains((1, 2))
    assert NONNORMAL.contains((2, 4))


def test_membership_rank_mismatch():
    with pytest.raises(errors.RankMismatch):
        NONNORMAL.contains((1,))


def test_positive_functional():
    assert tuple(AffineSemigroup([(2,), (3,)]).positive_functional) == (1,)
    assert tuple(AffineSemigroup([(1, 0), (0, 1)]).positive_functional) == (1, 1)
    assert tuple(AffineSemigroup([], rank=0).positive_functional) == ()


def test_not_pointed():
    with pytest.raises(errors.NotPointed):
        AffineSemigroup([(1,), (-1,)]).positive_functional


def test_hilbert_basis_examples():
    assert AffineSemigroup([(1, 0), (0, 1)]).hilbert_basis().generators == ((0, 1), (1, 0))
    assert AffineSemigroup([(2,), (3,)]).hilbert_basis().generators == ((1,),)
    assert NONNORMAL.hilbert_basis().generators == ((1, 0), (1, 1), (1, 2), (1, 3))


def test_is_normal_examples():
    assert AffineSemigroup([(1, 0), (0, 1)]).is_normal()
    assert not AffineSemigroup([(2,), (3,)]).is_normal()
    assert not NONNORMAL.is_normal()


def test_lazy_caches_under_threads():
    M = AffineSemigroup([(1, 0), (1, 1), (1, 3)])
    out = []
    ts = [threading.Thread(target=lambda: out.append(M.hilbert_basis().generators)) for _ in range(8)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert len(set(out)) == 1


# generators in the open half plane x > 0 keep the cone pointed
# (spanning sets only: semigroups of a monoidal complex generate the lattice rank)
gens2 = st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3)), min_size=2, max_size=4, unique=True)


def spanning(gens):
    M = AffineSemigroup(gens, rank=2)
    assume(M.spans())
    return M
vec2 = st.tuples(st.integers(0, 6), st.integers(-8, 8))


@settings(max_examples=60, deadline=None)
@given(gens2, vec2)
def test_membership_matches_enumeration(gens, x):
    M = spanning(gens)
    want = x in enumerate_sums(M.generators, 2, 6)
    assert M.contains(x) == want


@settings(max_examples=60, deadline=None)
@given(gens2, vec2, vec2)
def test_membership_closed_under_sum(gens, x, y):
    M = spanning(gens)
    if M.contains(x) and M.contains(y):
        assert M.contains((x[0] + y[0], x[1] + y[1]))


@settings(max_examples=40, deadline=None)
@given(gens2)
def test_hilbert_basis_is_normal_and_minimal(gens):
    M = spanning(gens)
    H = M.hilbert_basis()
    assert H.is_normal()
    hb = H.generators
    assert all(M.in_cone(h) for h in hb)
    sums = {tuple(a + b for a, b in zip(g, h)) for g in hb for h in hb}
    assert not sums & set(hb)
    for g in M.generators:
        assert H.contains(g)


def test_fx5_cones_normal():
    mc = model("fx5").monoidal
    assert mc.is_cone_wise_normal()
    for s in range(len(mc.complex)):
        assert mc.semigroup(s).is_normal()


def test_embeddings_map_generators_into_semigroups():
    for name in ("fx1", "fx2", "fx3", "fx4", "fx5", "fx6"):
        mc = model(name).monoidal
        cx = mc.complex
        for s in range(len(cx)):
            for t in cx.lower_set(s):
                for g in mc.semigroup(t).generators:
                    assert mc.semigroup(s).contains(mc.embed(s, t, g))


def _vertex():
    return validate_complex([{"id": "0", "dim": -1}, {"id": "v", "dim": 0}], [["0", "v"]], [["v", "0", 1]])


def _edge():
    cells = [{"id": "0", "dim": -1}, {"id": "p", "dim": 0}, {"id": "q", "dim": 0}, {"id": "e", "dim": 1}]
    order = [["0", "p"], ["0", "q"], ["p", "e"], ["q", "e"]]
    inc = [["p", "0", 1], ["q", "0", 1], ["e", "p", -1], ["e", "q", 1]]
    return validate_complex(cells, order, inc)


def test_validate_monoidal_vertex():
    mc = validate_monoidal(_vertex(), {"v": [[2], [3]]}, [])
    assert not mc.is_cone_wise_normal()


def test_group_not_saturated():
    with pytest.raises(errors.GroupNotSaturated):
        validate_monoidal(_vertex(), {"v": [[2], [4]]}, [])


def test_rank_mismatch():
    with pytest.raises(errors.RankMismatch):
        validate_monoidal(_vertex(), {"v": [[1, 0]]}, [])


def test_noninjective_embedding_rejected():
    sgs = {"p": [[1]], "q": [[1]], "e": [[1, 0], [0, 1]]}
    good = [("p", "e", [[1], [0]]), ("q", "e", [[0], [1]])]
    validate_monoidal(_edge(), sgs, good)
    bad = [("p", "e", [[0], [0]]), ("q", "e", [[0], [1]])]
    with pytest.raises((errors.FunctorialityFails, errors.FaceConditionFails)):
        validate_monoidal(_edge(), sgs, bad)


def test_face_without_cell():
    # the edge cone has the ray (1, 1) as a face but p maps into the interior
    sgs = {"p": [[1]], "q": [[1]], "e": [[1, 0], [0, 1]]}
    with pytest.raises(errors.ValidationError):
        validate_monoidal(_edge(), sgs, [("p", "e", [[1], [1]]), ("q", "e", [[0], [1]])])


def test_moebius_validates():
    mc = model("fx3").monoidal
    assert mc.is_cone_wise_normal()
    cx = mc.complex
    for sq in ("sq1", "sq2", "sq3"):
        assert len(mc.semigroup(cx.cell(sq)).extreme_rays) == 4


def test_coordinate_overflow():
    with pytest.raises(errors.CoordinateOverflow):
        validate_monoidal(_vertex(), {"v": [[2 ** 63], [1]]}, [])
