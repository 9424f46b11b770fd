import pytest
from hypothesis import given, settings

from conftest import graded_posets
from oracles import flag_f_naive, flag_h_naive
from rlabel.flag import FlagVector, flag_f_from_h, flag_f_vector, flag_h_vector, mask_of, subset_of
from rlabel.poset import boolean_lattice, butterfly, chain, glued_butterfly


def test_mask_encoding():
    assert mask_of([1]) == 1
    assert mask_of([2]) == 2
    assert mask_of([1, 3]) == 0b101
    assert subset_of(0b110) == (2, 3)
    assert subset_of(0) == ()


def test_butterfly_t3():
    f = flag_f_vector(butterfly(3))
    assert f.entries == (1, 2, 2, 4)
    assert f[{1, 2}] == 4
    assert flag_h_vector(f).entries == (1, 1, 1, 1)


def test_glued_p3():
    f = flag_f_vector(glued_butterfly(3))
    assert f.entries == (1, 4, 4, 8)
    assert flag_h_vector(f).entries == (1, 3, 3, 1)


def test_chain_rank3():
    f = flag_f_vector(chain(3))
    assert f.entries == (1, 1, 1, 1)
    assert flag_h_vector(f).entries == (1, 0, 0, 0)


def test_degenerate_ranks():
    assert flag_f_vector(boolean_lattice(0)).entries == ()
    assert flag_f_vector(chain(1)).entries == (1,)


def test_wrong_length():
    with pytest.raises(ValueError):
        FlagVector(3, (1, 2, 3))


@pytest.mark.parametrize("n", range(2, 9))
def test_butterfly_closed_forms(n):
    f = flag_f_vector(butterfly(n))
    assert all(v == 2 ** len(subset_of(m)) for m, v in f.items())
    assert set(flag_h_vector(f).entries) == {1}


@pytest.mark.parametrize("n", range(3, 9))
def test_glued_closed_forms(n):
    f = flag_f_vector(glued_butterfly(n))
    assert f[0] == 1
    assert all(v == 2 * 2 ** len(subset_of(m)) for m, v in f.items() if m)
    h = flag_h_vector(f)
    assert all(v == 2 - (-1) ** len(subset_of(m)) for m, v in h.items())


@pytest.mark.parametrize(
    "p", [butterfly(n) for n in range(1, 9)] + [glued_butterfly(n) for n in range(2, 9)] + [boolean_lattice(4)]
)
def test_inversion_on_generated(p):
    f = flag_f_vector(p)
    assert flag_f_from_h(flag_h_vector(f)) == f


@given(graded_posets())
@settings(max_examples=60, deadline=None)
def test_matches_oracle(p):
    f = flag_f_vector(p)
    assert list(f.entries) == flag_f_naive(p.rank, p.covers)
    assert list(flag_h_vector(f).entries) == flag_h_naive(list(f.entries), p.n)
    assert flag_f_from_h(flag_h_vector(f)) == f


@given(graded_posets())
@settings(max_examples=40, deadline=None)
def test_h_sum_counts_chains(p):
    from rlabel.poset import maximal_chains

    f = flag_f_vector(p)
    assert flag_h_vector(f).total() == len(maximal_chains(p))
    assert f[(1 << (p.n - 1)) - 1] == len(maximal_chains(p))


def test_json_round_trip():
    f = flag_f_vector(butterfly(4))
    assert FlagVector.from_json(4, f.to_json()) == f
    assert list(f.to_json()) == [str(m) for m in range(8)]
