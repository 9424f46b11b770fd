import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ab_power_naive, cd_power_naive, expand_cd_naive
from rlabel.flag import flag_f_vector, flag_h_vector
from rlabel.polynomial import (
    AbPolynomial,
    CdPolynomial,
    NotExpressible,
    ab_index_from_flag_h,
    cd_monomials,
    expand_cd,
    to_cd_index,
)
from rlabel.poset import butterfly, chain, glued_butterfly
from rlabel.verify import glued_ab_formula, glued_cd_formula

a, b = AbPolynomial.var("a"), AbPolynomial.var("b")
c, d = CdPolynomial.var("c"), CdPolynomial.var("d")


def ab_index(p):
    return ab_index_from_flag_h(flag_h_vector(flag_f_vector(p)))


class TestArithmetic:
    def test_noncommutative(self):
        assert a * b != b * a
        assert (a + b) ** 2 == AbPolynomial({"aa": 1, "ab": 1, "ba": 1, "bb": 1})

    def test_zero_coefficients_dropped(self):
        assert (a - a) == 0
        assert len(AbPolynomial({"ab": 0, "ba": 2})) == 1

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            AbPolynomial({"ac": 1})

    def test_degrees(self):
        assert (c * d + d * c).degree == 3
        assert (c * d + c).is_homogeneous() is False
        assert AbPolynomial().degree == -1

    def test_str(self):
        assert str(AbPolynomial({"aa": 1, "ab": 3, "bb": -1})) == "aa + 3ab - bb"
        assert str(CdPolynomial()) == "0"


class TestAbIndex:
    def test_t3(self):
        assert ab_index(butterfly(3)) == AbPolynomial({"aa": 1, "ab": 1, "ba": 1, "bb": 1})

    def test_p3(self):
        assert ab_index(glued_butterfly(3)) == AbPolynomial({"aa": 1, "ab": 3, "ba": 3, "bb": 1})

    def test_chain(self):
        assert ab_index(chain(3)) == AbPolynomial({"aa": 1})
        assert ab_index(chain(1)) == AbPolynomial.one()

    @pytest.mark.parametrize("n", range(3, 9))
    def test_glued_formula(self, n):
        assert ab_index(glued_butterfly(n)) == glued_ab_formula(n)
        assert glued_ab_formula(n).to_json() == ab_power_naive(n)


class TestExpand:
    def test_c_squared(self):
        assert expand_cd(c * c) == AbPolynomial({"aa": 1, "ab": 1, "ba": 1, "bb": 1})

    def test_p3_cd(self):
        assert expand_cd(c * c + 2 * d) == AbPolynomial({"aa": 1, "ab": 3, "ba": 3, "bb": 1})

    def test_square(self):
        q = (c * c - 2 * d) ** 2
        assert q == CdPolynomial({"cccc": 1, "ccd": -2, "dcc": -2, "dd": 4})
        expanded = expand_cd(q)
        assert len(expanded) == 16
        # frozen from the naive expansion oracle: sign (-1)^(number of b)
        assert expanded.to_json() == {
            w: (-1) ** w.count("b") for w in expand_cd_naive({"cccc": 1}).keys()
        }
        assert expanded.to_json() == expand_cd_naive(q.to_json())

    @given(st.dictionaries(st.sampled_from(cd_monomials(5) + cd_monomials(4)), st.integers(-9, 9), max_size=6))
    @settings(max_examples=80, deadline=None)
    def test_matches_oracle(self, terms):
        q = CdPolynomial(terms)
        assert expand_cd(q).to_json() == expand_cd_naive(q.to_json())


class TestToCd:
    def test_monomial_counts_are_fibonacci(self):
        assert [len(cd_monomials(m)) for m in range(8)] == [1, 1, 2, 3, 5, 8, 13, 21]

    @pytest.mark.parametrize("n", range(1, 9))
    def test_butterfly(self, n):
        assert to_cd_index(ab_index(butterfly(n))) == c ** (n - 1)

    def test_p5(self):
        expected = CdPolynomial({"cccc": 1, "ccd": 2, "dcc": 2, "dd": -4})
        assert to_cd_index(ab_index(glued_butterfly(5))) == expected

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_glued_odd(self, k):
        cd = to_cd_index(ab_index(glued_butterfly(2 * k + 1)))
        assert cd == glued_cd_formula(k)
        assert cd.to_json() == cd_power_naive(k)

    def test_not_expressible(self):
        with pytest.raises(NotExpressible):
            to_cd_index(AbPolynomial({"aa": 1}))
        with pytest.raises(NotExpressible):
            to_cd_index(ab_index(glued_butterfly(4)))

    def test_inhomogeneous(self):
        with pytest.raises(ValueError):
            to_cd_index(AbPolynomial({"a": 1, "ab": 1}))

    def test_zero(self):
        assert to_cd_index(AbPolynomial()) == CdPolynomial()

    @given(
        st.integers(0, 7).flatmap(
            lambda m: st.dictionaries(st.sampled_from(cd_monomials(m)), st.integers(-50, 50), max_size=8)
        )
    )
    @settings(max_examples=120, deadline=None)
    def test_round_trip(self, terms):
        q = CdPolynomial(terms)
        assert to_cd_index(expand_cd(q)) == q
