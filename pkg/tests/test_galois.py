import numpy as np
import pytest

from nolhd.exceptions import UnsupportedParameterError
from nolhd.galois import factor_prime_power, field_tables


class TestFactor:
    @pytest.mark.parametrize("q,expected", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (49, (7, 2)),
                                            (6, None), (1, None), (12, None)])
    def test_values(self, q, expected):
        assert factor_prime_power(q) == expected


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
class TestFieldAxioms:
    def test_additive_group(self, q):
        add, _ = field_tables(q)
        assert np.array_equal(add, add.T)
        assert np.array_equal(add[0], np.arange(q))
        # each row is a permutation, so inverses exist
        assert all(sorted(row) == list(range(q)) for row in add.tolist())

    def test_multiplicative_group(self, q):
        _, mul = field_tables(q)
        assert np.array_equal(mul, mul.T)
        assert np.array_equal(mul[1], np.arange(q))
        assert np.all(mul[0] == 0)
        nz = mul[1:, 1:]
        assert all(sorted(row) == list(range(1, q)) for row in nz.tolist())

    def test_associative_and_distributive(self, q):
        add, mul = field_tables(q)
        a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
        assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
        assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
        assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])


def test_not_a_field():
    with pytest.raises(UnsupportedParameterError):
        field_tables(10)
