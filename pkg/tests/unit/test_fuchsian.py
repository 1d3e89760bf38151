# Unit tests for PSL(2,R) arithmetic
import math

import mpmath
import numpy as np
import pytest

from src.core.exceptions import BackingMismatch, NonHyperbolic
from src.core.fuchsian import (
    GroupElement,
    QuadInt,
    length_from_trace,
    mul,
    power_trace,
    power_trace_exact,
    trace_from_length,
)
from src.core.surfaces import arithmetic_element


class TestGroupElement:
    """Test cases for group elements and their traces."""

    def test_rejects_bad_determinant(self):
        """Matrices off SL(2,R) are refused."""
        with pytest.raises(ValueError):
            GroupElement(np.array([[2.0, 0.0], [0.0, 1.0]]))

    def test_trace_is_unsigned(self):
        """-I and I represent the same element."""
        g = GroupElement(np.array([[-3.0, -1.0], [-1.0, -2.0 / 3.0]]) * 1.0)
        assert g.trace == pytest.approx(3.0 + 2.0 / 3.0)

    def test_exact_product_stays_exact(self):
        """exact x exact -> exact with the quadruple's trace."""
        g = arithmetic_element(2, 2, 1, 1, 2, 5)
        sq = mul(g, g)
        assert sq.backing == "exact"
        assert sq.exact_trace == QuadInt.of(14, 2)

    def test_mixed_product_is_float(self):
        """A float factor turns the product float."""
        g = arithmetic_element(2, 2, 1, 1, 2, 5)
        h = g.to_float()
        prod = mul(g, h)
        assert prod.backing == "float"
        assert prod.trace == pytest.approx(14.0, rel=1e-12)

    def test_exact_request_with_float_factor(self):
        """Demanding exactness from a float factor raises."""
        g = arithmetic_element(2, 2, 1, 1, 2, 5)
        with pytest.raises(BackingMismatch):
            mul(g, g.to_float(), exact=True)

    def test_inverse_gives_identity(self):
        """g g^-1 = I for both backings."""
        g = arithmetic_element(2, 2, 1, 1, 2, 5)
        assert (g @ g.inverse()).exact_trace == QuadInt.of(2, 2)
        f = g.to_float()
        assert np.allclose((f @ f.inverse()).matrix, np.eye(2), atol=1e-12)

    def test_matrix_is_read_only(self):
        """Elements are immutable."""
        g = GroupElement.identity()
        with pytest.raises(ValueError):
            g.matrix[0, 0] = 5.0


class TestLengths:
    """Test cases for the trace/length dictionary."""

    def test_trace_four(self):
        """|t| = 4 -> 2 arccosh(2) = log(7 + 4 sqrt 3)."""
        assert length_from_trace(4) == pytest.approx(2.63391579385, abs=1e-11)
        assert length_from_trace(-4) == length_from_trace(4)
        assert length_from_trace(4) == pytest.approx(math.log(7 + 4 * math.sqrt(3)), rel=1e-14)

    def test_against_extended_precision(self):
        """Agreement with a 50-digit arccosh across the hyperbolic range."""
        mpmath.mp.dps = 50
        for t in (2.000001, 2.5, 4.0, 17.3, 1.0e6):
            exact = 2 * mpmath.acosh(mpmath.mpf(t) / 2)
            assert length_from_trace(t) == pytest.approx(float(exact), rel=1e-13)

    def test_near_parabolic(self):
        """Traces just above 2 still give a positive length."""
        value = length_from_trace(2.0 + 1e-12)
        assert value > 0
        assert value == pytest.approx(2e-6, rel=1e-3)

    def test_non_hyperbolic(self):
        """|t| <= 2 has no translation length."""
        for t in (2.0, 1.0, 0.0, -2.0):
            with pytest.raises(NonHyperbolic):
                length_from_trace(t)

    def test_trace_length_roundtrip_value(self):
        """trace_from_length inverts length_from_trace."""
        assert trace_from_length(length_from_trace(5.5)) == pytest.approx(5.5, rel=1e-13)

    def test_power_trace(self):
        """Chebyshev recursion on integer traces stays integral."""
        assert power_trace(4, 3) == 52
        assert power_trace(3, 2) == 7
        assert power_trace(4, 1) == 4
        with pytest.raises(ValueError):
            power_trace(4, 0)

    def test_power_trace_matches_matrix_power(self):
        """Recursion agrees with an explicit matrix cube."""
        m = np.array([[2.0, 1.0], [1.0, 1.0]])
        cube = np.linalg.matrix_power(m, 3)
        assert power_trace(3.0, 3) == pytest.approx(np.trace(cube))

    def test_power_trace_exact(self):
        """Exact recursion over Z[sqrt 2]."""
        t = QuadInt(0, 2, 2)
        assert power_trace_exact(t, 2) == QuadInt.of(6, 2)
        assert power_trace_exact(QuadInt.of(4, 2), 3) == QuadInt.of(52, 2)


class TestQuadInt:
    """Test cases for Z[sqrt n] arithmetic."""

    def test_norm_and_conj(self):
        """(2 + 2 sqrt 2)(2 - 2 sqrt 2) = -4."""
        x = QuadInt(2, 2, 2)
        assert x.norm() == -4
        assert (x * x.conj()) == QuadInt.of(-4, 2)

    def test_radicand_mismatch(self):
        """Different radicands cannot be mixed."""
        with pytest.raises(ValueError):
            QuadInt(1, 1, 2) + QuadInt(1, 1, 3)
