from fractions import Fraction

import numpy as np
import pytest

from qrr.errors import EnumerationError, ParameterError
from qrr.lattice import (
    QuadraticFormSpec,
    cartan_matrix,
    check_inside,
    enumerate_points,
    form_value,
    is_positive_definite,
    lambda_min_lower,
)


@pytest.mark.parametrize("N,k", [(2, 2), (3, 3), (4, 2), (4, 3), (5, 3), (7, 2)])
def test_lambda_min_is_certified_and_tight(N, k):
    spec = QuadraticFormSpec(N, k)
    lam = spec.lambda_min_lower()
    true = np.linalg.eigvalsh(np.array(spec.matrix, dtype=float)).min()
    assert 0 < lam <= true
    assert true - float(lam) < 1e-9
    shifted = [[x - (lam if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(spec.matrix)]
    assert is_positive_definite(shifted)


def test_form_layout():
    spec = QuadraticFormSpec(3, 3)
    assert spec.dim == 4
    assert spec.cartan == cartan_matrix(2)
    # B_{(a,i),(b,j)} = C_ab * min(i, j)
    assert spec.matrix[1][3] == -2 and spec.matrix[0][0] == 2 and spec.matrix[1][1] == 4
    assert spec.value([1, 0, 0, 0]) == 1


def test_not_positive_definite():
    with pytest.raises(ParameterError):
        lambda_min_lower(((Fraction(1), Fraction(2)), (Fraction(2), Fraction(1))))


CASES = [
    (cartan_matrix(2), (1, -1), 12),
    (cartan_matrix(3), (0, 0, 0), 8),
    (QuadraticFormSpec(3, 3).matrix, (1, -1, 1, -1), 4),
    (((2, 1), (1, 3)), (Fraction(-1, 2), Fraction(1, 3)), Fraction(15, 2)),
]


@pytest.mark.parametrize("Q,s,budget", CASES)
def test_pruned_enumeration_matches_box(Q, s, budget):
    pruned = sorted(enumerate_points(Q, s, budget))
    box = sorted(enumerate_points(Q, s, budget, bound_scale=2))
    assert pruned == box
    assert pruned
    for x, val in pruned:
        assert val == form_value(Q, s, x) <= budget


def test_enumeration_lower_bounds():
    pts = enumerate_points(cartan_matrix(2), None, 6, lo=(1, 1))
    assert all(min(x) >= 1 for x, _ in pts)
    assert ((1, 1), 1) in pts


def test_check_inside():
    check_inside([((1, 2), 0)], 2)
    with pytest.raises(EnumerationError):
        check_inside([((1, 3), 0)], 2)
