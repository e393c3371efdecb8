import pytest

from local_codes.errors import ContractError
from local_codes.lattice import fits_window
from local_codes.surface import (
    SURFACE_INTERACTION_RANGE,
    k_copies_point,
    planar_layout,
    planar_surface_code,
    surface_code,
    toric_code,
    toric_layout,
)


@pytest.mark.parametrize("d", [2, 3, 4, 7, 12])
def test_planar_parameters(d):
    code = planar_surface_code(d)
    assert code.n == d * d + (d - 1) * (d - 1)
    assert code.k == 1
    assert code.w == SURFACE_INTERACTION_RANGE


@pytest.mark.parametrize("L", [2, 3, 4, 8, 12])
def test_toric_parameters(L):
    code = toric_code(L)
    assert code.n == 2 * L * L
    assert code.k == 2
    # one X relation and one Z relation among the 2L^2 checks
    assert code.generators.rows - code.rank == 2


@pytest.mark.parametrize("d", [1, 0])
def test_planar_rejects_small_distance(d):
    with pytest.raises(ContractError):
        planar_surface_code(d)


def test_toric_rejects_small_side():
    with pytest.raises(ContractError):
        toric_code(1)


def test_every_check_fits_a_window():
    for code in (planar_surface_code(4), toric_code(3)):
        dense = code.generators.to_dense()
        for row in dense:
            qubits = [q for q in range(code.n) if row[q] or row[code.n + q]]
            assert fits_window(code.lattice, [code.site_of_qubit[q] for q in qubits], code.w)


def test_checks_are_crosses():
    layout = planar_layout(3)
    assert layout.neighbours(0, 1) == [(1, 1), (0, 0), (0, 2)]
    torus = toric_layout(2)
    assert sorted(torus.neighbours(0, 0)) == [(0, 1), (0, 3), (1, 0), (3, 0)]


def test_surface_code_dispatch():
    assert surface_code("planar", 2).n == 5
    assert surface_code("toric", 2).n == 8
    with pytest.raises(ContractError):
        surface_code("hyperbolic", 2)


@pytest.mark.parametrize(
    "d,copies,n,ratio",
    [(3, 1, 13, 9 / 13), (2, 4, 20, 16 / 20)],
)
def test_k_copies_point(d, copies, n, ratio):
    point = k_copies_point(d, copies)
    assert point.family == "kcopies"
    assert (point.n, point.k, point.d) == (n, copies, d)
    assert point.q_ratio == pytest.approx(ratio)


def test_k_copies_ratio_range():
    for d in range(2, 13):
        for copies in range(1, 9):
            assert 0.5 <= k_copies_point(d, copies).q_ratio <= 1


def test_k_copies_rejects_bad_arguments():
    with pytest.raises(ContractError):
        k_copies_point(1, 1)
    with pytest.raises(ContractError):
        k_copies_point(3, 0)
