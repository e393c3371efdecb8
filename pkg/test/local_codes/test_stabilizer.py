import itertools

import pytest

from local_codes.errors import ContractError, GuardExceeded
from local_codes.lattice import Region, abc_partition, square_block
from local_codes.stabilizer import (
    Pauli,
    StabilizerCode,
    code_k,
    correctable_region,
    entropy_region,
    entropy_report,
    fact1_sweep,
    from_paulis,
    logical_basis,
    max_correctable_block,
    min_distance_bruteforce,
    normalizer_basis,
    region_sweep_distance,
    union_lemma_check,
    verify_area_law,
    verify_block_growth,
    verify_entropy_chain,
    verify_fact1,
)
from local_codes.surface import planar_surface_code

FIVE_QUBIT = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]


def test_pauli_string_round_trip():
    p = Pauli.from_string("XZYI")
    assert p.to_string() == "XZYI"
    assert p.support() == [0, 1, 2]
    assert p.weight() == 3


@pytest.mark.parametrize(
    "first,second,expected",
    [("X", "Z", False), ("XX", "ZZ", True), ("XZ", "ZX", True), ("YI", "ZI", False)],
)
def test_pauli_commutation(first, second, expected):
    assert Pauli.from_string(first).commutes(Pauli.from_string(second)) is expected


def test_pauli_rejects_unknown_letters():
    with pytest.raises(ContractError):
        Pauli.from_string("XQ")


def test_anticommuting_generators_rejected():
    with pytest.raises(ContractError, match="0 and 1"):
        from_paulis(["XI", "ZI"])


def test_non_local_generator_rejected():
    with pytest.raises(ContractError, match="window"):
        from_paulis(["ZIZ"], w=2)


def test_generator_width_checked(planar2):
    with pytest.raises(ContractError):
        StabilizerCode(
            n=4,
            generators=planar2.generators,
            lattice=planar2.lattice,
            site_of_qubit=planar2.site_of_qubit[:4],
            w=3,
        )


@pytest.mark.parametrize(
    "paulis,n,k,d",
    [
        (["ZZ"], 2, 1, 1),
        (["XXXX", "ZZZZ"], 4, 2, 2),
        (FIVE_QUBIT, 5, 1, 3),
    ],
)
def test_small_codes(paulis, n, k, d):
    code = from_paulis(paulis)
    assert (code.n, code_k(code)) == (n, k)
    assert min_distance_bruteforce(code) == d


@pytest.mark.parametrize(
    "fixture,n,k,d",
    [("planar2", 5, 1, 2), ("planar3", 13, 1, 3), ("toric2", 8, 2, 2), ("toric3", 18, 2, 3)],
)
def test_surface_code_parameters(request, fixture, n, k, d):
    code = request.getfixturevalue(fixture)
    assert (code.n, code_k(code)) == (n, k)
    assert min_distance_bruteforce(code) == d


def test_zero_rate_code_has_no_distance():
    with pytest.raises(ContractError):
        min_distance_bruteforce(from_paulis(["ZI", "IZ"]))


def test_distance_guard(mocker, planar3):
    mocker.patch("envs.STABILIZER_ENUMERATION_LIMIT", 10)
    with pytest.raises(GuardExceeded):
        min_distance_bruteforce(planar3)
    assert min_distance_bruteforce(planar3, force=True) == 3


def test_distance_with_small_span_table(mocker, toric2):
    mocker.patch("envs.SPAN_TABLE_BITS", 2)
    assert min_distance_bruteforce(toric2) == 2


@pytest.mark.parametrize("fixture", ["planar2", "planar3", "toric2", "toric3"])
def test_normalizer_and_logical_bases(request, fixture):
    code = request.getfixturevalue(fixture)
    normalizer = normalizer_basis(code)
    assert normalizer.rows == code.n + code.k
    generators = [Pauli(code.n, g) for g in code.generators]
    for vector in normalizer:
        p = Pauli(code.n, vector)
        assert all(p.commutes(g) for g in generators)
    assert logical_basis(code).rows == 2 * code.k


@pytest.mark.parametrize(
    "fixture,d", [("planar2", 2), ("planar3", 3), ("toric2", 2), ("toric3", 3)]
)
def test_region_sweep_finds_distance(request, fixture, d):
    assert region_sweep_distance(request.getfixturevalue(fixture), d) == d


def test_region_sweep_below_distance():
    assert region_sweep_distance(planar_surface_code(4), 3) is None


def test_entropy_of_trivial_regions(toric2):
    assert entropy_region(toric2, Region.empty(toric2.lattice)) == 0
    assert entropy_region(toric2, Region.full(toric2.lattice)) == toric2.k
    report = entropy_report(toric2, Region.full(toric2.lattice))
    assert report.s_complement == 0
    assert report.conditional == toric2.k


def test_region_must_live_on_code_lattice(planar2, toric2):
    with pytest.raises(ContractError):
        correctable_region(planar2, Region.full(toric2.lattice))


@pytest.mark.parametrize("fixture", ["planar3", "toric3"])
def test_subregions_of_correctable_regions_are_correctable(request, rng, fixture):
    code = request.getfixturevalue(fixture)
    for _ in range(200):
        outer = rng.choice(code.n, size=int(rng.integers(1, code.n)), replace=False).tolist()
        inner = outer[: int(rng.integers(0, len(outer) + 1))]
        if correctable_region(code, code.qubit_region(outer)):
            assert correctable_region(code, code.qubit_region(inner))


@pytest.mark.parametrize("fixture", ["planar2", "toric2"])
def test_region_and_complement_never_both_correctable(request, fixture):
    code = request.getfixturevalue(fixture)
    for size in range(code.n + 1):
        for qubits in itertools.combinations(range(code.n), size):
            rest = [q for q in range(code.n) if q not in qubits]
            assert not (
                correctable_region(code, code.qubit_region(qubits))
                and correctable_region(code, code.qubit_region(rest))
            )


@pytest.mark.parametrize(
    "paulis",
    [["ZZ"], ["XXXX", "ZZZZ"], FIVE_QUBIT],
)
def test_entropy_matches_density_matrix(dense_entropy, paulis):
    code = from_paulis(paulis)
    for size in range(code.n + 1):
        for qubits in itertools.combinations(range(code.n), size):
            expected = dense_entropy(code, qubits)
            assert entropy_region(code, code.qubit_region(qubits)) == round(expected)
            assert abs(expected - round(expected)) < 1e-8


def test_entropy_matches_density_matrix_planar2(dense_entropy, planar2):
    for size in range(planar2.n + 1):
        for qubits in itertools.combinations(range(planar2.n), size):
            expected = dense_entropy(planar2, qubits)
            assert entropy_region(planar2, planar2.qubit_region(qubits)) == round(expected)


@pytest.mark.parametrize(
    "fixture,d", [("planar2", 2), ("planar3", 3), ("toric2", 2), ("toric3", 3)]
)
def test_conditional_entropy_on_small_regions(request, fixture, d):
    code = request.getfixturevalue(fixture)
    reports = fact1_sweep(code, d - 1)
    assert all(r.correctable for r in reports)
    assert all(r.holds for r in reports)
    assert all(r.conditional == r.minus_s_region for r in reports)


def test_fact1_skips_non_correctable_region(toric2):
    report = verify_fact1(toric2, Region.full(toric2.lattice))
    assert not report.correctable
    assert report.holds is None
    assert report.consistent


def test_entropy_chain_on_torus(toric4):
    partition = abc_partition(toric4.lattice, 4, 1)
    report = verify_entropy_chain(toric4, partition)
    assert report.checked
    assert report.consistent
    assert report.size_c == 8
    assert toric4.k == report.k <= report.s_c <= report.size_c
    assert report.k == report.s_bc - report.s_a


def test_entropy_chain_random_partitions(toric4, rng):
    checked = 0
    offsets = [(0, 0)] + [tuple(int(v) for v in rng.integers(0, 8, size=2)) for _ in range(20)]
    for offset in offsets:
        report = verify_entropy_chain(toric4, abc_partition(toric4.lattice, 4, 1, offset))
        assert report.consistent
        checked += report.checked
    assert checked == len(offsets)


def test_entropy_chain_skips_when_a_is_not_correctable(toric2):
    partition = abc_partition(toric2.lattice, 8, 1)
    report = verify_entropy_chain(toric2, partition)
    assert not report.checked
    assert "A correctable=False" in report.reason


def test_entropy_chain_rejects_foreign_partition(toric2, toric4):
    with pytest.raises(ContractError):
        verify_entropy_chain(toric2, abc_partition(toric4.lattice, 4, 1))


def test_union_lemma_random_pairs(rng):
    code = planar_surface_code(5)
    checked = 0
    attempts = 0
    while checked < 100 and attempts < 5000:
        attempts += 1
        first = rng.choice(code.n, size=int(rng.integers(1, 3)), replace=False).tolist()
        second = rng.choice(code.n, size=int(rng.integers(1, 3)), replace=False).tolist()
        report = union_lemma_check(code, code.qubit_region(first), code.qubit_region(second))
        assert report.consistent
        if report.checked:
            assert report.union_correctable
            checked += 1
    assert checked == 100


def test_union_lemma_with_empty_second_region():
    code = planar_surface_code(5)
    report = union_lemma_check(code, code.qubit_region([20]), Region.empty(code.lattice))
    assert report.checked
    assert report.union_correctable


def test_union_lemma_skips_close_regions(planar3):
    first = planar3.qubit_region([0])
    report = union_lemma_check(planar3, first, first)
    assert not report.checked
    assert "window" in report.reason


def test_area_law_and_block_growth(toric4):
    block = square_block(toric4.lattice, 2, 2, 2)
    area = verify_area_law(toric4, block)
    assert area.checked and area.consistent
    assert area.s_region <= area.boundary_size
    growth = verify_block_growth(toric4, block)
    assert growth.checked and growth.consistent


def test_area_law_skips_non_correctable_region(toric2):
    report = verify_area_law(toric2, Region.full(toric2.lattice))
    assert not report.checked
    assert report.consistent


def test_max_correctable_block(toric3):
    m = max_correctable_block(toric3)
    assert m >= 1
    assert m < toric3.lattice.width


def test_code_dict_round_trip(planar2):
    data = planar2.to_dict()
    restored = StabilizerCode.from_dict(data)
    assert restored.generators == planar2.generators
    assert restored.lattice == planar2.lattice
    assert restored.k == planar2.k

    del data["lattice"]
    inferred = StabilizerCode.from_dict(data)
    assert inferred.lattice == planar2.lattice
