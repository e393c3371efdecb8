"""Stabilizer codes in binary symplectic form and their entropic checks.

A Pauli on n qubits is a 2n-bit vector (x | z); phases are dropped. For the
maximally mixed encoded state every entropy is an integer number of bits:

    S(M) = |M| - dim S_M,   dim S_M = rank(G) - rank(G restricted to the complement)

and a region M is correctable iff every normalizer element supported in M is a
stabilizer, i.e. 2|M| - rank(G restricted to M) == dim S_M.
"""

import itertools
import logging
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import envs
from local_codes.errors import ContractError, GuardExceeded
from local_codes.gf2core import BitMatrix, BitVec, nullspace, rank, row_reduce
from local_codes.lattice import (
    Lattice,
    PartitionABC,
    Region,
    boundary,
    boundary_minus,
    boundary_plus,
    fits_window,
    separated,
    windows,
)
from local_codes.workers import min_reduce

logger = logging.getLogger(__name__)

PAULI_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


@dataclass(frozen=True)
class Pauli:
    n: int
    xz: BitVec

    def __post_init__(self):
        if self.xz.len != 2 * self.n:
            raise ContractError(f"Pauli on {self.n} qubits needs {2 * self.n} bits, got {self.xz.len}")

    @classmethod
    def from_string(cls, text: str) -> "Pauli":
        letters = text.upper()
        if any(ch not in "IXYZ" for ch in letters):
            raise ContractError(f"Pauli strings use I, X, Y, Z: {text!r}")
        x = [1 if ch in "XY" else 0 for ch in letters]
        z = [1 if ch in "ZY" else 0 for ch in letters]
        return cls(len(letters), BitVec.from_bits(x + z))

    def x_bits(self) -> np.ndarray:
        return self.xz.to_bits()[: self.n]

    def z_bits(self) -> np.ndarray:
        return self.xz.to_bits()[self.n :]

    def support(self) -> List[int]:
        return np.flatnonzero(self.x_bits() | self.z_bits()).tolist()

    def weight(self) -> int:
        return len(self.support())

    def commutes(self, other: "Pauli") -> bool:
        if other.n != self.n:
            raise ContractError("Paulis act on different numbers of qubits")
        bits = self.xz.to_bits().astype(np.int64)
        other_bits = other.xz.to_bits().astype(np.int64)
        form = int(bits[: self.n] @ other_bits[self.n :]) + int(bits[self.n :] @ other_bits[: self.n])
        return form % 2 == 0

    def to_string(self) -> str:
        return "".join(PAULI_LETTERS[(int(x), int(z))] for x, z in zip(self.x_bits(), self.z_bits()))


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    n: int
    generators: BitMatrix
    lattice: Lattice
    site_of_qubit: Tuple[int, ...]
    w: int
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "site_of_qubit", tuple(int(s) for s in self.site_of_qubit))
        if self.generators.cols != 2 * self.n:
            raise ContractError(
                f"generators have {self.generators.cols} columns, expected 2n={2 * self.n}"
            )
        if len(self.site_of_qubit) != self.n:
            raise ContractError(f"{len(self.site_of_qubit)} sites given for {self.n} qubits")
        if len(set(self.site_of_qubit)) != self.n:
            raise ContractError("two qubits share a lattice site")
        if any(not 0 <= s < self.lattice.n for s in self.site_of_qubit):
            raise ContractError("a qubit sits outside the lattice")
        self._check_commutation()
        self._check_locality()

    def _check_commutation(self) -> None:
        dense = self.dense.astype(np.int64)
        x, z = dense[:, : self.n], dense[:, self.n :]
        gram = (x @ z.T + z @ x.T) % 2
        bad = np.argwhere(np.triu(gram))
        if bad.size:
            i, j = (int(v) for v in bad[0])
            raise ContractError(f"generators {i} and {j} do not commute")

    def _check_locality(self) -> None:
        for index, row in enumerate(self.dense):
            qubits = np.flatnonzero(row[: self.n] | row[self.n :])
            sites = [self.site_of_qubit[q] for q in qubits]
            if not fits_window(self.lattice, sites, self.w):
                raise ContractError(f"generator {index} does not fit a {self.w}x{self.w} window")

    @cached_property
    def dense(self) -> np.ndarray:
        return self.generators.to_dense()

    @cached_property
    def rank(self) -> int:
        return rank(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.rank

    @cached_property
    def qubit_of_site(self) -> Dict[int, int]:
        return {site: qubit for qubit, site in enumerate(self.site_of_qubit)}

    def qubits_in(self, region: Region) -> List[int]:
        if region.lattice != self.lattice:
            raise ContractError("region does not live on the code lattice")
        return sorted(self.qubit_of_site[s] for s in region.sites if s in self.qubit_of_site)

    def qubit_region(self, qubits: Iterable[int]) -> Region:
        return Region(self.lattice, frozenset(self.site_of_qubit[q] for q in qubits))

    def restricted_rank(self, qubits: Sequence[int]) -> int:
        """Rank of the generator matrix restricted to the x and z columns of the qubits."""
        if not len(qubits):
            return 0
        columns = np.concatenate([np.asarray(qubits), np.asarray(qubits) + self.n])
        return rank(BitMatrix.from_dense(self.dense[:, columns]))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "w": self.w,
            "generators": [row.to_string() for row in self.generators],
            "sites": [list(self.lattice.coords(s)) for s in self.site_of_qubit],
            "lattice": self.lattice.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StabilizerCode":
        n = int(data["n"])
        coords = [tuple(int(v) for v in rc) for rc in data["sites"]]
        if "lattice" in data:
            lattice = Lattice.from_dict(data["lattice"])
        else:
            lattice = Lattice(
                width=max(c for _, c in coords) + 1, height=max(r for r, _ in coords) + 1
            )
        generators = BitMatrix.from_strings(data["generators"], 2 * n)
        return cls(
            n=n,
            generators=generators,
            lattice=lattice,
            site_of_qubit=tuple(lattice.index(r, c) for r, c in coords),
            w=int(data["w"]),
            name=data.get("name", ""),
        )


def from_paulis(paulis: Sequence[str], w: Optional[int] = None, name: str = "") -> StabilizerCode:
    """Code on a 1 x n open chain from Pauli strings; w defaults to the chain length."""
    if not paulis:
        raise ContractError("at least one generator is required")
    rows = [Pauli.from_string(p).xz for p in paulis]
    n = len(paulis[0])
    lattice = Lattice(width=n, height=1)
    return StabilizerCode(
        n=n,
        generators=BitMatrix.from_rows(rows, 2 * n),
        lattice=lattice,
        site_of_qubit=tuple(range(n)),
        w=w or n,
        name=name,
    )


def code_k(code: StabilizerCode) -> int:
    return code.k


def _swapped(code: StabilizerCode) -> BitMatrix:
    dense = code.dense
    return BitMatrix.from_dense(np.hstack([dense[:, code.n :], dense[:, : code.n]]))


def normalizer_basis(code: StabilizerCode) -> BitMatrix:
    """Basis of all Paulis commuting with every generator, n + k vectors."""
    return nullspace(_swapped(code))


def logical_basis(code: StabilizerCode) -> BitMatrix:
    """2k normalizer vectors that complete the stabilizer span to the normalizer."""
    stabilizers, _ = row_reduce(code.generators)
    span = stabilizers
    current = stabilizers.rows
    chosen = []
    for vector in normalizer_basis(code):
        extended = span.vstack(BitMatrix.from_rows([vector], span.cols))
        grown = rank(extended)
        if grown > current:
            chosen.append(vector)
            span = extended
            current = grown
    return BitMatrix.from_rows(chosen, 2 * code.n)


def _span_table(vectors: Sequence[int]) -> np.ndarray:
    table = np.zeros(1, dtype=np.uint64)
    for vector in vectors:
        table = np.concatenate([table, table ^ np.uint64(vector)])
    return table


def _coset_min(job: Tuple[int, np.ndarray, Tuple[int, ...], int]) -> int:
    """Minimum weight over logical + stabilizer span, walking the high stabilizer bits in Gray order."""
    n, low_table, high, logical = job
    shift = np.uint64(n)
    qubit_mask = np.uint64((1 << n) - 1)
    best = None
    current = logical
    for step in range(1 << len(high)):
        if step:
            current ^= high[(step & -step).bit_length() - 1]
        values = low_table ^ np.uint64(current)
        weight = int(np.bitwise_count((values | (values >> shift)) & qubit_mask).min())
        if best is None or weight < best:
            best = weight
    return best


def min_distance_bruteforce(
    code: StabilizerCode, force: bool = False, workers: Optional[int] = None
) -> int:
    """Minimum weight of a normalizer element outside the stabilizer span.

    The normalizer is enumerated as (logical combination) + (stabilizer span);
    elements with a zero logical part are exactly the stabilizer span and are
    skipped.
    """
    if code.k == 0:
        raise ContractError("a k=0 code has no logical operators, the distance is undefined")
    size = code.n + code.k
    if size > envs.STABILIZER_ENUMERATION_LIMIT:
        if not force:
            raise GuardExceeded(
                f"enumerating 2^{size} normalizer elements exceeds the guard n+k <= {envs.STABILIZER_ENUMERATION_LIMIT}"
            )
        logger.warning(f"Forcing brute-force distance over 2^{size} elements")
    if 2 * code.n > 64:
        raise ContractError("the vectorised enumeration packs a Pauli into one 64-bit word, n <= 32")

    stabilizers = row_reduce(code.generators)[0].row_ints()
    logicals = logical_basis(code).row_ints()
    low_count = min(len(stabilizers), envs.SPAN_TABLE_BITS)
    low_table = _span_table(stabilizers[:low_count])
    high = tuple(stabilizers[low_count:])

    jobs = []
    current = 0
    for step in range(1, 1 << len(logicals)):
        current ^= logicals[(step & -step).bit_length() - 1]
        jobs.append((code.n, low_table, high, current))
    distance = min_reduce(_coset_min, jobs, workers)
    logger.info(f"Brute-force distance of {code.name or 'code'} [[{code.n},{code.k}]]: d={distance}")
    return distance


def _region_dimensions(code: StabilizerCode, qubits: Sequence[int]) -> Tuple[int, int]:
    """(dim of normalizer elements inside, dim of stabilizers inside) for a qubit set."""
    inside = set(qubits)
    outside = [q for q in range(code.n) if q not in inside]
    normalizer_dim = 2 * len(qubits) - code.restricted_rank(qubits)
    stabilizer_dim = code.rank - code.restricted_rank(outside)
    return normalizer_dim, stabilizer_dim


def _qubit_entropy(code: StabilizerCode, qubits: Sequence[int]) -> int:
    inside = set(qubits)
    outside = [q for q in range(code.n) if q not in inside]
    return len(qubits) - (code.rank - code.restricted_rank(outside))


def correctable_qubits(code: StabilizerCode, qubits: Sequence[int]) -> bool:
    normalizer_dim, stabilizer_dim = _region_dimensions(code, qubits)
    return normalizer_dim == stabilizer_dim


def correctable_region(code: StabilizerCode, region: Region) -> bool:
    """Erasure of the region is correctable iff it supports no nontrivial logical operator."""
    return correctable_qubits(code, code.qubits_in(region))


def entropy_region(code: StabilizerCode, region: Region) -> int:
    """S(M) in bits for the maximally mixed encoded state."""
    return _qubit_entropy(code, code.qubits_in(region))


def region_sweep_distance(code: StabilizerCode, max_size: int) -> Optional[int]:
    """Smallest qubit set that is not correctable, searching sizes up to max_size."""
    for size in range(1, max_size + 1):
        for qubits in itertools.combinations(range(code.n), size):
            if not correctable_qubits(code, qubits):
                logger.info(f"Region sweep: {qubits} is not correctable, d={size}")
                return size
    logger.info(f"Region sweep: every set of at most {max_size} qubits is correctable")
    return None


def max_correctable_block(code: StabilizerCode) -> int:
    """Largest m such that every m x m block of the lattice is correctable."""
    best = 0
    side = min(code.lattice.width, code.lattice.height)
    for m in range(1, side + 1):
        for _, _, sites in windows(code.lattice, m):
            if not correctable_region(code, Region(code.lattice, frozenset(sites))):
                return best
        best = m
    return best


@dataclass(frozen=True)
class EntropyReport:
    sites: Tuple[int, ...]
    s_region: int
    s_complement: int
    s_total: int
    conditional: int

    def to_dict(self) -> dict:
        return asdict(self)


def entropy_report(code: StabilizerCode, region: Region) -> EntropyReport:
    s_region = entropy_region(code, region)
    s_complement = entropy_region(code, region.complement())
    s_total = code.k
    return EntropyReport(
        sites=tuple(sorted(region.sites)),
        s_region=s_region,
        s_complement=s_complement,
        s_total=s_total,
        conditional=s_total - s_complement,
    )


@dataclass(frozen=True)
class Fact1Report:
    sites: Tuple[int, ...]
    correctable: bool
    conditional: int
    minus_s_region: int
    holds: Optional[bool]

    @property
    def consistent(self) -> bool:
        return self.holds is not False

    def to_dict(self) -> dict:
        return {**asdict(self), "consistent": self.consistent}


def verify_fact1(code: StabilizerCode, region: Region) -> Fact1Report:
    """On a correctable region, S(Lambda) - S(complement) must equal -S(M) exactly."""
    entropies = entropy_report(code, region)
    correctable = correctable_region(code, region)
    holds = None
    if correctable:
        holds = entropies.conditional == -entropies.s_region
        if not holds:
            logger.error(
                f"Conditional entropy {entropies.conditional} != {-entropies.s_region} on correctable region {entropies.sites}"
            )
    return Fact1Report(
        sites=entropies.sites,
        correctable=correctable,
        conditional=entropies.conditional,
        minus_s_region=-entropies.s_region,
        holds=holds,
    )


def fact1_sweep(code: StabilizerCode, max_size: int) -> List[Fact1Report]:
    """verify_fact1 on every qubit set of at most max_size qubits."""
    reports = []
    for size in range(max_size + 1):
        for qubits in itertools.combinations(range(code.n), size):
            reports.append(verify_fact1(code, code.qubit_region(qubits)))
    bad = sum(1 for r in reports if not r.consistent)
    logger.info(f"Fact 1 sweep up to size {max_size}: {len(reports)} regions, {bad} inconsistent")
    return reports


@dataclass(frozen=True)
class ChainReport:
    checked: bool
    reason: str = ""
    k: int = 0
    s_a: int = 0
    s_b: int = 0
    s_c: int = 0
    s_ac: int = 0
    s_bc: int = 0
    size_c: int = 0
    a_correctable: bool = False
    b_correctable: bool = False
    violations: Tuple[str, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {**asdict(self), "violations": list(self.violations), "consistent": self.consistent}


def verify_entropy_chain(code: StabilizerCode, partition: PartitionABC) -> ChainReport:
    """k = S(Lambda) <= S(C) <= |C| through the two conditional-entropy identities."""
    if partition.lattice != code.lattice:
        raise ContractError("partition does not live on the code lattice")
    a_ok = correctable_region(code, partition.a)
    b_ok = correctable_region(code, partition.b)
    if not (a_ok and b_ok):
        reason = f"A correctable={a_ok}, B correctable={b_ok}"
        logger.warning(f"Entropy chain skipped: {reason}")
        return ChainReport(checked=False, reason=reason, k=code.k, a_correctable=a_ok, b_correctable=b_ok)

    k = code.k
    s_a = entropy_region(code, partition.a)
    s_b = entropy_region(code, partition.b)
    s_c = entropy_region(code, partition.c)
    s_ac = entropy_region(code, partition.a | partition.c)
    s_bc = entropy_region(code, partition.b | partition.c)
    size_c = len(code.qubits_in(partition.c))

    checks = {
        "S(Lambda) = S(BC) - S(A)": k == s_bc - s_a,
        "S(Lambda) = S(AC) - S(B)": k == s_ac - s_b,
        "S(Lambda) <= S(C) + S(B) - S(A)": k <= s_c + s_b - s_a,
        "S(Lambda) <= S(C) + S(A) - S(B)": k <= s_c + s_a - s_b,
        "k <= S(C)": k <= s_c,
        "S(C) <= |C|": s_c <= size_c,
    }
    violations = tuple(name for name, ok in checks.items() if not ok)
    if violations:
        logger.error(f"Entropy chain violated on {code.name or 'code'}: {violations}")
    else:
        logger.info(f"Entropy chain holds: k={k} <= S(C)={s_c} <= |C|={size_c}")
    return ChainReport(
        checked=True,
        k=k,
        s_a=s_a,
        s_b=s_b,
        s_c=s_c,
        s_ac=s_ac,
        s_bc=s_bc,
        size_c=size_c,
        a_correctable=True,
        b_correctable=True,
        violations=violations,
    )


@dataclass(frozen=True)
class UnionReport:
    checked: bool
    reason: str = ""
    union_correctable: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        return not self.checked or bool(self.union_correctable)

    def to_dict(self) -> dict:
        return {**asdict(self), "consistent": self.consistent}


def union_lemma_check(code: StabilizerCode, first: Region, second: Region) -> UnionReport:
    """Two separated correctable regions (with a correctable outer boundary) have a correctable union."""
    if not separated(first, second, code.w):
        return UnionReport(checked=False, reason=f"regions share a {code.w}x{code.w} window")
    for label, region in (
        ("M1", first),
        ("M2", second),
        ("boundary of M1", boundary_plus(first, code.w)),
    ):
        if not correctable_region(code, region):
            return UnionReport(checked=False, reason=f"{label} is not correctable")
    union = correctable_region(code, first | second)
    if not union:
        logger.error(f"Union of separated correctable regions is not correctable on {code.name or 'code'}")
    return UnionReport(checked=True, union_correctable=union)


@dataclass(frozen=True)
class AreaLawReport:
    checked: bool
    reason: str = ""
    s_region: int = 0
    boundary_size: int = 0

    @property
    def consistent(self) -> bool:
        return not self.checked or self.s_region <= self.boundary_size

    def to_dict(self) -> dict:
        return {**asdict(self), "consistent": self.consistent}


def verify_area_law(code: StabilizerCode, region: Region) -> AreaLawReport:
    """A correctable region with a correctable outer boundary has S(M) <= |boundary|."""
    if not correctable_region(code, region):
        return AreaLawReport(checked=False, reason="region is not correctable")
    if not correctable_region(code, boundary_plus(region, code.w)):
        return AreaLawReport(checked=False, reason="outer boundary is not correctable")
    report = AreaLawReport(
        checked=True,
        s_region=entropy_region(code, region),
        boundary_size=len(code.qubits_in(boundary(region, code.w))),
    )
    if not report.consistent:
        logger.error(f"Area law violated: S(M)={report.s_region} > |boundary|={report.boundary_size}")
    return report


@dataclass(frozen=True)
class GrowthReport:
    checked: bool
    reason: str = ""
    grown_correctable: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        return not self.checked or bool(self.grown_correctable)

    def to_dict(self) -> dict:
        return {**asdict(self), "consistent": self.consistent}


def verify_block_growth(code: StabilizerCode, region: Region) -> GrowthReport:
    """If M and its boundary layers are correctable, M grown by its outer layer is correctable."""
    inner = boundary_minus(region, code.w)
    outer = boundary_plus(region, code.w)
    if not correctable_region(code, region):
        return GrowthReport(checked=False, reason="region is not correctable")
    if not correctable_region(code, inner | outer):
        return GrowthReport(checked=False, reason="boundary layers are not correctable")
    grown = correctable_region(code, region | outer)
    if not grown:
        logger.error(f"Grown region is not correctable on {code.name or 'code'}")
    return GrowthReport(checked=True, grown_correctable=grown)
