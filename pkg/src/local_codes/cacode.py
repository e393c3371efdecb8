"""Classical codes whose codewords are rule-90 histories.

A codeword of C_L^L is an L x L array x[t][i] (time t, space i mod L) with
x[t+1][i] = x[t][i-1] ^ x[t][i+1] and the gauge bit x[0][0] = 0. The first row
determines the rest, so the L-1 free bits of row 0 are the message.

Rows are handled as Python ints internally (bit i = cell i); that keeps the
streaming paths O(L) in memory for L in the thousands.
"""

import logging
import math
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

import envs
from local_codes.errors import ContractError, GuardExceeded, InconsistencyError
from local_codes.gf2core import BitMatrix, BitVec, rank
from local_codes.lattice import Lattice, Region, classical_partition
from local_codes.workers import min_reduce, ordered_map

logger = logging.getLogger(__name__)

# constraints touch (t, i-1), (t, i+1), (t+1, i)
CA_INTERACTION_RANGE = 3


def _check_odd(L: int) -> None:
    if L < 3 or L % 2 == 0:
        raise ContractError(f"C_L^L is defined for odd L >= 3, got L={L}")


def _step(row: int, length: int, periodic: bool) -> int:
    mask = (1 << length) - 1
    left = (row << 1) & mask
    right = row >> 1
    if periodic:
        left |= row >> (length - 1)
        right |= (row & 1) << (length - 1)
    return left ^ right


@dataclass(frozen=True)
class CaCodeword:
    rows: Tuple[BitVec, ...]

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return self.rows[0].len if self.rows else 0

    @property
    def L(self) -> int:
        return self.width

    def row_weights(self) -> List[int]:
        return [row.weight() for row in self.rows]

    def weight(self) -> int:
        return sum(self.row_weights())

    def to_grid(self) -> np.ndarray:
        return np.stack([row.to_bits() for row in self.rows])

    def to_bitvec(self) -> BitVec:
        """Flattened row-major, site (t, i) at index t * width + i."""
        return BitVec.from_bits(self.to_grid().reshape(-1))

    def support(self, lattice: Lattice) -> Region:
        return Region.from_mask(lattice, self.to_grid().astype(bool))

    def satisfies_rule(self, periodic: bool = True) -> bool:
        for before, after in zip(self.rows, self.rows[1:]):
            if evolve_row(before, periodic) != after:
                return False
        return True


@dataclass(frozen=True)
class CaCode:
    L: int

    def __post_init__(self):
        _check_odd(self.L)

    @property
    def n(self) -> int:
        return self.L * self.L

    @property
    def k(self) -> int:
        return self.L - 1

    @property
    def w(self) -> int:
        return CA_INTERACTION_RANGE

    @property
    def lattice(self) -> Lattice:
        return Lattice(width=self.L, height=self.L, periodic_x=True, periodic_y=False)

    def codeword(self, message: BitVec) -> CaCodeword:
        return codeword_from_message(self.L, message)

    @cached_property
    def parity_check(self) -> BitMatrix:
        """Constraint system built directly from the rule, independent of the simulation."""
        L = self.L
        checks = np.zeros((L * (L - 1) + 1, L * L), dtype=np.uint8)
        row = 0
        for t in range(L - 1):
            for i in range(L):
                checks[row, (t + 1) * L + i] = 1
                checks[row, t * L + (i - 1) % L] ^= 1
                checks[row, t * L + (i + 1) % L] ^= 1
                row += 1
        checks[row, 0] = 1
        return BitMatrix.from_dense(checks)

    @cached_property
    def generator_matrix(self) -> BitMatrix:
        rows = []
        for j in range(self.k):
            message = BitVec.from_support(self.k, [j])
            rows.append(self.codeword(message).to_bitvec())
        return BitMatrix.from_rows(rows, self.n)


def evolve_row(row: BitVec, periodic: bool = True) -> BitVec:
    """One rule-90 step; open ends read missing neighbours as 0."""
    if row.len < 1:
        raise ContractError("cannot evolve an empty row")
    return BitVec.from_int(_step(row.to_int(), row.len, periodic), row.len)


def history_from_row(initial: BitVec, rows: int, periodic: bool = True) -> CaCodeword:
    history = [initial]
    for _ in range(rows - 1):
        history.append(evolve_row(history[-1], periodic))
    return CaCodeword(tuple(history))


def codeword_from_message(L: int, message: BitVec) -> CaCodeword:
    """Full L x L history whose first row is 0 followed by the message bits."""
    _check_odd(L)
    if message.len != L - 1:
        raise ContractError(f"message for L={L} needs {L - 1} bits, got {message.len}")
    initial = BitVec.from_int(message.to_int() << 1, L)
    return history_from_row(initial, L, periodic=True)


def windowed_codeword(initial: BitVec, rows: int) -> CaCodeword:
    """History on an open strip; exact for the semi-infinite lattice while the light cone stays inside."""
    return history_from_row(initial, rows, periodic=False)


def _history_weight(row: int, length: int, rows: int, periodic: bool) -> int:
    total = 0
    for _ in range(rows):
        total += row.bit_count()
        row = _step(row, length, periodic)
    return total


def single_seed_weight(L: int) -> int:
    """d': weight of the periodic history started from x[0][i] = delta(i, 1)."""
    _check_odd(L)
    return _history_weight(1 << 1, L, L, periodic=True)


def seed_weight_scan(
    L_min: int, L_max: int, step: int = 2, workers: Optional[int] = None
) -> List[Tuple[int, int]]:
    """(L, d') for odd L in [L_min, L_max]."""
    if step < 2 or step % 2:
        raise ContractError(f"step must be a positive even number to stay on odd L, got {step}")
    sizes = list(range(L_min | 1, L_max + 1, step))
    weights = ordered_map(single_seed_weight, sizes, workers)
    logger.info(f"Computed d' for {len(sizes)} sizes in [{L_min}, {L_max}]")
    return list(zip(sizes, weights))


def _chunk_min(job: Tuple[int, int, int, int]) -> Optional[int]:
    """Smallest codeword weight below ``bound`` among reflected-binary messages [start, stop)."""
    L, start, stop, bound = job
    one = np.uint64(1)
    top = np.uint64(L - 1)
    mask = np.uint64((1 << L) - 1)
    index = np.arange(start, stop, dtype=np.uint64)
    rows = (index ^ (index >> one)) << one
    weights = np.zeros(rows.size, dtype=np.int64)
    for _ in range(L):
        weights += np.bitwise_count(rows)
        keep = weights < bound
        if not keep.all():
            rows = rows[keep]
            weights = weights[keep]
            if rows.size == 0:
                return None
        rows = (((rows << one) & mask) | (rows >> top)) ^ ((rows >> one) | ((rows & one) << top))
    return int(weights.min())


def exhaustive_distance(L: int, force: bool = False, workers: Optional[int] = None) -> int:
    """Minimum weight over all 2^(L-1) - 1 nonzero messages.

    The single-seed weight is a codeword weight, so it seeds the running
    minimum and every partial history that reaches it is dropped early.
    """
    _check_odd(L)
    if L > envs.CA_EXHAUSTIVE_MAX_L:
        if not force:
            raise GuardExceeded(
                f"exhaustive search over 2^{L - 1} messages exceeds the guard L <= {envs.CA_EXHAUSTIVE_MAX_L}"
            )
        logger.warning(f"Forcing exhaustive CA search at L={L}")
    if L > 63:
        raise ContractError("the vectorised search packs a row into one 64-bit word, L <= 63")

    upper = single_seed_weight(L)
    total = 1 << (L - 1)
    chunk = 1 << envs.CA_CHUNK_BITS
    jobs = [(L, start, min(start + chunk, total), upper) for start in range(1, total, chunk)]
    best = min_reduce(_chunk_min, jobs, workers, initial=upper)
    logger.info(f"Exhaustive distance of C_{L}^{L}: d={best} (d'={upper}, {len(jobs)} chunks)")
    return best


def row_weight_sum(rows: int) -> int:
    """Sum of 2^popcount(t) for t < rows, digit by digit in exact integers."""
    total = 0
    ones = 0
    for bit in reversed(range(rows.bit_length())):
        if (rows >> bit) & 1:
            total += (1 << ones) * 3**bit
            ones += 1
    return total


def sierpinski_row_weights(p: int) -> List[int]:
    """Row weights of the open-strip single-seed history over 2^p rows."""
    if p < 0:
        raise ContractError(f"level must be non-negative, got {p}")
    rows = 1 << p
    width = (1 << (p + 1)) + 1
    row = 1 << (1 << p)
    weights = []
    for _ in range(rows):
        weights.append(row.bit_count())
        row = _step(row, width, periodic=False)
    return weights


def sierpinski_weight_simulated(p: int) -> int:
    return sum(sierpinski_row_weights(p))


def sierpinski_weight_closed_form(p: int) -> int:
    if p < 0:
        raise ContractError(f"level must be non-negative, got {p}")
    return row_weight_sum(1 << p)


def sierpinski_weight(p: int) -> int:
    """Weight of the semi-infinite single-seed history over 2^p rows.

    Both the strip simulation and the closed form run while p is small enough
    to simulate; they must agree.
    """
    closed = sierpinski_weight_closed_form(p)
    if p <= envs.SIERPINSKI_SIMULATION_MAX_P:
        simulated = sierpinski_weight_simulated(p)
        if simulated != closed:
            logger.error(f"Sierpinski level {p}: simulation {simulated} != closed form {closed}")
            raise InconsistencyError(
                f"sierpinski level {p}: simulated {simulated}, closed form {closed}"
            )
    return closed


SUBLATTICES = ("A", "B", "C", "D")


def sublattice_occupancy(codeword: CaCodeword) -> int:
    """How many of the four even sublattices (by (i+t) mod 4 and t mod 2) carry a set bit."""
    grid = codeword.to_grid()
    ts, cols = np.nonzero(grid)
    parity = (ts + cols) % 2
    if parity.any():
        raise ContractError("codeword has set bits on the odd sublattice (i + t odd)")
    classes = set()
    for t, i in zip(ts.tolist(), cols.tolist()):
        classes.add(SUBLATTICES[((t + i) % 4) // 2 + 2 * (t % 2)])
    return len(classes)


def correctable_region_classical(code: CaCode, region: Region) -> bool:
    """True iff no nonzero codeword is supported inside the region."""
    if region.lattice != code.lattice:
        raise ContractError("region does not live on the code lattice")
    outside = sorted(region.complement().sites)
    checks = code.parity_check
    if outside:
        pins = np.zeros((len(outside), code.n), dtype=np.uint8)
        pins[np.arange(len(outside)), outside] = 1
        checks = checks.vstack(BitMatrix.from_dense(pins))
    return rank(checks) == code.n


@dataclass(frozen=True)
class ClassicalPartitionReport:
    L: int
    block_size: int
    w: int
    k: int
    size_a: int
    blocks: int
    largest_block: int
    blocks_correctable: bool
    union_correctable: bool
    consistent: bool

    def to_dict(self) -> dict:
        return asdict(self)


def verify_classical_partition(
    code: CaCode, block_size: int, w: Optional[int] = None
) -> ClassicalPartitionReport:
    """With every block correctable, A fixes the codeword, so k <= |A|."""
    w = code.w if w is None else w
    partition = classical_partition(code.lattice, block_size, w)
    each = all(correctable_region_classical(code, block) for block in partition.blocks)
    union = correctable_region_classical(code, partition.a.complement())
    consistent = True
    if each and not union:
        logger.error(f"L={code.L} b={block_size}: separated correctable blocks have a non-correctable union")
        consistent = False
    if union and code.k > len(partition.a):
        logger.error(f"L={code.L} b={block_size}: k={code.k} exceeds |A|={len(partition.a)}")
        consistent = False
    return ClassicalPartitionReport(
        L=code.L,
        block_size=block_size,
        w=w,
        k=code.k,
        size_a=len(partition.a),
        blocks=len(partition.blocks),
        largest_block=max((len(b) for b in partition.blocks), default=0),
        blocks_correctable=each,
        union_correctable=union,
        consistent=consistent,
    )


def fit_power_law(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Ordinary least squares of log y on log x: (slope, intercept, rms residual)."""
    if len(points) < 2:
        raise ContractError(f"a fit needs at least 2 points, got {len(points)}")
    if any(x <= 0 or y <= 0 for x, y in points):
        raise ContractError("power-law fits need positive coordinates")
    xs = np.log(np.array([x for x, _ in points], dtype=float))
    ys = np.log(np.array([y for _, y in points], dtype=float))
    if np.ptp(xs) == 0:
        raise ContractError("a fit needs at least two distinct x values")
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = math.sqrt(float(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return float(slope), float(intercept), residual


def fit_exponent(points: Sequence[Tuple[float, float]]) -> float:
    return fit_power_law(points)[0]
