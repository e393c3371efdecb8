"""2D lattice geometry: sites, regions, window boundaries and block partitions.

Locality is measured with square windows: a constraint of interaction range
``w`` is supported inside some ``w x w`` window, so two sites can share a
constraint iff their distance along each axis (cyclic on periodic axes) is at
most ``w - 1``.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from local_codes.errors import ContractError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lattice:
    width: int
    height: int
    periodic_x: bool = False
    periodic_y: bool = False

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ContractError(f"lattice must be at least 1x1, got {self.width}x{self.height}")

    @property
    def n(self) -> int:
        return self.width * self.height

    def index(self, row: int, col: int) -> int:
        if self.periodic_y:
            row %= self.height
        if self.periodic_x:
            col %= self.width
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise ContractError(f"site ({row}, {col}) is outside the {self.height}x{self.width} lattice")
        return row * self.width + col

    def coords(self, index: int) -> Tuple[int, int]:
        if not 0 <= index < self.n:
            raise ContractError(f"site index {index} outside [0, {self.n})")
        return divmod(index, self.width)

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "periodic_x": self.periodic_x,
            "periodic_y": self.periodic_y,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Lattice":
        return cls(
            width=int(data["width"]),
            height=int(data["height"]),
            periodic_x=bool(data.get("periodic_x", False)),
            periodic_y=bool(data.get("periodic_y", False)),
        )


@dataclass(frozen=True)
class Region:
    lattice: Lattice
    sites: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        sites = frozenset(int(s) for s in self.sites)
        bad = [s for s in sites if not 0 <= s < self.lattice.n]
        if bad:
            raise ContractError(f"sites {sorted(bad)[:5]} are outside the lattice")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def empty(cls, lattice: Lattice) -> "Region":
        return cls(lattice, frozenset())

    @classmethod
    def full(cls, lattice: Lattice) -> "Region":
        return cls(lattice, frozenset(range(lattice.n)))

    @classmethod
    def from_coords(cls, lattice: Lattice, coords: Iterable[Tuple[int, int]]) -> "Region":
        return cls(lattice, frozenset(lattice.index(r, c) for r, c in coords))

    @classmethod
    def from_mask(cls, lattice: Lattice, mask: np.ndarray) -> "Region":
        return cls(lattice, frozenset(np.flatnonzero(mask.reshape(-1)).tolist()))

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, site: int) -> bool:
        return site in self.sites

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.sites))

    def _check_lattice(self, other: "Region") -> None:
        if other.lattice != self.lattice:
            raise ContractError("regions live on different lattices")

    def __or__(self, other: "Region") -> "Region":
        self._check_lattice(other)
        return Region(self.lattice, self.sites | other.sites)

    def __and__(self, other: "Region") -> "Region":
        self._check_lattice(other)
        return Region(self.lattice, self.sites & other.sites)

    def __sub__(self, other: "Region") -> "Region":
        self._check_lattice(other)
        return Region(self.lattice, self.sites - other.sites)

    def complement(self) -> "Region":
        return Region(self.lattice, frozenset(range(self.lattice.n)) - self.sites)

    def is_empty(self) -> bool:
        return not self.sites

    def mask(self) -> np.ndarray:
        grid = np.zeros(self.lattice.n, dtype=bool)
        if self.sites:
            grid[np.fromiter(self.sites, dtype=np.intp)] = True
        return grid.reshape(self.lattice.height, self.lattice.width)

    def to_dict(self) -> dict:
        return {**self.lattice.to_dict(), "sites": sorted(self.sites)}

    @classmethod
    def from_dict(cls, data: dict) -> "Region":
        return cls(Lattice.from_dict(data), frozenset(data.get("sites", [])))


def square_block(lattice: Lattice, row: int, col: int, side: int) -> Region:
    """Sites of the side x side block with top-left corner (row, col), clipped on open axes."""
    coords = []
    for r in range(row, row + side):
        for c in range(col, col + side):
            if not lattice.periodic_y and not 0 <= r < lattice.height:
                continue
            if not lattice.periodic_x and not 0 <= c < lattice.width:
                continue
            coords.append((r, c))
    return Region.from_coords(lattice, coords)


def _shift(mask: np.ndarray, offset: int, axis: int, periodic: bool) -> np.ndarray:
    if periodic:
        return np.roll(mask, offset, axis=axis)
    out = np.zeros_like(mask)
    size = mask.shape[axis]
    if offset == 0:
        return mask.copy()
    if abs(offset) >= size:
        return out
    src = [slice(None), slice(None)]
    dst = [slice(None), slice(None)]
    if offset > 0:
        dst[axis] = slice(offset, None)
        src[axis] = slice(None, size - offset)
    else:
        dst[axis] = slice(None, size + offset)
        src[axis] = slice(-offset, None)
    out[tuple(dst)] = mask[tuple(src)]
    return out


def _dilate(mask: np.ndarray, radius: int, lattice: Lattice) -> np.ndarray:
    """Chebyshev dilation, cyclic along periodic axes."""
    out = mask.copy()
    for axis, periodic in ((0, lattice.periodic_y), (1, lattice.periodic_x)):
        grown = out.copy()
        for offset in range(1, radius + 1):
            grown |= _shift(out, offset, axis, periodic)
            grown |= _shift(out, -offset, axis, periodic)
        out = grown
    return out


def _check_range(w: int) -> None:
    if w < 1:
        raise ContractError(f"interaction range must be at least 1, got {w}")


def boundary_plus(region: Region, w: int) -> Region:
    """External boundary: sites outside the region sharing a w x w window with it."""
    _check_range(w)
    mask = region.mask()
    grown = _dilate(mask, w - 1, region.lattice)
    return Region.from_mask(region.lattice, grown & ~mask)


def boundary_minus(region: Region, w: int) -> Region:
    """Internal boundary, the external boundary of the complement."""
    return boundary_plus(region.complement(), w)


def boundary(region: Region, w: int) -> Region:
    return boundary_plus(region, w) | boundary_minus(region, w)


def separated(first: Region, second: Region, w: int) -> bool:
    """True iff no w x w window meets both regions."""
    _check_range(w)
    first._check_lattice(second)
    grown = _dilate(first.mask(), w - 1, first.lattice)
    return not (grown & second.mask()).any()


def _axis_fits(positions: Sequence[int], size: int, w: int, periodic: bool) -> bool:
    if w >= size:
        return True
    ordered = sorted(set(positions))
    if not periodic:
        return ordered[-1] - ordered[0] <= w - 1
    gaps = [b - a for a, b in zip(ordered, ordered[1:])]
    gaps.append(ordered[0] + size - ordered[-1])
    return size - max(gaps) <= w - 1


def fits_window(lattice: Lattice, sites: Iterable[int], w: int) -> bool:
    """True iff all sites fit inside a single w x w window."""
    _check_range(w)
    coords = [lattice.coords(s) for s in sites]
    if not coords:
        return True
    rows = [r for r, _ in coords]
    cols = [c for _, c in coords]
    return _axis_fits(rows, lattice.height, w, lattice.periodic_y) and _axis_fits(
        cols, lattice.width, w, lattice.periodic_x
    )


def _axis_starts(size: int, w: int, periodic: bool) -> Tuple[range, int]:
    if w >= size:
        return range(1), size
    if periodic:
        return range(size), w
    return range(size - w + 1), w


def windows(lattice: Lattice, w: int) -> Iterator[Tuple[int, int, List[int]]]:
    """Every w x w window as (top row, left col, site indices)."""
    _check_range(w)
    row_starts, row_extent = _axis_starts(lattice.height, w, lattice.periodic_y)
    col_starts, col_extent = _axis_starts(lattice.width, w, lattice.periodic_x)
    for r0 in row_starts:
        for c0 in col_starts:
            sites = [
                lattice.index(r0 + i, c0 + j)
                for i in range(row_extent)
                for j in range(col_extent)
            ]
            yield r0, c0, sites


@dataclass(frozen=True)
class PartitionABC:
    """Checkerboard block partition with a corner separator C."""

    a: Region
    b: Region
    c: Region
    block_size: int
    w: int
    a_blocks: Tuple[Region, ...] = ()
    b_blocks: Tuple[Region, ...] = ()

    def __post_init__(self):
        lattice = self.a.lattice
        if self.b.lattice != lattice or self.c.lattice != lattice:
            raise ContractError("partition regions live on different lattices")
        if self.a.sites & self.b.sites or self.a.sites & self.c.sites or self.b.sites & self.c.sites:
            raise ContractError("partition regions A, B, C overlap")
        if len(self.a) + len(self.b) + len(self.c) != lattice.n:
            raise ContractError("partition regions A, B, C do not cover the lattice")

    @classmethod
    def from_blocks(
        cls,
        lattice: Lattice,
        a_blocks: Sequence[Region],
        b_blocks: Sequence[Region],
        block_size: int,
        w: int,
    ) -> "PartitionABC":
        """Partition whose C is whatever the blocks leave uncovered."""
        a = Region.empty(lattice)
        for block in a_blocks:
            a = a | block
        b = Region.empty(lattice)
        for block in b_blocks:
            b = b | block
        c = (a | b).complement()
        return cls(a, b, c, block_size, w, tuple(a_blocks), tuple(b_blocks))

    @property
    def lattice(self) -> Lattice:
        return self.a.lattice

    def block_families(self) -> Dict[str, Tuple[Region, ...]]:
        return {"A": self.a_blocks, "B": self.b_blocks}

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice.to_dict(),
            "R": self.block_size,
            "w": self.w,
            "A": sorted(self.a.sites),
            "B": sorted(self.b.sites),
            "C": sorted(self.c.sites),
        }


@dataclass(frozen=True)
class ClassicalPartition:
    """Grid of blocks separated by strips; A is everything outside the blocks."""

    a: Region
    blocks: Tuple[Region, ...]
    block_size: int
    w: int

    def __iter__(self):
        yield self.a
        yield list(self.blocks)

    @property
    def lattice(self) -> Lattice:
        return self.a.lattice

    def block_families(self) -> Dict[str, Tuple[Region, ...]]:
        return {"B": self.blocks}

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice.to_dict(),
            "b": self.block_size,
            "w": self.w,
            "A": sorted(self.a.sites),
            "blocks": [sorted(block.sites) for block in self.blocks],
        }


def _junction_lines(size: int, block_size: int, offset: int, periodic: bool, axis: str) -> List[int]:
    """Positions where one cell ends and the next starts along an axis."""
    if block_size >= size:
        return []
    if periodic:
        cells, rest = divmod(size, block_size)
        if rest or cells % 2:
            raise ContractError(
                f"periodic {axis} axis of size {size} needs an even number of R={block_size} cells"
            )
        return sorted((offset + j * block_size) % size for j in range(cells))
    offset %= block_size
    return [e for e in range(offset, size, block_size) if 0 < e < size]


def _cell_index(position: int, size: int, block_size: int, offset: int, periodic: bool) -> int:
    if block_size >= size:
        return 0
    if periodic:
        return ((position - offset) % size) // block_size
    return (position - offset % block_size) // block_size


def abc_partition(
    lattice: Lattice, block_size: int, w: int, offset: Tuple[int, int] = (0, 0)
) -> PartitionABC:
    """Checkerboard R x R cells into A and B, 2w x 2w cut-outs around cell corners into C.

    ``offset`` moves the tiling origin; on periodic axes every offset yields a
    valid partition, which is how random partitions are drawn.
    """
    _check_range(w)
    if block_size <= 2 * w:
        raise ContractError(
            f"block size R={block_size} must exceed 2w={2 * w}, corner cut-outs would consume whole blocks"
        )
    if lattice.width != lattice.height:
        raise ContractError(f"square lattice required, got {lattice.height}x{lattice.width}")

    row_offset, col_offset = offset
    row_lines = _junction_lines(lattice.height, block_size, row_offset, lattice.periodic_y, "row")
    col_lines = _junction_lines(lattice.width, block_size, col_offset, lattice.periodic_x, "column")

    cut = np.zeros((lattice.height, lattice.width), dtype=bool)
    for er in row_lines:
        for ec in col_lines:
            for r in range(er - w, er + w):
                if not lattice.periodic_y and not 0 <= r < lattice.height:
                    continue
                for c in range(ec - w, ec + w):
                    if not lattice.periodic_x and not 0 <= c < lattice.width:
                        continue
                    cut[r % lattice.height, c % lattice.width] = True

    cells: Dict[Tuple[int, int], List[int]] = {}
    for r in range(lattice.height):
        i = _cell_index(r, lattice.height, block_size, row_offset, lattice.periodic_y)
        for c in range(lattice.width):
            if cut[r, c]:
                continue
            j = _cell_index(c, lattice.width, block_size, col_offset, lattice.periodic_x)
            cells.setdefault((i, j), []).append(lattice.index(r, c))

    a_blocks = []
    b_blocks = []
    for (i, j), sites in sorted(cells.items()):
        block = Region(lattice, frozenset(sites))
        (a_blocks if (i + j) % 2 == 0 else b_blocks).append(block)

    partition = PartitionABC.from_blocks(lattice, a_blocks, b_blocks, block_size, w)
    logger.info(
        f"ABC partition R={block_size} w={w}: |A|={len(partition.a)} |B|={len(partition.b)} |C|={len(partition.c)}"
    )
    return partition


def _block_starts(size: int, block_size: int, w: int, offset: int, periodic: bool) -> List[int]:
    pitch = block_size + w
    if periodic:
        if block_size >= size:
            return [0]
        return [s for s in range(offset % pitch, size, pitch) if s + block_size + w <= size + offset % pitch]
    return list(range(offset % pitch, size, pitch))


def classical_partition(
    lattice: Lattice, block_size: int, w: int, offset: Tuple[int, int] = (0, 0)
) -> ClassicalPartition:
    """b x b blocks on a grid of pitch b + w; the w-wide strips form A.

    A block size of at least the lattice width gives a single block covering
    the lattice.
    """
    _check_range(w)
    if block_size < 1:
        raise ContractError(f"block size must be at least 1, got {block_size}")
    if block_size < lattice.width and block_size + w > lattice.width:
        raise ContractError(
            f"block size {block_size} plus strip {w} exceeds lattice width {lattice.width}"
        )
    row_starts = _block_starts(lattice.height, block_size, w, offset[0], lattice.periodic_y)
    col_starts = _block_starts(lattice.width, block_size, w, offset[1], lattice.periodic_x)
    blocks = []
    for r0 in row_starts:
        for c0 in col_starts:
            block = square_block(lattice, r0, c0, block_size)
            if block.sites:
                blocks.append(block)
    covered = Region.empty(lattice)
    for block in blocks:
        covered = covered | block
    partition = ClassicalPartition(covered.complement(), tuple(blocks), block_size, w)
    logger.info(
        f"Classical partition b={block_size} w={w}: {len(blocks)} blocks, |A|={len(partition.a)}"
    )
    return partition


@dataclass(frozen=True)
class WindowReport:
    passed: bool
    window: Optional[Tuple[int, int]] = None
    family: Optional[str] = None
    blocks_hit: int = 0

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "window": list(self.window) if self.window else None,
            "family": self.family,
            "blocks_hit": self.blocks_hit,
        }


def _distinct_blocks_per_window(labels: np.ndarray, lattice: Lattice, w: int) -> np.ndarray:
    grid = labels
    pads = []
    extents = []
    for size, periodic in ((lattice.height, lattice.periodic_y), (lattice.width, lattice.periodic_x)):
        if w >= size:
            pads.append((0, 0))
            extents.append(size)
        else:
            pads.append((0, w - 1) if periodic else (0, 0))
            extents.append(w)
    grid = np.pad(grid, pads, mode="wrap")
    view = sliding_window_view(grid, tuple(extents))
    flat = np.sort(view.reshape(view.shape[0], view.shape[1], -1), axis=-1)
    valid = flat >= 0
    fresh = np.ones_like(valid)
    fresh[..., 1:] = flat[..., 1:] != flat[..., :-1]
    return (valid & fresh).sum(axis=-1)


def verify_window_property(partition, w: Optional[int] = None) -> WindowReport:
    """Scan every w x w window; each may meet at most one block of each family."""
    w = partition.w if w is None else w
    _check_range(w)
    lattice = partition.lattice
    first: Optional[WindowReport] = None
    for name, blocks in partition.block_families().items():
        labels = np.full(lattice.n, -1, dtype=np.int64)
        for index, block in enumerate(blocks):
            if block.sites:
                labels[np.fromiter(block.sites, dtype=np.intp)] = index
        counts = _distinct_blocks_per_window(labels.reshape(lattice.height, lattice.width), lattice, w)
        bad = np.argwhere(counts > 1)
        if bad.size:
            r0, c0 = (int(x) for x in bad[0])
            candidate = WindowReport(False, (r0, c0), name, int(counts[r0, c0]))
            if first is None or candidate.window < first.window:
                first = candidate
    if first is not None:
        logger.warning(
            f"Window property fails at {first.window}: {first.blocks_hit} blocks of {first.family}"
        )
        return first
    return WindowReport(True)
