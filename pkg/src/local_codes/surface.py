"""Planar surface codes, toric codes and the k-copies packing.

Qubits sit on the sites of a refined square grid; each check sits on a
remaining site and acts on its four cross neighbours. A cross spans three sites
per axis, so the codes are local with interaction range 3.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from local_codes.errors import ContractError
from local_codes.gf2core import BitMatrix
from local_codes.lattice import Lattice
from local_codes.stabilizer import StabilizerCode
from local_codes.tradeoff import TradeoffPoint

logger = logging.getLogger(__name__)

SURFACE_INTERACTION_RANGE = 3

Coord = Tuple[int, int]


@dataclass(frozen=True)
class SurfaceLayout:
    kind: str
    size: int
    lattice: Lattice
    qubits: Tuple[Coord, ...]
    x_checks: Tuple[Coord, ...]
    z_checks: Tuple[Coord, ...]
    w: int = SURFACE_INTERACTION_RANGE

    @property
    def n(self) -> int:
        return len(self.qubits)

    @property
    def nominal_k(self) -> int:
        return 1 if self.kind == "planar" else 2

    @property
    def nominal_distance(self) -> int:
        return self.size

    def neighbours(self, row: int, col: int) -> List[Coord]:
        out = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            r, c = row + dr, col + dc
            if self.lattice.periodic_y:
                r %= self.lattice.height
            if self.lattice.periodic_x:
                c %= self.lattice.width
            if 0 <= r < self.lattice.height and 0 <= c < self.lattice.width:
                out.append((r, c))
        return out

    def to_code(self) -> StabilizerCode:
        qubit_of: Dict[Coord, int] = {rc: q for q, rc in enumerate(self.qubits)}
        n = self.n
        rows = np.zeros((len(self.x_checks) + len(self.z_checks), 2 * n), dtype=np.uint8)
        for index, (r, c) in enumerate(self.x_checks):
            for rc in self.neighbours(r, c):
                rows[index, qubit_of[rc]] = 1
        base = len(self.x_checks)
        for index, (r, c) in enumerate(self.z_checks):
            for rc in self.neighbours(r, c):
                rows[base + index, n + qubit_of[rc]] = 1
        return StabilizerCode(
            n=n,
            generators=BitMatrix.from_dense(rows),
            lattice=self.lattice,
            site_of_qubit=tuple(self.lattice.index(r, c) for r, c in self.qubits),
            w=self.w,
            name=f"{self.kind}({self.size})",
        )


def planar_layout(d: int) -> SurfaceLayout:
    if d < 2:
        raise ContractError(f"planar surface code needs d >= 2, got {d}")
    side = 2 * d - 1
    cells = [(r, c) for r in range(side) for c in range(side)]
    return SurfaceLayout(
        kind="planar",
        size=d,
        lattice=Lattice(width=side, height=side),
        qubits=tuple((r, c) for r, c in cells if (r + c) % 2 == 0),
        x_checks=tuple((r, c) for r, c in cells if r % 2 == 0 and c % 2 == 1),
        z_checks=tuple((r, c) for r, c in cells if r % 2 == 1 and c % 2 == 0),
    )


def toric_layout(L: int) -> SurfaceLayout:
    if L < 2:
        raise ContractError(f"toric code needs L >= 2, got {L}")
    side = 2 * L
    cells = [(r, c) for r in range(side) for c in range(side)]
    return SurfaceLayout(
        kind="toric",
        size=L,
        lattice=Lattice(width=side, height=side, periodic_x=True, periodic_y=True),
        qubits=tuple((r, c) for r, c in cells if (r + c) % 2 == 1),
        x_checks=tuple((r, c) for r, c in cells if r % 2 == 0 and c % 2 == 0),
        z_checks=tuple((r, c) for r, c in cells if r % 2 == 1 and c % 2 == 1),
    )


def planar_surface_code(d: int) -> StabilizerCode:
    """Unrotated surface code with two rough and two smooth boundaries, [[d^2 + (d-1)^2, 1, d]]."""
    code = planar_layout(d).to_code()
    logger.debug(f"Built planar({d}): n={code.n} k={code.k}")
    return code


def toric_code(L: int) -> StabilizerCode:
    """Toric code on an L x L torus, [[2L^2, 2, L]]."""
    code = toric_layout(L).to_code()
    logger.debug(f"Built toric({L}): n={code.n} k={code.k}")
    return code


def surface_code(kind: str, size: int) -> StabilizerCode:
    if kind == "planar":
        return planar_surface_code(size)
    if kind == "toric":
        return toric_code(size)
    raise ContractError(f"unknown surface code kind {kind!r}, expected planar or toric")


def k_copies_point(d: int, copies: int) -> TradeoffPoint:
    if d < 2:
        raise ContractError(f"k-copies packing needs d >= 2, got {d}")
    if copies < 1:
        raise ContractError(f"at least one copy is required, got {copies}")
    n = copies * (d * d + (d - 1) * (d - 1))
    return TradeoffPoint(family="kcopies", n=n, k=copies, d=d)
