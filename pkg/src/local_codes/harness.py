"""Code-family scans and the ratio form of the storage tradeoff bounds.

For a D-dimensional local quantum code k * d^alpha <= c * n with
alpha = 2 / (D - 1), and for a 2D local classical code k * sqrt(d) <= c * n.
The scans only report the empirical supremum of each ratio; a ratio that
grows with n is flagged.
"""

import logging
import math
from dataclasses import asdict, dataclass
from itertools import groupby
from typing import Any, Dict, List, Optional, Sequence

import envs
import storage
from local_codes.cacode import CaCode, exhaustive_distance, fit_power_law, single_seed_weight
from local_codes.errors import ContractError, GuardExceeded, InconsistencyError
from local_codes.stabilizer import min_distance_bruteforce
from local_codes.surface import k_copies_point, planar_surface_code, toric_code
from local_codes.tradeoff import TradeoffPoint, alpha_exponent
from local_codes.workers import ordered_map

logger = logging.getLogger(__name__)

BOUNDS = ("quantum", "classical")
KCOPIES_COUNTS = (1, 2, 4, 8)


@dataclass(frozen=True)
class CaTableRow:
    L: int
    n: int
    k: int
    d_prime: int
    d_exhaustive: Optional[int]

    family: str = "ca"

    @property
    def ratio_ksqrtd_over_n(self) -> float:
        d = self.d_exhaustive if self.d_exhaustive is not None else self.d_prime
        return self.k * math.sqrt(d) / self.n

    def to_point(self) -> TradeoffPoint:
        exact = self.d_exhaustive is not None
        return TradeoffPoint(
            family="ca",
            n=self.n,
            k=self.k,
            d=self.d_exhaustive if exact else self.d_prime,
            d_is_exact=exact,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "ratio_ksqrtd_over_n": self.ratio_ksqrtd_over_n}


def _ca_row(job) -> CaTableRow:
    L, exhaustive = job
    code = CaCode(L)
    d_prime = single_seed_weight(L)
    # the exhaustive search parallelises over chunks itself; rows run inline
    d_exact = exhaustive_distance(L, workers=1) if exhaustive else None
    return CaTableRow(L=L, n=code.n, k=code.k, d_prime=d_prime, d_exhaustive=d_exact)


def scan_ca_table(
    L_min: int, L_max: int, exhaustive_up_to: int, workers: Optional[int] = None
) -> List[CaTableRow]:
    if L_min < 3 or L_min % 2 == 0 or L_max % 2 == 0:
        raise ContractError(f"CA scans run over odd L >= 3, got [{L_min}, {L_max}]")
    if L_min > L_max:
        raise ContractError(f"empty scan range [{L_min}, {L_max}]")
    jobs = [(L, L <= exhaustive_up_to) for L in range(L_min, L_max + 1, 2)]
    rows = ordered_map(_ca_row, jobs, workers)
    for row in rows:
        if row.d_exhaustive is not None and row.d_exhaustive != row.d_prime:
            logger.warning(f"L={row.L}: exhaustive distance {row.d_exhaustive} differs from d'={row.d_prime}")
    logger.info(f"CA scan over {len(rows)} sizes in [{L_min}, {L_max}] finished")
    return rows


def scan_ca(
    L_min: int, L_max: int, exhaustive_up_to: int, workers: Optional[int] = None
) -> List[TradeoffPoint]:
    """One point per odd L; d is exact up to exhaustive_up_to and the d' upper bound beyond."""
    return [row.to_point() for row in scan_ca_table(L_min, L_max, exhaustive_up_to, workers)]


def _surface_point(job) -> TradeoffPoint:
    family, nominal, verify_distance = job
    code = planar_surface_code(nominal) if family == "planar" else toric_code(nominal)
    distance = nominal
    if verify_distance:
        try:
            # sizes are already spread over the pool; each search runs inline
            distance = min_distance_bruteforce(code, workers=1)
        except GuardExceeded as e:
            logger.warning(f"{code.name}: distance kept at its nominal value, {e}")
        else:
            if distance != nominal:
                logger.error(f"{code.name}: brute-force distance {distance} != nominal {nominal}")
                raise InconsistencyError(f"{code.name}: distance {distance}, expected {nominal}")
    return TradeoffPoint(family=family, n=code.n, k=code.k, d=distance)


def scan_surface(
    d_max: int, L_max: int, verify_distance: bool = False, workers: Optional[int] = None
) -> List[TradeoffPoint]:
    """planar(d) and k-copies points for 2 <= d <= d_max, toric(L) for 2 <= L <= L_max."""
    if d_max < 2 or L_max < 2:
        raise ContractError(f"surface scans need sizes >= 2, got d_max={d_max} L_max={L_max}")
    jobs = [("planar", d, verify_distance) for d in range(2, d_max + 1)]
    jobs += [("toric", L, verify_distance) for L in range(2, L_max + 1)]
    points = ordered_map(_surface_point, jobs, workers)
    for d in range(2, d_max + 1):
        for copies in KCOPIES_COUNTS:
            points.append(k_copies_point(d, copies))
    logger.info(f"Surface scan produced {len(points)} points")
    return points


@dataclass(frozen=True)
class BoundReport:
    family: str
    which: str
    points: int
    max_q_ratio: float
    max_c_ratio: float
    slope: Optional[float] = None
    intercept: Optional[float] = None
    residual: Optional[float] = None
    all_exact: bool = True
    grows: bool = False

    @property
    def max_ratio(self) -> float:
        return self.max_q_ratio if self.which == "quantum" else self.max_c_ratio

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "max_ratio": self.max_ratio}


def _family_report(family: str, points: List[TradeoffPoint], which: str) -> BoundReport:
    ratio = (lambda p: p.ratio(alpha_exponent(p.D))) if which == "quantum" else (lambda p: p.c_ratio)
    by_n: Dict[int, float] = {}
    for point in points:
        by_n[point.n] = max(by_n.get(point.n, 0.0), ratio(point))
    slope = intercept = residual = None
    usable = [(n, r) for n, r in sorted(by_n.items()) if r > 0]
    if len(usable) >= 2:
        slope, intercept, residual = fit_power_law(usable)
    grows = slope is not None and slope > envs.BOUND_SLOPE_TOLERANCE
    report = BoundReport(
        family=family,
        which=which,
        points=len(points),
        max_q_ratio=max(p.q_ratio for p in points),
        max_c_ratio=max(p.c_ratio for p in points),
        slope=slope,
        intercept=intercept,
        residual=residual,
        all_exact=all(p.d_is_exact for p in points),
        grows=grows,
    )
    if grows:
        logger.warning(f"{family}: {which} ratio grows with n (slope {slope:.4f}), the bound would fail")
    elif not report.all_exact:
        logger.info(f"{family}: ratios use the d' upper bound for some points")
    return report


def check_bound(points: Sequence[TradeoffPoint], which: str) -> List[BoundReport]:
    """One report per family: the empirical constant and the log-log slope of ratio vs n."""
    if which not in BOUNDS:
        raise ContractError(f"unknown bound {which!r}, expected quantum or classical")
    if not points:
        raise ContractError("check_bound needs at least one point")
    ordered = sorted(points, key=lambda p: (p.family, p.n, p.k, p.d, p.d_is_exact))
    return [
        _family_report(family, list(group), which)
        for family, group in groupby(ordered, key=lambda p: p.family)
    ]


def emit(items: Sequence[Any], path, fmt: Optional[str] = None):
    """Write points with the fixed point columns, anything else through its to_dict."""
    if all(isinstance(item, TradeoffPoint) for item in items):
        return storage.write_points(items, path, fmt)
    return storage.write_records([item.to_dict() for item in items], path, fmt)
