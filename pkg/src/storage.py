import csv
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

import envs
from local_codes.errors import ContractError, StorageError
from local_codes.lattice import Lattice, Region
from local_codes.stabilizer import StabilizerCode
from local_codes.tradeoff import TradeoffPoint

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
POINT_COLUMNS = ("family", "n", "k", "d", "d_is_exact", "q_ratio", "c_ratio")
CA_TABLE_COLUMNS = ("family", "L", "n", "k", "d_prime", "d_exhaustive", "ratio_ksqrtd_over_n")

PathLike = Union[str, Path]


@contextmanager
def _storage_errors(path: PathLike) -> Iterator[None]:
    try:
        yield
    except StorageError:
        raise
    except OSError as e:
        raise StorageError(f"{path}: {e}") from e
    except json.JSONDecodeError as e:
        raise StorageError(f"{path}: malformed JSON ({e})") from e
    except KeyError as e:
        raise StorageError(f"{path}: missing field {e.args[0]!r}") from e
    except TypeError as e:
        raise StorageError(f"{path}: ill-typed field ({e})") from e


def resolve_format(path: Optional[PathLike], fmt: Optional[str] = None) -> str:
    """Explicit format, else the file suffix, else the OUTPUT_FORMAT env default."""
    if fmt is None and path is not None:
        suffix = Path(path).suffix.lower().lstrip(".")
        if suffix in FORMATS:
            fmt = suffix
    if fmt is None:
        fmt = envs.OUTPUT_FORMAT
    if fmt not in FORMATS:
        raise ContractError(f"The output format {fmt!r} is not correct, expected csv or json")
    return fmt


def format_float(value: float) -> float:
    return float(f"{value:.{envs.FLOAT_SIGNIFICANT_DIGITS}g}")


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{envs.FLOAT_SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value)
    if value is None:
        return ""
    return value


def json_value(value: Any) -> Any:
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, tuple):
        return [json_value(v) for v in value]
    if isinstance(value, list):
        return [json_value(v) for v in value]
    if isinstance(value, dict):
        return {k: json_value(v) for k, v in value.items()}
    return value


def write_csv(records: Sequence[Dict[str, Any]], stream: TextIO, columns: Optional[Sequence[str]] = None) -> None:
    if columns is None:
        columns = list(records[0].keys()) if records else []
    writer = csv.writer(stream)
    writer.writerow(columns)
    for record in records:
        writer.writerow([_cell(record.get(c)) for c in columns])


def write_records(
    records: Sequence[Dict[str, Any]],
    path: PathLike,
    fmt: Optional[str] = None,
    columns: Optional[Sequence[str]] = None,
) -> Path:
    """Write flat records as CSV (one row each) or JSON (a list of objects)."""
    fmt = resolve_format(path, fmt)
    path = Path(path)
    if columns is None:
        columns = list(records[0].keys()) if records else []
    with _storage_errors(path):
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            with path.open("w", newline="") as f:
                write_csv(records, f, columns)
        else:
            payload = [{c: json_value(record.get(c)) for c in columns} for record in records]
            path.write_text(json.dumps(payload, indent=2) + "\n")
    logger.info(f"Wrote {len(records)} records to {path} as {fmt}")
    return path


def read_records(path: PathLike, fmt: Optional[str] = None) -> List[Dict[str, Any]]:
    fmt = resolve_format(path, fmt)
    with _storage_errors(path):
        if fmt == "csv":
            with Path(path).open(newline="") as f:
                return list(csv.DictReader(f))
        return json.loads(Path(path).read_text())


def point_to_record(point: TradeoffPoint) -> Dict[str, Any]:
    return {
        "family": point.family,
        "n": point.n,
        "k": point.k,
        "d": point.d,
        "d_is_exact": point.d_is_exact,
        "q_ratio": point.q_ratio,
        "c_ratio": point.c_ratio,
    }


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text not in ("true", "false"):
        raise ContractError(f"expected true or false, got {value!r}")
    return text == "true"


def record_to_point(record: Dict[str, Any]) -> TradeoffPoint:
    return TradeoffPoint(
        family=str(record["family"]),
        n=int(record["n"]),
        k=int(record["k"]),
        d=int(record["d"]),
        d_is_exact=_parse_bool(record["d_is_exact"]),
    )


def write_points(points: Sequence[TradeoffPoint], path: PathLike, fmt: Optional[str] = None) -> Path:
    return write_records([point_to_record(p) for p in points], path, fmt, POINT_COLUMNS)


def read_points(path: PathLike, fmt: Optional[str] = None) -> List[TradeoffPoint]:
    records = read_records(path, fmt)
    with _storage_errors(path):
        return [record_to_point(r) for r in records]


def write_ca_table(rows: Sequence[Dict[str, Any]], path: PathLike, fmt: Optional[str] = None) -> Path:
    return write_records(rows, path, fmt, CA_TABLE_COLUMNS)


def load_json(path: PathLike) -> Any:
    with _storage_errors(path):
        return json.loads(Path(path).read_text())


def save_json(data: Any, path: PathLike) -> Path:
    path = Path(path)
    with _storage_errors(path):
        path.write_text(json.dumps(json_value(data), indent=2) + "\n")
    return path


def load_code(path: PathLike) -> StabilizerCode:
    data = load_json(path)
    with _storage_errors(path):
        code = StabilizerCode.from_dict(data)
    logger.info(f"Loaded code {code.name or path} with n={code.n}, k={code.k}")
    return code


def save_code(code: StabilizerCode, path: PathLike) -> Path:
    return save_json(code.to_dict(), path)


def region_from_data(data: Any, lattice: Lattice) -> Region:
    """A region given as a list of [row, col] pairs, as {"sites": [...]} / {"coords": [...]},
    or as a saved region carrying its own lattice."""
    if isinstance(data, dict):
        if "coords" in data:
            return Region.from_coords(lattice, [tuple(rc) for rc in data["coords"]])
        if "width" in data:
            region = Region.from_dict(data)
            if region.lattice != lattice:
                raise ContractError(f"region lattice {region.lattice} is not the code lattice {lattice}")
            return region
        return Region(lattice, frozenset(int(s) for s in data.get("sites", [])))
    if isinstance(data, list):
        return Region.from_coords(lattice, [tuple(rc) for rc in data])
    raise ContractError(f"cannot read a region from {type(data).__name__}")


def load_region(path: PathLike, lattice: Lattice) -> Region:
    data = load_json(path)
    with _storage_errors(path):
        return region_from_data(data, lattice)


def save_region(region: Region, path: PathLike) -> Path:
    return save_json(region.to_dict(), path)


def load_region_pairs(path: PathLike, lattice: Lattice) -> List[Tuple[Region, Region]]:
    """A JSON list of {"M1": region, "M2": region} objects."""
    data = load_json(path)
    if not isinstance(data, list):
        raise ContractError(f"{path}: expected a list of region pairs")
    with _storage_errors(path):
        return [
            (region_from_data(item["M1"], lattice), region_from_data(item["M2"], lattice))
            for item in data
        ]
