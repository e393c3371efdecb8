"""Packed GF(2) vectors and matrices.

Bits are stored little-endian in 64-bit words: bit ``i`` of a vector lives in
word ``i // 64`` at position ``i % 64``. Bits past the logical length are kept
at zero so a weight is a plain popcount over the words.
"""

import logging
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from local_codes.errors import ContractError

logger = logging.getLogger(__name__)

WORD_BITS = 64


def _word_count(length: int) -> int:
    return (length + WORD_BITS - 1) // WORD_BITS


def _tail_mask(length: int) -> Optional[np.uint64]:
    rem = length % WORD_BITS
    if rem == 0:
        return None
    return np.uint64((1 << rem) - 1)


def _pack(bits: np.ndarray, length: int) -> np.ndarray:
    """Pack a (rows, length) 0/1 array into (rows, words) uint64 words."""
    rows = bits.shape[0]
    words = _word_count(length)
    if words == 0:
        return np.zeros((rows, 0), dtype=np.uint64)
    padded = np.zeros((rows, words * WORD_BITS), dtype=np.uint8)
    padded[:, :length] = np.asarray(bits[:, :length], dtype=np.uint8) & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def _unpack(words: np.ndarray, length: int) -> np.ndarray:
    rows = words.shape[0]
    if length == 0:
        return np.zeros((rows, 0), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, count=length, bitorder="little")


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(words.astype("<u8").tobytes(), "little")


def _int_to_words(value: int, length: int) -> np.ndarray:
    if value < 0:
        raise ContractError("bit patterns are non-negative integers")
    value &= (1 << length) - 1
    count = _word_count(length)
    return np.frombuffer(value.to_bytes(count * 8, "little"), dtype="<u8").astype(
        np.uint64
    )


class BitVec:
    """Immutable bit vector packed into 64-bit words."""

    __slots__ = ("len", "words")

    def __init__(self, length: int, words: Optional[np.ndarray] = None):
        if length < 0:
            raise ContractError(f"negative BitVec length {length}")
        if words is None:
            data = np.zeros(_word_count(length), dtype=np.uint64)
        else:
            data = np.array(words, dtype=np.uint64).reshape(-1)
            if data.size != _word_count(length):
                raise ContractError(
                    f"{data.size} words cannot hold a BitVec of length {length}"
                )
            mask = _tail_mask(length)
            if mask is not None:
                data[-1] &= mask
        data.flags.writeable = False
        self.len = length
        self.words = data

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = arr.astype(np.uint8).reshape(1, -1)
        return cls(arr.shape[1], _pack(arr, arr.shape[1])[0])

    @classmethod
    def from_string(cls, text: str) -> "BitVec":
        """Parse ``"0110"``; character ``j`` is bit ``j``."""
        if any(ch not in "01" for ch in text):
            raise ContractError(f"bit string may only contain 0 and 1: {text!r}")
        return cls.from_bits([int(ch) for ch in text])

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitVec":
        return cls(length, _int_to_words(value, length))

    @classmethod
    def from_support(cls, length: int, indices: Iterable[int]) -> "BitVec":
        bits = np.zeros(length, dtype=np.uint8)
        for index in indices:
            if not 0 <= index < length:
                raise ContractError(f"bit index {index} outside [0, {length})")
            bits[index] = 1
        return cls.from_bits(bits)

    def __len__(self) -> int:
        return self.len

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.len:
            raise IndexError(index)
        word, bit = divmod(index, WORD_BITS)
        return int((int(self.words[word]) >> bit) & 1)

    def _check_same_length(self, other: "BitVec") -> None:
        if self.len != other.len:
            raise ContractError(f"length mismatch: {self.len} vs {other.len}")

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check_same_length(other)
        return BitVec(self.len, self.words ^ other.words)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check_same_length(other)
        return BitVec(self.len, self.words & other.words)

    def __or__(self, other: "BitVec") -> "BitVec":
        self._check_same_length(other)
        return BitVec(self.len, self.words | other.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.len == other.len and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.len, self.words.tobytes()))

    def __repr__(self) -> str:
        if self.len <= WORD_BITS:
            return f"BitVec('{self.to_string()}')"
        return f"BitVec(len={self.len}, weight={self.weight()})"

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def is_zero(self) -> bool:
        return not self.words.any()

    def dot(self, other: "BitVec") -> int:
        """GF(2) inner product."""
        return (self & other).weight() & 1

    def support(self) -> List[int]:
        return np.flatnonzero(self.to_bits()).tolist()

    def to_bits(self) -> np.ndarray:
        return _unpack(self.words.reshape(1, -1), self.len)[0]

    def to_string(self) -> str:
        return "".join(str(int(b)) for b in self.to_bits())

    def to_int(self) -> int:
        return _words_to_int(self.words)


class BitMatrix:
    """Immutable GF(2) matrix stored row-major, one packed word array per row."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[np.ndarray] = None):
        if rows < 0 or cols < 0:
            raise ContractError(f"negative BitMatrix shape {rows}x{cols}")
        words = _word_count(cols)
        if data is None:
            packed = np.zeros((rows, words), dtype=np.uint64)
        else:
            packed = np.array(data, dtype=np.uint64).reshape(rows, words)
            mask = _tail_mask(cols)
            if mask is not None and rows:
                packed[:, -1] &= mask
        packed.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self.data = packed

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls.from_dense(np.eye(size, dtype=np.uint8))

    @classmethod
    def from_dense(cls, array: np.ndarray) -> "BitMatrix":
        dense = np.asarray(array, dtype=np.uint8)
        if dense.ndim != 2:
            raise ContractError(f"expected a 2D array, got shape {dense.shape}")
        rows, cols = dense.shape
        return cls(rows, cols, _pack(dense, cols))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec], cols: Optional[int] = None) -> "BitMatrix":
        if cols is None:
            if not rows:
                raise ContractError("column count is required for an empty row list")
            cols = rows[0].len
        for row in rows:
            if row.len != cols:
                raise ContractError(f"row of length {row.len} in a {cols}-column matrix")
        words = _word_count(cols)
        data = (
            np.stack([row.words for row in rows])
            if rows
            else np.zeros((0, words), dtype=np.uint64)
        )
        return cls(len(rows), cols, data)

    @classmethod
    def from_strings(cls, strings: Sequence[str], cols: Optional[int] = None) -> "BitMatrix":
        return cls.from_rows([BitVec.from_string(s) for s in strings], cols)

    def __len__(self) -> int:
        return self.rows

    def __iter__(self) -> Iterator[BitVec]:
        for i in range(self.rows):
            yield self.row(i)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def row(self, index: int) -> BitVec:
        return BitVec(self.cols, self.data[index])

    def row_ints(self) -> List[int]:
        return [_words_to_int(self.data[i]) for i in range(self.rows)]

    def to_dense(self) -> np.ndarray:
        return _unpack(self.data, self.cols)

    def select_columns(self, columns: Sequence[int]) -> "BitMatrix":
        index = np.asarray(columns, dtype=np.intp)
        return BitMatrix.from_dense(self.to_dense()[:, index])

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if other.cols != self.cols:
            raise ContractError(f"cannot stack {self.cols} and {other.cols} columns")
        return BitMatrix(
            self.rows + other.rows, self.cols, np.vstack([self.data, other.data])
        )

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def matvec(self, vector: BitVec) -> BitVec:
        if vector.len != self.cols:
            raise ContractError(
                f"vector of length {vector.len} against {self.cols} columns"
            )
        parities = np.bitwise_count(self.data & vector.words).sum(axis=1) & 1
        return BitVec.from_bits(parities.astype(np.uint8))


def _eliminate(data: np.ndarray, cols: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of packed rows; works on a copy."""
    work = np.array(data, dtype=np.uint64)
    n_rows = work.shape[0]
    pivots: List[int] = []
    rank = 0
    for col in range(cols):
        if rank == n_rows:
            break
        word, bit = divmod(col, WORD_BITS)
        hits = ((work[:, word] >> np.uint64(bit)) & np.uint64(1)).astype(bool)
        below = np.flatnonzero(hits[rank:])
        if below.size == 0:
            continue
        pivot = rank + int(below[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
            hits[[rank, pivot]] = hits[[pivot, rank]]
        hits[rank] = False
        work[hits] ^= work[rank]
        pivots.append(col)
        rank += 1
    return work[:rank], pivots


def row_reduce(matrix: BitMatrix) -> Tuple[BitMatrix, List[int]]:
    """Nonzero rows of the RREF of ``matrix`` and their pivot columns."""
    reduced, pivots = _eliminate(matrix.data, matrix.cols)
    return BitMatrix(len(pivots), matrix.cols, reduced), pivots


def rank(matrix: BitMatrix) -> int:
    _, pivots = _eliminate(matrix.data, matrix.cols)
    return len(pivots)


def nullspace(matrix: BitMatrix) -> BitMatrix:
    """Basis of {v : M v = 0}, one vector per free column."""
    reduced, pivots = _eliminate(matrix.data, matrix.cols)
    pivot_set = set(pivots)
    free = np.array([c for c in range(matrix.cols) if c not in pivot_set], dtype=np.intp)
    basis = np.zeros((free.size, matrix.cols), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    if pivots and free.size:
        dense = _unpack(reduced, matrix.cols)
        basis[:, np.array(pivots, dtype=np.intp)] = dense[:, free].T
    return BitMatrix.from_dense(basis)


def solve(matrix: BitMatrix, target: BitVec) -> Optional[BitVec]:
    """Some x with M x = b, or None when the system is inconsistent."""
    if target.len != matrix.rows:
        raise ContractError(
            f"right-hand side has length {target.len}, matrix has {matrix.rows} rows"
        )
    augmented = np.hstack([matrix.to_dense(), target.to_bits().reshape(-1, 1)])
    width = matrix.cols + 1
    reduced, pivots = _eliminate(_pack(augmented, width), width)
    if pivots and pivots[-1] == matrix.cols:
        return None
    solution = np.zeros(matrix.cols, dtype=np.uint8)
    if pivots:
        dense = _unpack(reduced, width)
        solution[np.array(pivots, dtype=np.intp)] = dense[:, matrix.cols]
    return BitVec.from_bits(solution)


def in_row_space(matrix: BitMatrix, vector: BitVec) -> bool:
    extended = matrix.vstack(BitMatrix.from_rows([vector], matrix.cols))
    return rank(extended) == rank(matrix)


def span_min_weight(basis: BitMatrix) -> Optional[int]:
    """Minimum weight of a nonzero vector in the row span.

    Walks all 2^rows combinations in reflected-binary order, so each step is a
    single XOR. Returns None when the span is {0}.
    """
    vectors = basis.row_ints()
    best: Optional[int] = None
    current = 0
    for step in range(1, 1 << len(vectors)):
        flip = (step & -step).bit_length() - 1
        current ^= vectors[flip]
        weight = current.bit_count()
        if weight and (best is None or weight < best):
            best = weight
    logger.debug(f"Span of {len(vectors)} vectors has minimum weight {best}")
    return best
