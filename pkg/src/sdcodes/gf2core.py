"""Bit-packed linear algebra and weight analysis over GF(2).

Vectors are Python ints with coordinate ``i`` stored in bit ``i``.  Codeword
sweeps are vectorised with numpy on 64-bit words.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

EXHAUSTIVE_LIMIT = 24
_BLOCK_BITS = 14


class DimensionTooLarge(ValueError):
    """Raised when an exhaustive codeword sweep would exceed the configured limit."""


class MatrixFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<string>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def weight(v: int) -> int:
    return v.bit_count()


def mask(n: int) -> int:
    return (1 << n) - 1


def rref(rows: Sequence[int], n: int) -> Tuple[List[int], int, List[int]]:
    """Reduced row echelon form with pivots taken at the lowest column index.

    Returns the nonzero reduced rows, the rank and the pivot columns.
    """
    work = [r & mask(n) for r in rows]
    pivots: List[int] = []
    rank = 0
    for col in range(n):
        bit = 1 << col
        pivot = None
        for r in range(rank, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        for r in range(len(work)):
            if r != rank and work[r] & bit:
                work[r] ^= prow
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], rank, pivots


def rank_of(rows: Sequence[int], n: int) -> int:
    return rref(rows, n)[1]


def in_span(v: int, basis: Sequence[int], pivots: Sequence[int]) -> bool:
    """Membership test against an RREF basis with its pivot list."""
    for row, col in zip(basis, pivots):
        if (v >> col) & 1:
            v ^= row
    return v == 0


def reduce_by(v: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    for row, col in zip(basis, pivots):
        if (v >> col) & 1:
            v ^= row
    return v


def nullspace(rows: Sequence[int], n: int) -> List[int]:
    """Basis of {x : <x, r> = 0 for every r in rows}."""
    basis, rank, pivots = rref(rows, n)
    pivset = set(pivots)
    out = []
    for free in range(n):
        if free in pivset:
            continue
        v = 1 << free
        for row, col in zip(basis, pivots):
            if (row >> free) & 1:
                v |= 1 << col
        out.append(v)
    return out


def dot(u: int, v: int) -> int:
    return (u & v).bit_count() & 1


def permute_vector(v: int, perm: Sequence[int]) -> int:
    """Move coordinate ``i`` of ``v`` to position ``perm[i]``."""
    out = 0
    while v:
        low = v & -v
        out |= 1 << perm[low.bit_length() - 1]
        v ^= low
    return out


def vector_from_string(s: str) -> int:
    v = 0
    for i, ch in enumerate(s):
        if ch == "1":
            v |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid character {ch!r} in binary vector")
    return v


def vector_to_string(v: int, n: int) -> str:
    return "".join("1" if (v >> i) & 1 else "0" for i in range(n))


@dataclass(frozen=True)
class BinaryCode:
    """A binary linear code held as an RREF generator matrix.

    Dependent input rows are dropped at construction; ``reduced_input`` records
    whether that happened.
    """

    n: int
    rows: Tuple[int, ...]
    pivots: Tuple[int, ...] = field(repr=False, compare=False)
    reduced_input: bool = field(default=False, repr=False, compare=False)

    @classmethod
    def from_rows(cls, rows: Iterable[int], n: int, warn: bool = False) -> "BinaryCode":
        rows = list(rows)
        if n < 0:
            raise ValueError("negative length")
        for r in rows:
            if r >> n:
                raise ValueError("row has bits beyond the code length")
        basis, rank, pivots = rref(rows, n)
        reduced = rank < len(rows)
        if reduced and warn:
            warnings.warn("generator rows are linearly dependent; reduced to a basis", stacklevel=2)
        return cls(n, tuple(basis), tuple(pivots), reduced)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BinaryCode":
        lines = [ln.strip() for ln in lines if ln.strip()]
        if not lines:
            raise ValueError("empty matrix; use from_rows for the zero code")
        n = len(lines[0])
        if any(len(ln) != n for ln in lines):
            raise ValueError("rows of unequal length")
        return cls.from_rows([vector_from_string(ln) for ln in lines], n)

    @classmethod
    def zero(cls, n: int) -> "BinaryCode":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "BinaryCode":
        return cls.from_rows([1 << i for i in range(n)], n)

    @property
    def k(self) -> int:
        return len(self.rows)

    def __contains__(self, v: int) -> bool:
        return in_span(v, self.rows, self.pivots)

    def __len__(self) -> int:
        return self.n

    def strings(self) -> List[str]:
        return [vector_to_string(r, self.n) for r in self.rows]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.k, self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in range(self.n):
                out[i, j] = (r >> j) & 1
        return out

    def contains_code(self, other: "BinaryCode") -> bool:
        return all(r in self for r in other.rows)

    def same_space(self, other: "BinaryCode") -> bool:
        return self.n == other.n and self.rows == other.rows

    def __add__(self, other: "BinaryCode") -> "BinaryCode":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BinaryCode.from_rows(self.rows + other.rows, self.n)

    def intersection(self, other: "BinaryCode") -> "BinaryCode":
        return dual(dual(self) + dual(other))

    def puncture(self, coords: Sequence[int]) -> "BinaryCode":
        """Restrict every codeword to ``coords`` (in the given order)."""
        return BinaryCode.from_rows([_gather(r, coords) for r in self.rows], len(coords))

    def shorten(self, coords: Sequence[int]) -> "BinaryCode":
        """Subcode supported inside ``coords``, restricted to them."""
        outside = mask(self.n) & ~sum(1 << c for c in coords)
        if not outside:
            return self.puncture(coords)
        # words vanishing outside coords: kernel of the projection on the complement
        sub = subcode_vanishing_on(self, outside)
        return sub.puncture(coords)


def _gather(v: int, coords: Sequence[int]) -> int:
    out = 0
    for i, c in enumerate(coords):
        if (v >> c) & 1:
            out |= 1 << i
    return out


def subcode_vanishing_on(code: BinaryCode, positions: int) -> BinaryCode:
    """Subcode of words that are zero on every coordinate set in ``positions``."""
    return BinaryCode.from_rows(
        kernel_combinations(code.rows, [r & positions for r in code.rows]), code.n)


def kernel_combinations(rows: Sequence[int], images: Sequence[int]) -> List[int]:
    """Sums of ``rows`` whose corresponding ``images`` sum to zero (a spanning set)."""
    pivots = {}
    result: List[int] = []
    for r, a in zip(rows, images):
        while a:
            low = a & -a
            if low not in pivots:
                pivots[low] = (a, r)
                break
            pa, pr = pivots[low]
            a ^= pa
            r ^= pr
        else:
            result.append(r)
    return result


def dual(code: BinaryCode) -> BinaryCode:
    return BinaryCode.from_rows(nullspace(code.rows, code.n), code.n)


def gram_is_zero(rows: Sequence[int]) -> bool:
    for i, u in enumerate(rows):
        for v in rows[i:]:
            if dot(u, v):
                return False
    return True


def is_self_orthogonal(code: BinaryCode) -> bool:
    return gram_is_zero(code.rows)


def is_self_dual(code: BinaryCode) -> bool:
    return 2 * code.k == code.n and is_self_orthogonal(code)


def permute(code: BinaryCode, perm: Sequence[int]) -> BinaryCode:
    """Apply a coordinate permutation: coordinate ``i`` moves to ``perm[i]``."""
    if len(perm) != code.n or sorted(perm) != list(range(code.n)):
        raise ValueError("permutation does not match the code length")
    return BinaryCode.from_rows([permute_vector(r, perm) for r in code.rows], code.n)


def extremal_bound(n: int) -> int:
    if n <= 0 or n % 2:
        raise ValueError("length must be even and positive")
    return 4 * (n // 24) + (6 if n % 24 == 22 else 4)


# --------------------------------------------------------------------------
# codeword sweeps


def _check_limit(k: int, limit: Optional[int]) -> None:
    limit = EXHAUSTIVE_LIMIT if limit is None else limit
    if k > limit:
        raise DimensionTooLarge(f"dimension {k} exceeds exhaustive limit {limit}")


def _word_chunks(n: int) -> int:
    return max(1, (n + 63) // 64)


def _split_words(v: int, chunks: int) -> List[int]:
    return [(v >> (64 * c)) & 0xFFFFFFFFFFFFFFFF for c in range(chunks)]


def _span_array(rows: Sequence[int], chunks: int) -> np.ndarray:
    """All 2^len(rows) combinations, shape (2^m, chunks), in binary counting order."""
    arr = np.zeros((1 << len(rows), chunks), dtype=np.uint64)
    for i, r in enumerate(rows):
        half = 1 << i
        arr[half:2 * half] = arr[:half] ^ np.array(_split_words(r, chunks), dtype=np.uint64)
    return arr


def _blocks(rows: Sequence[int], n: int) -> Iterator[np.ndarray]:
    """Yield arrays of codewords (as 64-bit chunk rows) covering the whole code once."""
    chunks = _word_chunks(n)
    low = list(rows[:_BLOCK_BITS])
    high = list(rows[_BLOCK_BITS:])
    base = _span_array(low, chunks)
    offset = np.zeros(chunks, dtype=np.uint64)
    yield base
    # Gray-code walk over the remaining rows
    for g in range(1, 1 << len(high)):
        j = (g & -g).bit_length() - 1
        offset ^= np.array(_split_words(high[j], chunks), dtype=np.uint64)
        yield base ^ offset


def _weights(block: np.ndarray) -> np.ndarray:
    w = np.bitwise_count(block[:, 0]).astype(np.int32)
    for c in range(1, block.shape[1]):
        w += np.bitwise_count(block[:, c])
    return w


def _to_ints(block: np.ndarray) -> List[int]:
    if block.shape[1] == 1:
        return [int(x) for x in block[:, 0]]
    out = []
    for row in block:
        v = 0
        for c, x in enumerate(row):
            v |= int(x) << (64 * c)
        out.append(v)
    return out


def weight_distribution(code: BinaryCode, limit: Optional[int] = None) -> List[int]:
    """Exact counts A_0..A_n by exhaustive sweep."""
    _check_limit(code.k, limit)
    counts = np.zeros(code.n + 1, dtype=np.int64)
    for block in _blocks(code.rows, code.n):
        counts += np.bincount(_weights(block), minlength=code.n + 1)
    return [int(x) for x in counts]


def min_weight(code: BinaryCode, early_exit_at: Optional[int] = None,
               limit: Optional[int] = None) -> Optional[int]:
    """Smallest nonzero weight, or None for the zero code.

    With ``early_exit_at`` the sweep stops at the first codeword lighter than
    that bound and returns its weight.
    """
    return min_weight_witness(code, early_exit_at, limit)[0]


def min_weight_witness(code: BinaryCode, early_exit_at: Optional[int] = None,
                       limit: Optional[int] = None) -> Tuple[Optional[int], Optional[int]]:
    if code.k == 0:
        return None, None
    _check_limit(code.k, limit)
    best, witness = code.n + 1, None
    first = True
    for block in _blocks(code.rows, code.n):
        w = _weights(block)
        if first:
            w[0] = code.n + 1
            first = False
        i = int(np.argmin(w))
        if w[i] < best:
            best = int(w[i])
            witness = _to_ints(block[i:i + 1])[0]
            if early_exit_at is not None and best < early_exit_at:
                break
    return best, witness


def codewords_of_weights(code: BinaryCode, weights: Iterable[int],
                         limit: Optional[int] = None) -> List[int]:
    """All codewords whose weight lies in ``weights`` (sorted ascending as ints)."""
    _check_limit(code.k, limit)
    wanted = np.zeros(code.n + 2, dtype=bool)
    for w in weights:
        if 0 <= w <= code.n:
            wanted[w] = True
    out: List[int] = []
    for block in _blocks(code.rows, code.n):
        sel = wanted[_weights(block)]
        if sel.any():
            out.extend(_to_ints(block[sel]))
    out.sort()
    return out


def all_codewords(code: BinaryCode, limit: Optional[int] = None) -> List[int]:
    _check_limit(code.k, limit)
    out: List[int] = []
    for block in _blocks(code.rows, code.n):
        out.extend(_to_ints(block))
    return out


# --------------------------------------------------------------------------
# text format


def parse_rows(text: str, source: str = "<string>") -> Tuple[int, List[int]]:
    """Parse the generator-matrix text format, keeping rows exactly as written.

    Optional header ``n k``; then rows of 0/1 characters (internal spaces are
    allowed).  Blank lines and ``#`` comments are ignored.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    header = None
    if lines:
        parts = lines[0][1]
        if len(parts) == 2 and all(p.isdigit() for p in parts):
            looks_binary = not (set("".join(parts)) - {"0", "1"})
            next_len = len("".join(lines[1][1])) if len(lines) > 1 else None
            if not looks_binary or next_len == int(parts[0]) or (next_len is None and int(parts[1]) == 0):
                header = (int(parts[0]), int(parts[1]))
                lines = lines[1:]
    n = header[0] if header else None
    rows: List[int] = []
    for lineno, parts in lines:
        token = "".join(parts)
        if set(token) - {"0", "1"}:
            raise MatrixFormatError(f"unexpected characters in row {token!r}", lineno, source)
        if n is None:
            n = len(token)
        if len(token) != n:
            raise MatrixFormatError(f"row has {len(token)} entries, expected {n}", lineno, source)
        rows.append(vector_from_string(token))
    if n is None:
        raise MatrixFormatError("no rows and no header", None, source)
    if header is not None and header[1] != len(rows):
        raise MatrixFormatError(f"header declares {header[1]} rows, found {len(rows)}", None, source)
    return n, rows


def parse_matrix(text: str, source: str = "<string>") -> BinaryCode:
    n, rows = parse_rows(text, source)
    return BinaryCode.from_rows(rows, n)


def format_rows(rows: Sequence[int], n: int, header: bool = True) -> str:
    lines = [f"{n} {len(rows)}"] if header else []
    lines.extend(vector_to_string(r, n) for r in rows)
    return "\n".join(lines) + "\n"


def format_matrix(code: BinaryCode, header: bool = True) -> str:
    return format_rows(code.rows, code.n, header)


def read_matrix(path) -> BinaryCode:
    with open(path) as fh:
        return parse_matrix(fh.read(), str(path))


def write_matrix(code: BinaryCode, path, header: bool = True) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(code, header))
