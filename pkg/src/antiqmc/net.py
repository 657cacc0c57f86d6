"""Digital nets over Z_b with b-adic antithetic augmentation.

A generating matrix has ``R`` explicit rows and an optional continuation
row that repeats for every row after ``R``.  Ordinary finite matrices have
no continuation (all later rows are zero); appending the all-ones column
for antithetic sampling gives a continuation row ``(0, ..., 0, 1)``.
"""

from __future__ import annotations

import io
import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from ._validation import GuardError, check_base, check_guard
from .digits import DigitVector, constant, default_depth, expand, gadd

__all__ = [
    "GeneratingMatrix",
    "DigitalNet",
    "index_digits",
    "point",
    "antithetic",
    "antithetic_points",
    "symmetrize",
    "dual_contains",
    "dual_enumerate",
    "sorted_multiset",
    "read_net",
    "write_net",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 1 << 24


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GeneratingMatrix:
    """Z_b matrix with ``R`` explicit rows and ``m`` columns.

    Parameters
    ----------
    base : int
    rows : array-like of shape (R, m)
    continuation : array-like of shape (m,), optional
        Row repeated for every index ``>= R``.  ``None`` means zero rows.
    """

    base: int
    rows: np.ndarray
    continuation: np.ndarray | None = None
    m: int = field(init=False)

    def __post_init__(self):
        b = check_base(self.base)
        rows = np.array(self.rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(0, rows.shape[0]) if rows.size == 0 else rows[None, :]
        if rows.ndim != 2:
            raise ValueError("rows must be a 2-d array")
        m = rows.shape[1]
        cont = self.continuation
        if cont is not None:
            cont = np.array(cont, dtype=np.int64).reshape(-1)
            if cont.shape[0] != m:
                raise ValueError(f"continuation row has {cont.shape[0]} entries, expected {m}")
            if cont.min(initial=0) < 0 or cont.max(initial=0) >= b:
                raise ValueError(f"continuation entries must lie in 0..{b - 1}")
            cont = _readonly(cont)
        if rows.size and (rows.min() < 0 or rows.max() >= b):
            raise ValueError(f"matrix entries must lie in 0..{b - 1}")
        object.__setattr__(self, "rows", _readonly(rows))
        object.__setattr__(self, "continuation", cont)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls, m: int, b: int) -> "GeneratingMatrix":
        return cls(b, np.eye(m, dtype=np.int64))

    @property
    def R(self) -> int:
        return self.rows.shape[0]

    def tail_row(self) -> np.ndarray:
        if self.continuation is None:
            return np.zeros(self.m, dtype=np.int64)
        return self.continuation

    def expanded(self, depth: int) -> np.ndarray:
        """Rows ``0 .. depth-1`` with the continuation materialised."""
        if depth <= self.R:
            return self.rows[:depth]
        extra = np.tile(self.tail_row(), (depth - self.R, 1))
        return np.vstack([self.rows, extra]) if self.R else extra

    def augment(self) -> "GeneratingMatrix":
        """Append the all-ones column ``(1, 1, ...)^T``."""
        ones = np.ones((self.R, 1), dtype=np.int64)
        rows = np.hstack([self.rows, ones])
        return GeneratingMatrix(self.base, rows, np.append(self.tail_row(), 1))

    def __eq__(self, other):
        if not isinstance(other, GeneratingMatrix):
            return NotImplemented
        if self.base != other.base or self.m != other.m:
            return False
        depth = max(self.R, other.R)
        return bool(
            np.array_equal(self.expanded(depth), other.expanded(depth))
            and np.array_equal(self.tail_row(), other.tail_row())
        )

    def __hash__(self):
        return hash((self.base, self.m, self.tail_row().tobytes()))

    def __repr__(self) -> str:
        cont = None if self.continuation is None else self.continuation.tolist()
        return f"GeneratingMatrix(base={self.base}, rows={self.rows.tolist()}, continuation={cont})"


def index_digits(m: int, b: int) -> np.ndarray:
    """Digits ``eta_0 .. eta_{m-1}`` of every ``h < b**m`` as an ``(b**m, m)`` array."""
    h = np.arange(b**m, dtype=np.int64)
    return np.stack([(h // b**i) % b for i in range(m)], axis=1) if m else np.zeros((1, 0), np.int64)


class DigitalNet:
    """Digital net over Z_b in G^s with ``b**m`` points counted with multiplicity.

    Parameters
    ----------
    matrices : sequence of GeneratingMatrix
        One per coordinate, all with the same base and column count.
    depth : int, optional
        Digit depth of generated :class:`DigitVector` points.  Defaults to
        the number of base-b digits in a binary64 mantissa.
    """

    def __init__(self, matrices: Sequence[GeneratingMatrix], depth: int | None = None):
        matrices = tuple(matrices)
        if not matrices:
            raise ValueError("a digital net needs at least one generating matrix")
        b, m = matrices[0].base, matrices[0].m
        for C in matrices:
            if C.base != b or C.m != m:
                raise ValueError("all generating matrices must share base and column count")
        self.b = b
        self.m = m
        self.matrices = matrices
        self.depth = default_depth(b) if depth is None else int(depth)
        for C in matrices:
            if C.R > self.depth:
                raise ValueError(f"matrix has {C.R} rows but the digit depth is {self.depth}")

    @property
    def s(self) -> int:
        return len(self.matrices)

    @property
    def n_points(self) -> int:
        return self.b**self.m

    def __len__(self) -> int:
        return self.n_points

    def __eq__(self, other):
        if not isinstance(other, DigitalNet):
            return NotImplemented
        return self.matrices == other.matrices

    def __repr__(self) -> str:
        return f"DigitalNet(b={self.b}, s={self.s}, m={self.m})"

    def point(self, h: int) -> tuple[DigitVector, ...]:
        """The h-th point ``z_h`` in G^s."""
        if not 0 <= h < self.n_points:
            raise ValueError(f"point index {h} outside 0..{self.n_points - 1}")
        eta = np.array(expand(h, self.b).digits + (0,) * self.m, dtype=np.int64)[: self.m]
        out = []
        for C in self.matrices:
            digits = C.expanded(self.depth) @ eta % self.b
            tail = int(C.tail_row() @ eta % self.b)
            out.append(DigitVector(self.b, tuple(digits.tolist()), tail))
        return tuple(out)

    def points(self) -> list[tuple[DigitVector, ...]]:
        return [self.point(h) for h in range(self.n_points)]

    def points_array(self) -> np.ndarray:
        """Projections ``pi(z_h)`` of all points as an ``(N, s)`` float array.

        The constant continuation digit is summed in closed form, so for
        ``b = 2`` the antithetic partner of ``x`` comes out as ``1 - x``
        exactly.
        """
        b = self.b
        H = index_digits(self.m, b).astype(np.float64)
        out = np.empty((self.n_points, self.s))
        for j, C in enumerate(self.matrices):
            R = C.R
            scale = float(b) ** R
            if R:
                D = np.rint(H @ C.rows.T.astype(np.float64)).astype(np.int64) % b
                weights = float(b) ** np.arange(R - 1, -1, -1)
                head = (D.astype(np.float64) @ weights) / scale
            else:
                head = np.zeros(self.n_points)
            if C.continuation is not None:
                c = np.rint(H @ C.continuation.astype(np.float64)).astype(np.int64) % b
                head = head + c / ((b - 1) * scale)
            out[:, j] = head
        return out

    def antithetic(self) -> "DigitalNet":
        return DigitalNet([C.augment() for C in self.matrices], depth=self.depth)

    def syndromes(self, k_max_digits: int) -> list[np.ndarray]:
        """For each coordinate, ``vec(k) C_j`` for every ``k < b**k_max_digits``."""
        Kd = index_digits(k_max_digits, self.b)
        return [Kd @ C.expanded(k_max_digits) % self.b for C in self.matrices]

    def dual_contains(self, k: Sequence[int]) -> bool:
        if len(k) != self.s:
            raise ValueError(f"index vector must have {self.s} entries")
        b = self.b
        total = np.zeros(self.m, dtype=np.int64)
        for kj, C in zip(k, self.matrices):
            if kj < 0:
                raise ValueError("indices must be nonnegative")
            if kj >= b**self.depth:
                raise ValueError(f"index {kj} >= b**depth = {b}**{self.depth}")
            digits = expand(int(kj), b).digits
            if digits:
                total += np.array(digits, dtype=np.int64) @ C.expanded(len(digits))
        return not np.any(total % b)

    def dual_enumerate(self, K: int, limit: int = ENUMERATION_LIMIT) -> list[tuple[int, ...]]:
        """All dual vectors with every ``k_j < b**K``, in lexicographic order."""
        b, s = self.b, self.s
        if K > self.depth:
            raise ValueError(f"K={K} exceeds the digit depth {self.depth}")
        check_guard(b ** (s * K), limit, "dual enumeration size")
        if K == 0:
            return [(0,) * s]
        weights = b ** np.arange(self.m, dtype=np.int64)
        tables = self.syndromes(K)
        # bucket the last coordinate by syndrome; each prefix needs the inverse
        last: dict[int, list[int]] = {}
        for k, code in enumerate((tables[-1] @ weights).tolist()):
            last.setdefault(code, []).append(k)
        out = []
        for prefix in itertools.product(range(b**K), repeat=s - 1):
            acc = np.zeros(self.m, dtype=np.int64)
            for j, kj in enumerate(prefix):
                acc += tables[j][kj]
            need = int(((-acc) % b) @ weights)
            out.extend(prefix + (k_last,) for k_last in last.get(need, ()))
        return out


def point(net: DigitalNet, h: int) -> tuple[DigitVector, ...]:
    return net.point(h)


def antithetic(net: DigitalNet) -> DigitalNet:
    """Net with generating matrices ``D_j = (C_j | (1, 1, ...)^T)``."""
    return net.antithetic()


def dual_contains(net: DigitalNet, k: Sequence[int]) -> bool:
    return net.dual_contains(k)


def dual_enumerate(net: DigitalNet, K: int, limit: int = ENUMERATION_LIMIT):
    return net.dual_enumerate(K, limit=limit)


def antithetic_points(points: Iterable[Sequence[DigitVector]]) -> list[tuple[DigitVector, ...]]:
    """Union over ``l`` in Z_b of ``{z + e_l}`` with ``e_l`` equal in every coordinate."""
    points = [tuple(z) for z in points]
    if not points:
        return []
    b, depth = points[0][0].base, points[0][0].depth
    out = []
    for l in range(b):
        e = constant(l, b, depth)
        out.extend(tuple(gadd(zj, e) for zj in z) for z in points)
    return out


def symmetrize(points: Iterable[Sequence[DigitVector]]) -> list[tuple[DigitVector, ...]]:
    """Union over ``l`` in Z_b^s of ``{z + e_l}`` with independent shifts per coordinate."""
    points = [tuple(z) for z in points]
    if not points:
        return []
    b, depth, s = points[0][0].base, points[0][0].depth, len(points[0])
    shifts = [constant(l, b, depth) for l in range(b)]
    out = []
    for ls in itertools.product(range(b), repeat=s):
        out.extend(tuple(gadd(zj, shifts[l]) for zj, l in zip(z, ls)) for z in points)
    return out


def sorted_multiset(points: Iterable[Sequence[DigitVector]]) -> list[tuple]:
    """Canonical form of a point multiset for digit-level comparison."""
    return sorted(tuple(zj.key() for zj in z) for z in points)


def write_net(net: DigitalNet, dest: str | os.PathLike | TextIO | None = None) -> str:
    """Serialise a net as plain text; returns the text and writes it if ``dest`` is given.

    Layout: ``b s m R has_continuation`` on the first line, then per matrix
    ``R`` rows of ``m`` digits followed by the continuation row when flagged.
    """
    R = max(C.R for C in net.matrices)
    has_cont = any(C.continuation is not None for C in net.matrices)
    lines = [f"{net.b} {net.s} {net.m} {R} {int(has_cont)}"]
    for C in net.matrices:
        for row in C.expanded(R):
            lines.append(" ".join(str(v) for v in row.tolist()))
        if has_cont:
            lines.append(" ".join(str(v) for v in C.tail_row().tolist()))
    text = "\n".join(lines) + "\n"
    if dest is not None:
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w") as fh:
                fh.write(text)
    return text


def read_net(src: str | os.PathLike | TextIO, depth: int | None = None) -> DigitalNet:
    """Parse the format written by :func:`write_net`.  ``src`` may be a path or file object."""
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src) as fh:
            text = fh.read()
    tokens = [line.split() for line in io.StringIO(text) if line.strip()]
    if not tokens or len(tokens[0]) != 5:
        raise ValueError("net file header must be 'b s m R has_continuation'")
    try:
        b, s, m, R, flag = (int(t) for t in tokens[0])
    except ValueError as exc:
        raise ValueError(f"malformed net file header: {tokens[0]}") from exc
    if flag not in (0, 1):
        raise ValueError("has_continuation must be 0 or 1")
    per = R + flag
    body = tokens[1:]
    if len(body) != s * per:
        raise ValueError(f"expected {s * per} matrix rows, found {len(body)}")
    matrices = []
    for j in range(s):
        block = body[j * per : (j + 1) * per]
        try:
            arr = np.array([[int(v) for v in row] for row in block], dtype=np.int64).reshape(per, m)
        except ValueError as exc:
            raise ValueError(f"malformed rows for matrix {j}") from exc
        rows = arr[:R] if R else np.zeros((0, m), dtype=np.int64)
        cont = arr[R] if flag else None
        matrices.append(GeneratingMatrix(b, rows, cont))
    return DigitalNet(matrices, depth=depth)
