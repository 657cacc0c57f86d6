"""Sobol' generating matrices from published direction-number tables.

The default table is the Joe-Kuo ``new-joe-kuo-6.21201`` file shipped in
``antiqmc/data``.  Each record line reads ``d s a m_1 ... m_s``: dimension,
degree of the primitive polynomial, its interior coefficients packed as an
integer, and the initial direction numbers.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .net import DigitalNet, GeneratingMatrix

__all__ = [
    "DirectionNumberRecord",
    "default_dirfile",
    "load_directions",
    "direction_numbers",
    "sobol_matrices",
    "sobol_net",
]


@dataclass(frozen=True)
class DirectionNumberRecord:
    d: int
    s: int
    a: int
    m: tuple[int, ...]

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension index must be >= 2, got {self.d}")
        if self.s < 1 or len(self.m) != self.s:
            raise ValueError(f"dimension {self.d}: degree {self.s} needs {self.s} initial values")
        if not 0 <= self.a < 2 ** max(self.s - 1, 0):
            raise ValueError(f"dimension {self.d}: coefficient code {self.a} out of range")
        for i, mi in enumerate(self.m, start=1):
            if mi <= 0 or mi % 2 == 0:
                raise ValueError(f"dimension {self.d}: m_{i}={mi} must be odd and positive")
            if mi >= 2**i:
                raise ValueError(f"dimension {self.d}: m_{i}={mi} must be < 2^{i}")


def default_dirfile() -> str:
    return str(resources.files("antiqmc") / "data" / "new-joe-kuo-6.21201")


def load_directions(path: str | os.PathLike | None = None, max_dim: int | None = None):
    """Parse a direction-number file (first line is a header).

    Parameters
    ----------
    path : path-like, optional
        Defaults to the shipped Joe-Kuo table.
    max_dim : int, optional
        Stop after the record for this dimension.
    """
    path = default_dirfile() if path is None else path
    records: list[DirectionNumberRecord] = []
    with open(path) as fh:
        fh.readline()
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                fields = [int(t) for t in line.split()]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer field") from exc
            if len(fields) < 4:
                raise ValueError(f"{path}:{lineno}: expected 'd s a m_1 ... m_s'")
            d, s, a, *m = fields
            if len(m) != s:
                raise ValueError(f"{path}:{lineno}: degree {s} but {len(m)} initial values")
            expected = records[-1].d + 1 if records else 2
            if d != expected:
                raise ValueError(f"{path}:{lineno}: dimension {d} out of order, expected {expected}")
            try:
                records.append(DirectionNumberRecord(d, s, a, tuple(m)))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if max_dim is not None and d >= max_dim:
                break
    return records


def direction_numbers(record: DirectionNumberRecord | None, count: int) -> list[int]:
    """Integers ``m_1 .. m_count``; ``v_i = m_i / 2**i``.  ``None`` gives dimension 1."""
    if record is None:
        return [1] * count
    s, a = record.s, record.a
    m = list(record.m[:count])
    for i in range(s, count):
        new = m[i - s] ^ (m[i - s] << s)
        for k in range(1, s):
            if (a >> (s - 1 - k)) & 1:
                new ^= m[i - k] << k
        m.append(new)
    return m


def sobol_matrices(records, s: int, m: int) -> list[GeneratingMatrix]:
    """First ``s`` Sobol' matrices with ``m`` columns and ``m`` explicit rows.

    Column ``r`` holds the binary digits of ``v_{r+1} = m_{r+1} / 2**(r+1)``.
    Dimension 1 is the identity (van der Corput).
    """
    if s < 1 or m < 0:
        raise ValueError("need s >= 1 and m >= 0")
    if len(records) < s - 1:
        raise ValueError(f"{s} dimensions requested but only {len(records) + 1} available")
    out = []
    for j in range(s):
        rec = None if j == 0 else records[j - 1]
        mvals = direction_numbers(rec, m)
        C = np.zeros((m, m), dtype=np.int64)
        for r, mr in enumerate(mvals):
            # v_{r+1} has r+1 fractional bits; bit l (1-based) is row l-1
            for l in range(r + 1):
                C[l, r] = (mr >> (r - l)) & 1
        out.append(GeneratingMatrix(2, C))
    return out


def sobol_net(s: int, m: int, dirfile: str | os.PathLike | None = None, records=None) -> DigitalNet:
    if records is None:
        records = load_directions(dirfile, max_dim=s)
    return DigitalNet(sobol_matrices(records, s, m))
