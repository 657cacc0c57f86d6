"""Coordinate weights ``gamma_u`` for weighted Sobolev spaces."""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Mapping, Sequence

from ._validation import GuardError

__all__ = ["Weights", "parse_weights"]

SUBSET_LIMIT = 20


class Weights:
    """Nonnegative weights indexed by subsets ``u`` of ``{0, ..., s-1}``.

    Either product form (``gamma_u = prod_{j in u} gamma_j``) or an explicit
    mapping from subsets to weights.  ``gamma_{empty} = 1`` in both cases.
    Coordinates are 0-based here; :func:`parse_weights` accepts 1-based labels.
    """

    def __init__(self, s: int, product: Sequence[float] | None = None,
                 explicit: Mapping | None = None):
        if (product is None) == (explicit is None):
            raise ValueError("give exactly one of product= or explicit=")
        self.s = int(s)
        if product is not None:
            product = tuple(float(g) for g in product)
            if len(product) != self.s:
                raise ValueError(f"need {self.s} product weights, got {len(product)}")
            if any(g < 0 for g in product):
                raise ValueError("weights must be nonnegative")
            self.product = product
            self.explicit = None
        else:
            table = {}
            for u, g in explicit.items():
                u = tuple(sorted(set(int(j) for j in u)))
                if any(j < 0 or j >= self.s for j in u):
                    raise ValueError(f"subset {u} outside 0..{self.s - 1}")
                if g < 0:
                    raise ValueError("weights must be nonnegative")
                if u:
                    table[u] = float(g)
            self.product = None
            self.explicit = table

    @classmethod
    def constant(cls, s: int, gamma: float = 1.0) -> "Weights":
        return cls(s, product=[gamma] * s)

    @property
    def is_product(self) -> bool:
        return self.product is not None

    def gamma(self, u: Sequence[int]) -> float:
        u = tuple(sorted(u))
        if not u:
            return 1.0
        if self.product is not None:
            return math.prod(self.product[j] for j in u)
        return self.explicit.get(u, 0.0)

    def subsets(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """Nonempty subsets with positive weight."""
        if self.explicit is not None:
            yield from sorted(((u, g) for u, g in self.explicit.items() if g > 0),
                              key=lambda ug: (len(ug[0]), ug[0]))
            return
        if self.s > SUBSET_LIMIT:
            raise GuardError(f"enumerating 2^{self.s} subsets; use the product-form routines")
        for size in range(1, self.s + 1):
            for u in itertools.combinations(range(self.s), size):
                g = self.gamma(u)
                if g > 0:
                    yield u, g

    def is_zero(self) -> bool:
        if self.product is not None:
            return all(g == 0 for g in self.product)
        return all(g == 0 for g in self.explicit.values())

    def __repr__(self) -> str:
        if self.product is not None:
            return f"Weights(s={self.s}, product={list(self.product)})"
        return f"Weights(s={self.s}, explicit={self.explicit})"


def parse_weights(spec: str, s: int) -> Weights:
    """Parse a command-line weight spec.

    ``product:g`` (same weight for every coordinate), ``product:g1,g2,...``,
    ``decay:c,p`` for ``gamma_j = c * j**-p``, or ``explicit:1=0.5;2=0.5;1+2=0.1``
    with 1-based coordinate labels joined by ``+``.
    """
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "product":
            vals = [float(v) for v in body.split(",") if v.strip()]
            if len(vals) == 1:
                vals = vals * s
            return Weights(s, product=vals)
        if kind == "decay":
            c, p = (float(v) for v in body.split(","))
            return Weights(s, product=[c * j**-p for j in range(1, s + 1)])
        if kind == "explicit":
            table = {}
            for item in body.split(";"):
                if not item.strip():
                    continue
                lhs, rhs = item.split("=")
                u = tuple(int(t) - 1 for t in lhs.split("+"))
                table[u] = float(rhs)
            return Weights(s, explicit=table)
    except ValueError as exc:
        raise ValueError(f"bad weight spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown weight spec kind {kind!r}; use product:, decay: or explicit:")
