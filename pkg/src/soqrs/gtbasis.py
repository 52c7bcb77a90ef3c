"""Gelfand-Tsetlin chain patterns and the truncated degenerate-series basis.

A class-1 basis vector of so'_q(n) is a chain (m_n, m_{n-1}, ..., m_3, m_2)
with m_n >= m_{n-1} >= ... >= m_3 >= |m_2|; only the last entry may be
negative, and only n = 3 admits half-integer labels.  The degenerate
series of so'_q(r,s) lives on pairs of such chains, one for so'_q(r) with
top label m and one for so'_q(s) with top label m', subject to the parity
constraint m + m' == epsilon (mod 2).  The infinite tower is truncated at
m + m' <= cutoff; compact blocks are never truncated internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _is_half_integer(x) -> bool:
    f = Fraction(x)
    return f.denominator == 2


def _as_label(x):
    f = Fraction(x)
    if f.denominator == 1:
        return int(f)
    if f.denominator == 2:
        return f
    raise ValueError(f"pattern labels must be integers or half-integers, got {x!r}")


@dataclass(frozen=True)
class ChainPattern:
    """One Gelfand-Tsetlin chain for so'_q(n), top label included."""

    n: int
    entries: tuple

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"chain rank must be >= 3, got n={self.n}")
        if len(self.entries) != self.n - 1:
            raise ValueError(
                f"chain for so'_q({self.n}) needs {self.n - 1} entries, "
                f"got {len(self.entries)}"
            )
        e = self.entries
        for a, b in zip(e, e[1:-1]):
            if a < b:
                raise ValueError(f"labels must be non-increasing: {e}")
        if len(e) >= 2 and e[-2] < abs(e[-1]):
            raise ValueError(f"last label must satisfy m_3 >= |m_2|: {e}")
        if len(e) == 1 and e[0] < 0:
            raise ValueError(f"top label must be nonnegative: {e}")

    @property
    def top(self):
        return self.entries[0]

    def replace(self, pos: int, value) -> "ChainPattern":
        e = list(self.entries)
        e[pos] = value
        return ChainPattern(self.n, tuple(e))


@dataclass(frozen=True)
class DoublePattern:
    """Pair of chains labelling one degenerate-series basis vector."""

    left: ChainPattern
    right: ChainPattern

    @property
    def m(self):
        return self.left.top

    @property
    def mp(self):
        return self.right.top

    @property
    def block(self):
        return (self.left.top, self.right.top)

    def as_list(self) -> list:
        return list(self.left.entries) + list(self.right.entries)


def class1_dim(n: int, m) -> int:
    """Dimension of the class-1 representation of so'_q(n) with top label m."""
    if n == 3:
        return int(2 * Fraction(m) + 1)
    m = int(m)
    return (2 * m + n - 2) * math.factorial(m + n - 3) // (
        math.factorial(m) * math.factorial(n - 2)
    )


def enumerate_chain(n: int, top) -> list[ChainPattern]:
    """All chains with the given top label, ascending lexicographic order.

    Half-integer tops are allowed only for n = 3; class-1 representations
    of so'_q(n), n > 3, carry integer weights.
    """
    if n < 3:
        raise ValueError(f"rank must be >= 3, got n={n}")
    top = _as_label(top)
    if top < 0:
        raise ValueError(f"top label must be nonnegative, got {top}")
    if n > 3 and _is_half_integer(top):
        raise ValueError(
            f"half-integer top label {top} is only supported for n=3"
        )

    def build(k: int, t):
        # all suffixes (m_k, m_{k-1}, ..., m_2) with m_k = t
        if k == 3:
            count = int(2 * t)
            return [(t, t - count + j) for j in range(count + 1)]
        return [(t,) + rest for t2 in range(int(t) + 1) for rest in build(k - 1, t2)]

    chains = [ChainPattern(n, entries) for entries in build(n, top)]
    chains.sort(key=lambda c: c.entries)
    return chains


class TruncatedSpace:
    """Ordered double-pattern basis of the degenerate series, cut at m+m' <= cutoff.

    The basis holds every double pattern with m + m' <= cutoff and
    m + m' == epsilon (mod 2).  Ordering is lexicographic by
    (m+m', m, left entries descending, right entries descending), which
    keeps each (m, m') block contiguous and reproducible.
    """

    def __init__(self, r: int, s: int, epsilon: int, cutoff: int):
        if r <= 2 or s <= 2:
            raise ValueError(f"ranks r, s must exceed 2, got r={r}, s={s}")
        if epsilon not in (0, 1):
            raise ValueError(f"epsilon must be 0 or 1, got {epsilon}")
        if cutoff < 0:
            raise ValueError(f"cutoff must be nonnegative, got {cutoff}")
        self.r = int(r)
        self.s = int(s)
        self.epsilon = int(epsilon)
        self.cutoff = int(cutoff)

        self._left_chains: dict[int, list[ChainPattern]] = {}
        self._right_chains: dict[int, list[ChainPattern]] = {}

        self.blocks: list[tuple[int, int]] = []
        for sigma in range(self.epsilon, self.cutoff + 1, 2):
            for m in range(sigma + 1):
                self.blocks.append((m, sigma - m))
        self.blocks.sort(key=lambda b: (b[0] + b[1], b[0]))

        self.basis: list[DoublePattern] = []
        self.block_slices: dict[tuple[int, int], slice] = {}
        for m, mp in self.blocks:
            start = len(self.basis)
            lefts = sorted(self.left_chains(m), key=lambda c: c.entries, reverse=True)
            rights = sorted(self.right_chains(mp), key=lambda c: c.entries, reverse=True)
            for lc in lefts:
                for rc in rights:
                    self.basis.append(DoublePattern(lc, rc))
            self.block_slices[(m, mp)] = slice(start, len(self.basis))
        self.index: dict[DoublePattern, int] = {
            p: i for i, p in enumerate(self.basis)
        }

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def top_ring(self) -> int:
        """Largest admissible m+m' value (parity-adjusted cutoff)."""
        if (self.cutoff - self.epsilon) % 2 == 0:
            return self.cutoff
        return self.cutoff - 1

    def left_chains(self, m: int) -> list[ChainPattern]:
        if m not in self._left_chains:
            self._left_chains[m] = enumerate_chain(self.r, m)
        return self._left_chains[m]

    def right_chains(self, mp: int) -> list[ChainPattern]:
        if mp not in self._right_chains:
            self._right_chains[mp] = enumerate_chain(self.s, mp)
        return self._right_chains[mp]

    def index_of(self, p: DoublePattern) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise KeyError(f"pattern {p} is not in the truncated space") from None

    def interior_indices(self, depth: int) -> list[int]:
        """Columns whose m+m' is at least `depth` below the top ring.

        Relative to the top admissible ring rather than the raw cutoff, so
        that a depth-3 interior is truncation-free for cubic relations at
        either parity of the cutoff.
        """
        limit = self.top_ring - depth
        return [i for i, p in enumerate(self.basis) if p.m + p.mp <= limit]

    def is_interior(self, p: DoublePattern, depth: int) -> bool:
        return p.m + p.mp <= self.top_ring - depth

    def dump_basis(self) -> list[list[int]]:
        return [p.as_list() for p in self.basis]

    def __repr__(self) -> str:
        return (
            f"TruncatedSpace(r={self.r}, s={self.s}, epsilon={self.epsilon}, "
            f"cutoff={self.cutoff}, dim={self.dim})"
        )


def build_space(r: int, s: int, epsilon: int, cutoff: int) -> TruncatedSpace:
    """Construct the truncated degenerate-series basis."""
    return TruncatedSpace(r, s, epsilon, cutoff)


def pattern_index(space: TruncatedSpace, p: DoublePattern) -> int:
    """Stable position of a pattern in the deterministic ordering."""
    return space.index_of(p)
