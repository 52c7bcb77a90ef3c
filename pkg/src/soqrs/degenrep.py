"""The degenerate principal series T_{eps,lambda} of so'_q(r,s) on a truncated basis.

Compact generators act blockwise through the chain formulas; the single
noncompact generator moves the pair of top labels (m, m') by (+-1, +-1)
with amplitudes

    up/up      +K_m L_{m'}     [lambda + m + m']
    up/down    -K_m L_{m'-1}   [lambda + m - m' - s + 2]
    down/up    +K_{m-1} L_{m'} [lambda - m + m' - r + 2]
    down/down  -K_{m-1} L_{m'-1} [lambda - m - m' - r - s + 4]

where K and L depend only on the two leading labels of the respective
chain.  Lower walls are exact: K_{-1} and L_{-1} vanish through a [0]
factor, so no clipping happens at m = 0 or m' = 0.  Transitions that
would leave the cutoff are dropped; the interior mask of the space marks
the columns that are unaffected by this.

A rescaled ("primed") basis makes the noncompact generator Hermitian on
the principal line Re lambda = (r+s-2)/2.  Its amplitudes replace each
bracket by a square-root pair; the square-root branches are fixed by the
diagonal change of basis, not by a naive principal branch of the bracket
products (the two prescriptions differ by a sign on the lowering terms).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .compactrep import GeneratorMatrix, assemble, chain_action, _bracket_product
from .gtbasis import ChainPattern, DoublePattern, TruncatedSpace, build_space
from .qarith import QParam, SpectralParam, bracket_vanishes


class PrimedBasisUndefined(ValueError):
    """The rescaled basis does not exist: a transform factor vanishes."""

    def __init__(self, factor: str, block: tuple[int, int]):
        self.factor = factor
        self.block = block
        super().__init__(
            f"primed basis undefined: factor {factor} vanishes at block {block}"
        )


@dataclass(frozen=True)
class RepSpec:
    """Parameters of one truncated degenerate-series representation."""

    r: int
    s: int
    epsilon: int
    lam: SpectralParam
    qp: QParam
    cutoff: int

    def __post_init__(self):
        if self.r <= 2 or self.s <= 2:
            raise ValueError(f"ranks must exceed 2, got r={self.r}, s={self.s}")
        if self.epsilon not in (0, 1):
            raise ValueError(f"epsilon must be 0 or 1, got {self.epsilon}")
        if self.cutoff < 0:
            raise ValueError(f"cutoff must be nonnegative, got {self.cutoff}")

    @property
    def lambda_value(self) -> complex:
        return self.lam.value(self.qp)

    def to_dict(self) -> dict:
        lam = self.lam
        d = {"r": self.r, "s": self.s, "epsilon": self.epsilon}
        if lam.is_exact:
            d["lambda_re"] = str(lam.re)
            d["lambda_im_t"] = str(lam.im_t)
            d["lambda_im"] = str(lam.im_y)
        else:
            v = lam.value(self.qp)
            d["lambda_float"] = [v.real, v.imag]
        d["q"] = self.qp.q
        d["cutoff"] = self.cutoff
        return d


@dataclass
class DegenerateRep:
    """Generator matrices of T_{eps,lambda} on a TruncatedSpace basis."""

    spec: RepSpec
    space: TruncatedSpace
    generators: list[GeneratorMatrix]
    basis_kind: str = "standard"
    branch_signs: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.space.dim

    def gen(self, i: int) -> GeneratorMatrix:
        g = self.generators[i - 2]
        assert g.i == i
        return g

    @property
    def noncompact(self) -> GeneratorMatrix:
        return self.gen(self.spec.r + 1)

    def interior_indices(self, depth: int) -> list[int]:
        return self.space.interior_indices(depth)


def K_coeff(m: int, k: int, r: int, p: QParam) -> float:
    """Left transition factor ([m-k+1][m+k+r-2] / [2m+r][2m+r-2])^{1/2}.

    k is the second label of the left chain (for r = 3 the possibly
    negative so(2) label; the expression is even in k).  K_{-1}, queried
    when lowering from m = 0, is 0 through the [m-k+1] factor, before the
    denominator (which may itself vanish there) is ever evaluated.
    """
    num = _bracket_product((m - k + 1, m + k + r - 2), p)
    if num == 0.0:
        return 0.0
    den = p.qnum(2 * m + r) * p.qnum(2 * m + r - 2)
    radicand = num / den
    if radicand <= 0.0:
        raise ArithmeticError(
            f"negative radicand in K/L factor: m={m}, k={k}, size={r}"
        )
    return math.sqrt(radicand)


def L_coeff(mp: int, kp: int, s: int, p: QParam) -> float:
    """Right transition factor; same expression as K_coeff with (m', k', s)."""
    return K_coeff(mp, kp, s, p)


def _compact_generator_triples(space: TruncatedSpace, i: int, p: QParam):
    """Triples of the compact generator i.

    i <= r acts on the left chain as generator i of so'_q(r).  i >= r+2
    acts on the right chain as generator r+s+2-i of so'_q(s): both towers
    peel coordinates away from the boundary the noncompact generator sits
    on, so the neighbour I_{r+2,r+1} moves the second right label (the one
    entering L_{m'}) and the far end I_{r+s,r+s-1} is the diagonal.
    """
    r, s = space.r, space.s
    triples = []
    for col, pat in enumerate(space.basis):
        if i <= r:
            for new_entries, coeff in chain_action(pat.left.entries, i, p):
                target = DoublePattern(ChainPattern(r, new_entries), pat.right)
                triples.append((space.index[target], col, coeff))
        else:
            for new_entries, coeff in chain_action(pat.right.entries, r + s + 2 - i, p):
                target = DoublePattern(pat.left, ChainPattern(s, new_entries))
                triples.append((space.index[target], col, coeff))
    return triples


class _KLCache:
    def __init__(self, size: int, p: QParam):
        self.size = size
        self.p = p
        self._c: dict[tuple[int, int], float] = {}

    def __call__(self, m: int, k: int) -> float:
        key = (m, k)
        v = self._c.get(key)
        if v is None:
            v = K_coeff(m, k, self.size, self.p)
            self._c[key] = v
        return v


def _noncompact_transitions(spec: RepSpec, pat: DoublePattern, K, L, wbr):
    """The four (target_block_delta, coefficient) moves of the noncompact generator.

    wbr(t) must return the bracket value [lambda + t] for integer t.
    """
    r, s = spec.r, spec.s
    m, k = pat.left.entries[0], pat.left.entries[1]
    mp, kp = pat.right.entries[0], pat.right.entries[1]
    sigma = m + mp
    d = m - mp
    moves = []
    km, km1 = K(m, k), K(m - 1, k)
    lm, lm1 = L(mp, kp), L(mp - 1, kp)
    if km != 0.0 and lm != 0.0:
        moves.append(((1, 1), km * lm * wbr(sigma)))
    if km != 0.0 and lm1 != 0.0:
        moves.append(((1, -1), -km * lm1 * wbr(d - s + 2)))
    if km1 != 0.0 and lm != 0.0:
        moves.append(((-1, 1), km1 * lm * wbr(-d - r + 2)))
    if km1 != 0.0 and lm1 != 0.0:
        moves.append(((-1, -1), -km1 * lm1 * wbr(-sigma - r - s + 4)))
    return moves


def _build(spec: RepSpec, noncompact_triples_fn, basis_kind: str,
           branch_signs=None) -> DegenerateRep:
    space = build_space(spec.r, spec.s, spec.epsilon, spec.cutoff)
    gens = []
    for i in range(2, spec.r + spec.s + 1):
        if i == spec.r + 1:
            triples = noncompact_triples_fn(space)
        else:
            triples = _compact_generator_triples(space, i, spec.qp)
        gens.append(GeneratorMatrix(i, assemble(space.dim, triples)))
    return DegenerateRep(spec, space, gens, basis_kind, branch_signs or {})


def build_degenerate(spec: RepSpec) -> DegenerateRep:
    """T_{eps,lambda} in the standard (orthonormal product) basis."""
    lam = spec.lambda_value
    p = spec.qp
    wcache: dict[int, complex] = {}

    def wbr(t: int) -> complex:
        v = wcache.get(t)
        if v is None:
            v = p.qnum(lam + t)
            wcache[t] = v
        return v

    K = _KLCache(spec.r, p)
    L = _KLCache(spec.s, p)

    def noncompact(space: TruncatedSpace):
        triples = []
        top = space.top_ring
        for col, pat in enumerate(space.basis):
            for (dm, dmp), coeff in _noncompact_transitions(spec, pat, K, L, wbr):
                if coeff == 0:
                    continue
                m2, mp2 = pat.m + dm, pat.mp + dmp
                if m2 + mp2 > top:
                    continue  # upper cutoff: transition dropped, column non-interior
                target = DoublePattern(
                    pat.left.replace(0, m2), pat.right.replace(0, mp2)
                )
                triples.append((space.index[target], col, coeff))
        return triples

    return _build(spec, noncompact, "standard")


# ---------------------------------------------------------------------------
# primed basis


@dataclass
class PrimedTransform:
    """Diagonal, block-scalar change of basis |M> = C(m,m') |M>'.

    The coefficient of a block is a product over t = 1..m0 of
    sqrt([-lambda+eps+r+s+2t-4]) / sqrt([lambda+eps+2t-2]) and, for the
    off-diagonal index i, over t = 1..i of
    sqrt([-lambda+eps+r+2t-2]) / sqrt([lambda+eps-s+2t])      (m - m' >= eps)
    or
    sqrt([lambda+eps-s-2t+2]) / sqrt([-lambda+eps+r-2t])      (m - m' <= eps),
    where m0 = (m+m'-eps)/2 and i = |m-m'-eps|/2.  Both families agree at
    i = 0.  The transform is undefined wherever a factor vanishes.
    """

    spec: RepSpec
    coefficients: dict[tuple[int, int], complex]

    def block_indices(self, m: int, mp: int) -> tuple[int, int, int]:
        """(m0, i, family) of a block; family is +1 for m-m' >= eps else -1."""
        eps = self.spec.epsilon
        m0 = (m + mp - eps) // 2
        if m - mp >= eps:
            return m0, (m - mp - eps) // 2, 1
        return m0, (mp - m + eps) // 2, -1

    def coefficient(self, m: int, mp: int) -> complex:
        return self.coefficients[(m, mp)]

    def diagonal(self, space: TruncatedSpace) -> np.ndarray:
        out = np.empty(space.dim, dtype=complex)
        for i, pat in enumerate(space.basis):
            out[i] = self.coefficients[pat.block]
        return out


def _checked_sqrt_factor(spec: RepSpec, sign: int, offset: int, block) -> complex:
    """Principal sqrt of [sign*lambda + offset], refusing exact zeros."""
    lam = spec.lam
    if lam.is_exact and bracket_vanishes(lam, offset, sign):
        name = f"[{'-' if sign < 0 else ''}lambda{offset:+d}]"
        raise PrimedBasisUndefined(name, block)
    v = spec.qp.qnum(sign * spec.lambda_value + offset)
    if not lam.is_exact and abs(v) < 1e-12:
        name = f"[{'-' if sign < 0 else ''}lambda{offset:+d}]"
        raise PrimedBasisUndefined(name, block)
    return cmath.sqrt(v)


def primed_transform(spec: RepSpec) -> PrimedTransform:
    """Change-of-basis coefficients to the primed basis, block by block."""
    eps = spec.epsilon
    space_blocks = build_space(spec.r, spec.s, eps, spec.cutoff).blocks
    r, s = spec.r, spec.s
    coeffs: dict[tuple[int, int], complex] = {}
    for m, mp in space_blocks:
        block = (m, mp)
        m0 = (m + mp - eps) // 2
        c = complex(1.0)
        for t in range(1, m0 + 1):
            c *= _checked_sqrt_factor(spec, -1, eps + r + s + 2 * t - 4, block)
            c /= _checked_sqrt_factor(spec, +1, eps + 2 * t - 2, block)
        if m - mp >= eps:
            i = (m - mp - eps) // 2
            for t in range(1, i + 1):
                c *= _checked_sqrt_factor(spec, -1, eps + r + 2 * t - 2, block)
                c /= _checked_sqrt_factor(spec, +1, eps - s + 2 * t, block)
        else:
            i = (mp - m + eps) // 2
            for t in range(1, i + 1):
                c *= _checked_sqrt_factor(spec, +1, eps - s - 2 * t + 2, block)
                c /= _checked_sqrt_factor(spec, -1, eps + r - 2 * t, block)
        coeffs[block] = c
    return PrimedTransform(spec, coeffs)


def build_degenerate_primed(spec: RepSpec) -> DegenerateRep:
    """T_{eps,lambda} in the primed basis.

    The noncompact amplitudes are square-root pairs; writing w+ for
    sqrt([lambda + t]) and w- for sqrt([-lambda + t]) (principal branches)
    they are

        up/up      +K_m L_{m'}       w+(sigma)     w-(sigma+r+s-2)
        up/down    -K_m L_{m'-1}     w+(d-s+2)     w-(d+r)
        down/up    -K_{m-1} L_{m'}   w+(d-s)       w-(d+r-2)
        down/down  +K_{m-1} L_{m'-1} w+(sigma-2)   w-(sigma+r+s-4)

    with sigma = m+m', d = m-m'.  This is the exact conjugate of the
    standard matrix by the primed transform wherever that is defined; the
    lowering rows differ from the naive principal branch of the written
    bracket products by a sign, which is recorded per block edge in
    branch_signs.
    """
    lam = spec.lambda_value
    p = spec.qp
    r, s = spec.r, spec.s
    sq_plus: dict[int, complex] = {}
    sq_minus: dict[int, complex] = {}

    def wp(t: int) -> complex:
        v = sq_plus.get(t)
        if v is None:
            v = cmath.sqrt(p.qnum(lam + t))
            sq_plus[t] = v
        return v

    def wm(t: int) -> complex:
        v = sq_minus.get(t)
        if v is None:
            v = cmath.sqrt(p.qnum(-lam + t))
            sq_minus[t] = v
        return v

    K = _KLCache(r, p)
    L = _KLCache(s, p)
    branch_signs: dict[tuple, int] = {}

    def record_branch(src, dst, used: complex, written_sign: int,
                      written_product: complex):
        # sign of the used amplitude against the literal principal-branch
        # reading (written_sign * sqrt(written_product)) of the same entry
        key = (src, dst)
        if key in branch_signs or used == 0:
            return
        naive = written_sign * cmath.sqrt(written_product)
        if naive == 0:
            return
        ratio = used / naive
        branch_signs[key] = 1 if ratio.real >= 0 else -1

    def noncompact(space: TruncatedSpace):
        triples = []
        top = space.top_ring
        for col, pat in enumerate(space.basis):
            m, k = pat.left.entries[0], pat.left.entries[1]
            mp, kp = pat.right.entries[0], pat.right.entries[1]
            sigma, d = m + mp, m - mp
            km, km1 = K(m, k), K(m - 1, k)
            lm, lm1 = L(mp, kp), L(mp - 1, kp)
            moves = []
            if km and lm and sigma + 2 <= top:
                amp = km * lm * wp(sigma) * wm(sigma + r + s - 2)
                moves.append(((1, 1), amp))
                record_branch(pat.block, (m + 1, mp + 1), amp, +1,
                              (km * lm) ** 2 * p.qnum(lam + sigma)
                              * p.qnum(-lam + sigma + r + s - 2))
            if km and lm1:
                amp = -km * lm1 * wp(d - s + 2) * wm(d + r)
                moves.append(((1, -1), amp))
                record_branch(pat.block, (m + 1, mp - 1), amp, -1,
                              (km * lm1) ** 2 * p.qnum(lam + d - s + 2)
                              * p.qnum(-lam + d + r))
            if km1 and lm:
                amp = -km1 * lm * wp(d - s) * wm(d + r - 2)
                moves.append(((-1, 1), amp))
                record_branch(pat.block, (m - 1, mp + 1), amp, +1,
                              (km1 * lm) ** 2 * p.qnum(lam - d - r + 2)
                              * p.qnum(-lam - d + s))
            if km1 and lm1:
                amp = km1 * lm1 * wp(sigma - 2) * wm(sigma + r + s - 4)
                moves.append(((-1, -1), amp))
                record_branch(pat.block, (m - 1, mp - 1), amp, -1,
                              (km1 * lm1) ** 2 * p.qnum(lam - sigma - r - s + 4)
                              * p.qnum(-lam - sigma + 2))
            for (dm, dmp), coeff in moves:
                if coeff == 0:
                    continue
                target = DoublePattern(
                    pat.left.replace(0, m + dm), pat.right.replace(0, mp + dmp)
                )
                triples.append((space.index[target], col, coeff))
        return triples

    return _build(spec, noncompact, "primed", branch_signs)
