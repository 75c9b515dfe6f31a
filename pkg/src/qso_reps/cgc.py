"""Clebsch-Gordan coefficients of vector-representation tensor products.

The top coupling coefficient (vector slot n) has a closed product form in the
source weight, target weight and their shared next row.  Every other
coefficient is a ratio of one composite-generator matrix element to one plain
top-generator matrix element inside an auxiliary irrep of the next rank,
times that closed form.  The ratio is independent both of which next-row is
used to normalise (the top-generator element factorises through the closed
form) and of the auxiliary weight; both independences are exploited here and
re-verified numerically.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qarith import (HalfInt, QContext, ValidationError, q_bracket,
                     q_bracket_plus, q_power)
from .gtbasis import (CLASSICAL, NONCLASSICAL, HALF, BasisIndex, GTPattern,
                      IrrepLabel, branch_rows, branching_set, covers,
                      enumerate_patterns, extend_pattern, first_completion,
                      l_coords, rows_above, rows_below)
from .reps import (GeneratorMatrix, build_all_generators, composite_generator)
from .tensorprod import tensor_rep


class AuxSearchError(RuntimeError):
    """No auxiliary weight produced a usable denominator."""


class DecompositionError(RuntimeError):
    """An intertwiner failed its residual check."""


Row = tuple[HalfInt, ...]


def so2_coupled_vectors(m: HalfInt, kind: str, eps2: int,
                        ctx: QContext) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of the weight-raising / weight-lowering combinations of
    the two vector slots over a rank-2 weight-m line.

    Classical raising/lowering vectors go to weights m+1 / m-1; the
    nonclassical lowering vector at m = 1/2 couples back to weight 1/2.
    """
    if kind == CLASSICAL:
        vp = np.array([-1j * q_power(m - HALF, ctx), 1.0], dtype=complex)
        vm = np.array([+1j * q_power(-m - HALF, ctx), 1.0], dtype=complex)
        return vp, vm
    if m < HALF:
        raise ValidationError("nonclassical rank-2 weights start at 1/2")
    vp = np.array([-eps2 * q_power(m - HALF, ctx), 1.0], dtype=complex)
    vm = np.array([-eps2 * q_power(-m - HALF, ctx), 1.0], dtype=complex)
    return vp, vm


def top_cgc(m_src: Row, m_tgt: Row, m_below: Row, level: int, kind: str,
            ctx: QContext) -> complex:
    """Vector-slot-n coupling coefficient; depends only on the source weight,
    the target weight and the shared row below them.

    Returns 0 when the target is not a branch of the source, without raising.
    """
    if m_tgt not in branch_rows(m_src, level, kind):
        return 0j
    lsrc = l_coords(m_src, level)
    lbel = l_coords(m_below, level - 1) if m_below else ()
    diff = [(i, m_tgt[i].twice - m_src[i].twice)
            for i in range(len(m_src)) if m_tgt[i] != m_src[i]]
    if not diff:
        if level % 2 == 1:
            bracket = q_bracket_plus if kind == NONCLASSICAL else q_bracket
            value = 1.0
            for lr in lbel:
                value *= bracket(lr, ctx)
            return complex(value)
        if kind != NONCLASSICAL or m_src[-1] != HALF:
            return 0j
        value = 1.0
        for lr in lbel:
            value *= q_bracket(lr - HALF, ctx)
        return complex(value)
    if len(diff) != 1 or abs(diff[0][1]) != 2:
        return 0j
    j, step = diff[0]
    lj = lsrc[j]
    product = 1.0
    for lr in lbel:
        if level % 2 == 1:
            if step > 0:
                product *= q_bracket(lj + lr, ctx) * q_bracket(lj - lr, ctx)
            else:
                product *= q_bracket(lj + lr - 1, ctx) * q_bracket(lj - lr - 1, ctx)
        else:
            if step > 0:
                product *= q_bracket(lj + lr, ctx) * q_bracket(lj - lr + 1, ctx)
            else:
                product *= q_bracket(lj + lr - 1, ctx) * q_bracket(lj - lr, ctx)
    return cmath.sqrt(product)


def _level2_pairing_ok(k: str, m_src: HalfInt, m_tgt: HalfInt, kind: str) -> bool:
    if k == "+":
        return m_tgt == m_src + 1
    if kind == NONCLASSICAL and m_src == HALF:
        return m_tgt == HALF
    return m_tgt == m_src - 1


def cgc_is_zero(k: "int | str", src: GTPattern, tgt: GTPattern, kind: str) -> bool:
    """Selection rules: True when the coefficient is forced to vanish."""
    n = src.n
    if tgt.row(n) not in branch_rows(src.row(n), n, kind):
        return True
    if k in ("+", "-"):
        for s in range(n - 1, 2, -1):
            if tgt.row(s) not in branch_rows(src.row(s), s, kind):
                return True
        return not _level2_pairing_ok(k, src.m12, tgt.m12, kind)
    if src.prefix(k - 1) != tgt.prefix(k - 1):
        return True
    for s in range(n - 1, k - 1, -1):
        if tgt.row(s) not in branch_rows(src.row(s), s, kind):
            return True
    return False


@lru_cache(maxsize=64)
def _cached_generators(label: IrrepLabel, ctx: QContext) -> tuple[GeneratorMatrix, ...]:
    return tuple(build_all_generators(label, ctx))


@lru_cache(maxsize=64)
def _cached_composite(label: IrrepLabel, k: int, l: int, sign: str,
                      ctx: QContext) -> GeneratorMatrix:
    base = list(_cached_generators(label, ctx))
    return composite_generator(label, k, l, sign, ctx, base)


def aux_candidates(label: IrrepLabel, m_tgt: Row, margin: int = 3) -> list[IrrepLabel]:
    """Dominant next-rank weights admitting both the source and target
    weights below them, ordered by increasing entry sum then entries."""
    n, kind = label.n, label.kind
    cap = label.m_top[0] + margin
    rows = [u for u in rows_above(label.m_top, n + 1, kind, cap)
            if covers(u, m_tgt, n + 1, kind)]
    rows.sort(key=lambda u: (sum(e.twice for e in u),
                             tuple(e.twice for e in u)))
    eps = None
    if kind == NONCLASSICAL:
        eps = label.eps + (1,)
    return [IrrepLabel(n + 1, kind, u, eps) for u in rows]


def _block_scale(label: IrrepLabel, m_tgt: Row, aux: IrrepLabel,
                 ctx: QContext) -> complex | None:
    """Normalising ratio DEN/TOP for one target block under one auxiliary
    weight, or None when this auxiliary weight is unusable."""
    n = label.n
    gens = _cached_generators(aux, ctx)
    top_gen = gens[n - 1].mat
    basis = enumerate_patterns(aux)
    scale = float(np.abs(top_gen).max())
    for m_hat in rows_below(label.m_top, n, label.kind):
        if n - 1 >= 2 and not covers(m_tgt, m_hat, n, label.kind):
            continue
        third = top_cgc(label.m_top, m_tgt, m_hat, n, label.kind, ctx)
        if abs(third) < 1e-12:
            continue
        completion = first_completion(m_hat, n - 1, label.kind) if n - 1 > 2 else ()
        bra = GTPattern((aux.m_top, label.m_top, m_hat) + completion) \
            if n - 1 >= 2 else GTPattern((aux.m_top, label.m_top))
        ket = GTPattern((aux.m_top, m_tgt, m_hat) + completion) \
            if n - 1 >= 2 else GTPattern((aux.m_top, m_tgt))
        den = top_gen[basis.position(bra), basis.position(ket)]
        if abs(den) <= 1e-6 * scale:
            return None
        return den / third
    return None


def _admissible_scales(label: IrrepLabel, m_tgt: Row, ctx: QContext,
                       want: int) -> list[tuple[IrrepLabel, complex]]:
    found: list[tuple[IrrepLabel, complex]] = []
    tried: list[IrrepLabel] = []
    for aux in aux_candidates(label, m_tgt):
        tried.append(aux)
        mu = _block_scale(label, m_tgt, aux, ctx)
        if mu is not None:
            found.append((aux, mu))
            if len(found) >= want:
                return found
    if not found:
        raise AuxSearchError(
            f"no auxiliary weight for {label} -> {m_tgt}; tried "
            + ", ".join(repr(a) for a in tried))
    return found


class _BlockComputer:
    """Computes all coefficients of one target block under a fixed
    auxiliary weight."""

    def __init__(self, label: IrrepLabel, m_tgt: Row, aux: IrrepLabel,
                 mu: complex, ctx: QContext):
        self.label = label
        self.m_tgt = m_tgt
        self.aux = aux
        self.mu = mu
        self.ctx = ctx
        self.n = label.n
        self.aux_basis = enumerate_patterns(aux)
        self._composites: dict[int, np.ndarray] = {}

    def _composite(self, k: int) -> np.ndarray:
        if k not in self._composites:
            if k == self.n:
                self._composites[k] = _cached_generators(self.aux, self.ctx)[self.n - 1].mat
            else:
                self._composites[k] = _cached_composite(
                    self.aux, self.n + 1, k, "-", self.ctx).mat
        return self._composites[k]

    def coefficient(self, k: "int | str", src: GTPattern, tgt: GTPattern) -> complex:
        if cgc_is_zero(k, src, tgt, self.label.kind):
            return 0j
        if k == self.n:
            return top_cgc(self.label.m_top, self.m_tgt, src.row(self.n - 1),
                           self.n, self.label.kind, self.ctx)
        kk = 2 if k in ("+", "-") else k
        mat = self._composite(kk)
        bra = extend_pattern(self.aux.m_top, src)
        ket = extend_pattern(self.aux.m_top, tgt)
        num = mat[self.aux_basis.position(bra), self.aux_basis.position(ket)]
        return self.ctx.q ** (kk - self.n) * num / self.mu


def recurse_cgc(k: "int | str", tgt: GTPattern, src: GTPattern, kind: str,
                eps: tuple[int, ...] | None, ctx: QContext,
                aux: IrrepLabel | None = None) -> complex:
    """One Clebsch-Gordan coefficient for vector slot k (an int 3..n, or one
    of "+"/"-"), target tableau against source tableau.

    When no auxiliary label is supplied the first admissible one is used;
    the value does not depend on the choice.
    """
    n = src.n
    label = IrrepLabel(n, kind, src.row(n), eps)
    if cgc_is_zero(k, src, tgt, kind):
        return 0j
    m_tgt = tgt.row(n)
    if aux is None:
        (aux, mu), = _admissible_scales(label, m_tgt, ctx, want=1)
    else:
        mu = _block_scale(label, m_tgt, aux, ctx)
        if mu is None:
            raise AuxSearchError(f"auxiliary weight {aux} unusable for "
                                 f"{label} -> {m_tgt}")
    return _BlockComputer(label, m_tgt, aux, mu, ctx).coefficient(k, src, tgt)


@dataclass(frozen=True)
class CGCTable:
    """All coupling coefficients feeding one target block."""

    source: IrrepLabel
    target: IrrepLabel
    aux: IrrepLabel
    replaced: bool
    entries: tuple[tuple[GTPattern, tuple[tuple[str, GTPattern, complex], ...]], ...]

    def to_jsonable(self) -> dict:
        def pat(p: GTPattern) -> list[list[int]]:
            return [[e.twice for e in row] for row in p.rows]

        return {
            "source": {"n": self.source.n, "kind": self.source.kind,
                       "weight": [e.twice for e in self.source.m_top],
                       "eps": list(self.source.eps) if self.source.eps else None},
            "target": [e.twice for e in self.target.m_top],
            "entries": [
                {"target_pattern": pat(t),
                 "terms": [{"k": k, "source_pattern": pat(s),
                            "re": float(v.real), "im": float(v.imag)}
                           for k, s, v in terms]}
                for t, terms in self.entries
            ],
        }


@dataclass(frozen=True)
class Intertwiner:
    """Columns are coupled vectors of one target block, expanded over the
    product basis (vector slot outermost)."""

    target: IrrepLabel
    matrix: np.ndarray
    residuals: tuple[tuple[int, float, float], ...]  # (generator, residual, scale)
    table: CGCTable

    @property
    def max_residual(self) -> float:
        return max((r for _, r, _ in self.residuals), default=0.0)


def _k_order(n: int) -> list["int | str"]:
    return ["+", "-"] + list(range(3, n + 1))


def _compute_block_table(label: IrrepLabel, m_tgt: Row, computer: _BlockComputer,
                         ctx: QContext):
    """Raw (unnormalised) coefficient table for one target block."""
    n = label.n
    target_label = label.with_weight(m_tgt)
    tgt_basis = enumerate_patterns(target_label)
    src_basis = enumerate_patterns(label)
    entries = []
    for tgt in tgt_basis.patterns:
        terms = []
        for k in _k_order(n):
            for src in src_basis.patterns:
                value = computer.coefficient(k, src, tgt)
                if value != 0j:
                    terms.append((str(k), src, value))
        entries.append((tgt, tuple(terms)))
    return target_label, tgt_basis, src_basis, entries


def _normalise(entries) -> list:
    first = None
    for _, terms in entries:
        for _, _, v in terms:
            if v != 0j:
                first = v
                break
        if first is not None:
            break
    if first is None:
        raise DecompositionError("empty coefficient table")
    return [(t, tuple((k, s, v / first) for k, s, v in terms))
            for t, terms in entries]


def _build_matrix(label: IrrepLabel, entries, src_basis: BasisIndex,
                  tgt_basis: BasisIndex, ctx: QContext) -> np.ndarray:
    n, d = label.n, src_basis.dim
    mat = np.zeros((n * d, tgt_basis.dim), dtype=complex)
    eps2 = label.eps[0] if label.kind == NONCLASSICAL else 0
    for col, (tgt, terms) in enumerate(entries):
        for k, src, value in terms:
            i = src_basis.position(src)
            if k in ("+", "-"):
                vp, vm = so2_coupled_vectors(src.m12, label.kind, eps2, ctx)
                vec = vp if k == "+" else vm
                mat[i, col] += value * vec[0]
                mat[d + i, col] += value * vec[1]
            else:
                mat[(int(k) - 1) * d + i, col] += value
    return mat


def assemble_decomposition(label: IrrepLabel, ctx: QContext,
                           t_mats: list[GeneratorMatrix] | None = None,
                           verify_second_aux: bool = True,
                           ) -> dict[Row, Intertwiner]:
    """Decompose the vector-representation tensor product of `label` into
    irreducible blocks with explicit intertwiners.

    Every block is normalised so its first nonzero coefficient is 1, checked
    against the block's own generator matrices (hard failure on residuals),
    and recomputed under a second auxiliary weight when one exists.
    """
    n = label.n
    if t_mats is None:
        t_mats = list(_cached_generators(label, ctx))
    big = tensor_rep(t_mats, ctx)
    out: dict[Row, Intertwiner] = {}
    for branch in branching_set(label.m_top, n, label.kind):
        m_tgt = branch.row
        scales = _admissible_scales(label, m_tgt, ctx,
                                    want=2 if verify_second_aux else 1)
        aux, mu = scales[0]
        computer = _BlockComputer(label, m_tgt, aux, mu, ctx)
        target_label, tgt_basis, src_basis, entries = _compute_block_table(
            label, m_tgt, computer, ctx)
        if verify_second_aux and len(scales) > 1:
            aux2, mu2 = scales[1]
            other = _BlockComputer(label, m_tgt, aux2, mu2, ctx)
            for tgt, terms in entries:
                for k, src, value in terms:
                    k2 = int(k) if k not in ("+", "-") else k
                    check = other.coefficient(k2, src, tgt)
                    scale = max(abs(value), abs(check), 1.0)
                    if abs(check - value) > 1e-8 * scale:
                        raise DecompositionError(
                            f"auxiliary weights {aux} and {aux2} disagree on "
                            f"({k}, {src} -> {tgt}): {value} vs {check}")
        entries = _normalise(entries)
        matrix = _build_matrix(label, entries, src_basis, tgt_basis, ctx)
        block_mats = _cached_generators(target_label, ctx)
        residuals = []
        for k in range(1, n):
            lhs = big[k - 1].mat @ matrix
            rhs = matrix @ block_mats[k - 1].mat
            scale = max(float(np.abs(lhs).max()), float(np.abs(rhs).max()), 1.0)
            residual = float(np.linalg.norm(lhs - rhs))
            if residual > ctx.tolerance(scale):
                raise DecompositionError(
                    f"intertwiner residual {residual:.3e} for block {m_tgt}, "
                    f"generator {k} (scale {scale:.3e})")
            residuals.append((k, residual, scale))
        table = CGCTable(label, target_label, aux, branch.tag == "replaced",
                         tuple(entries))
        out[m_tgt] = Intertwiner(target_label, matrix, tuple(residuals), table)
    return out


def decomposition_rank(blocks: dict[Row, Intertwiner], ctx: QContext) -> int:
    """Numerical rank of the horizontally concatenated intertwiners."""
    stacked = np.hstack([it.matrix for it in blocks.values()])
    svals = np.linalg.svd(stacked, compute_uv=False)
    if svals.size == 0:
        return 0
    return int(np.sum(svals > ctx.tol_rel * svals[0] * max(stacked.shape)))


def so3_cgc(l: HalfInt, l_target: HalfInt, kind: str,
            eps: tuple[int, ...] | None, ctx: QContext) -> dict[HalfInt, tuple[complex, complex, complex]]:
    """Explicit rank-3 coupling table: weight m of the target block maps to
    (alpha, beta, gamma) = coefficients of the raising, middle and lowering
    product vectors.

    alpha pairs the source line m-1, beta the source line m, gamma the source
    line m+1; in the nonclassical table at m = 1/2 alpha instead pairs the
    source line 1/2 through the lowering vector.
    """
    targets = branch_rows((l,), 3, kind)
    if (l_target,) not in targets:
        raise ValidationError(f"target {l_target} not admissible for l={l}")

    def qp(a):
        return q_power(a, ctx)

    def br(a):
        return q_bracket(a, ctx)

    def brp(a):
        return q_bracket_plus(a, ctx)

    def rsqrt(x):
        return cmath.sqrt(x)

    out: dict[HalfInt, tuple[complex, complex, complex]] = {}
    if kind == CLASSICAL:
        def dm(m):
            return ((qp(m) + qp(-m)) * (qp(m + 1) + qp(-m - 1))) ** -0.5

        m = -l_target
        while m <= l_target:
            if l_target == l + 1:
                a = qp(l - m + HALF) * dm(m - 1) * rsqrt(br(l + m) * br(l + m + 1))
                b = rsqrt(br(l - m + 1) * br(l + m + 1))
                g = -qp(l + m + HALF) * dm(m) * rsqrt(br(l - m) * br(l - m + 1))
            elif l_target == l:
                a = -qp(-m - HALF) * dm(m - 1) * rsqrt(br(l + m) * br(l - m + 1))
                b = complex(br(m))
                g = -qp(m - HALF) * dm(m) * rsqrt(br(l - m) * br(l + m + 1))
            else:
                a = -qp(-l - m - HALF) * dm(m - 1) * rsqrt(br(l - m) * br(l - m + 1))
                b = rsqrt(br(l - m) * br(l + m))
                g = qp(-l + m - HALF) * dm(m) * rsqrt(br(l + m) * br(l + m + 1))
            out[m] = (a, b, g)
            m = m + 1
        return out

    e3 = eps[1]

    def dtm(m):
        return ((qp(m) - qp(-m)) * (qp(m + 1) - qp(-m - 1))) ** -0.5

    m = HALF
    while m <= l_target:
        if m == HALF:
            # lowering-vector coefficients paired with the source line 1/2
            if l_target == l + 1:
                a = -qp(l) * brp(HALF) * e3 * rsqrt(br(l + HALF) * br(l + HALF + 1))
            elif l_target == l:
                a = -qp(-1) * brp(HALF) * e3 * br(l + HALF)
            else:
                a = qp(-l - 1) * brp(HALF) * e3 * rsqrt(br(l - HALF) * br(l + HALF))
        else:
            if l_target == l + 1:
                a = qp(l - m + HALF) * dtm(m - 1) * rsqrt(br(l + m) * br(l + m + 1))
            elif l_target == l:
                a = qp(-m - HALF) * dtm(m - 1) * rsqrt(br(l + m) * br(l - m + 1))
            else:
                a = -qp(-l - m - HALF) * dtm(m - 1) * rsqrt(br(l - m) * br(l - m + 1))
        if l_target == l + 1:
            b = rsqrt(br(l - m + 1) * br(l + m + 1))
            g = -qp(l + m + HALF) * dtm(m) * rsqrt(br(l - m) * br(l - m + 1))
        elif l_target == l:
            b = complex(brp(m))
            g = -qp(m - HALF) * dtm(m) * rsqrt(br(l - m) * br(l + m + 1))
        else:
            b = rsqrt(br(l - m) * br(l + m))
            g = qp(-l + m - HALF) * dtm(m) * rsqrt(br(l + m) * br(l + m + 1))
        out[m] = (a, b, g)
        m = m + 1
    return out
