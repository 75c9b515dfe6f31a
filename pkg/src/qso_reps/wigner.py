"""Vector operators and the reduced-matrix-element factorisation.

A vector operator is a family of n operators tied to the ambient generators
by q-commutators.  Restricting an irrep of the next-rank algebra to the
chain subalgebra yields the canonical example: the composite generators
bridging level n+1 to each slot k.  Matrix elements of any vector operator
between two irreducible blocks factor into a block-pair constant times a
primed inverse coupling coefficient; the constant is extracted by a weighted
least-squares fit and the factorisation is certified by the spread of the
individual ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qarith import QContext, ValidationError
from .gtbasis import (NONCLASSICAL, BasisIndex, GTPattern, IrrepLabel,
                      branch_rows, covers, enumerate_patterns,
                      extend_pattern, first_completion, rows_below)
from .cgc import (AuxSearchError, Row, _cached_composite, _cached_generators,
                  aux_candidates, top_cgc)


@dataclass(frozen=True)
class AmbientBlock:
    """One irreducible constituent of the space a vector operator acts on."""

    label: IrrepLabel
    s: int
    offset: int
    basis: BasisIndex

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True)
class VectorOperator:
    """Components V_1..V_n with the ambient generator matrices they covary
    with, on a space decomposed into labelled irreducible blocks."""

    n: int
    blocks: tuple[AmbientBlock, ...]
    gens: tuple[np.ndarray, ...]
    components: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.gens[0].shape[0]

    def scaled(self, c: complex) -> "VectorOperator":
        return VectorOperator(self.n, self.blocks, self.gens,
                              tuple(c * v for v in self.components))


@dataclass(frozen=True)
class CovarianceResidual:
    relation: str
    residual: float
    scale: float
    passed: bool


@dataclass(frozen=True)
class CovarianceReport:
    entries: tuple[CovarianceResidual, ...]

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)


def check_vector_operator(vop: VectorOperator, ctx: QContext) -> CovarianceReport:
    """Residuals of the q-commutator covariance identities and of the far
    commutators of a candidate vector operator."""
    shapes = {m.shape for m in vop.gens} | {m.shape for m in vop.components}
    if len(shapes) != 1:
        raise ValidationError(f"inconsistent operator shapes: {shapes}")
    sq = ctx.q ** 0.5
    entries: list[CovarianceResidual] = []

    def qcomm(x, y):
        return sq * (x @ y) - (y @ x) / sq

    for j in range(2, vop.n + 1):
        t = vop.gens[j - 2]
        lhs = qcomm(vop.components[j - 2], t)
        scale = max(float(np.abs(lhs).max()), float(np.abs(vop.components[j - 1]).max()), 1.0)
        res = float(np.linalg.norm(lhs - vop.components[j - 1]))
        entries.append(CovarianceResidual(f"raise({j})", res, scale,
                                          res <= ctx.tolerance(scale)))
        lhs = qcomm(t, vop.components[j - 1])
        scale = max(float(np.abs(lhs).max()), float(np.abs(vop.components[j - 2]).max()), 1.0)
        res = float(np.linalg.norm(lhs - vop.components[j - 2]))
        entries.append(CovarianceResidual(f"lower({j})", res, scale,
                                          res <= ctx.tolerance(scale)))
    for j in range(2, vop.n + 1):
        t = vop.gens[j - 2]
        for k in range(1, vop.n + 1):
            if k in (j - 1, j):
                continue
            ab, ba = t @ vop.components[k - 1], vop.components[k - 1] @ t
            scale = max(float(np.abs(ab).max()), float(np.abs(ba).max()), 1.0)
            res = float(np.linalg.norm(ab - ba))
            entries.append(CovarianceResidual(f"far({j},{k})", res, scale,
                                              res <= ctx.tolerance(scale)))
    return CovarianceReport(tuple(entries))


def _restriction_blocks(ambient: IrrepLabel) -> tuple[AmbientBlock, ...]:
    n = ambient.n - 1
    eps = ambient.eps[:n - 1] if ambient.kind == NONCLASSICAL else None
    patterns = enumerate_patterns(ambient).patterns
    rows = [p.row(n) for p in patterns]
    blocks: list[AmbientBlock] = []
    start = 0
    for i in range(1, len(rows) + 1):
        if i == len(rows) or rows[i] != rows[start]:
            label = IrrepLabel(n, ambient.kind, rows[start], eps)
            basis = enumerate_patterns(label)
            assert all(patterns[start + j].rows[1:] == basis.patterns[j].rows
                       for j in range(basis.dim)), "restricted order mismatch"
            blocks.append(AmbientBlock(label, 0, start, basis))
            start = i
    return tuple(blocks)


def canonical_vector_operator(ambient: IrrepLabel, ctx: QContext) -> VectorOperator:
    """The vector operator carried by a next-rank irrep restricted to the
    chain subalgebra: component k is the composite generator from level n+1
    down to slot k, component n the plain top generator."""
    n = ambient.n - 1
    gens = _cached_generators(ambient, ctx)
    components = []
    for k in range(1, n + 1):
        if k == n:
            components.append(gens[n - 1].mat)
        else:
            components.append(_cached_composite(ambient, n + 1, k, "+", ctx).mat)
    blocks = _restriction_blocks(ambient)
    return VectorOperator(n, blocks, tuple(g.mat for g in gens[:n - 1]),
                          tuple(components))


def direct_sum(a: VectorOperator, b: VectorOperator) -> VectorOperator:
    """Block-diagonal sum; multiplicity indices are renumbered per label."""
    if a.n != b.n:
        raise ValidationError("direct sum needs equal ranks")
    da = a.dim
    gens = tuple(np.block([[ga, np.zeros((da, gb.shape[0]))],
                           [np.zeros((gb.shape[0], da)), gb]])
                 for ga, gb in zip(a.gens, b.gens))
    comps = tuple(np.block([[va, np.zeros((da, vb.shape[0]))],
                            [np.zeros((vb.shape[0], da)), vb]])
                  for va, vb in zip(a.components, b.components))
    seen: dict[IrrepLabel, int] = {}
    blocks: list[AmbientBlock] = []
    for blk in a.blocks + tuple(
            AmbientBlock(x.label, x.s, x.offset + da, x.basis) for x in b.blocks):
        s = seen.get(blk.label, 0)
        seen[blk.label] = s + 1
        blocks.append(AmbientBlock(blk.label, s, blk.offset, blk.basis))
    return VectorOperator(a.n, tuple(blocks), gens, comps)


def _inverse_block_scale(src_label: IrrepLabel, m_tgt: Row, aux: IrrepLabel,
                         ctx: QContext) -> complex | None:
    """Normalising ratio for the primed coefficients: the denominator swaps
    bra and ket weights while the closed-form factor keeps the source-to-
    target orientation."""
    n = src_label.n
    kind = src_label.kind
    top_gen = _cached_generators(aux, ctx)[n - 1].mat
    basis = enumerate_patterns(aux)
    scale = float(np.abs(top_gen).max())
    for m_hat in rows_below(src_label.m_top, n, kind):
        if n - 1 >= 2 and not covers(m_tgt, m_hat, n, kind):
            continue
        third = top_cgc(src_label.m_top, m_tgt, m_hat, n, kind, ctx)
        if abs(third) < 1e-12:
            continue
        if n - 1 >= 2:
            completion = first_completion(m_hat, n - 1, kind) if n - 1 > 2 else ()
            bra = GTPattern((aux.m_top, m_tgt, m_hat) + completion)
            ket = GTPattern((aux.m_top, src_label.m_top, m_hat) + completion)
        else:
            bra = GTPattern((aux.m_top, m_tgt))
            ket = GTPattern((aux.m_top, src_label.m_top))
        den = top_gen[basis.position(bra), basis.position(ket)]
        if abs(den) <= 1e-6 * scale:
            return None
        return den / third
    return None


class _InverseComputer:
    """Primed inverse coupling coefficients for one (target, source) weight
    pair under a fixed auxiliary weight."""

    def __init__(self, src_label: IrrepLabel, m_tgt: Row, aux: IrrepLabel,
                 mu: complex, ctx: QContext):
        self.src_label = src_label
        self.m_tgt = m_tgt
        self.aux = aux
        self.mu = mu
        self.ctx = ctx
        self.n = src_label.n
        self.aux_basis = enumerate_patterns(aux)
        self._components: dict[int, np.ndarray] = {}

    def _component(self, k: int) -> np.ndarray:
        if k not in self._components:
            if k == self.n:
                self._components[k] = _cached_generators(self.aux, self.ctx)[self.n - 1].mat
            else:
                self._components[k] = _cached_composite(
                    self.aux, self.n + 1, k, "+", self.ctx).mat
        return self._components[k]

    def coefficient(self, k: int, tgt: GTPattern, src: GTPattern) -> complex:
        mat = self._component(k)
        bra = extend_pattern(self.aux.m_top, tgt)
        ket = extend_pattern(self.aux.m_top, src)
        num = mat[self.aux_basis.position(bra), self.aux_basis.position(ket)]
        return num / self.mu


def _inverse_computer(src_label: IrrepLabel, m_tgt: Row, ctx: QContext,
                      aux: IrrepLabel | None = None) -> _InverseComputer:
    if aux is not None:
        mu = _inverse_block_scale(src_label, m_tgt, aux, ctx)
        if mu is None:
            raise AuxSearchError(
                f"auxiliary weight {aux} unusable for inverse coefficients "
                f"{src_label} -> {m_tgt}")
        return _InverseComputer(src_label, m_tgt, aux, mu, ctx)
    tried = []
    for candidate in aux_candidates(src_label, m_tgt):
        tried.append(candidate)
        mu = _inverse_block_scale(src_label, m_tgt, candidate, ctx)
        if mu is not None:
            return _InverseComputer(src_label, m_tgt, candidate, mu, ctx)
    raise AuxSearchError(
        f"no auxiliary weight for inverse coefficients {src_label} -> {m_tgt};"
        " tried " + ", ".join(repr(a) for a in tried))


def primed_inverse_cgc(k: int, tgt: GTPattern, src: GTPattern, kind: str,
                       eps: tuple[int, ...] | None, ctx: QContext,
                       aux: IrrepLabel | None = None) -> complex:
    """Primed inverse coupling coefficient of vector slot k (1..n) between a
    target tableau and a source tableau; independent of the admissible
    auxiliary weight used."""
    n = src.n
    src_label = IrrepLabel(n, kind, src.row(n), eps)
    m_tgt = tgt.row(n)
    if m_tgt not in branch_rows(src.row(n), n, kind):
        return 0j
    comp = _inverse_computer(src_label, m_tgt, ctx, aux)
    return comp.coefficient(k, tgt, src)


@dataclass(frozen=True)
class ReducedEntry:
    value: complex
    residual: float
    first_ratio: complex
    contributing: int


@dataclass(frozen=True)
class ReducedElements:
    """Block-pair constants of the factorisation, with per-pair residuals
    and the largest raw matrix element found on forbidden block pairs."""

    entries: dict
    forbidden: dict

    def to_jsonable(self) -> dict:
        pairs = []
        for (m_t, s_t, m_s, s_s), entry in self.entries.items():
            pairs.append({
                "m_target": [e.twice for e in m_t], "s_target": s_t,
                "m_source": [e.twice for e in m_s], "s_source": s_s,
                "re": float(entry.value.real), "im": float(entry.value.imag),
                "residual": float(entry.residual),
            })
        return {"pairs": pairs}


class FactorizationError(RuntimeError):
    """Ratios of matrix elements to inverse coefficients failed to be
    constant on an admissible block pair."""


def _pair_admissible(tgt: AmbientBlock, src: AmbientBlock) -> bool:
    if tgt.label.kind != src.label.kind or tgt.label.eps != src.label.eps:
        return False
    return tgt.label.m_top in branch_rows(src.label.m_top, src.label.n,
                                          src.label.kind)


def reduced_matrix_elements(vop: VectorOperator, ctx: QContext,
                            ratio_tol: float = 1e-8) -> ReducedElements:
    """Extract the reduced matrix element of every admissible ordered block
    pair and certify the factorisation.

    Raises FactorizationError when the ratio of a raw matrix element to its
    primed inverse coefficient deviates from the fitted constant by more
    than `ratio_tol` (relative).
    """
    entries: dict = {}
    forbidden: dict = {}
    for bt in vop.blocks:
        for bs in vop.blocks:
            key = (bt.label.m_top, bt.s, bs.label.m_top, bs.s)
            raw_max = max(
                float(np.abs(vop.components[k][
                    bt.offset:bt.offset + bt.dim,
                    bs.offset:bs.offset + bs.dim]).max())
                for k in range(vop.n))
            if not _pair_admissible(bt, bs):
                forbidden[key] = raw_max
                continue
            comp = _inverse_computer(bs.label, bt.label.m_top, ctx)
            denoms, raws = [], []
            for k in range(1, vop.n + 1):
                vmat = vop.components[k - 1]
                for i_t, tgt in enumerate(bt.basis.patterns):
                    for i_s, src in enumerate(bs.basis.patterns):
                        d = comp.coefficient(k, tgt, src)
                        raw = vmat[bt.offset + i_t, bs.offset + i_s]
                        denoms.append(d)
                        raws.append(raw)
            denoms = np.array(denoms)
            raws = np.array(raws)
            weight = np.abs(denoms) ** 2
            total = float(weight.sum())
            if total == 0.0:
                raise FactorizationError(
                    f"all inverse coefficients vanish on pair {key}")
            value = complex(np.vdot(denoms, raws) / total)
            dmax = float(np.abs(denoms).max())
            live = np.abs(denoms) > ratio_tol * dmax
            ratios = raws[live] / denoms[live]
            ref = max(abs(value), float(np.abs(ratios).max()), 1e-300)
            residual = float(np.abs(ratios - value).max()) / ref
            silent = ~live
            silent_raw = float(np.abs(raws[silent]).max()) if silent.any() else 0.0
            raw_scale = max(float(np.abs(raws).max()), 1.0)
            if silent_raw > ctx.tolerance(raw_scale):
                raise FactorizationError(
                    f"matrix element {silent_raw:.3e} outside the inverse-"
                    f"coefficient support on pair {key}")
            if residual > ratio_tol and abs(value) * dmax > ctx.tolerance(raw_scale):
                raise FactorizationError(
                    f"non-constant ratio on pair {key}: spread {residual:.3e}")
            first = complex(ratios[0]) if ratios.size else 0j
            entries[key] = ReducedEntry(value, residual, first, int(live.sum()))
    return ReducedElements(entries, forbidden)
