"""Generator matrices of the q-deformed orthogonal algebra on tableau bases.

The generator attached to index k (k = 1..n-1) acts on the level-k row of a
tableau.  Even k raises/lowers one entry of that row with square-root
coefficients; odd k does the same on the smaller odd row and adds a diagonal
term (imaginary for the classical family, eps-signed for the nonclassical
one).  Transition coefficients vanish identically on every one-step
excursion outside the tableau lattice; we evaluate them anyway and insist
they are negligible, which turns that boundary property into a runtime check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qarith import (HalfInt, QContext, SingularCoefficientError,
                     ValidationError, q_bracket, q_bracket_plus, q_power)
from .gtbasis import (CLASSICAL, NONCLASSICAL, HALF, GTPattern, IrrepLabel,
                      enumerate_patterns, l_coords)

# numerator factors below this size are exact boundary zeros; denominators
# this small indicate an invalid tableau slipped through validation
_ZERO_EPS = 1e-13


@dataclass(frozen=True)
class GeneratorMatrix:
    """One generator (or composite generator) as a dense complex matrix."""

    label: IrrepLabel
    gen: str
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def to_jsonable(self, tol: float = 0.0) -> dict:
        triplets = []
        for r in range(self.mat.shape[0]):
            for c in range(self.mat.shape[1]):
                v = self.mat[r, c]
                if abs(v) > tol:
                    triplets.append([r, c, float(v.real), float(v.imag)])
        return {"dim": self.dim, "gen": self.gen, "triplets": triplets}


def _product(ctx: QContext, factors: list[HalfInt], plus: bool = False) -> tuple[float, bool]:
    """Product of q-brackets; the flag reports an exact zero factor."""
    bracket = q_bracket_plus if plus else q_bracket
    value = 1.0
    for a in factors:
        f = bracket(a, ctx)
        if abs(f) < _ZERO_EPS:
            return 0.0, True
        value *= f
    return value, False


def _ratio(ctx: QContext, num: list[HalfInt], den: list[HalfInt],
           where: str, num_plus: bool = False, den_plus: bool = False) -> float:
    num_val, num_zero = _product(ctx, num, plus=num_plus)
    if num_zero:
        return 0.0
    den_val, den_zero = _product(ctx, den, plus=den_plus)
    if den_zero:
        raise SingularCoefficientError(
            f"vanishing denominator bracket in {where}: factors {den}")
    return num_val / den_val


def _hat_a_squared(xi: GTPattern, j: int, level: int, ctx: QContext) -> float:
    """Squared numerator of the even-row raising coefficient at entry j."""
    p = level // 2
    la = l_coords(xi.row(level + 1), level + 1)
    lm = l_coords(xi.row(level), level)
    lb = l_coords(xi.row(level - 1), level - 1) if p > 1 else ()
    lj = lm[j - 1]
    num: list[HalfInt] = []
    for i in range(p):
        num += [la[i] + lj, la[i] - lj - 1]
    for i in range(p - 1):
        num += [lb[i] + lj, lb[i] - lj - 1]
    den: list[HalfInt] = []
    for i in range(p):
        if i != j - 1:
            den += [lm[i] + lj, lm[i] - lj,
                    lm[i] + lj + 1, lm[i] - lj - 1]
    return _ratio(ctx, num, den, f"A^{j} at {xi}")


def _hat_b_squared(xi: GTPattern, j: int, level: int, ctx: QContext) -> float:
    """Squared numerator of the odd-row raising coefficient at entry j."""
    p = (level + 1) // 2
    la = l_coords(xi.row(level + 1), level + 1)
    lm = l_coords(xi.row(level), level)
    lb = l_coords(xi.row(level - 1), level - 1) if level - 1 >= 2 else ()
    lj = lm[j - 1]
    num: list[HalfInt] = []
    for i in range(p):
        num += [la[i] + lj, la[i] - lj]
    for i in range(p - 1):
        num += [lb[i] + lj, lb[i] - lj]
    den: list[HalfInt] = []
    for i in range(p - 1):
        if i != j - 1:
            den += [lm[i] + lj, lm[i] - lj,
                    lm[i] + lj - 1, lm[i] - lj - 1]
    return _ratio(ctx, num, den, f"B^{j} at {xi}")


def _csqrt(x: float) -> complex:
    if x >= 0.0:
        return complex(math.sqrt(x), 0.0)
    return complex(0.0, math.sqrt(-x))


def coeff_classical(xi: GTPattern, j: int, level: int, which: str,
                    ctx: QContext) -> complex:
    """Classical-family matrix-element coefficient at a tableau.

    which="A": raising coefficient for entry j of even row `level`;
    which="B": same for odd rows; which="C": the diagonal element of the
    odd-row generator (j ignored).
    """
    if which == "A":
        lj = l_coords(xi.row(level), level)[j - 1]
        hat2 = _hat_a_squared(xi, j, level, ctx)
        if hat2 == 0.0:
            return 0.0
        # [l][l+1]/([2l][2l+2]) == 1/((q^l+q^-l)(q^(l+1)+q^-(l+1))), finite at l = 0
        pref = (q_power(lj, ctx) + q_power(-lj, ctx)) * (
            q_power(lj + 1, ctx) + q_power(-lj - 1, ctx))
        return _csqrt(hat2 / pref)
    if which == "B":
        lj = l_coords(xi.row(level), level)[j - 1]
        hat2 = _hat_b_squared(xi, j, level, ctx)
        if hat2 == 0.0:
            return 0.0
        den_sq, den_zero = _product(ctx, [2 * lj + 1, 2 * lj - 1])
        den_lin, lin_zero = _product(ctx, [lj])
        if den_zero or lin_zero:
            raise SingularCoefficientError(
                f"vanishing bracket [{lj}] or [2l+-1] in B^{j} at {xi}")
        return _csqrt(hat2 / den_sq) / den_lin
    if which == "C":
        p = (level + 1) // 2
        la = l_coords(xi.row(level + 1), level + 1)
        lm = l_coords(xi.row(level), level) if p > 1 else ()
        lb = l_coords(xi.row(level - 1), level - 1) if level - 1 >= 2 else ()
        num = list(la) + list(lb)
        den: list[HalfInt] = []
        for i in range(p - 1):
            den += [lm[i], lm[i] - 1]
        return complex(_ratio(ctx, num, den, f"C at {xi}"))
    raise ValidationError(f"unknown classical coefficient kind {which!r}")


def coeff_nonclassical(xi: GTPattern, j: int, level: int, which: str,
                       ctx: QContext) -> float:
    """Nonclassical-family coefficient; which in {"A","B","C","D"}."""
    if which == "A":
        lj = l_coords(xi.row(level), level)[j - 1]
        hat2 = _hat_a_squared(xi, j, level, ctx)
        if hat2 == 0.0:
            return 0.0
        pref = (q_power(lj, ctx) - q_power(-lj, ctx)) * (
            q_power(lj + 1, ctx) - q_power(-lj - 1, ctx))
        value = _csqrt(hat2 / pref)
        if abs(value.imag) > _ZERO_EPS * (1.0 + abs(value)):
            raise SingularCoefficientError(
                f"nonclassical A^{j} came out complex at {xi}")
        return value.real
    if which == "B":
        lj = l_coords(xi.row(level), level)[j - 1]
        hat2 = _hat_b_squared(xi, j, level, ctx)
        if hat2 == 0.0:
            return 0.0
        den_sq, den_zero = _product(ctx, [2 * lj + 1, 2 * lj - 1])
        if den_zero:
            raise SingularCoefficientError(f"vanishing [2l+-1] in B~^{j} at {xi}")
        value = _csqrt(hat2 / den_sq) / q_bracket_plus(lj, ctx)
        if abs(value.imag) > _ZERO_EPS * (1.0 + abs(value)):
            raise SingularCoefficientError(
                f"nonclassical B~^{j} came out complex at {xi}")
        return value.real
    if which == "C":
        p = (level + 1) // 2
        la = l_coords(xi.row(level + 1), level + 1)
        lm = l_coords(xi.row(level), level) if p > 1 else ()
        lb = l_coords(xi.row(level - 1), level - 1) if level - 1 >= 2 else ()
        num = list(la) + list(lb)
        den: list[HalfInt] = []
        for i in range(p - 1):
            den += [lm[i], lm[i] - 1]
        return _ratio(ctx, num, den, f"C~ at {xi}", num_plus=True, den_plus=True)
    if which == "D":
        p = level // 2
        la = l_coords(xi.row(level + 1), level + 1)
        lm = l_coords(xi.row(level), level)
        lb = l_coords(xi.row(level - 1), level - 1) if p > 1 else ()
        num = [la[i] - HALF for i in range(p)] + [lb[i] - HALF for i in range(p - 1)]
        den: list[HalfInt] = []
        for i in range(p - 1):
            den += [lm[i] + HALF, lm[i] - HALF]
        return _ratio(ctx, num, den, f"D at {xi}")
    raise ValidationError(f"unknown nonclassical coefficient kind {which!r}")


def _raise_coeff(label: IrrepLabel, xi: GTPattern, j: int, level: int,
                 ctx: QContext) -> complex:
    if label.kind == CLASSICAL:
        which = "A" if level % 2 == 0 else "B"
        return coeff_classical(xi, j, level, which, ctx)
    which = "A" if level % 2 == 0 else "B"
    return complex(coeff_nonclassical(xi, j, level, which, ctx))


def build_generator(label: IrrepLabel, k: int, ctx: QContext) -> GeneratorMatrix:
    """Matrix of generator k (k = 1..n-1) on the tableau basis of `label`."""
    if not 1 <= k <= label.n - 1:
        raise ValidationError(f"generator index {k} out of range for n={label.n}")
    basis = enumerate_patterns(label)
    d = basis.dim
    mat = np.zeros((d, d), dtype=complex)
    guard = ctx.tolerance(1.0)
    p = k // 2 if k % 2 == 0 else (k + 1) // 2
    n_shift = p if k % 2 == 0 else p - 1
    for col, xi in enumerate(basis.patterns):
        for j in range(1, n_shift + 1):
            up = xi.replace(k, j, +1)
            c = _raise_coeff(label, xi, j, k, ctx)
            if up.is_valid(label.kind):
                mat[basis.position(up), col] += c
            elif abs(c) > guard:
                raise SingularCoefficientError(
                    f"out-of-lattice raise {xi}->{up} has coefficient {c}")
        truncate = (label.kind == NONCLASSICAL and k % 2 == 0
                    and xi.m(k, p) == HALF)
        for j in range(1, n_shift + 1):
            if truncate and j == p:
                continue
            down = xi.replace(k, j, -1)
            c = _raise_coeff(label, down, j, k, ctx)
            if down.is_valid(label.kind):
                mat[basis.position(down), col] -= c
            elif abs(c) > guard:
                raise SingularCoefficientError(
                    f"out-of-lattice lower {xi}->{down} has coefficient {c}")
        if k % 2 == 1:
            if label.kind == CLASSICAL:
                mat[col, col] += 1j * coeff_classical(xi, 0, k, "C", ctx)
            else:
                mat[col, col] += label.eps_for(k + 1) * coeff_nonclassical(
                    xi, 0, k, "C", ctx)
        elif label.kind == NONCLASSICAL and xi.m(k, p) == HALF:
            dterm = coeff_nonclassical(xi, 0, k, "D", ctx)
            mat[col, col] += label.eps_for(k + 1) * dterm / (
                q_power(HALF, ctx) - q_power(-HALF, ctx))
    return GeneratorMatrix(label, f"I({k + 1},{k})", mat)


def build_all_generators(label: IrrepLabel, ctx: QContext) -> list[GeneratorMatrix]:
    return [build_generator(label, k, ctx) for k in range(1, label.n)]


def composite_generator(label: IrrepLabel, k: int, l: int, sign: str,
                        ctx: QContext,
                        base: list[GeneratorMatrix] | None = None) -> GeneratorMatrix:
    """Composite generator bridging indices k > l, built by the downward
    q-commutator recursion from the plain generator chain."""
    if sign not in ("+", "-"):
        raise ValidationError(f"sign must be '+' or '-', got {sign!r}")
    if not (label.n >= k > l >= 1):
        raise ValidationError(f"need n >= k > l >= 1, got k={k}, l={l}")
    if base is None:
        base = build_all_generators(label, ctx)
    s = +0.5 if sign == "+" else -0.5
    qs, qsi = ctx.q ** s, ctx.q ** (-s)
    current = base[k - 2].mat
    for lv in range(k - 2, l - 1, -1):
        low = base[lv - 1].mat
        current = qs * (low @ current) - qsi * (current @ low)
    return GeneratorMatrix(label, f"I{sign}({k},{l})", current)


@dataclass(frozen=True)
class RelationResidual:
    relation: str
    residual: float
    scale: float
    passed: bool


@dataclass(frozen=True)
class RelationReport:
    entries: tuple[RelationResidual, ...]

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    def failures(self) -> list[RelationResidual]:
        return [e for e in self.entries if not e.passed]


def _frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def _max_entry(*mats: np.ndarray) -> float:
    return max((float(np.abs(m).max()) if m.size else 0.0) for m in mats)


def check_relations(mats: list[GeneratorMatrix], ctx: QContext) -> RelationReport:
    """Residuals of the defining relations for a candidate representation."""
    dims = {g.dim for g in mats}
    if len(dims) != 1:
        raise ValidationError(f"generator dimensions differ: {sorted(dims)}")
    two = ctx.q + 1.0 / ctx.q
    entries: list[RelationResidual] = []
    ms = [g.mat for g in mats]
    for a in range(1, len(ms)):
        x, y = ms[a], ms[a - 1]
        xx, yy = x @ x, y @ y
        t1, t2, t3 = xx @ y, y @ xx, x @ (y @ x)
        r1 = t1 + t2 - two * t3 + y
        entries.append(RelationResidual(
            f"serre({a + 1},{a})", _frob(r1), _max_entry(t1, t2, t3, y),
            False))
        u1, u2, u3 = yy @ x, x @ yy, y @ (x @ y)
        r2 = u1 + u2 - two * u3 + x
        entries.append(RelationResidual(
            f"serre({a},{a + 1})", _frob(r2), _max_entry(u1, u2, u3, x),
            False))
    for a in range(len(ms)):
        for b in range(a + 2, len(ms)):
            ab, ba = ms[a] @ ms[b], ms[b] @ ms[a]
            entries.append(RelationResidual(
                f"far({a + 1},{b + 1})", _frob(ab - ba), _max_entry(ab, ba),
                False))
    final = tuple(
        RelationResidual(e.relation, e.residual, e.scale,
                         e.residual <= ctx.tolerance(e.scale))
        for e in entries)
    return RelationReport(final)
