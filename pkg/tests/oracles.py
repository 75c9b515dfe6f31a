"""Independent oracles used by the test suite.

The tableau oracle enumerates by generate-and-filter over raw integer
tuples with the interleaving inequalities transcribed directly; the
classical-limit oracle recomputes every generator coefficient with plain
arithmetic in place of q-brackets.  Neither shares evaluation code with the
package (the limit oracle reuses only pattern bookkeeping).
"""

import cmath
from itertools import product

import numpy as np

from qso_reps import CLASSICAL, NONCLASSICAL, GTPattern, IrrepLabel, enumerate_patterns

_EPS = 1e-12


def oracle_tableaux(label: IrrepLabel) -> set[tuple[tuple[int, ...], ...]]:
    """All tableaux under `label` as doubled-integer tuples, rows n..2."""
    top = tuple(e.twice for e in label.m_top)
    bound = max(abs(t) for t in top) if top else 0
    parity = top[0] % 2 if top else 0

    def candidates(size: int) -> list[tuple[int, ...]]:
        if label.kind == NONCLASSICAL:
            vals = [v for v in range(1, bound + 1, 2)]
        else:
            vals = [v for v in range(-bound, bound + 1) if (v - parity) % 2 == 0]
        return list(product(vals, repeat=size))

    def chain_ok(upper: tuple[int, ...], lower: tuple[int, ...],
                 upper_level: int) -> bool:
        p = upper_level // 2
        if upper_level % 2 == 1:
            if len(lower) != p:
                return False
            for j in range(p):
                if not upper[j] >= lower[j]:
                    return False
            for j in range(p - 1):
                if not lower[j] >= upper[j + 1]:
                    return False
            if label.kind == CLASSICAL:
                return lower[p - 1] >= -upper[p - 1]
            return lower[p - 1] >= 1
        if len(lower) != p - 1:
            return False
        for j in range(p - 1):
            if not upper[j] >= lower[j]:
                return False
        for j in range(p - 2):
            if not lower[j] >= upper[j + 1]:
                return False
        if p >= 2:
            if label.kind == CLASSICAL:
                return lower[p - 2] >= abs(upper[p - 1])
            return lower[p - 2] >= upper[p - 1]
        return True

    stacks = [(top,)]
    for level in range(label.n, 2, -1):
        size = (level - 1) // 2
        stacks = [s + (low,) for s in stacks for low in candidates(size)
                  if chain_ok(s[-1], low, level)]
    return set(stacks)


def _lvals(row, level: int) -> list[float]:
    p = level // 2
    if level % 2 == 1:
        return [float(row[i]) + (p - i) for i in range(p)]
    return [float(row[i]) + (p - i - 1) for i in range(p)]


def _prod(factors: list[float]) -> float:
    value = 1.0
    for f in factors:
        if abs(f) < _EPS:
            return 0.0
        value *= f
    return value


def _limit_a(xi: GTPattern, j: int, level: int) -> complex:
    p = level // 2
    la = _lvals(xi.row(level + 1), level + 1)
    lm = _lvals(xi.row(level), level)
    lb = _lvals(xi.row(level - 1), level - 1) if p > 1 else []
    lj = lm[j - 1]
    num = [x + lj for x in la] + [x - lj - 1 for x in la]
    num += [x + lj for x in lb] + [x - lj - 1 for x in lb]
    top = _prod(num)
    if top == 0.0:
        return 0j
    den = []
    for i in range(p):
        if i != j - 1:
            den += [lm[i] + lj, lm[i] - lj, lm[i] + lj + 1, lm[i] - lj - 1]
    return cmath.sqrt(top / _prod(den)) / 2.0


def _limit_b(xi: GTPattern, j: int, level: int) -> complex:
    p = (level + 1) // 2
    la = _lvals(xi.row(level + 1), level + 1)
    lm = _lvals(xi.row(level), level)
    lb = _lvals(xi.row(level - 1), level - 1) if level - 1 >= 2 else []
    lj = lm[j - 1]
    num = [x + lj for x in la] + [x - lj for x in la]
    num += [x + lj for x in lb] + [x - lj for x in lb]
    top = _prod(num)
    if top == 0.0:
        return 0j
    den = []
    for i in range(p - 1):
        if i != j - 1:
            den += [lm[i] + lj, lm[i] - lj, lm[i] + lj - 1, lm[i] - lj - 1]
    return cmath.sqrt(top / _prod(den)) / (lj * cmath.sqrt((2 * lj + 1) * (2 * lj - 1)))


def _limit_c(xi: GTPattern, level: int) -> float:
    p = (level + 1) // 2
    la = _lvals(xi.row(level + 1), level + 1)
    lm = _lvals(xi.row(level), level) if p > 1 else []
    lb = _lvals(xi.row(level - 1), level - 1) if level - 1 >= 2 else []
    num = _prod(la + lb)
    if num == 0.0:
        return 0.0
    den = []
    for i in range(p - 1):
        den += [lm[i], lm[i] - 1]
    return num / _prod(den)


def classical_limit_generator(label: IrrepLabel, k: int) -> np.ndarray:
    """Generator k of the undeformed orthogonal algebra in the same tableau
    basis, computed with plain arithmetic in place of q-brackets."""
    assert label.kind == CLASSICAL
    basis = enumerate_patterns(label)
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    p = k // 2 if k % 2 == 0 else (k + 1) // 2
    n_shift = p if k % 2 == 0 else p - 1
    coeff = _limit_a if k % 2 == 0 else _limit_b
    for col, xi in enumerate(basis.patterns):
        for j in range(1, n_shift + 1):
            up = xi.replace(k, j, +1)
            if up.is_valid(label.kind):
                mat[basis.position(up), col] += coeff(xi, j, k)
            down = xi.replace(k, j, -1)
            if down.is_valid(label.kind):
                mat[basis.position(down), col] -= coeff(down, j, k)
        if k % 2 == 1:
            mat[col, col] += 1j * _limit_c(xi, k)
    return mat
