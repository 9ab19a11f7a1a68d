"""Weight multiplicities, finite tensor products and level-k fusion rules.

Fusion coefficients come from two unrelated routes: the Verlinde sum over
the numerical S matrix, and the Kac-Walton rule (finite tensor product
decomposition followed by affine Weyl folding), which is exact.

Weight systems are computed in gl(r+1) coordinates: a weight of the irrep
with e-coordinates ``lam`` (a partition) is a composition of ``sum(lam)``
into ``r + 1`` parts.  Freudenthal's recursion only runs over dominant
weights (partitions dominated by ``lam``); the rest follow by permuting.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .modular import DEFAULT_DIM_BOUND, ModularData
from .weights import (
    AlgebraSpec, Labels, Weight, affine_fold_e, alcove_labels, conjugate, enumerate_weights,
    finite_fold_e, from_e, rho_e, rotate, to_e, weyl_dimension)

TOL_F = 1e-6


class FusionError(ArithmeticError):
    """A fusion coefficient failed its integrality or sign contract."""


def _partitions(total: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into at most ``parts`` parts, padded with zeros, lex decreasing."""
    cap = total if cap is None else cap
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _dominated(mu: Sequence[int], lam: Sequence[int]) -> bool:
    acc_mu = acc_lam = 0
    for x, y in zip(mu, lam):
        acc_mu += x
        acc_lam += y
        if acc_mu > acc_lam:
            return False
    return True


@lru_cache(maxsize=4096)
def dominant_multiplicities(r: int, lam: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Freudenthal's recursion over the dominant weights of L(lam).

    ``lam`` is a partition with r + 1 parts (e-coordinates, last part
    normally 0).  Returns ``{partition: multiplicity}`` for every dominant
    weight with nonzero multiplicity.
    """
    rbar = r + 1
    rho = rho_e(r)
    total = sum(lam)

    def norm_shift(v):
        return sum((x + p) ** 2 for x, p in zip(v, rho))

    top = norm_shift(lam)
    mults: dict[tuple[int, ...], int] = {}
    # lex-decreasing order is a linear extension of dominance
    for mu in _partitions(total, rbar):
        if not _dominated(mu, lam):
            continue
        if mu == lam:
            mults[mu] = 1
            continue
        acc = 0
        for a in range(rbar):
            for b in range(a + 1, rbar):
                v = list(mu)
                j = 0
                while True:
                    j += 1
                    v[a] += 1
                    v[b] -= 1
                    if v[b] < 0:
                        break
                    m = mults.get(tuple(sorted(v, reverse=True)), 0)
                    if m:
                        acc += m * (v[a] - v[b])
        den = top - norm_shift(mu)
        m, rem = divmod(2 * acc, den)
        if rem:
            raise ArithmeticError(f"Freudenthal recursion gave a fraction at {mu}")
        if m:
            mults[mu] = m
    return mults


def orbit_e(part: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct permutations of a partition."""
    counts: dict[int, int] = defaultdict(int)
    for x in part:
        counts[x] += 1
    values = sorted(counts, reverse=True)
    n = len(part)
    out = [0] * n

    def rec(pos):
        if pos == n:
            yield tuple(out)
            return
        for x in values:
            if counts[x]:
                counts[x] -= 1
                out[pos] = x
                yield from rec(pos + 1)
                counts[x] += 1

    yield from rec(0)


@dataclass(frozen=True)
class WeightSystem:
    """All weights of a finite A_r irrep, keyed by finite Dynkin labels."""

    base: Labels
    mults: dict[Labels, int]

    @property
    def dimension(self) -> int:
        return sum(self.mults.values())


def weight_multiplicities(spec: AlgebraSpec, i: int, lam_bar: Sequence[int],
                          dim_bound: int = DEFAULT_DIM_BOUND) -> WeightSystem:
    r = spec.rank(i)
    lam_bar = tuple(int(x) for x in lam_bar)
    if len(lam_bar) != r or min(lam_bar, default=0) < 0:
        raise ValueError(f"{lam_bar} is not a dominant A_{r} weight")
    dim = weyl_dimension(lam_bar)
    if dim > dim_bound:
        raise ValueError(f"module of dimension {dim} exceeds the bound {dim_bound}")
    mults = {}
    for part, m in dominant_multiplicities(r, tuple(to_e(lam_bar))).items():
        for beta in orbit_e(part):
            mults[from_e(beta)] = m
    return WeightSystem(lam_bar, mults)


@lru_cache(maxsize=65536)
def tensor_decomposition(r: int, lam_bar: Labels, mu_bar: Labels) -> dict[Labels, int]:
    """L(lam) (x) L(mu) by Racah-Speiser: fold mu + beta + rho over the weights beta of L(lam)."""
    if weyl_dimension(lam_bar) > weyl_dimension(mu_bar):
        lam_bar, mu_bar = mu_bar, lam_bar
    rho = rho_e(r)
    base = [x + p for x, p in zip(to_e(mu_bar), rho)]
    acc: dict[Labels, int] = defaultdict(int)
    for part, m in dominant_multiplicities(r, tuple(to_e(lam_bar))).items():
        for beta in orbit_e(part):
            folded, sign = finite_fold_e([x + y for x, y in zip(base, beta)])
            if sign:
                acc[from_e([x - p for x, p in zip(folded, rho)])] += sign * m
    out = {nu: c for nu, c in acc.items() if c}
    if any(c < 0 for c in out.values()):
        raise FusionError("negative tensor multiplicity; Racah-Speiser bookkeeping is broken")
    return out


def tensor_multiplicity(spec: AlgebraSpec, i: int, lam_bar: Sequence[int],
                        mu_bar: Sequence[int], nu_bar: Sequence[int]) -> int:
    r = spec.rank(i)
    for v in (lam_bar, mu_bar, nu_bar):
        if len(v) != r or min(v, default=0) < 0:
            raise ValueError(f"{tuple(v)} is not a dominant A_{r} weight")
    return tensor_decomposition(r, tuple(lam_bar), tuple(mu_bar)).get(tuple(nu_bar), 0)


@lru_cache(maxsize=65536)
def factor_fusion(r: int, k: int, lam: Labels, mu: Labels) -> dict[Labels, int]:
    """Kac-Walton fusion for a single factor."""
    kbar = k + r + 1
    rho = rho_e(r)
    acc: dict[Labels, int] = defaultdict(int)
    for nu_bar, m in tensor_decomposition(r, lam[1:], mu[1:]).items():
        folded, sign = affine_fold_e([x + p for x, p in zip(to_e(nu_bar), rho)], kbar)
        if sign:
            acc[tuple(x - 1 for x in alcove_labels(folded, kbar))] += sign * m
    out = {nu: c for nu, c in acc.items() if c}
    if any(c < 0 for c in out.values()):
        raise FusionError(f"negative fusion coefficient in {lam} x {mu} at level {k}")
    return out


def fusion_kac_walton(spec: AlgebraSpec, lam: Weight, mu: Weight) -> dict[Weight, int]:
    per_factor = [factor_fusion(r, k, lam[i], mu[i]) for i, (r, k) in enumerate(spec.factors)]
    out = {}
    for combo in itertools.product(*(sorted(f.items(), reverse=True) for f in per_factor)):
        out[tuple(nu for nu, _ in combo)] = math.prod(c for _, c in combo)
    return out


class FusionTable:
    """Lazily filled Kac-Walton fusion coefficients keyed by weight indices."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.table = enumerate_weights(spec)
        self._rows: dict[tuple[int, int], dict[int, int]] = {}

    def row(self, lam: int, mu: int) -> dict[int, int]:
        key = (min(lam, mu), max(lam, mu))
        row = self._rows.get(key)
        if row is None:
            t = self.table
            row = {t.index[nu]: c for nu, c in fusion_kac_walton(self.spec, t[lam], t[mu]).items()}
            self._rows[key] = row
        return row

    def get(self, lam: int, mu: int, nu: int) -> int:
        return self.row(lam, mu).get(nu, 0)

    def dense(self) -> np.ndarray:
        n = self.table.n
        N = np.zeros((n, n, n), dtype=np.int64)
        for lam in range(n):
            for mu in range(lam, n):
                for nu, c in self.row(lam, mu).items():
                    N[lam, mu, nu] = N[mu, lam, nu] = c
        return N

    def entries(self) -> list[dict]:
        t = self.table
        out = []
        for lam in range(t.n):
            for mu in range(t.n):
                for nu, c in sorted(self.row(lam, mu).items()):
                    out.append({"lambda": [list(x) for x in t[lam]],
                                "mu": [list(x) for x in t[mu]],
                                "nu": [list(x) for x in t[nu]], "N": c})
        return out


def verlinde_tensor(md: ModularData) -> np.ndarray:
    """Complex array N[l, m, n] = sum_b S[l,b] S[m,b] conj(S[n,b]) / S[0,b]."""
    S = md.S
    return np.einsum("lb,mb,nb->lmn", S / S[0], S, S.conj(), optimize=True)


def fusion_verlinde(md: ModularData, lam: Weight, mu: Weight, nu: Weight,
                    tol: float = TOL_F) -> float:
    idx = md.table.index
    S = md.S
    l, m, n = idx[lam], idx[mu], idx[nu]
    val = complex(np.sum(S[l] * S[m] * S[n].conj() / S[0]))
    nearest = round(val.real)
    if abs(val.imag) > tol or abs(val.real - nearest) > tol or nearest < 0:
        raise FusionError(f"Verlinde value {val} is not a nonnegative integer within {tol}")
    return val.real


def simple_current_perm(spec: AlgebraSpec, b: Sequence[int], c: Sequence[int] = ()) -> tuple[int, ...]:
    """Index permutation of C^c J^b."""
    t = enumerate_weights(spec)
    c = tuple(c) or (0,) * spec.s

    def fn(w):
        return tuple(conjugate(rotate(lab, bi)) if ci % 2 else rotate(lab, bi)
                     for lab, bi, ci in zip(w, b, c))

    return t.permutation(fn)
