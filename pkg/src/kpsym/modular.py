"""Kac-Peterson S and T matrices, q-dimensions, character ratios, Galois action.

S is held in double precision; T is held as exact rational exponents
``Texp`` with ``T = exp(i pi Texp)`` reduced into [0, 2), so that every
T-equality test is an exact congruence.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .weights import (
    AlgebraSpec, Labels, Weight, WeightTable, affine_fold_e, alcove_labels, conjugate,
    enumerate_weights, rho_e, rho_norm, shifted_norm, to_e, weyl_dimension)

TOL_U = 1e-9
TOL_C = 1e-8
DEFAULT_DIM_BOUND = 200_000


def _shifted_e(labels: Labels) -> list[int]:
    return [x + y for x, y in zip(to_e(labels[1:]), rho_e(len(labels) - 1))]


def factor_s_matrix(r: int, k: int, weights: Sequence[Labels]) -> np.ndarray:
    """S^{r,k} on the given factor weights via (r+1)x(r+1) determinants.

    With ``L = (r+1) * e(lambda + rho)`` centred to zero sum, the Weyl sum
    ``sum_w det(w) exp(-2 pi i (w(lambda+rho) | mu+rho) / kbar)`` is
    ``det[exp(-2 pi i L_a M_b / ((r+1)^2 kbar))]``.
    """
    rbar, kbar = r + 1, k + r + 1
    shifted = np.array([_shifted_e(lab) for lab in weights], dtype=np.int64)
    centred = rbar * shifted - shifted.sum(axis=1, keepdims=True)
    modulus = rbar * rbar * kbar
    prod = np.einsum("la,mb->lmab", centred, centred) % modulus
    phases = np.exp(-2j * np.pi * prod / modulus)
    dets = np.linalg.det(phases)
    pref = cmath.exp(1j * math.pi * r * rbar / 4) / (kbar ** (r / 2) * math.sqrt(rbar))
    return pref * dets


def factor_texp(labels: Labels, k: int) -> Fraction:
    """(lambda+rho|lambda+rho)/kbar - (rho|rho)/h for one factor (not reduced)."""
    r = len(labels) - 1
    return shifted_norm(labels) / (k + r + 1) - rho_norm(r) / (r + 1)


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * (x.numerator // (2 * x.denominator))


@dataclass(frozen=True, eq=False)
class ModularData:
    """S, exact T exponents and modular anomalies on a WeightTable."""

    table: WeightTable
    S: np.ndarray
    texp: tuple[Fraction, ...]
    anomaly: tuple[Fraction, ...]
    factor_S: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def spec(self) -> AlgebraSpec:
        return self.table.spec

    @property
    def n(self) -> int:
        return self.table.n

    def conjugation(self) -> tuple[int, ...]:
        return self.table.permutation(lambda w: tuple(conjugate(lab) for lab in w))

    def T(self) -> np.ndarray:
        return np.diag([cmath.exp(1j * math.pi * float(e)) for e in self.texp])


def build_modular_data(table: WeightTable) -> ModularData:
    spec = table.spec
    factor_S = tuple(factor_s_matrix(r, k, table.factor_orders[i])
                     for i, (r, k) in enumerate(spec.factors))
    # canonical order is a product order with factor 0 most significant
    S = reduce(np.kron, factor_S)
    raw = tuple(sum((factor_texp(lab, k) for lab, (_, k) in zip(w, spec.factors)),
                    Fraction(0)) for w in table)
    texp = tuple(_mod2(x) for x in raw)
    anomaly = tuple(x / 2 for x in raw)
    return ModularData(table, S, texp, anomaly, factor_S)


@lru_cache(maxsize=64)
def modular_data(spec: AlgebraSpec) -> ModularData:
    return build_modular_data(enumerate_weights(spec))


def q_dimension(md: ModularData, w: Weight) -> float:
    """Sine product over positive roots (not a ratio of S entries)."""
    q = 1.0
    for lab, (r, k) in zip(w, md.spec.factors):
        kbar = k + r + 1
        l = _shifted_e(lab)
        for a in range(r + 1):
            for b in range(a + 1, r + 1):
                q *= math.sin(math.pi * (l[a] - l[b]) / kbar) / math.sin(math.pi * (b - a) / kbar)
    return q


def q_omega1_closed(r: int, k: int) -> float:
    kbar = k + r + 1
    return math.sin(math.pi * (r + 1) / kbar) / math.sin(math.pi / kbar)


def char_ratio(md: ModularData, lam: Weight, mu: Weight,
               dim_bound: int = DEFAULT_DIM_BOUND) -> complex:
    """Finite Weyl character of lambda-bar at -2 pi i (mu-bar + rho-bar)/kbar."""
    from .fusion import dominant_multiplicities, orbit_e

    out = 1.0 + 0j
    for i, (r, k) in enumerate(md.spec.factors):
        kbar, rbar = k + r + 1, r + 1
        fin = lam[i][1:]
        dim = weyl_dimension(fin)
        if dim > dim_bound:
            raise ValueError(f"module of dimension {dim} exceeds the bound {dim_bound}")
        m = _shifted_e(mu[i])
        msum = sum(m)
        total = 0j
        for part, mult in dominant_multiplicities(r, tuple(to_e(fin))).items():
            for beta in orbit_e(part):
                # rbar * (beta | mu + rho), integer
                ip = rbar * sum(x * y for x, y in zip(beta, m)) - sum(beta) * msum
                total += mult * cmath.exp(-2j * math.pi * (ip % (rbar * kbar)) / (rbar * kbar))
        out *= total
    return out


# ---------------------------------------------------------------- Galois symmetry

def conductor(spec: AlgebraSpec) -> int:
    return math.lcm(*(4 * spec.kbar(i) * spec.rbar(i) for i in range(spec.s)))


@dataclass(frozen=True)
class GaloisAction:
    ell: int
    image: tuple[int, ...]
    signs: tuple[int, ...]


def galois_factor(labels: Labels, k: int, ell: int) -> tuple[Labels, int]:
    r = len(labels) - 1
    kbar = k + r + 1
    folded, sign = affine_fold_e([ell * x for x in _shifted_e(labels)], kbar)
    if folded is None:
        raise ArithmeticError(f"ell={ell} folds {labels} onto a wall")
    return tuple(x - 1 for x in alcove_labels(folded, kbar)), sign


def galois_action(md: ModularData, ell: int) -> GaloisAction:
    M = conductor(md.spec)
    if math.gcd(ell, M) != 1:
        raise ValueError(f"ell={ell} is not coprime to the conductor {M}")
    table = md.table
    image, signs = [], []
    for w in table:
        parts = [galois_factor(lab, k, ell) for lab, (_, k) in zip(w, md.spec.factors)]
        image.append(table.index[tuple(p for p, _ in parts)])
        signs.append(math.prod(s for _, s in parts))
    return GaloisAction(ell, tuple(image), tuple(signs))


def galois_defect(md: ModularData, ga: GaloisAction) -> float:
    """max |eps(l) S[l^g, m] - eps(m) S[l, m^g]|."""
    eps = np.array(ga.signs, dtype=float)
    img = np.array(ga.image)
    left = eps[:, None] * md.S[img, :]
    right = eps[None, :] * md.S[:, img]
    return float(np.max(np.abs(left - right)))


# ---------------------------------------------------------------- export

def smatrix_json(md: ModularData, digits: int = 15) -> dict:
    def fmt(x: float) -> float:
        return float(f"{x:.{digits}g}") + 0.0

    return {"spec": md.spec.header(),
            "weights": [[list(lab) for lab in w] for w in md.table],
            "n": md.n,
            "entries": [[fmt(z.real), fmt(z.imag)] for z in md.S.ravel()]}


def texp_strings(md: ModularData) -> list[str]:
    return [f"{x.numerator}/{x.denominator}" for x in md.texp]
