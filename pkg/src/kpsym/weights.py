"""Level-k highest weights of (A_r1 + ... + A_rs)^(1) and their combinatorics.

A weight is stored as a tuple of per-factor Dynkin label tuples
``((l_0, ..., l_r1), ..., (l_0, ..., l_rs))``; the imaginary root is never
represented.  Finite-part computations use "e-coordinates": for finite labels
``(x_1, ..., x_r)`` the integer vector ``e_a = x_a + ... + x_r`` of length
``r + 1`` (so ``e_{r+1} = 0``).  In these coordinates the finite Weyl group of
A_r permutes entries and the roots are ``e_a - e_b``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

Labels = tuple[int, ...]
Weight = tuple[Labels, ...]


@dataclass(frozen=True)
class AlgebraSpec:
    """The algebra/level pair ``((r_1, k_1), ..., (r_s, k_s))``."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        factors = tuple((int(r), int(k)) for r, k in self.factors)
        if not factors:
            raise ValueError("an algebra needs at least one simple factor")
        for r, k in factors:
            if r < 1:
                raise ValueError(f"rank must be positive, got r={r}")
            if k < 1:
                raise ValueError(f"level must be positive, got k={k}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def simple(cls, r: int, k: int) -> "AlgebraSpec":
        return cls(((r, k),))

    @classmethod
    def parse(cls, alg: str, level: str) -> "AlgebraSpec":
        """Parse the command-line syntax ``a2,a1`` / ``3,2``."""
        names = [s.strip().lower() for s in alg.split(",") if s.strip()]
        levels = [s.strip() for s in str(level).split(",") if s.strip()]
        if len(names) != len(levels):
            raise ValueError(
                f"--alg lists {len(names)} factors but --level lists {len(levels)}")
        factors = []
        for name, lev in zip(names, levels):
            if not name.startswith("a") or not name[1:].isdigit():
                raise ValueError(f"unsupported factor {name!r}; expected a<rank>")
            if not lev.lstrip("-").isdigit():
                raise ValueError(f"level {lev!r} is not an integer")
            factors.append((int(name[1:]), int(lev)))
        return cls(tuple(factors))

    @property
    def s(self) -> int:
        return len(self.factors)

    def rank(self, i: int) -> int:
        return self.factors[i][0]

    def level(self, i: int) -> int:
        return self.factors[i][1]

    def rbar(self, i: int) -> int:
        return self.factors[i][0] + 1

    def hdual(self, i: int) -> int:
        return self.rbar(i)

    def kbar(self, i: int) -> int:
        r, k = self.factors[i]
        return k + r + 1

    def ktilde(self, i: int) -> int:
        r, k = self.factors[i]
        return ktilde(r, k)

    def header(self) -> dict:
        return {"factors": [{"r": r, "k": k} for r, k in self.factors]}

    def __str__(self) -> str:
        alg = ",".join(f"a{r}" for r, _ in self.factors)
        lev = ",".join(str(k) for _, k in self.factors)
        return f"{alg} @ {lev}"


def ktilde(r: int, k: int) -> int:
    kbar = k + r + 1
    return kbar if r % 2 == 0 and kbar % 2 == 0 else k


def compositions(total: int, parts: int) -> Iterator[Labels]:
    """Compositions of ``total`` into ``parts`` nonnegative parts, lex decreasing."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class WeightTable:
    """Canonical ordering of P_+^{r,k}; ``order[0]`` is kLambda_0."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.factor_orders: tuple[tuple[Labels, ...], ...] = tuple(
            tuple(compositions(k, r + 1)) for r, k in spec.factors)
        self.order: tuple[Weight, ...] = tuple(itertools.product(*self.factor_orders))
        self.index: dict[Weight, int] = {w: t for t, w in enumerate(self.order)}
        self.factor_index: tuple[dict[Labels, int], ...] = tuple(
            {lab: t for t, lab in enumerate(fo)} for fo in self.factor_orders)

    def __len__(self) -> int:
        return len(self.order)

    def __getitem__(self, t: int) -> Weight:
        return self.order[t]

    def __iter__(self) -> Iterator[Weight]:
        return iter(self.order)

    @property
    def n(self) -> int:
        return len(self.order)

    def permutation(self, fn: Callable[[Weight], Weight]) -> tuple[int, ...]:
        """Index image array of a map on weights."""
        return tuple(self.index[fn(w)] for w in self.order)

    def to_json(self) -> dict:
        return {"spec": self.spec.header(),
                "weights": [[list(lab) for lab in w] for w in self.order]}


@lru_cache(maxsize=None)
def enumerate_weights(spec: AlgebraSpec) -> WeightTable:
    return WeightTable(spec)


def expected_size(spec: AlgebraSpec) -> int:
    return math.prod(math.comb(k + r, r) for r, k in spec.factors)


def vacuum(spec: AlgebraSpec) -> Weight:
    return tuple((k,) + (0,) * r for r, k in spec.factors)


def omega(spec: AlgebraSpec, i: int, ell: int = 1) -> Weight:
    """``omega^i_ell = (k_i - 1) Lambda_0 + Lambda_ell`` on factor i, vacuum elsewhere."""
    w = [list(lab) for lab in vacuum(spec)]
    w[i][0] -= 1
    w[i][ell] += 1
    return tuple(tuple(lab) for lab in w)


def check_weight(spec: AlgebraSpec, w: Weight) -> Weight:
    w = tuple(tuple(int(x) for x in lab) for lab in w)
    if len(w) != spec.s:
        raise ValueError(f"weight has {len(w)} factors, algebra has {spec.s}")
    for i, lab in enumerate(w):
        r, k = spec.factors[i]
        if len(lab) != r + 1 or min(lab) < 0 or sum(lab) != k:
            raise ValueError(f"factor {i}: {lab} is not a level-{k} weight of A_{r}")
    return w


# ---------------------------------------------------------------- charges, J, C

def t_of(labels: Sequence[int]) -> int:
    return sum(j * x for j, x in enumerate(labels))


def t_charge(spec: AlgebraSpec, w: Weight, i: int) -> int:
    if not 0 <= i < spec.s:
        raise IndexError(f"factor index {i} out of range for s={spec.s}")
    return t_of(w[i])


def rotate(labels: Labels, b: int) -> Labels:
    """J^b: the label at node j moves to node j + b."""
    n = len(labels)
    b %= n
    return labels[n - b:] + labels[:n - b] if b else labels


def conjugate(labels: Labels) -> Labels:
    return (labels[0],) + tuple(reversed(labels[1:]))


def apply_J(spec: AlgebraSpec, w: Weight, b: Sequence[int]) -> Weight:
    return tuple(rotate(lab, bi) for lab, bi in zip(w, b))


def apply_C(spec: AlgebraSpec, w: Weight, c: Sequence[int]) -> Weight:
    return tuple(conjugate(lab) if ci % 2 else lab for lab, ci in zip(w, c))


def factor_orbit(labels: Labels) -> frozenset[Labels]:
    out = set()
    for b in range(len(labels)):
        x = rotate(labels, b)
        out.add(x)
        out.add(conjugate(x))
    return frozenset(out)


def orbit(spec: AlgebraSpec, w: Weight) -> frozenset[Weight]:
    """Orbit of w under every C^c J^b (C and J act factor by factor)."""
    return frozenset(itertools.product(*(sorted(factor_orbit(lab)) for lab in w)))


def o_count(spec: AlgebraSpec, w: Weight, i: int) -> int:
    return sum(1 for x in w[i] if x > 0)


# ---------------------------------------------------------------- bilinear form

def form(r: int, x: Sequence, y: Sequence) -> Fraction:
    """(x|y) for finite A_r weights in fundamental-weight coordinates.

    Uses the inverse Cartan matrix F_ab = min(a, b) - ab/(r+1).
    """
    if len(x) != r or len(y) != r:
        raise ValueError(f"A_{r} weights need {r} coordinates, got {len(x)} and {len(y)}")
    rbar = r + 1
    acc = Fraction(0)
    for a in range(1, r + 1):
        xa = x[a - 1]
        if not xa:
            continue
        for b in range(1, r + 1):
            acc += Fraction(xa) * y[b - 1] * (rbar * min(a, b) - a * b)
    return acc / rbar


def inner_product(spec: AlgebraSpec, x: Sequence[Sequence], y: Sequence[Sequence]) -> Fraction:
    if len(x) != spec.s or len(y) != spec.s:
        raise ValueError("weight-space vectors must list one coordinate block per factor")
    return sum((form(r, xi, yi) for (r, _), xi, yi in zip(spec.factors, x, y)), Fraction(0))


def finite_part(labels: Labels) -> Labels:
    return tuple(labels[1:])


def shifted_norm(labels: Labels) -> Fraction:
    """(lambda-bar + rho-bar | lambda-bar + rho-bar) for one factor."""
    r = len(labels) - 1
    return form(r, [x + 1 for x in labels[1:]], [x + 1 for x in labels[1:]])


def rho_norm(r: int) -> Fraction:
    return form(r, [1] * r, [1] * r)


def simple_root(r: int, i: int) -> Labels:
    """Dynkin labels of the simple root alpha_i (row i of the Cartan matrix), 1 <= i <= r."""
    out = [0] * r
    out[i - 1] = 2
    if i > 1:
        out[i - 2] = -1
    if i < r:
        out[i] = -1
    return tuple(out)


# ---------------------------------------------------------------- e-coordinates

def to_e(finite: Sequence[int]) -> list[int]:
    """Finite Dynkin labels (x_1..x_r) -> e-coordinates of length r + 1 with last entry 0."""
    e = [0] * (len(finite) + 1)
    acc = 0
    for a in range(len(finite) - 1, -1, -1):
        acc += finite[a]
        e[a] = acc
    return e


def from_e(e: Sequence[int]) -> Labels:
    return tuple(e[a] - e[a + 1] for a in range(len(e) - 1))


def rho_e(r: int) -> list[int]:
    return list(range(r, -1, -1))


def permutation_parity(perm: Sequence[int]) -> int:
    """+1 for even permutations, -1 for odd."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def finite_fold_e(v: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """Bring an e-vector into the strictly decreasing chamber.

    Returns ``(sorted vector, sign of the permutation)`` or ``(None, 0)`` when
    two entries coincide (the vector lies on a wall).
    """
    order = sorted(range(len(v)), key=lambda a: -v[a])
    out = tuple(v[a] for a in order)
    for a in range(len(out) - 1):
        if out[a] == out[a + 1]:
            return None, 0
    return out, permutation_parity(order)


def affine_fold_e(v: Sequence[int], level: int) -> tuple[tuple[int, ...] | None, int]:
    """Fold an integral e-vector into the fundamental alcove at ``level``.

    The affine Weyl group acts as coordinate permutations together with
    translations by ``level * (e_a - e_b)``.  The output is strictly
    decreasing with spread below ``level``.  Returns ``(None, 0)`` when the
    vector is fixed by an affine reflection.
    """
    rbar = len(v)
    res = [x % level for x in v]
    if len(set(res)) < rbar:
        return None, 0
    shift = sum((x - y) // level for x, y in zip(v, res))
    order = sorted(range(rbar), key=lambda a: -res[a])
    out = [res[a] for a in order]
    # translations must lie in level * (root lattice): fix the total via J-type rotations
    for _ in range(shift % rbar):
        out = [out[-1] + level] + out[:-1]
        order = [order[-1]] + order[:-1]
    return tuple(out), permutation_parity(order)


def alcove_labels(folded: Sequence[int], level: int) -> Labels:
    """Affine Dynkin labels of a folded e-vector (all >= 1, summing to ``level``)."""
    fin = from_e(folded)
    return (level - (folded[0] - folded[-1]),) + fin


def affine_fold(spec: AlgebraSpec, i: int, shifted: Sequence[int]) -> tuple[Labels | None, int]:
    """Fold shifted affine labels (nu + rho) of factor i at level kbar_i.

    Only the finite labels ``shifted[1:]`` are read; label 0 is implied by the
    level.  Returns the dominant level-k_i weight (rho subtracted) and the
    sign of the folding word, or ``(None, 0)`` on a wall.
    """
    r = spec.rank(i)
    if len(shifted) != r + 1:
        raise ValueError(f"factor {i} needs {r + 1} labels, got {len(shifted)}")
    kbar = spec.kbar(i)
    folded, sign = affine_fold_e(to_e(shifted[1:]), kbar)
    if folded is None:
        return None, 0
    return tuple(x - 1 for x in alcove_labels(folded, kbar)), sign


def weyl_dimension(finite: Sequence[int]) -> int:
    """Dimension of the finite A_r irrep with highest weight ``finite``."""
    l = [x + y for x, y in zip(to_e(finite), rho_e(len(finite)))]
    num = den = 1
    for a, b in itertools.combinations(range(len(l)), 2):
        num *= l[a] - l[b]
        den *= b - a
    return num // den


def weights_to_json(ws: Iterable[Weight]) -> list:
    return [[list(lab) for lab in w] for w in ws]
