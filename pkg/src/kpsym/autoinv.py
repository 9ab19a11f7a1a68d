"""Automorphism invariants: construction, verification and classification.

A permutation is a tuple of weight indices (``p[t]`` is the image of weight
``t``).  Composition ``compose(p, q)`` applies ``q`` first.  Every invariant
is written canonically as ``sigma_pi o C^c o sigma_a``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .modular import TOL_U, ModularData, modular_data
from .weights import AlgebraSpec, Weight, conjugate, enumerate_weights, ktilde, rotate, t_of

Permutation = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Permutation, q: Permutation) -> Permutation:
    return tuple(p[x] for x in q)


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_bijection(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


@dataclass(frozen=True)
class AutoInvForm:
    """Canonical name ``(pi, c, a)`` of ``sigma_pi o C^c o sigma_a``."""

    pi: tuple[int, ...]
    c: tuple[int, ...]
    a: Matrix
    label: str = field(default="", compare=False)

    def to_json(self) -> dict:
        return {"pi": list(self.pi), "c": list(self.c), "a": [list(row) for row in self.a]}


class InvarianceCheck(NamedTuple):
    ok: bool
    kind: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_automorphism_invariant(md: ModularData, p: Sequence[int], tol: float = TOL_U) -> InvarianceCheck:
    """Exact T test then |S[p l, p m] - S[l, m]| <= tol for all pairs."""
    n = md.n
    if not is_bijection(p, n):
        return InvarianceCheck(False, "bijection", None)
    for lam in range(n):
        if md.texp[p[lam]] != md.texp[lam]:
            return InvarianceCheck(False, "T", (lam,))
    idx = np.asarray(p)
    diff = np.abs(md.S[np.ix_(idx, idx)] - md.S)
    worst = int(np.argmax(diff))
    if diff.flat[worst] > tol:
        return InvarianceCheck(False, "S", divmod(worst, n))
    return InvarianceCheck(True)


# ---------------------------------------------------------------- s = 1: sigma_m

def _sigma_m_conditions(r: int, k: int, m: int) -> list[str]:
    rbar = r + 1
    kt = ktilde(r, k)
    bad = []
    if m < 1 or rbar % m:
        return [f"m={m} does not divide rbar={rbar}"]
    if (m * kt) % 2:
        bad.append(f"m*ktilde = {m * kt} is odd")
    elif math.gcd(rbar // m, m * kt // 2) != 1:
        bad.append(f"gcd(rbar/m, m*ktilde/2) = gcd({rbar // m}, {m * kt // 2}) != 1")
    return bad


def _inverse_mod(x: int, mod: int) -> int:
    """Least positive v with v*x = 1 (mod mod)."""
    return 1 if mod == 1 else pow(x % mod, -1, mod)


def sigma_m_exponent(r: int, k: int, m: int) -> int:
    """The J-multiplier ``-v m`` of sigma_m, reduced mod rbar."""
    bad = _sigma_m_conditions(r, k, m)
    if bad:
        raise ValueError(f"sigma_{m} undefined for A_{r} level {k}: " + "; ".join(bad))
    rbar = r + 1
    v = _inverse_mod(m * ktilde(r, k) // 2, rbar // m)
    return (-v * m) % rbar


def _require_simple(spec: AlgebraSpec) -> tuple[int, int]:
    if spec.s != 1:
        raise ValueError("sigma_m is defined for a single simple factor")
    return spec.factors[0]


def sigma_m(spec: AlgebraSpec, m: int) -> Permutation:
    r, k = _require_simple(spec)
    e = sigma_m_exponent(r, k, m)
    return enumerate_weights(spec).permutation(lambda w: (rotate(w[0], e * t_of(w[0])),))


def valid_m(r: int, k: int) -> list[int]:
    return [m for m in range(1, r + 2) if (r + 1) % m == 0 and not _sigma_m_conditions(r, k, m)]


def enumerate_sigma_m(spec: AlgebraSpec) -> list[tuple[int, Permutation]]:
    """Valid divisors m with their permutations, duplicates (as permutations) dropped."""
    r, k = _require_simple(spec)
    out, seen = [], set()
    for m in valid_m(r, k):
        p = sigma_m(spec, m)
        if p not in seen:
            seen.add(p)
            out.append((m, p))
    return out


def product_m(r: int, m1: int, m2: int) -> int:
    return (r + 1) * math.gcd(m1, m2) ** 2 // (m1 * m2)


def closed_form_count(r: int, k: int) -> int:
    rbar = r + 1
    if r == 1 and k == 2:
        c = -1
    elif r == 1 or k <= 2:
        c = 0
    else:
        c = 1
    p = sum(1 for q in _prime_factors(rbar) if q % 2 and k % q)
    if r % 2 == 0 or k % 4 == 0 or (k % 2 == 1 and r % 4 == 1):
        t = 0
    else:
        t = 1
    return 2 ** (c + p + t)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------- sigma_pi, C^c, sigma_a

def sigma_pi(spec: AlgebraSpec, pi: Sequence[int]) -> Permutation:
    """Factor i of the image is factor pi[i] of the source (0-based)."""
    pi = tuple(pi)
    if sorted(pi) != list(range(spec.s)):
        raise ValueError(f"{pi} is not a permutation of the {spec.s} factors")
    for i, j in enumerate(pi):
        if spec.factors[i] != spec.factors[j]:
            raise ValueError(f"pi maps factor {j} {spec.factors[j]} onto factor {i} "
                             f"{spec.factors[i]}: ranks and levels must agree")
    return enumerate_weights(spec).permutation(lambda w: tuple(w[j] for j in pi))


def conjugation(spec: AlgebraSpec, c: Sequence[int]) -> Permutation:
    return enumerate_weights(spec).permutation(
        lambda w: tuple(conjugate(lab) if ci % 2 else lab for lab, ci in zip(w, c)))


def _as_matrix(spec: AlgebraSpec, a) -> Matrix:
    a = tuple(tuple(int(x) for x in row) for row in a)
    if len(a) != spec.s or any(len(row) != spec.s for row in a):
        raise ValueError(f"a must be {spec.s}x{spec.s}")
    return a


def check_a_conditions(spec: AlgebraSpec, a) -> list[str]:
    """Exact evaluation of the lattice, T-type and S-type congruences on ``a``."""
    a = _as_matrix(spec, a)
    s = spec.s
    rb = [spec.rbar(i) for i in range(s)]
    ks = [spec.level(i) for i in range(s)]
    bad = []
    for i in range(s):
        for j in range(s):
            if (a[i][j] * rb[i]) % rb[j]:
                bad.append(f"lattice[{i},{j}]: a_ij*rbar_i/rbar_j = {a[i][j] * rb[i]}/{rb[j]} not integral")
    for i in range(s):
        lhs = Fraction(2 * a[i][i], rb[i]) + sum(
            (Fraction(ks[j] * a[i][j] ** 2, rb[j]) for j in range(s)), Fraction(0))
        rhs = sum(ks[j] * a[i][j] for j in range(s))
        if (lhs - rhs) % 2:
            bad.append(f"t-phase[{i}]: {lhs} != {rhs} (mod 2)")
    for i in range(s):
        for j in range(i, s):
            val = Fraction(a[i][j], rb[j]) + Fraction(a[j][i], rb[i]) + sum(
                (Fraction(ks[l] * a[i][l] * a[j][l], rb[l]) for l in range(s)), Fraction(0))
            if val.denominator != 1:
                bad.append(f"s-phase[{i},{j}]: {val} != 0 (mod 1)")
    return bad


def reduce_matrix(spec: AlgebraSpec, a) -> Matrix:
    return tuple(tuple(x % spec.rbar(j) for j, x in enumerate(row)) for row in a)


def sigma_a_unchecked(spec: AlgebraSpec, a: Matrix) -> Permutation:
    s = spec.s

    def fn(w: Weight) -> Weight:
        ts = [t_of(lab) for lab in w]
        return tuple(rotate(w[j], sum(a[i][j] * ts[i] for i in range(s))) for j in range(s))

    return enumerate_weights(spec).permutation(fn)


def sigma_a(spec: AlgebraSpec, a) -> Permutation:
    a = _as_matrix(spec, a)
    bad = check_a_conditions(spec, a)
    if bad:
        raise ValueError("sigma_a conditions violated: " + "; ".join(bad))
    return sigma_a_unchecked(spec, a)


def a_inverse(spec: AlgebraSpec, a) -> Matrix:
    """b with sigma_b = sigma_a^{-1}: b_ij = rbar_j a_ji / rbar_i."""
    a = _as_matrix(spec, a)
    s = spec.s
    return reduce_matrix(spec, [[spec.rbar(j) * a[j][i] // spec.rbar(i) for j in range(s)]
                                for i in range(s)])


def compose_a(spec: AlgebraSpec, a, b) -> Matrix:
    """c with sigma_b o sigma_a = sigma_c (sigma_a applied first)."""
    a, b = _as_matrix(spec, a), _as_matrix(spec, b)
    s = spec.s
    ks = [spec.level(i) for i in range(s)]
    return reduce_matrix(spec, [[a[i][j] + b[i][j] + sum(ks[l] * a[i][l] * b[l][j] for l in range(s))
                                 for j in range(s)] for i in range(s)])


def form_permutation(spec: AlgebraSpec, form: AutoInvForm) -> Permutation:
    return compose(sigma_pi(spec, form.pi),
                   compose(conjugation(spec, form.c), sigma_a_unchecked(spec, form.a)))


# ---------------------------------------------------------------- enumeration

def block_permutations(spec: AlgebraSpec, fix_level_one: bool = True) -> list[tuple[int, ...]]:
    out = []
    for pi in itertools.permutations(range(spec.s)):
        if any(spec.factors[i] != spec.factors[j] for i, j in enumerate(pi)):
            continue
        if fix_level_one and any(pi[i] != i for i in range(spec.s) if spec.level(i) == 1):
            continue
        out.append(pi)
    return out


def _c_choices(spec: AlgebraSpec) -> list[tuple[int, ...]]:
    opts = [(0,) if r == 1 or k <= 2 else (0, 1) for r, k in spec.factors]
    return list(itertools.product(*opts))


def a_candidates(spec: AlgebraSpec) -> Iterator[Matrix]:
    """Residue matrices passing the lattice condition, lexicographic order.

    On an (r=1, k=2) factor J fixes (1,1) and t is even elsewhere, so the
    diagonal entry acts trivially; it is pinned to 0 to keep names unique.
    """
    s = spec.s
    ranges = []
    for i in range(s):
        for j in range(s):
            rb_i, rb_j = spec.rbar(i), spec.rbar(j)
            if i == j and spec.factors[i] == (1, 2):
                ranges.append((0,))
                continue
            step = rb_j // math.gcd(rb_i, rb_j)
            ranges.append(tuple(range(0, rb_j, step)))
    for flat in itertools.product(*ranges):
        yield tuple(tuple(flat[i * s:(i + 1) * s]) for i in range(s))


def valid_a_matrices(spec: AlgebraSpec) -> list[Matrix]:
    return [a for a in a_candidates(spec) if not check_a_conditions(spec, a)]


def canonical_forms(spec: AlgebraSpec) -> Iterator[AutoInvForm]:
    mats = valid_a_matrices(spec)
    for pi in block_permutations(spec):
        for c in _c_choices(spec):
            for a in mats:
                yield AutoInvForm(pi, c, a)


@lru_cache(maxsize=64)
def classify_product(spec: AlgebraSpec) -> tuple[tuple[AutoInvForm, Permutation], ...]:
    """Every sigma_pi o C^c o sigma_a over canonical triples, verified, first name kept."""
    md = modular_data(spec)
    out, seen = [], set()
    for form in canonical_forms(spec):
        p = form_permutation(spec, form)
        if p in seen:
            continue
        check = is_automorphism_invariant(md, p)
        if not check:
            raise ArithmeticError(f"{form} fails invariance ({check.kind} at {check.witness})")
        seen.add(p)
        out.append((form, p))
    return tuple(out)


def classify_simple(spec: AlgebraSpec) -> list[tuple[AutoInvForm, Permutation]]:
    """{C^c sigma_m} for a single factor, duplicates dropped (c = 0 entries first)."""
    r, k = _require_simple(spec)
    md = modular_data(spec)
    rbar = r + 1
    out, seen = [], set()
    for c in (0, 1):
        for m in valid_m(r, k):
            p = compose(conjugation(spec, (c,)), sigma_m(spec, m))
            if p in seen:
                continue
            check = is_automorphism_invariant(md, p)
            if not check:
                raise ArithmeticError(f"C^{c} sigma_{m} fails invariance ({check.kind})")
            seen.add(p)
            form = AutoInvForm((0,), (c,), ((sigma_m_exponent(r, k, m) % rbar,),),
                               label=f"C^{c} sigma_{m}")
            out.append((form, p))
    return out


def classify(spec: AlgebraSpec) -> list[tuple[AutoInvForm, Permutation]]:
    if spec.s == 1:
        return classify_simple(spec)
    return list(classify_product(spec))


def canonical_form(spec: AlgebraSpec, p: Permutation) -> AutoInvForm | None:
    for form, q in classify_product(spec):
        if q == p:
            return form
    return None


def compose_forms(spec: AlgebraSpec, A: AutoInvForm, B: AutoInvForm) -> AutoInvForm:
    """Canonical form of A o B (B applied first), found at the permutation level."""
    p = compose(form_permutation(spec, A), form_permutation(spec, B))
    form = canonical_form(spec, p)
    if form is None:
        raise ArithmeticError("composite is not in the enumerated canonical set")
    return form


def invariant_json(spec: AlgebraSpec, form: AutoInvForm, p: Permutation) -> dict:
    out = {"form": form.to_json(), "permutation": list(p)}
    if spec.s == 1 and form.label.startswith("C^"):
        c, m = form.label.split()
        out["type"] = "C^a sigma_m"
        out["a"] = int(c[2:])
        out["m"] = int(m.split("_")[1])
    return out


# ---------------------------------------------------------------- generator families

def _zero(s: int) -> list[list[int]]:
    return [[0] * s for _ in range(s)]


def _family_i(spec: AlgebraSpec) -> Iterator[tuple[str, Matrix]]:
    s = spec.s
    rb = [spec.rbar(i) for i in range(s)]
    kt = [spec.ktilde(i) for i in range(s)]
    for m in itertools.product(*(range(x) for x in rb)):
        u = sum((Fraction(kt[i] * m[i] * (rb[i] - m[i]), rb[i]) for i in range(s)), Fraction(0))
        N = math.lcm(*(rb[i] // math.gcd(m[i], rb[i]) for i in range(s)))
        Nu = N * u
        if Nu.denominator != 1 or Nu.numerator % 2:
            continue
        half = Nu.numerator // 2
        if math.gcd(half, N) != 1:
            continue
        v = _inverse_mod(half, N)
        a = [[v * (N * m[i] // rb[i]) * m[j] for j in range(s)] for i in range(s)]
        yield f"sigma[J^{list(m)}]", reduce_matrix(spec, a)


def _family_ii(spec: AlgebraSpec) -> Iterator[tuple[str, Matrix]]:
    s = spec.s
    rb = [spec.rbar(i) for i in range(s)]
    ks = [spec.level(i) for i in range(s)]
    primes = sorted({p for x in rb for p in _prime_factors(x)})
    for p in primes:
        for l, m in itertools.combinations(range(s), 2):
            if any(x % p for x in (rb[l], ks[l], rb[m], ks[m])):
                continue
            if p == 2 and ((rb[l] * ks[l]) % 8 or (rb[m] * ks[m]) % 8):
                continue
            a = _zero(s)
            a[l][m] = rb[m] // p
            a[m][l] = -rb[l] // p
            yield f"sigma[{p};{l + 1},{m + 1}]", reduce_matrix(spec, a)


def _family_iii(spec: AlgebraSpec) -> Iterator[tuple[str, Matrix]]:
    s = spec.s
    rb = [spec.rbar(i) for i in range(s)]
    ks = [spec.level(i) for i in range(s)]
    for l, m in itertools.combinations(range(s), 2):
        for n in range(s):
            if n in (l, m):
                continue
            if ks[l] % 2 == 0 or ks[m] % 2 == 0 or ks[n] % 4:
                continue
            if any(rb[x] % 4 != 2 for x in (l, m, n)):
                continue
            if (ks[l] * rb[l] + ks[m] * rb[m]) % 8:
                continue
            a = _zero(s)
            a[l][n] = a[m][n] = rb[n] // 2
            a[n][l] = rb[l] // 2
            a[n][m] = rb[m] // 2
            yield f"sigma[{l + 1},{m + 1},{n + 1}]", reduce_matrix(spec, a)


def _family_iv(spec: AlgebraSpec) -> Iterator[tuple[str, Matrix]]:
    s = spec.s
    rb = [spec.rbar(i) for i in range(s)]
    ks = [spec.level(i) for i in range(s)]
    for l, m, n, o in itertools.permutations(range(s), 4):
        if any(ks[x] % 2 == 0 or rb[x] % 4 != 2 for x in (l, m, n, o)):
            continue
        if (ks[m] * rb[m] + ks[n] * rb[n]) % 8 or (ks[l] * rb[l] + ks[o] * rb[o]) % 8:
            continue
        a = _zero(s)
        a[l][m] = a[o][m] = rb[m] // 2
        a[l][n] = a[o][n] = rb[n] // 2
        a[m][l] = a[n][l] = rb[l] // 2
        a[m][o] = a[n][o] = rb[o] // 2
        yield f"sigma[{l + 1},{m + 1},{n + 1},{o + 1}]", reduce_matrix(spec, a)


def generator_families(spec: AlgebraSpec) -> list[AutoInvForm]:
    """Instances of the four sigma_a generator families valid for ``spec``.

    Each returned matrix passes the congruence conditions; the caller is
    expected to verify the permutations against S and T.
    """
    s = spec.s
    ident = tuple(range(s))
    zero_c = (0,) * s
    out, seen = [], set()
    for family in (_family_i, _family_ii, _family_iii, _family_iv):
        for label, a in family(spec):
            if a in seen:
                continue
            bad = check_a_conditions(spec, a)
            if bad:
                raise ArithmeticError(f"{label} violates " + "; ".join(bad))
            seen.add(a)
            out.append(AutoInvForm(ident, zero_c, a, label=label))
    return out


def generated_group(gens: Iterable[Permutation], n: int) -> frozenset[Permutation]:
    gens = [tuple(g) for g in gens]
    e = identity(n)
    group = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(group)


def family_closure(spec: AlgebraSpec) -> frozenset[Permutation]:
    """Group generated by the C_i, the block permutations and the generator families."""
    n = enumerate_weights(spec).n
    gens = []
    for i in range(spec.s):
        c = [0] * spec.s
        c[i] = 1
        gens.append(conjugation(spec, c))
    gens += [sigma_pi(spec, pi) for pi in block_permutations(spec, fix_level_one=False)]
    gens += [sigma_a_unchecked(spec, f.a) for f in generator_families(spec)]
    return generated_group(gens, n)
