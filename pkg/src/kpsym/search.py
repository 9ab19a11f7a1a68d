"""Exhaustive search for all permutations preserving S and T.

Uses nothing from the classification: only the modular data, exact T
exponents, q-dimensions and Verlinde row sums (all forced to be preserved by
any S- and T-preserving permutation fixing kLambda_0).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Sequence

import numpy as np

from .modular import TOL_U, ModularData

DEFAULT_BOUND = 200
Q_ROUND = 1e-7


class SearchBoundError(ValueError):
    pass


def verlinde_row_sums(md: ModularData) -> np.ndarray:
    """R[l, m] = sum_n N_{l m}^n, rounded to integers."""
    S = md.S
    w = S.conj().sum(axis=0) / S[0]
    R = (S * w) @ S.T
    return np.rint(R.real).astype(np.int64)


def signature_classes(md: ModularData) -> list[int]:
    """Class id per weight: (Texp, rounded Q, sorted Verlinde row-sum multiset)."""
    S = md.S
    q = (S[:, 0] / S[0, 0]).real
    # cluster q by gaps rather than rounding, so equal values never straddle a grid line
    qclass = [0] * md.n
    order = np.argsort(q, kind="stable")
    label = 0
    for prev, cur in zip(order, order[1:]):
        if q[cur] - q[prev] > Q_ROUND:
            label += 1
        qclass[cur] = label
    R = verlinde_row_sums(md)
    keys = [(md.texp[t], qclass[t], tuple(sorted(R[t]))) for t in range(md.n)]
    ids: dict = {}
    return [ids.setdefault(key, len(ids)) for key in keys]


def search_all(md: ModularData, bound: int = DEFAULT_BOUND, tol: float = TOL_U) -> list[tuple[int, ...]]:
    """Every permutation sigma with S[sl, sm] = S[l, m] and T[sl] = T[l]; sorted."""
    n = md.n
    if n > bound:
        raise SearchBoundError(f"{n} weights exceeds the search bound {bound}")
    S = md.S
    R = verlinde_row_sums(md)
    cls = signature_classes(md)
    members = defaultdict(list)
    for t, c in enumerate(cls):
        members[c].append(t)

    # candidate domains; kLambda_0 is the only strictly positive row, so it is pinned
    domains = {t: set(members[cls[t]]) for t in range(n)}
    domains[0] = {0}
    for t in range(1, n):
        domains[t].discard(0)
    class_size = {t: len(members[cls[t]]) for t in range(n)}

    results: list[tuple[int, ...]] = []
    assign: dict[int, int] = {}

    def consistent(lam: int, img: int) -> bool:
        if abs(S[lam, lam] - S[img, img]) > tol:
            return False
        for mu, nu in assign.items():
            if abs(S[lam, mu] - S[img, nu]) > tol or R[lam, mu] != R[img, nu]:
                return False
        return True

    def prune(doms, lam, img):
        """Forward check: drop candidates incompatible with lam -> img."""
        out = {}
        for mu, dom in doms.items():
            keep = {c for c in dom if c != img
                    and abs(S[mu, lam] - S[c, img]) <= tol and R[mu, lam] == R[c, img]}
            if not keep:
                return None
            out[mu] = keep
        return out

    def rec(doms):
        if not doms:
            results.append(tuple(assign[t] for t in range(n)))
            return
        lam = min(doms, key=lambda t: (len(doms[t]), class_size[t], t))
        rest = {t: d for t, d in doms.items() if t != lam}
        for img in sorted(doms[lam]):
            if not consistent(lam, img):
                continue
            nxt = prune(rest, lam, img)
            if nxt is None:
                continue
            assign[lam] = img
            rec(nxt)
            del assign[lam]

    rec(domains)
    return sorted(results)


def brute_force(md: ModularData, tol: float = TOL_U, max_n: int = 9) -> list[tuple[int, ...]]:
    """Literal filter over all n! permutations (tiny instances only)."""
    n = md.n
    if n > max_n:
        raise SearchBoundError(f"brute force limited to n <= {max_n}, got {n}")
    S = md.S
    texp = md.texp
    out = []
    for p in itertools.permutations(range(n)):
        if any(texp[p[t]] != texp[t] for t in range(n)):
            continue
        idx = np.asarray(p)
        if np.max(np.abs(S[np.ix_(idx, idx)] - S)) <= tol:
            out.append(p)
    return out


def search_report(results: Sequence[Sequence[int]], classified: Sequence[Sequence[int]]) -> dict:
    found = {tuple(p) for p in results}
    predicted = {tuple(p) for p in classified}
    return {"unexplained": sorted(found - predicted),
            "not_found": sorted(predicted - found),
            "agree": found == predicted,
            "search_count": len(found),
            "classified_count": len(predicted)}
