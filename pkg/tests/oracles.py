"""Independent reference computations used by the tests.

Nothing here imports the discriminant-form or glue machinery of the
package: the oracles work from Gram matrices (or from plain counting) so
that agreement is evidence rather than tautology.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def count_configurations(max_rank: int) -> int:
    """Number of nonempty multisets of ADE types of total rank <= max_rank.

    Coefficients of prod_r (1 - x^r)^(-a(r)) with a(r) the number of
    irreducible root systems of rank r.
    """
    poly = np.zeros(max_rank + 1, dtype=object)
    poly[0] = 1
    for r in range(1, max_rank + 1):
        a = 1 + (r >= 4) + (r in (6, 7, 8))
        for _ in range(a):
            # multiply by 1/(1 - x^r)
            for k in range(r, max_rank + 1):
                poly[k] += poly[k - r]
    return int(sum(poly[1:]))


def _inverse(G) -> list[list[Fraction]]:
    n = len(G)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def short_dual_vectors(G, bound: float):
    """All y in Z^n with -y^T G^{-1} y <= bound (G negative definite).

    Plain Fincke-Pohst on the positive definite matrix P = -G^{-1}; the
    returned norms are exact Fractions.
    """
    Ginv = _inverse(G)
    n = len(G)
    P = -np.array([[float(x) for x in row] for row in Ginv])
    L = np.linalg.cholesky(P)  # P = L L^T
    # write y^T P y = sum_i (L^T y)_i^2 and enumerate from the last coordinate
    R = L.T
    out = []
    y = [0] * n

    def rec(i, partial):
        if i < 0:
            norm = -sum(Fraction(y[a]) * Ginv[a][b] * y[b] for a in range(n) for b in range(n))
            if norm <= Fraction(bound).limit_denominator(10**6):
                out.append((tuple(y), norm))
            return
        # (R y)_i = R[i,i] y_i + sum_{j>i} R[i,j] y_j
        c = sum(R[i, j] * y[j] for j in range(i + 1, n))
        room = bound - partial + 1e-9
        if room < 0:
            return
        half = math.sqrt(room) / R[i, i]
        centre = -c / R[i, i]
        for v in range(math.ceil(centre - half - 1e-9), math.floor(centre + half + 1e-9) + 1):
            y[i] = v
            t = R[i, i] * v + c
            rec(i - 1, partial + t * t)
        y[i] = 0

    rec(n - 1, 0.0)
    return Ginv, out


def coset_minima(G, bound: float = 3.0) -> dict[tuple, Fraction]:
    """Minimal norm -v.v of every coset of L in its dual, keyed by v mod L.

    The dual vector of y is v = G^{-1} y in the root basis; its coset is
    determined by the fractional parts of those coordinates.
    """
    Ginv, vecs = short_dual_vectors(G, bound)
    n = len(G)
    best: dict[tuple, Fraction] = {}
    for y, norm in vecs:
        v = [sum(Ginv[a][b] * y[b] for b in range(n)) for a in range(n)]
        key = tuple(x - math.floor(x) for x in v)
        if key not in best or norm < best[key]:
            best[key] = norm
    return best


def _val(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        return 10**9
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit(x: Fraction, p: int) -> Fraction:
    return Fraction(x) / Fraction(p) ** _val(x, p)


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def odd_nonunimodular_part(G, p: int) -> tuple[int, int]:
    """(length, Legendre symbol of det) of the non-unimodular part of L (x) Z_p.

    Diagonalises the Gram matrix over Q_p with minimal-valuation pivots.
    """
    A = [[Fraction(x) for x in row] for row in G]
    diag = []
    while A:
        n = len(A)
        v, i = min((_val(A[k][k], p), k) for k in range(n))
        off = min(((_val(A[a][b], p), a, b) for a in range(n) for b in range(n) if a != b), default=(10**9, 0, 0))
        if off[0] < v:
            _, a, b = off
            for k in range(n):
                A[a][k] += A[b][k]
            for k in range(n):
                A[k][a] += A[k][b]
            continue
        piv = A[i][i]
        diag.append(piv)
        rest = [k for k in range(n) if k != i]
        A = [[A[a][b] - A[a][i] * A[i][b] / piv for b in rest] for a in rest]
    part = [d for d in diag if _val(d, p) > 0]
    leg = 1
    for d in part:
        u = _unit(d, p)
        leg *= _legendre(u.numerator * u.denominator, p)
    return len(part), leg


def two_adic_nonunimodular_part(G):
    """2-adic Jordan blocks of an even lattice that are not unimodular.

    Returns a list of (valuation, size, unit of det mod 8).
    """
    A = [[Fraction(x) for x in row] for row in G]
    blocks = []
    while A:
        n = len(A)
        m = min(_val(A[a][b], 2) for a in range(n) for b in range(n))
        diag = [k for k in range(n) if _val(A[k][k], 2) == m]
        if diag:
            i = diag[0]
            piv = A[i][i]
            blocks.append((m, 1, piv))
            rest = [k for k in range(n) if k != i]
            A = [[A[a][b] - A[a][i] * A[i][b] / piv for b in rest] for a in rest]
            continue
        i, j = next((a, b) for a in range(n) for b in range(n) if a != b and _val(A[a][b], 2) == m)
        a_, b_, c_ = A[i][i], A[i][j], A[j][j]
        det = a_ * c_ - b_ * b_
        blocks.append((m, 2, det))
        inv = [[c_ / det, -b_ / det], [-b_ / det, a_ / det]]
        rest = [k for k in range(n) if k not in (i, j)]

        def proj(x, y):
            s = A[x][y]
            vx, vy = (A[x][i], A[x][j]), (A[i][y], A[j][y])
            for s1 in range(2):
                for s2 in range(2):
                    s -= vx[s1] * inv[s1][s2] * vy[s2]
            return s

        A = [[proj(x, y) for y in rest] for x in rest]
    out = []
    for v, size, det in blocks:
        if v >= 1:
            u = _unit(det, 2)
            out.append((v, size, (u.numerator * u.denominator) % 8))
    return out


def gram_embedding_test(G, rank: int, disc: int) -> bool:
    """Nikulin's existence test for the orthogonal complement, from a Gram matrix.

    Decides whether an even negative definite lattice with Gram matrix G
    embeds primitively into the even unimodular lattice of signature
    (3, 19), using only Q_p-diagonalisations of G.
    """
    if rank > 19:
        return False
    primes = [p for p in range(2, abs(disc) + 1) if disc % p == 0 and all(p % q for q in range(2, int(p**0.5) + 1))]
    lengths = {}
    odd = {}
    two = None
    for p in primes:
        if p == 2:
            two = two_adic_nonunimodular_part(G)
            lengths[2] = sum(s for _, s, _ in two)
        else:
            lengths[p], odd[p] = odd_nonunimodular_part(G, p)
    if any(l > 22 - rank for l in lengths.values()):
        return False
    for p, l in lengths.items():
        if l < 22 - rank:
            continue
        if p == 2:
            if any(v == 1 and s == 1 for v, s, _ in two):
                continue
            d = 1
            for _, _, u in two:
                d = d * u % 8
            u = disc // 2 ** _val(Fraction(disc), 2) % 8
            if u not in (d, (-d) % 8):
                return False
        else:
            u = -disc // p ** _val(Fraction(disc), p)
            if _legendre(u, p) != odd[p]:
                return False
    return True
