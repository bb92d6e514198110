"""Small exact integer linear algebra on lists of Python ints.

Matrices are lists of rows. Everything here is sized for discriminant-group
work (a few dozen rows at most), so clarity wins over asymptotics.
"""

from __future__ import annotations

from math import gcd

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf_rows(a: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ a == h``; the nonzero
    rows of ``h`` come first and are in echelon form with positive pivots.
    """
    h = [list(r) for r in a]
    m = len(h)
    n = ncols if ncols is not None else (len(h[0]) if h else 0)
    u = identity(m)
    row = 0
    for col in range(n):
        if row >= m:
            break
        for i in range(row + 1, m):
            if h[i][col] == 0:
                continue
            a0, b0 = h[row][col], h[i][col]
            g, s, t = _xgcd(a0, b0)
            x, y = a0 // g, b0 // g
            r0, r1 = h[row], h[i]
            h[row] = [s * p + t * q for p, q in zip(r0, r1)]
            h[i] = [-y * p + x * q for p, q in zip(r0, r1)]
            u0, u1 = u[row], u[i]
            u[row] = [s * p + t * q for p, q in zip(u0, u1)]
            u[i] = [-y * p + x * q for p, q in zip(u0, u1)]
        if h[row][col] == 0:
            continue
        if h[row][col] < 0:
            h[row] = [-v for v in h[row]]
            u[row] = [-v for v in u[row]]
        piv = h[row][col]
        for i in range(row):
            f = h[i][col] // piv
            if f:
                h[i] = [p - f * q for p, q in zip(h[i], h[row])]
                u[i] = [p - f * q for p, q in zip(u[i], u[row])]
        row += 1
    return h, u


def lattice_basis(rows: Matrix, ncols: int) -> Matrix:
    """Basis (HNF rows) of the lattice spanned by ``rows``."""
    if not rows:
        return []
    h, _ = hnf_rows(rows, ncols)
    return [r for r in h if any(r)]


def solve_in_basis(basis: Matrix, vectors: Matrix) -> Matrix:
    """Integer coordinates of each vector with respect to an HNF ``basis``.

    ``basis`` must be square-free of zero rows and in echelon form (as
    returned by :func:`lattice_basis`); raises if a vector is not in the
    lattice.
    """
    pivots = []
    for r in basis:
        pivots.append(next(j for j, v in enumerate(r) if v))
    out = []
    for v in vectors:
        rest = list(v)
        coords = []
        for r, j in zip(basis, pivots):
            c, rem = divmod(rest[j], r[j])
            if rem:
                raise ValueError("vector not in lattice")
            coords.append(c)
            if c:
                rest = [p - c * q for p, q in zip(rest, r)]
        if any(rest):
            raise ValueError("vector not in lattice")
        out.append(coords)
    return out


def smith_form(a: Matrix) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form of a square nonsingular integer matrix.

    Returns ``(d, u, vinv)`` with ``u @ a @ v == diag(d)`` for some unimodular
    ``v`` whose inverse is ``vinv``; ``d`` is nonnegative and each entry
    divides the next.
    """
    n = len(a)
    s = [list(r) for r in a]
    u = identity(n)
    vinv = identity(n)

    def col_op(j1: int, j2: int, p: int, q: int, r: int, t: int):
        # columns (c1, c2) <- (p c1 + q c2, r c1 + t c2); det = p t - q r = 1
        for row in s:
            c1, c2 = row[j1], row[j2]
            row[j1], row[j2] = p * c1 + q * c2, r * c1 + t * c2
        # inverse acts on rows of vinv: (r1, r2) <- (t r1 - r r2, -q r1 + p r2)
        r1, r2 = vinv[j1], vinv[j2]
        vinv[j1] = [t * x - r * y for x, y in zip(r1, r2)]
        vinv[j2] = [-q * x + p * y for x, y in zip(r1, r2)]

    def row_op(i1: int, i2: int, p: int, q: int, r: int, t: int):
        r1, r2 = s[i1], s[i2]
        s[i1] = [p * x + q * y for x, y in zip(r1, r2)]
        s[i2] = [r * x + t * y for x, y in zip(r1, r2)]
        r1, r2 = u[i1], u[i2]
        u[i1] = [p * x + q * y for x, y in zip(r1, r2)]
        u[i2] = [r * x + t * y for x, y in zip(r1, r2)]

    def swap_cols(j1: int, j2: int):
        if j1 != j2:
            for row in s:
                row[j1], row[j2] = row[j2], row[j1]
            vinv[j1], vinv[j2] = vinv[j2], vinv[j1]

    def swap_rows(i1: int, i2: int):
        if i1 != i2:
            s[i1], s[i2] = s[i2], s[i1]
            u[i1], u[i2] = u[i2], u[i1]

    for k in range(n):
        while True:
            entries = [(abs(s[i][j]), i, j) for i in range(k, n) for j in range(k, n) if s[i][j]]
            if not entries:
                raise ValueError("singular matrix in smith_form")
            _, i0, j0 = min(entries)
            swap_rows(k, i0)
            swap_cols(k, j0)
            done = True
            for i in range(k + 1, n):
                if s[i][k]:
                    if s[i][k] % s[k][k] == 0:
                        row_op(k, i, 1, 0, -(s[i][k] // s[k][k]), 1)
                        continue
                    g, x, y = _xgcd(s[k][k], s[i][k])
                    a0, b0 = s[k][k] // g, s[i][k] // g
                    row_op(k, i, x, y, -b0, a0)
            for j in range(k + 1, n):
                if s[k][j]:
                    if s[k][j] % s[k][k] == 0:
                        col_op(k, j, 1, 0, -(s[k][j] // s[k][k]), 1)
                        continue
                    g, x, y = _xgcd(s[k][k], s[k][j])
                    a0, b0 = s[k][k] // g, s[k][j] // g
                    col_op(k, j, x, y, -b0, a0)
                    done = False
            if any(s[i][k] for i in range(k + 1, n)):
                continue
            if not done:
                continue
            piv = s[k][k]
            bad = next(
                ((i, j) for i in range(k + 1, n) for j in range(k + 1, n) if s[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # fold the offending row into row k so its entry feeds the gcd
            row_op(k, bad[0], 1, 1, 0, 1)
        if s[k][k] < 0:
            s[k] = [-x for x in s[k]]
            u[k] = [-x for x in u[k]]
    return [s[i][i] for i in range(n)], u, vinv


def quotient_structure(big: Matrix, small: Matrix) -> tuple[list[int], Matrix]:
    """Cyclic decomposition of ``big / small`` for full-rank lattices.

    ``big`` and ``small`` are bases (rows, same ambient dimension) of
    lattices with ``small`` contained in ``big``. Returns ``(orders, gens)``
    where each generator is an ambient vector and the quotient is the direct
    sum of the cyclic groups they generate; trivial factors are dropped.
    """
    rel = solve_in_basis(big, small)
    d, _, vinv = smith_form(rel)
    gens = matmul(vinv, big)
    orders, out = [], []
    for di, g in zip(d, gens):
        if di != 1:
            orders.append(di)
            out.append(g)
    return orders, out


def kernel_mod(m: Matrix, modulus: int, ncols: int) -> Matrix:
    """Basis of the lattice ``{x in Z^ncols : m @ x == 0 (mod modulus)}``."""
    r = len(m)
    if r == 0:
        return identity(ncols)
    # rows: [e_i | m^T row i] for x-part, then [0 | modulus * e_j]
    stacked = [[int(i == j) for j in range(ncols)] + [m[k][i] for k in range(r)] for i in range(ncols)]
    stacked += [[0] * ncols + [modulus * int(j == k) for k in range(r)] for j in range(r)]
    # eliminate the last r columns first: reorder columns so they lead
    perm = list(range(ncols, ncols + r)) + list(range(ncols))
    reordered = [[row[c] for c in perm] for row in stacked]
    h, _ = hnf_rows(reordered, ncols + r)
    sols = [row[r:] for row in h if not any(row[:r]) and any(row[r:])]
    return lattice_basis(sols, ncols)


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
