"""Exact dense linear algebra and univariate polynomials over prime fields.

Matrices act on column vectors: a map from a d-dimensional space to an
e-dimensional space is an e x d matrix.  All entries are stored reduced
mod p in int64 numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import NoSolutionError

_INV_TABLE_CAP = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The prime field F_p, p <= 2**31."""

    __slots__ = ("p", "_inv_table")

    def __init__(self, p: int):
        p = int(p)
        if p > 2**31:
            raise ValueError(f"modulus {p} too large (need p <= 2^31)")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self._inv_table = None

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.p < _INV_TABLE_CAP:
            if self._inv_table is None:
                t = np.zeros(self.p, dtype=np.int64)
                for x in range(1, self.p):
                    t[x] = pow(x, self.p - 2, self.p)
                self._inv_table = t
            return int(self._inv_table[a])
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F{self.p}"


class Matrix:
    """Immutable dense matrix over a prime field."""

    __slots__ = ("field", "a")

    def __init__(self, field: PrimeField, data):
        a = np.asarray(data, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"matrix data must be 2-dimensional, got shape {a.shape}")
        a = np.mod(a, field.p)
        a.setflags(write=False)
        self.field = field
        self.a = a

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __add__(self, other):
        self._check(other)
        return Matrix(self.field, self.a + other.a)

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.field, self.a - other.a)

    def __neg__(self):
        return Matrix(self.field, -self.a)

    def __matmul__(self, other):
        self._check_mul(other)
        return Matrix(self.field, _matmul_mod(self.a, other.a, self.field.p))

    def scale(self, c: int):
        return Matrix(self.field, self.a * (int(c) % self.field.p))

    def transpose(self):
        return Matrix(self.field, self.a.T)

    def hstack(self, other):
        self._check_field(other)
        return Matrix(self.field, np.hstack([self.a, other.a]))

    def vstack(self, other):
        self._check_field(other)
        return Matrix(self.field, np.vstack([self.a, other.a]))

    def column(self, j):
        return Matrix(self.field, self.a[:, j : j + 1])

    def take_columns(self, idx):
        return Matrix(self.field, self.a[:, list(idx)])

    def submatrix(self, row_slice, col_slice):
        return Matrix(self.field, self.a[row_slice, col_slice])

    def is_zero(self) -> bool:
        return not self.a.any()

    def rank(self) -> int:
        return int(_rref_inplace(self.a.copy(), self.field.p)[1])

    def tolist(self):
        return self.a.tolist()

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.a.shape == self.a.shape
            and bool(np.array_equal(other.a, self.a))
        )

    def __hash__(self):
        return hash((self.field.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"Matrix({self.field}, {self.a.tolist()})"

    def _check(self, other):
        self._check_field(other)
        if other.a.shape != self.a.shape:
            raise ValueError(f"shape mismatch {self.a.shape} vs {other.a.shape}")

    def _check_field(self, other):
        if not isinstance(other, Matrix) or other.field != self.field:
            raise ValueError("field mismatch")

    def _check_mul(self, other):
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.a.shape} by {other.a.shape}")


def hstack_all(field, mats, rows=None):
    arrays = [m.a for m in mats if m.cols > 0] or [np.zeros((rows or 0, 0), dtype=np.int64)]
    return Matrix(field, np.hstack(arrays))


def vstack_all(field, mats, cols=None):
    arrays = [m.a for m in mats if m.rows > 0] or [np.zeros((0, cols or 0), dtype=np.int64)]
    return Matrix(field, np.vstack(arrays))


def block_diag(field, mats):
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(field, out)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 products are safe as long as the dot-product accumulator
    # k*(p-1)^2 stays below 2^63; fall back to python ints otherwise.
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if k * (p - 1) * (p - 1) < 2**62:
        return (a @ b) % p
    return ((a.astype(object) @ b.astype(object)) % p).astype(np.int64)


def _inv_vector(field: PrimeField, values: np.ndarray) -> np.ndarray:
    return np.array([field.inv(int(v)) for v in values], dtype=np.int64)


def _rref_inplace(a: np.ndarray, p: int):
    """Row-reduce `a` in place; returns (pivot column list, rank).

    Deterministic convention: leftmost pivot column, topmost nonzero row,
    pivot scaled to 1, full elimination above and below.
    """
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        pivval = int(a[r, c])
        if pivval != 1:
            a[r] = (a[r] * pow(pivval, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        touched = np.nonzero(col)[0]
        if touched.size:
            a[touched] = (a[touched] - np.outer(col[touched], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots, len(pivots)


def rref(m: Matrix):
    """Reduced row echelon form.  Returns (rref matrix, pivot columns, rank)."""
    a = m.a.copy()
    pivots, rank = _rref_inplace(a, m.field.p)
    return Matrix(m.field, a), tuple(pivots), rank


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space {v : m v = 0}."""
    a = m.a.copy()
    p = m.field.p
    pivots, rank = _rref_inplace(a, p)
    cols = m.cols
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-a[i, fc]) % p
    return Matrix(m.field, basis)


def left_kernel_basis(m: Matrix) -> Matrix:
    """Rows form a basis of {u : u m = 0}."""
    return kernel_basis(m.transpose()).transpose()


def column_space_basis(m: Matrix) -> Matrix:
    """Pivot columns of m, in order: a deterministic basis of the image."""
    _, pivots, _ = rref(m)
    return m.take_columns(pivots)


def solve(a: Matrix, b: Matrix) -> Matrix:
    """Particular solution x of a x = b with free variables set to 0.

    b may have several columns; raises NoSolutionError when inconsistent.
    """
    if a.rows != b.rows:
        raise ValueError(f"row mismatch {a.rows} vs {b.rows}")
    p = a.field.p
    aug = np.hstack([a.a, b.a])
    pivots, _ = _rref_inplace(aug, p)
    n = a.cols
    x = np.zeros((n, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        if c >= n:
            raise NoSolutionError("inconsistent linear system")
        x[c] = aug[i, n:]
    return Matrix(a.field, x)


def in_column_span(basis: Matrix, v: Matrix) -> bool:
    try:
        solve(basis, v)
        return True
    except NoSolutionError:
        return False


class CoordinateSolver:
    """Reusable coordinate extractor for a fixed full-column-rank basis.

    rref([B | I]) records row operations U with U B in echelon form; for a
    vector v in the span, the first `rank` entries of U v are the
    coordinates and the remaining entries vanish.
    """

    __slots__ = ("field", "rank", "_u")

    def __init__(self, basis: Matrix):
        field = basis.field
        aug = np.hstack([basis.a, np.eye(basis.rows, dtype=np.int64)])
        pivots, _ = _rref_inplace(aug, field.p)
        if sum(1 for c in pivots if c < basis.cols) != basis.cols:
            raise ValueError("basis columns are not linearly independent")
        self.field = field
        self.rank = basis.cols
        self._u = aug[:, basis.cols :]

    def coords(self, v: Matrix) -> Matrix:
        """Coordinates of each column of v; raises if v is not in the span."""
        w = _matmul_mod(self._u, v.a, self.field.p)
        if w[self.rank :].any():
            raise NoSolutionError("vector not in span of basis")
        return Matrix(self.field, w[: self.rank])

    def contains(self, v: Matrix) -> bool:
        w = _matmul_mod(self._u, v.a, self.field.p)
        return not w[self.rank :].any()


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Univariate polynomial over F_p, coefficients ascending, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs):
        cs = [int(c) % field.p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def monic(self):
        if self.is_zero() or self.coeffs[-1] == 1:
            return self
        inv = self.field.inv(self.coeffs[-1])
        return Poly(self.field, [c * inv for c in self.coeffs])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return Poly(self.field, a)

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] -= c
        return Poly(self.field, a)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        p = self.field.p
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % p
        return Poly(self.field, out)

    def scale(self, c):
        return Poly(self.field, [c * a for a in self.coeffs])

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.field.p
        rem = list(self.coeffs)
        d = other.degree()
        lead_inv = self.field.inv(other.coeffs[-1])
        quot = [0] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] % p
            if c == 0:
                continue
            q = (c * lead_inv) % p
            quot[i - d] = q
            for j, b in enumerate(other.coeffs):
                rem[i - d + j] = (rem[i - d + j] - q * b) % p
        return Poly(self.field, quot), Poly(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.coeffs))

    def __call__(self, value: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * value + c) % self.field.p
        return acc

    def eval_matrix(self, m: Matrix) -> Matrix:
        acc = Matrix.zeros(m.field, m.rows, m.cols)
        for c in reversed(self.coeffs):
            acc = acc @ m + Matrix.identity(m.field, m.rows).scale(c)
        return acc

    def derivative(self):
        return Poly(self.field, [i * c for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else str(c))
        return "Poly(" + " + ".join(terms) + f" over {self.field})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: Poly, b: Poly):
    """Extended gcd: returns (g, u, v) with u a + v b = g, g monic."""
    field = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(field), Poly.zero(field)
    t0, t1 = Poly.zero(field), Poly.one(field)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead_inv = field.inv(r0.leading())
    return r0.scale(lead_inv), s0.scale(lead_inv), t0.scale(lead_inv)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    g = poly_gcd(a, b)
    return ((a * b) // g).monic()


def poly_powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.field)
    base = base % mod
    while e > 0:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def char_poly(m: Matrix) -> Poly:
    """Characteristic polynomial det(xI - m), monic of degree n.

    Reduces to Hessenberg form by similarity, then expands the leading
    principal minors; works over any prime field.
    """
    if m.rows != m.cols:
        raise ValueError("char_poly needs a square matrix")
    field = m.field
    p = field.p
    n = m.rows
    h = m.a.copy()
    for c in range(n - 2):
        nz = np.nonzero(h[c + 1 :, c])[0]
        if nz.size == 0:
            continue
        piv = c + 1 + int(nz[0])
        if piv != c + 1:
            h[[c + 1, piv]] = h[[piv, c + 1]]
            h[:, [c + 1, piv]] = h[:, [piv, c + 1]]
        inv = field.inv(int(h[c + 1, c]))
        for r in range(c + 2, n):
            f = int(h[r, c])
            if f == 0:
                continue
            factor = (f * inv) % p
            h[r] = (h[r] - factor * h[c + 1]) % p
            h[:, c + 1] = (h[:, c + 1] + factor * h[:, r]) % p
    # p_i(x) = (x - h[i,i]) p_{i-1} - sum_k h[k,i] (prod subdiag) p_{k-1}
    polys = [Poly.one(field)]
    x = Poly.x(field)
    for i in range(n):
        term = (x - Poly(field, (h[i, i],))) * polys[i]
        prod = 1
        for k in range(i - 1, -1, -1):
            prod = (prod * int(h[k + 1, k])) % p
            coeff = (int(h[k, i]) * prod) % p
            if coeff:
                term = term - polys[k].scale(coeff)
        polys.append(term)
    return polys[n]


def min_poly(m: Matrix) -> Poly:
    """Minimal polynomial: lcm of the relative minimal polynomials of the
    standard basis vectors (Krylov iteration)."""
    if m.rows != m.cols:
        raise ValueError("min_poly needs a square matrix")
    field = m.field
    p = field.p
    n = m.rows
    if n == 0:
        return Poly.one(field)
    result = Poly.one(field)
    for i in range(n):
        if result.degree() >= n:
            break
        v = np.zeros((n, 1), dtype=np.int64)
        v[i, 0] = 1
        if not result.is_zero() and not result.eval_matrix(m).a[:, i].any():
            continue
        krylov = v
        cur = v
        while True:
            cur = _matmul_mod(m.a, cur, p)
            try:
                c = solve(Matrix(field, krylov), Matrix(field, cur))
            except NoSolutionError:
                krylov = np.hstack([krylov, cur])
                continue
            coeffs = [(-int(c.a[j, 0])) % p for j in range(krylov.shape[1])] + [1]
            result = poly_lcm(result, Poly(field, coeffs))
            break
    return result


# factorization: squarefree / distinct-degree / equal-degree splitting


def _squarefree_decomposition(f: Poly):
    """Returns [(g, k)] with f monic = prod g^k, each g squarefree, k >= 1."""
    field = f.field
    p = field.p
    f = f.monic()
    out = []
    if f.degree() == 0:
        return out
    df = f.derivative()
    if df.is_zero():
        # f = g(x^p) = g(x)^p over the prime field
        g = Poly(field, f.coeffs[::p])
        for h, k in _squarefree_decomposition(g):
            out.append((h, k * p))
        return out
    c = poly_gcd(f, df)
    w = f // c
    k = 1
    while w.degree() > 0:
        y = poly_gcd(w, c)
        part = w // y
        if part.degree() > 0:
            out.append((part.monic(), k))
        w = y
        c = c // y
        k += 1
    if c.degree() > 0:
        # leftover factors have multiplicity divisible by p; c is a p-th
        # power, so the recursion takes the derivative-zero branch
        out.extend(_squarefree_decomposition(c))
    return out


def _distinct_degree(f: Poly):
    """For squarefree monic f: list of (product of irreducibles of degree d, d)."""
    field = f.field
    p = field.p
    out = []
    x = Poly.x(field)
    h = x
    rest = f
    d = 0
    while rest.degree() > 2 * (d + 1) - 1 and rest.degree() > 0:
        d += 1
        h = poly_powmod(h, p, rest)
        g = poly_gcd(h - x, rest)
        if g.degree() > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree() > 0:
        out.append((rest, rest.degree()))
    return out


def _equal_degree_split(f: Poly, d: int, rng) -> Poly:
    """A proper monic factor of f, where f is a product of >= 2 distinct
    irreducibles of degree d (Cantor-Zassenhaus)."""
    field = f.field
    p = field.p
    n = f.degree()
    while True:
        a = Poly(field, [int(rng.integers(0, p)) for _ in range(n)])
        if a.degree() < 1:
            continue
        g = poly_gcd(a, f)
        if 0 < g.degree() < n:
            return g
        if p == 2:
            # trace map sum a^(2^i) splits f with probability ~1/2
            b = a
            t = a
            for _ in range(d - 1):
                b = poly_powmod(b, 2, f)
                t = (t + b) % f
            g = poly_gcd(t, f)
        else:
            e = (p**d - 1) // 2
            t = poly_powmod(a, e, f) - Poly.one(field)
            g = poly_gcd(t, f)
        if 0 < g.degree() < n:
            return g


def _equal_degree_factor(f: Poly, d: int, rng):
    if f.degree() == d:
        return [f.monic()]
    g = _equal_degree_split(f, d, rng)
    return _equal_degree_factor(g, d, rng) + _equal_degree_factor(f // g, d, rng)


def factor(f: Poly, seed: int = 0):
    """Factor f into monic irreducibles: list of (irreducible, multiplicity),
    sorted by (degree, coefficients).  The leading coefficient of f is the
    unit dropped from the product; for monic f the product of the factors
    with multiplicities equals f exactly.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = np.random.default_rng(seed)
    found = {}
    for g, k in _squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree_factor(h, d, rng):
                key = irr.coeffs
                found[key] = found.get(key, 0) + k
    items = [(Poly(f.field, cs), mult) for cs, mult in found.items()]
    items.sort(key=lambda t: (t[0].degree(), t[0].coeffs))
    return items
