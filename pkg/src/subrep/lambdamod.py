"""Structure theory of finite-dimensional modules over k[T]/T^n.

A module is a vector space with a nilpotent operator t, t^n = 0.  Every
module is a direct sum of "blocks": cyclic modules of dimension d <= n,
and the multiset of block sizes is a complete isomorphism invariant.
The free module of rank one (a single block of size n) is both projective
and injective since the algebra is self-injective.
"""

from __future__ import annotations

import numpy as np

from .errors import InternalContractViolation, NoSolutionError
from .ffmat import (
    CoordinateSolver,
    Matrix,
    PrimeField,
    _matmul_mod,
    column_space_basis,
    kernel_basis,
    solve,
)


class LambdaAlgebra:
    """k[T]/T^n over a prime field; n = 2 is the default elsewhere."""

    __slots__ = ("field", "n")

    def __init__(self, field: PrimeField, n: int = 2):
        if n < 1:
            raise ValueError("nilpotency bound must be >= 1")
        self.field = field
        self.n = int(n)

    def __eq__(self, other):
        return (
            isinstance(other, LambdaAlgebra)
            and other.field == self.field
            and other.n == self.n
        )

    def __hash__(self):
        return hash((self.field.p, self.n))

    def __repr__(self):
        return f"{self.field}[T]/T^{self.n}"


class LambdaModule:
    """A module over k[T]/T^n: the matrix of the T-action."""

    __slots__ = ("algebra", "t")

    def __init__(self, algebra: LambdaAlgebra, t: Matrix):
        if t.rows != t.cols:
            raise ValueError("operator matrix must be square")
        power = Matrix.identity(algebra.field, t.rows)
        for _ in range(algebra.n):
            power = power @ t
        if not power.is_zero():
            raise ValueError(f"operator does not satisfy t^{algebra.n} = 0")
        self.algebra = algebra
        self.t = t

    @property
    def dim(self) -> int:
        return self.t.rows

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, Matrix.zeros(algebra.field, 0, 0))

    @classmethod
    def simple(cls, algebra):
        return cls(algebra, Matrix.zeros(algebra.field, 1, 1))

    @classmethod
    def free(cls, algebra, rank: int = 1):
        """Lambda^rank with basis g, Tg, ..., T^(n-1)g per free generator."""
        n = algebra.n
        t = np.zeros((n * rank, n * rank), dtype=np.int64)
        for b in range(rank):
            for j in range(n - 1):
                t[b * n + j + 1, b * n + j] = 1
        return cls(algebra, Matrix(algebra.field, t))

    @classmethod
    def block(cls, algebra, size: int):
        """A single cyclic module of dimension size <= n."""
        if not 1 <= size <= algebra.n:
            raise ValueError("block size out of range")
        t = np.zeros((size, size), dtype=np.int64)
        for j in range(size - 1):
            t[j + 1, j] = 1
        return cls(algebra, Matrix(algebra.field, t))

    def __eq__(self, other):
        return (
            isinstance(other, LambdaModule)
            and other.algebra == self.algebra
            and other.t == self.t
        )

    def __hash__(self):
        return hash((self.algebra, self.t))

    def __repr__(self):
        return f"LambdaModule(dim={self.dim} over {self.algebra})"


def direct_sum_modules(mods):
    algebra = mods[0].algebra
    field = algebra.field
    dims = [m.dim for m in mods]
    total = sum(dims)
    t = np.zeros((total, total), dtype=np.int64)
    o = 0
    for m in mods:
        t[o : o + m.dim, o : o + m.dim] = m.t.a
        o += m.dim
    return LambdaModule(algebra, Matrix(field, t))


def is_equivariant(f: Matrix, src: LambdaModule, dst: LambdaModule) -> bool:
    if f.rows != dst.dim or f.cols != src.dim:
        return False
    return f @ src.t == dst.t @ f


def block_invariants(m: LambdaModule):
    """Multiset of block sizes, sorted descending.

    The count of blocks of size exactly s is
    rank(t^(s-1)) - 2 rank(t^s) + rank(t^(s+1)).
    """
    n = m.algebra.n
    ranks = [m.dim]
    power = Matrix.identity(m.algebra.field, m.dim)
    for _ in range(n + 1):
        power = power @ m.t
        ranks.append(power.rank())
    out = []
    for s in range(1, n + 1):
        count = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        out.extend([s] * count)
    return tuple(sorted(out, reverse=True))


def socle(m: LambdaModule) -> Matrix:
    """Basis of soc(m) = ker t as columns."""
    return kernel_basis(m.t)


def jordan_chains(m: LambdaModule):
    """Deterministic Jordan decomposition of the nilpotent operator.

    Returns a list of (head, size) with head a dim x 1 column; the vectors
    head, t head, ..., t^(size-1) head over all chains form a basis.
    Chains are listed largest size first; within a size, heads are chosen
    greedily from kernel bases in their deterministic column order.
    """
    field = m.algebra.field
    n = m.algebra.n
    dim = m.dim
    if dim == 0:
        return []
    powers = [Matrix.identity(field, dim)]
    for _ in range(n):
        powers.append(powers[-1] @ m.t)
    kernels = [kernel_basis(powers[s]) for s in range(n + 1)]
    chains = []
    # avoid = K_{s-1} + span of larger chains pushed down into K_s
    for s in range(n, 0, -1):
        cols = [kernels[s - 1].a]
        for head, size in chains:
            cols.append(_matmul_mod(powers[size - s].a, head.a, field.p))
        current = Matrix(field, np.hstack(cols))
        cur_rank = current.rank()
        candidates = kernels[s]
        for j in range(candidates.cols):
            v = candidates.column(j)
            trial = current.hstack(v)
            trial_rank = trial.rank()
            if trial_rank > cur_rank:
                chains.append((v, s))
                current, cur_rank = trial, trial_rank
    total = sum(size for _, size in chains)
    if total != dim:
        raise InternalContractViolation("jordan chain sizes do not sum to dim")
    chains.sort(key=lambda c: -c[1])
    return chains


def jordan_basis(m: LambdaModule):
    """(basis matrix J, block sizes): columns of J are the chain vectors
    head, t head, ... per chain, largest blocks first."""
    field = m.algebra.field
    chains = jordan_chains(m)
    cols = []
    sizes = []
    for head, size in chains:
        v = head.a
        for _ in range(size):
            cols.append(v)
            v = _matmul_mod(m.t.a, v, field.p)
        sizes.append(size)
    if cols:
        j = Matrix(field, np.hstack(cols))
    else:
        j = Matrix.zeros(field, m.dim, 0)
    return j, tuple(sizes)


def is_injective_module(m: LambdaModule) -> bool:
    """Injective = projective = free: all blocks have size n."""
    inv = block_invariants(m)
    return all(s == m.algebra.n for s in inv)


def injective_envelope(m: LambdaModule):
    """Injective envelope (env, emb): env = Lambda^s with s = number of
    blocks of m; the generator of a size-d block maps to T^(n-d) times the
    corresponding free generator.  emb is a T-equivariant monomorphism and
    restricts to an isomorphism soc(m) -> soc(env).
    """
    algebra = m.algebra
    field = algebra.field
    n = algebra.n
    j, sizes = jordan_basis(m)
    s = len(sizes)
    env = LambdaModule.free(algebra, s)
    emb_jordan = np.zeros((n * s, m.dim), dtype=np.int64)
    col = 0
    for b, d in enumerate(sizes):
        for r in range(d):
            # chain vector t^r g_b  ->  T^(n-d+r) f_b
            emb_jordan[b * n + (n - d + r), col + r] = 1
        col += d
    if m.dim == 0:
        return env, Matrix.zeros(field, 0, 0)
    to_jordan = CoordinateSolver(j)
    emb = Matrix(field, emb_jordan) @ to_jordan.coords(Matrix.identity(field, m.dim))
    return env, emb


def lift_through_mono(
    a_to_b: Matrix, a_to_i: Matrix, b: LambdaModule, i_mod: LambdaModule
) -> Matrix:
    """Extension along a monomorphism into an injective module.

    Given a T-equivariant mono a_to_b: A -> B and any equivariant
    a_to_i: A -> I with I injective, returns e: B -> I equivariant with
    e . a_to_b = a_to_i.  Solvability is the injective factoring property;
    failure signals a non-injective I or bad inputs.
    """
    field = b.algebra.field
    db, di = b.dim, i_mod.dim
    # unknowns vec(e) in column-major order; vec(X e Y) = (Y^T kron X) vec(e)
    eye_b = np.eye(db, dtype=np.int64)
    eye_i = np.eye(di, dtype=np.int64)
    rows = [np.kron(a_to_b.a.T, eye_i)]
    rhs = [a_to_i.a.flatten(order="F").reshape(-1, 1)]
    rows.append(np.kron(eye_b, i_mod.t.a) - np.kron(b.t.a.T, eye_i))
    rhs.append(np.zeros((db * di, 1), dtype=np.int64))
    system = Matrix(field, np.vstack(rows))
    target = Matrix(field, np.vstack(rhs))
    try:
        vec = solve(system, target)
    except NoSolutionError as exc:
        raise InternalContractViolation(
            "no equivariant extension exists; is the target module injective?"
        ) from exc
    return Matrix(field, vec.a.reshape((di, db), order="F"))


def submodule(m: LambdaModule, basis: Matrix):
    """The submodule spanned by the given T-invariant subspace.

    Returns (module in the basis coordinates, inclusion matrix).  Raises
    NoSolutionError if the span is not invariant.
    """
    field = m.algebra.field
    if basis.cols == 0:
        return LambdaModule.zero(m.algebra), basis
    span = column_space_basis(basis)
    t_restricted = solve(span, m.t @ span)
    return LambdaModule(m.algebra, t_restricted), span


def image_module(m_src: LambdaModule, m_dst: LambdaModule, f: Matrix):
    """Image of an equivariant map as a submodule of the target."""
    return submodule(m_dst, column_space_basis(f))


def kernel_module(m_src: LambdaModule, m_dst: LambdaModule, f: Matrix):
    """Kernel of an equivariant map as a submodule of the source."""
    return submodule(m_src, kernel_basis(f))


def quotient_module(m: LambdaModule, sub_basis: Matrix):
    """Quotient by an invariant subspace: (module, projection matrix)."""
    from .ffmat import left_kernel_basis

    field = m.algebra.field
    span = column_space_basis(sub_basis)
    proj = left_kernel_basis(span)  # rows: functionals vanishing on the span
    if proj.rows == 0:
        return LambdaModule.zero(m.algebra), proj
    # induced operator q with q . proj = proj . t
    q = solve(proj.transpose(), (proj @ m.t).transpose()).transpose()
    return LambdaModule(m.algebra, q), proj
