"""Posets, the augmented quiver, representations, morphisms and hom spaces.

A representation assigns a k[T]/T^n-module to every vertex of the
augmented quiver (the poset plus a largest point "*") and a T-equivariant
matrix to every arrow (Hasse covers plus maximal -> *), such that parallel
paths commute.  Subspace representations are those where every arrow
matrix has full column rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoSolutionError,
    NotARetractionError,
    NotComparableError,
    UnknownVertexError,
)
from .ffmat import (
    Matrix,
    column_space_basis,
    kernel_basis,
    solve,
)
from .lambdamod import LambdaAlgebra, LambdaModule

STAR = "*"


class Poset:
    """Finite poset; the order of `points` is a stored linear extension."""

    __slots__ = ("points", "le", "_covers")

    def __init__(self, points, relations):
        points = tuple(str(x) for x in points)
        if STAR in points:
            raise ValueError("the label '*' is reserved for the added top")
        if len(set(points)) != len(points):
            raise ValueError("duplicate point labels")
        le = {(x, x) for x in points}
        le.update((str(a), str(b)) for a, b in relations)
        for a, b in le:
            if a not in points or b not in points:
                raise ValueError(f"relation mentions unknown point {a!r} or {b!r}")
        # reflexive-transitive closure
        changed = True
        while changed:
            changed = False
            for a, b in list(le):
                for c, d in list(le):
                    if b == c and (a, d) not in le:
                        le.add((a, d))
                        changed = True
        for a, b in le:
            if a != b and (b, a) in le:
                raise ValueError(f"antisymmetry fails on {a!r}, {b!r}")
        index = {x: i for i, x in enumerate(points)}
        for a, b in le:
            if index[a] > index[b]:
                raise ValueError("point order is not a linear extension of the order")
        self.points = points
        self.le = frozenset(le)
        covers = []
        for a in points:
            for b in points:
                if a != b and (a, b) in le:
                    if not any(
                        c != a and c != b and (a, c) in le and (c, b) in le
                        for c in points
                    ):
                        covers.append((a, b))
        self._covers = tuple(sorted(covers, key=lambda e: (index[e[0]], index[e[1]])))

    def leq(self, a, b) -> bool:
        return (a, b) in self.le

    def covers(self):
        return self._covers

    def maximal_elements(self):
        return tuple(
            a for a in self.points if not any(a != b and self.leq(a, b) for b in self.points)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and other.points == self.points
            and other.le == self.le
        )

    def __hash__(self):
        return hash((self.points, self.le))

    def __repr__(self):
        rels = " ".join(f"{a}<{b}" for a, b in self._covers)
        return f"Poset({' '.join(self.points)}; {rels})"


def example_poset() -> Poset:
    """The worked example: three points with 1 < 2 and 1 < 3."""
    return Poset(("1", "2", "3"), [("1", "2"), ("1", "3")])


class QuiverStar:
    """The poset with one largest point '*' adjoined.

    Arrows are the Hasse covers of the poset plus one arrow from each
    maximal element to '*'.
    """

    __slots__ = ("poset", "vertices", "arrows", "_index")

    def __init__(self, poset: Poset):
        self.poset = poset
        self.vertices = poset.points + (STAR,)
        arrows = list(poset.covers())
        arrows.extend((m, STAR) for m in poset.maximal_elements())
        self.arrows = tuple(arrows)
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def leq(self, a, b) -> bool:
        if a not in self._index or b not in self._index:
            raise UnknownVertexError(f"unknown vertex {a!r} or {b!r}")
        if b == STAR:
            return True
        if a == STAR:
            return False
        return self.poset.leq(a, b)

    def index(self, v) -> int:
        if v not in self._index:
            raise UnknownVertexError(f"unknown vertex {v!r}")
        return self._index[v]

    def linear_extension(self):
        return self.vertices

    def arrows_from(self, v):
        return tuple(a for a in self.arrows if a[0] == v)

    def arrows_into(self, v):
        return tuple(a for a in self.arrows if a[1] == v)

    def __eq__(self, other):
        return isinstance(other, QuiverStar) and other.poset == self.poset

    def __hash__(self):
        return hash(self.poset)

    def __repr__(self):
        return f"QuiverStar({self.poset!r})"


class Representation:
    """Vertex modules plus arrow matrices on the augmented quiver."""

    __slots__ = ("quiver", "algebra", "spaces", "arrow_maps", "_paths")

    def __init__(self, quiver: QuiverStar, algebra: LambdaAlgebra, spaces, arrow_maps):
        self.quiver = quiver
        self.algebra = algebra
        self.spaces = dict(spaces)
        self.arrow_maps = dict(arrow_maps)
        self._paths = None
        for v in quiver.vertices:
            if v not in self.spaces:
                raise ValueError(f"missing space at vertex {v!r}")
        for a in quiver.arrows:
            if a not in self.arrow_maps:
                raise ValueError(f"missing matrix for arrow {a[0]}->{a[1]}")

    @classmethod
    def zero(cls, quiver, algebra):
        spaces = {v: LambdaModule.zero(algebra) for v in quiver.vertices}
        maps = {a: Matrix.zeros(algebra.field, 0, 0) for a in quiver.arrows}
        return cls(quiver, algebra, spaces, maps)

    @property
    def field(self):
        return self.algebra.field

    def dim(self, v) -> int:
        return self.spaces[v].dim

    def dim_vector(self):
        return tuple(self.spaces[v].dim for v in self.quiver.vertices)

    def total_dim(self) -> int:
        return sum(self.spaces[v].dim for v in self.quiver.vertices)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def validate(self):
        """Returns a list of violation strings; empty means valid."""
        problems = []
        for (s, t), m in self.arrow_maps.items():
            if m.rows != self.dim(t) or m.cols != self.dim(s):
                problems.append(
                    f"arrow {s}->{t}: matrix is {m.rows}x{m.cols}, expected {self.dim(t)}x{self.dim(s)}"
                )
                continue
            if m @ self.spaces[s].t != self.spaces[t].t @ m:
                problems.append(f"arrow {s}->{t}: matrix is not T-equivariant")
        if problems:
            return problems
        # path commutativity: composite along every path between two
        # vertices must agree
        for i in self.quiver.vertices:
            reached = {}
            self._walk_paths(i, i, Matrix.identity(self.field, self.dim(i)), reached, problems)
        return problems

    def _walk_paths(self, start, v, acc, reached, problems):
        for (s, t) in self.quiver.arrows_from(v):
            m = self.arrow_maps[(s, t)] @ acc
            if t in reached:
                if reached[t] != m:
                    problems.append(
                        f"paths from {start} to {t} do not commute (last arrow {s}->{t})"
                    )
            else:
                reached[t] = m
                self._walk_paths(start, t, m, reached, problems)

    def composite_map(self, i, j) -> Matrix:
        """The map X_i -> X_j along any path; identity when i = j."""
        if i == j:
            return Matrix.identity(self.field, self.dim(i))
        if not self.quiver.leq(i, j):
            raise NotComparableError(f"{i!r} is not below {j!r}")
        if self._paths is None:
            self._paths = {}
        key = (i, j)
        if key not in self._paths:
            # follow any path of covers; commutativity makes the choice moot
            for (s, t) in self.quiver.arrows_from(i):
                if t == j:
                    self._paths[key] = self.arrow_maps[(s, t)]
                    break
                if self.quiver.leq(t, j):
                    self._paths[key] = self.composite_map(t, j) @ self.arrow_maps[(s, t)]
                    break
            else:
                raise NotComparableError(f"no path from {i!r} to {j!r}")
        return self._paths[key]

    def is_subspace_rep(self) -> bool:
        """True iff every arrow matrix has full column rank."""
        return all(m.rank() == m.cols for m in self.arrow_maps.values())

    def __repr__(self):
        dims = ",".join(str(self.dim(v)) for v in self.quiver.vertices)
        return f"Representation(dims=({dims}) over {self.algebra})"


class Morphism:
    """A natural, vertex-wise T-equivariant map between representations."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Representation, target: Representation, components):
        self.source = source
        self.target = target
        self.components = dict(components)

    @classmethod
    def identity(cls, x: Representation):
        return cls(
            x, x, {v: Matrix.identity(x.field, x.dim(v)) for v in x.quiver.vertices}
        )

    @classmethod
    def zero(cls, source, target):
        return cls(
            source,
            target,
            {
                v: Matrix.zeros(source.field, target.dim(v), source.dim(v))
                for v in source.quiver.vertices
            },
        )

    def component(self, v) -> Matrix:
        return self.components[v]

    def is_valid(self) -> bool:
        for v in self.source.quiver.vertices:
            f = self.components[v]
            if f.rows != self.target.dim(v) or f.cols != self.source.dim(v):
                return False
            if f @ self.source.spaces[v].t != self.target.spaces[v].t @ f:
                return False
        for (s, t) in self.source.quiver.arrows:
            lhs = self.components[t] @ self.source.arrow_maps[(s, t)]
            rhs = self.target.arrow_maps[(s, t)] @ self.components[s]
            if lhs != rhs:
                return False
        return True

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition self . other."""
        return Morphism(
            other.source,
            self.target,
            {
                v: self.components[v] @ other.components[v]
                for v in self.source.quiver.vertices
            },
        )

    def __add__(self, other):
        return Morphism(
            self.source,
            self.target,
            {v: self.components[v] + other.components[v] for v in self.components},
        )

    def __sub__(self, other):
        return Morphism(
            self.source,
            self.target,
            {v: self.components[v] - other.components[v] for v in self.components},
        )

    def scale(self, c):
        return Morphism(
            self.source, self.target, {v: m.scale(c) for v, m in self.components.items()}
        )

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())

    def flatten(self) -> np.ndarray:
        """Stacked entries in vertex order; the coordinate vector used by
        hom-space bases."""
        parts = [
            self.components[v].a.flatten(order="F")
            for v in self.source.quiver.vertices
        ]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def total_matrix(self) -> Matrix:
        """Block-diagonal matrix on the direct sum of all vertex spaces."""
        from .ffmat import block_diag

        return block_diag(
            self.source.field,
            [self.components[v] for v in self.source.quiver.vertices],
        )

    def rank(self) -> int:
        return sum(self.components[v].rank() for v in self.components)

    def __eq__(self, other):
        return isinstance(other, Morphism) and all(
            other.components[v] == self.components[v] for v in self.components
        )

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"


def morphism_from_flat(x, y, vec) -> Morphism:
    comps = {}
    o = 0
    for v in x.quiver.vertices:
        r, c = y.dim(v), x.dim(v)
        comps[v] = Matrix(x.field, np.asarray(vec[o : o + r * c]).reshape((r, c), order="F"))
        o += r * c
    return Morphism(x, y, comps)


@dataclass
class HomSpace:
    source: Representation
    target: Representation
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def basis_matrix(self) -> Matrix:
        """Columns are the flattened basis morphisms."""
        field = self.source.field
        total = sum(
            self.target.dim(v) * self.source.dim(v)
            for v in self.source.quiver.vertices
        )
        if not self.basis:
            return Matrix.zeros(field, total, 0)
        return Matrix(
            field, np.stack([m.flatten() for m in self.basis], axis=1)
        )

    def element(self, coords) -> Morphism:
        field = self.source.field
        total = sum(
            self.target.dim(v) * self.source.dim(v)
            for v in self.source.quiver.vertices
        )
        vec = np.zeros(total, dtype=np.int64)
        for c, m in zip(coords, self.basis):
            if int(c) % field.p:
                vec = (vec + int(c) * m.flatten()) % field.p
        return morphism_from_flat(self.source, self.target, vec)


def hom_basis(x: Representation, y: Representation) -> HomSpace:
    """Basis of the space of morphisms x -> y.

    Solves the linear system consisting of T-equivariance at every vertex
    and naturality for every arrow, in the flattened coordinates of
    morphism_from_flat.  Deterministic.
    """
    field = x.field
    p = field.p
    verts = x.quiver.vertices
    sizes = [y.dim(v) * x.dim(v) for v in verts]
    offsets = {}
    o = 0
    for v, s in zip(verts, sizes):
        offsets[v] = o
        o += s
    total = o
    rows = []

    def add_block(row_count, fill):
        block = np.zeros((row_count, total), dtype=np.int64)
        fill(block)
        rows.append(block)

    eye = np.eye
    for v in verts:
        dx, dy = x.dim(v), y.dim(v)
        if dx == 0 or dy == 0:
            continue
        tx, ty = x.spaces[v].t.a, y.spaces[v].t.a
        # f tx - ty f = 0  ->  (tx^T kron I - I kron ty) vec(f) = 0
        block = np.kron(tx.T, eye(dy, dtype=np.int64)) - np.kron(
            eye(dx, dtype=np.int64), ty
        )
        wide = np.zeros((block.shape[0], total), dtype=np.int64)
        wide[:, offsets[v] : offsets[v] + dx * dy] = block
        rows.append(wide)
    for (s, t) in x.quiver.arrows:
        dxs, dys = x.dim(s), y.dim(s)
        dxt, dyt = x.dim(t), y.dim(t)
        if dyt * dxs == 0:
            continue
        xa = x.arrow_maps[(s, t)].a
        ya = y.arrow_maps[(s, t)].a
        # f_t X_a - Y_a f_s = 0
        wide = np.zeros((dyt * dxs, total), dtype=np.int64)
        if dxt * dyt:
            wide[:, offsets[t] : offsets[t] + dxt * dyt] = np.kron(
                xa.T, eye(dyt, dtype=np.int64)
            )
        if dxs * dys:
            wide[:, offsets[s] : offsets[s] + dxs * dys] -= np.kron(
                eye(dxs, dtype=np.int64), ya
            )
        rows.append(wide)
    if rows:
        system = Matrix(field, np.vstack(rows))
        k = kernel_basis(system)
    else:
        k = Matrix.identity(field, total)
    basis = tuple(morphism_from_flat(x, y, k.a[:, j]) for j in range(k.cols))
    return HomSpace(x, y, basis)


class EndAlgebra:
    """End(x) with basis and (lazily computed) structure constants."""

    __slots__ = ("rep", "basis", "_table", "_id_coords", "_solver")

    def __init__(self, rep: Representation, basis):
        self.rep = rep
        self.basis = tuple(basis)
        self._table = None
        self._id_coords = None
        self._solver = None

    @property
    def dim(self):
        return len(self.basis)

    def solver(self):
        from .ffmat import CoordinateSolver

        if self._solver is None:
            hs = HomSpace(self.rep, self.rep, self.basis)
            self._solver = CoordinateSolver(hs.basis_matrix())
        return self._solver

    def coords(self, f: Morphism) -> np.ndarray:
        vec = Matrix(self.rep.field, f.flatten().reshape(-1, 1))
        return self.solver().coords(vec).a[:, 0]

    def structure_constants(self) -> np.ndarray:
        """table[i, j, :] = coordinates of basis[i] . basis[j]."""
        if self._table is None:
            n = self.dim
            table = np.zeros((n, n, n), dtype=np.int64)
            for i, f in enumerate(self.basis):
                for j, g in enumerate(self.basis):
                    table[i, j] = self.coords(f @ g)
            self._table = table
        return self._table

    def identity_coords(self) -> np.ndarray:
        if self._id_coords is None:
            self._id_coords = self.coords(Morphism.identity(self.rep))
        return self._id_coords

    def element(self, coords) -> Morphism:
        field = self.rep.field
        out = Morphism.zero(self.rep, self.rep)
        for c, f in zip(coords, self.basis):
            if int(c) % field.p:
                out = out + f.scale(int(c))
        return out


def end_algebra(x: Representation) -> EndAlgebra:
    return EndAlgebra(x, hom_basis(x, x).basis)


@dataclass
class DirectSum:
    rep: Representation
    inclusions: list
    projections: list


def direct_sum(xs) -> DirectSum:
    """Block-diagonal direct sum with canonical inclusions/projections."""
    if not xs:
        raise ValueError("direct_sum of an empty list needs a quiver; use Representation.zero")
    quiver = xs[0].quiver
    algebra = xs[0].algebra
    field = algebra.field
    for x in xs:
        if x.quiver != quiver or x.algebra != algebra:
            raise ValueError("summands live over different quivers or algebras")
    from .lambdamod import direct_sum_modules

    spaces = {
        v: direct_sum_modules([x.spaces[v] for x in xs]) for v in quiver.vertices
    }
    maps = {}
    for (s, t) in quiver.arrows:
        rows = sum(x.dim(t) for x in xs)
        cols = sum(x.dim(s) for x in xs)
        m = np.zeros((rows, cols), dtype=np.int64)
        ro = co = 0
        for x in xs:
            a = x.arrow_maps[(s, t)]
            m[ro : ro + a.rows, co : co + a.cols] = a.a
            ro += a.rows
            co += a.cols
        maps[(s, t)] = Matrix(field, m)
    total = Representation(quiver, algebra, spaces, maps)
    inclusions = []
    projections = []
    offsets = {v: 0 for v in quiver.vertices}
    for x in xs:
        incl = {}
        proj = {}
        for v in quiver.vertices:
            d, dt = x.dim(v), total.dim(v)
            o = offsets[v]
            im = np.zeros((dt, d), dtype=np.int64)
            pm = np.zeros((d, dt), dtype=np.int64)
            im[o : o + d] = np.eye(d, dtype=np.int64)
            pm[:, o : o + d] = np.eye(d, dtype=np.int64)
            incl[v] = Matrix(field, im)
            proj[v] = Matrix(field, pm)
            offsets[v] = o + d
        inclusions.append(Morphism(x, total, incl))
        projections.append(Morphism(total, x, proj))
    return DirectSum(total, inclusions, projections)


def subrep_from_bases(x: Representation, bases) -> tuple:
    """Subrepresentation spanned by given per-vertex column bases.

    The spans must be T-invariant and closed under the arrow maps; raises
    NoSolutionError otherwise.  Returns (rep, inclusion morphism).
    """
    from .lambdamod import submodule

    field = x.field
    spaces = {}
    incls = {}
    for v in x.quiver.vertices:
        mod, span = submodule(x.spaces[v], bases[v])
        spaces[v] = mod
        incls[v] = span
    maps = {}
    for (s, t) in x.quiver.arrows:
        image = x.arrow_maps[(s, t)] @ incls[s]
        if incls[t].cols:
            maps[(s, t)] = solve(incls[t], image)
        else:
            maps[(s, t)] = Matrix.zeros(field, 0, incls[s].cols)
            if not image.is_zero():
                raise NoSolutionError("spans are not closed under the arrow maps")
    sub = Representation(x.quiver, x.algebra, spaces, maps)
    incl = Morphism(sub, x, incls)
    return sub, incl


def kernel_subrep(f: Morphism) -> tuple:
    """Vertex-wise kernel of a morphism as a subrepresentation of the source."""
    bases = {v: kernel_basis(f.components[v]) for v in f.source.quiver.vertices}
    return subrep_from_bases(f.source, bases)


def image_subrep(f: Morphism) -> tuple:
    """Vertex-wise image of a morphism as a subrepresentation of the target."""
    bases = {v: column_space_basis(f.components[v]) for v in f.source.quiver.vertices}
    return subrep_from_bases(f.target, bases)


def quotient_rep(x: Representation, sub_bases) -> tuple:
    """Quotient of x by the subrepresentation spanned by sub_bases.

    Returns (quotient representation, projection morphism).
    """
    from .lambdamod import quotient_module

    field = x.field
    spaces = {}
    projs = {}
    for v in x.quiver.vertices:
        mod, proj = quotient_module(x.spaces[v], sub_bases[v])
        spaces[v] = mod
        projs[v] = proj
    maps = {}
    for (s, t) in x.quiver.arrows:
        # induced map q with q . proj_s = proj_t . arrow
        rhs = projs[t] @ x.arrow_maps[(s, t)]
        if projs[s].rows:
            maps[(s, t)] = solve(
                projs[s].transpose(), rhs.transpose()
            ).transpose()
        else:
            maps[(s, t)] = Matrix.zeros(field, spaces[t].dim, 0)
    quo = Representation(x.quiver, x.algebra, spaces, maps)
    return quo, Morphism(x, quo, projs)


@dataclass
class SplitResult:
    summand: Representation
    summand_incl: Morphism
    summand_proj: Morphism
    complement: Representation
    complement_incl: Morphism
    complement_proj: Morphism
    iso_witness: Morphism


def split_by_retraction(x: Representation, mono: Morphism, retraction: Morphism) -> SplitResult:
    """Split x along an idempotent e = mono . retraction.

    `retraction . mono` must be the identity of mono.source.  The summand
    is mono.source transported into x; the complement is carried by
    ker(e) with restricted maps.  iso_witness is the isomorphism
    summand + complement -> x given by the two inclusions.
    """
    ident = retraction @ mono
    if ident != Morphism.identity(mono.source):
        raise NotARetractionError("retraction . mono is not the identity")
    e = mono @ retraction  # idempotent endomorphism of x
    complement, comp_incl = kernel_subrep(e)
    field = x.field
    # complement projection: coordinates of (1 - e) v in the kernel basis
    from .ffmat import CoordinateSolver

    comp_proj_components = {}
    for v in x.quiver.vertices:
        kb = comp_incl.components[v]
        one_minus_e = Matrix.identity(field, x.dim(v)) - e.components[v]
        if kb.cols == 0:
            comp_proj_components[v] = Matrix.zeros(field, 0, x.dim(v))
        else:
            comp_proj_components[v] = CoordinateSolver(kb).coords(one_minus_e)
    comp_proj = Morphism(x, complement, comp_proj_components)
    summand = mono.source
    ds = direct_sum([summand, complement])
    # iso: summand + complement -> x via [mono | comp_incl]
    iso = Morphism(
        ds.rep,
        x,
        {
            v: mono.components[v].hstack(comp_incl.components[v])
            for v in x.quiver.vertices
        },
    )
    return SplitResult(summand, mono, retraction, complement, comp_incl, comp_proj, iso)
