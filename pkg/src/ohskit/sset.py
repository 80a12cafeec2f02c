"""Truncated simplicial sets with explicit Eilenberg-Zilber normal forms.

Every simplex is stored as a nondegenerate cell plus a degeneracy word: a
strictly decreasing tuple (i_1 > ... > i_k) meaning s_{i_1} s_{i_2} ... s_{i_k}
applied to the cell.  Face and degeneracy operators on arbitrary simplices are
computed from the simplicial identities, so a simplicial set only has to
provide its nondegenerate cells per dimension and the faces of those cells.

All objects are immutable after construction; lazily generated levels are
memoized behind a per-object lock.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence


class OhsError(Exception):
    """Base class for errors raised by this package."""


class TruncationError(OhsError):
    """A query went beyond the dimension (or arity) a value was built for."""


class ValidationError(OhsError):
    """Structural data failed a consistency requirement."""


class BudgetError(OhsError):
    """A construction would exceed its configured size budget."""


# ---------------------------------------------------------------------------
# cells and simplices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Cell:
    """A nondegenerate cell: a dimension and a key unique within it."""
    dim: int
    key: Hashable

    def __repr__(self):
        return f"Cell({self.dim}, {self.key!r})"


@dataclass(frozen=True, slots=True)
class Simplex:
    """cell with a degeneracy word, strictly decreasing, outermost first."""
    cell: Cell
    word: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.cell.dim + len(self.word)

    @property
    def is_degenerate(self) -> bool:
        return bool(self.word)

    def __repr__(self):
        if not self.word:
            return f"<{self.cell.dim}:{self.cell.key!r}>"
        return f"<s{list(self.word)}.{self.cell.dim}:{self.cell.key!r}>"


def _sort_key(obj):
    """Deterministic total order on the hashable keys this package builds."""
    if isinstance(obj, Cell):
        return (3, obj.dim, _sort_key(obj.key))
    if isinstance(obj, Simplex):
        return (4, _sort_key(obj.cell), obj.word)
    if isinstance(obj, bool):
        return (0, "b", int(obj))
    if isinstance(obj, int):
        return (0, "i", obj)
    if isinstance(obj, str):
        return (1, obj)
    if isinstance(obj, (tuple, list)):
        return (2, tuple(_sort_key(x) for x in obj))
    if isinstance(obj, frozenset):
        return (5, tuple(sorted(_sort_key(x) for x in obj)))
    return (6, repr(obj))


def degeneracy_words(q: int, length: int) -> list[tuple[int, ...]]:
    """All strictly decreasing words of the given length in {0, ..., q-1}."""
    return [tuple(sorted(c, reverse=True))
            for c in itertools.combinations(range(q), length)]


class SimplicialSet:
    """Base class; subclasses provide ``_cells(q)`` and ``_cell_face(c, i)``.

    dim_bound is an inclusive truncation: levels above it are an error, not
    empty.  basepoint, when present, is a 0-cell.
    """

    def __init__(self, dim_bound: int | None = None,
                 basepoint: Cell | None = None, name: str = ""):
        self.dim_bound = dim_bound
        self.basepoint = basepoint
        self.name = name
        self._cells_memo: dict[int, tuple[Cell, ...]] = {}
        self._face_memo: dict[tuple[Cell, int], Simplex] = {}
        self._simplices_memo: dict[int, tuple[Simplex, ...]] = {}
        self._lock = threading.RLock()

    # -- to be provided by subclasses --------------------------------------
    def _cells(self, q: int) -> Iterable[Cell]:
        raise NotImplementedError

    def _cell_face(self, cell: Cell, i: int) -> Simplex:
        raise NotImplementedError

    # -- public interface ---------------------------------------------------
    def _check_dim(self, q: int):
        if q < 0:
            raise ValueError(f"negative dimension {q}")
        if self.dim_bound is not None and q > self.dim_bound:
            raise TruncationError(
                f"{self.name or 'simplicial set'} truncated at dimension "
                f"{self.dim_bound}; level {q} was requested")

    def cells(self, q: int) -> tuple[Cell, ...]:
        self._check_dim(q)
        got = self._cells_memo.get(q)
        if got is None:
            with self._lock:
                got = self._cells_memo.get(q)
                if got is None:
                    got = tuple(self._cells(q))
                    for c in got:
                        if c.dim != q:
                            raise ValidationError(
                                f"cell {c!r} listed in dimension {q}")
                    self._cells_memo[q] = got
        return got

    def n_cells(self, q: int) -> int:
        return len(self.cells(q))

    def cell_face(self, cell: Cell, i: int) -> Simplex:
        if cell.dim == 0:
            raise ValueError("0-cells have no faces")
        if not 0 <= i <= cell.dim:
            raise ValueError(f"face index {i} out of range for {cell!r}")
        key = (cell, i)
        got = self._face_memo.get(key)
        if got is None:
            with self._lock:
                got = self._face_memo.get(key)
                if got is None:
                    got = self._cell_face(cell, i)
                    if got.dim != cell.dim - 1:
                        raise ValidationError(
                            f"face d_{i}{cell!r} has dimension {got.dim}")
                    self._face_memo[key] = got
        return got

    def face(self, x: Simplex | Cell, i: int) -> Simplex:
        """d_i on an arbitrary simplex, via the simplicial identities."""
        if isinstance(x, Cell):
            x = Simplex(x)
        if x.dim == 0:
            raise ValueError("0-simplices have no faces")
        if not 0 <= i <= x.dim:
            raise ValueError(f"face index {i} out of range (dim {x.dim})")
        collected: list[int] = []
        word = x.word
        pos = 0
        while pos < len(word):
            j = word[pos]
            if i < j:
                collected.append(j - 1)          # d_i s_j = s_{j-1} d_i
                pos += 1
            elif i == j or i == j + 1:           # d_i s_j = id
                res = Simplex(x.cell, word[pos + 1:])
                for k in reversed(collected):
                    res = self.degenerate(res, k)
                return res
            else:
                collected.append(j)              # d_i s_j = s_j d_{i-1}
                i -= 1
                pos += 1
        res = self.cell_face(x.cell, i)
        for k in reversed(collected):
            res = self.degenerate(res, k)
        return res

    def degenerate(self, x: Simplex | Cell, i: int) -> Simplex:
        """s_i on a simplex, keeping the word in normal form."""
        if isinstance(x, Cell):
            x = Simplex(x)
        if not 0 <= i <= x.dim:
            raise ValueError(f"degeneracy index {i} out of range (dim {x.dim})")
        word = x.word
        out: list[int] = []
        j = i
        pos = 0
        while pos < len(word) and j <= word[pos]:
            out.append(word[pos] + 1)            # s_j s_w = s_{w+1} s_j, j <= w
            pos += 1
        out.append(j)
        out.extend(word[pos:])
        return Simplex(x.cell, tuple(out))

    def degenerate_to(self, x: Simplex | Cell, q: int) -> Simplex:
        """Iterated last degeneracy up to dimension q."""
        if isinstance(x, Cell):
            x = Simplex(x)
        while x.dim < q:
            x = self.degenerate(x, x.dim)
        if x.dim != q:
            raise ValueError(f"simplex of dimension {x.dim} cannot reach {q}")
        return x

    def simplices(self, q: int) -> tuple[Simplex, ...]:
        """All q-simplices, degenerate ones included."""
        self._check_dim(q)
        got = self._simplices_memo.get(q)
        if got is None:
            out: list[Simplex] = []
            for p in range(q + 1):
                for c in self.cells(p):
                    for w in degeneracy_words(q, q - p):
                        out.append(Simplex(c, w))
            with self._lock:
                got = self._simplices_memo[q] = tuple(out)
        return got

    def vertex(self, x: Simplex | Cell) -> Cell:
        """The 0-th vertex (drop the last vertex until dimension 0)."""
        if isinstance(x, Cell):
            x = Simplex(x)
        while x.dim > 0:
            x = self.face(x, x.dim)
        return x.cell

    def basepoint_simplex(self, q: int) -> Simplex:
        if self.basepoint is None:
            raise ValidationError(f"{self.name or 'simplicial set'} has no basepoint")
        return self.degenerate_to(self.basepoint, q)

    def is_based(self) -> bool:
        return self.basepoint is not None

    def __repr__(self):
        return f"<SimplicialSet {self.name or hex(id(self))}>"


# ---------------------------------------------------------------------------
# table-backed simplicial sets
# ---------------------------------------------------------------------------

class TableSSet(SimplicialSet):
    """Explicit finite simplicial set.

    cells_by_dim: {q: [key, ...]}
    faces: {(q, key, i): (key', word')} for every cell of dimension q >= 1.
    """

    def __init__(self, cells_by_dim, faces, dim_bound=None,
                 basepoint_key=None, name=""):
        top = max(cells_by_dim) if cells_by_dim else 0
        bp = None if basepoint_key is None else Cell(0, basepoint_key)
        super().__init__(dim_bound=dim_bound, basepoint=bp, name=name)
        self._table = {q: tuple(Cell(q, k) for k in ks)
                       for q, ks in cells_by_dim.items()}
        self._faces = faces
        self._top = top
        if bp is not None and bp not in self._table.get(0, ()):
            raise ValidationError("basepoint key is not a 0-cell")

    def _cells(self, q):
        return self._table.get(q, ())

    def _cell_face(self, cell, i):
        try:
            key, word = self._faces[(cell.dim, cell.key, i)]
        except KeyError:
            raise ValidationError(f"no face table entry for d_{i}{cell!r}")
        return Simplex(Cell(cell.dim - 1 - len(word), key), tuple(word))


def point(name="pt") -> SimplicialSet:
    return TableSSet({0: ["*"]}, {}, basepoint_key="*", name=name)


def sphere0(name="S0") -> SimplicialSet:
    """Two points, based at one of them."""
    return TableSSet({0: ["*", "x"]}, {}, basepoint_key="*", name=name)


def discrete(keys: Sequence[Hashable], basepoint_key=None, name="discrete") -> SimplicialSet:
    return TableSSet({0: list(keys)}, {}, basepoint_key=basepoint_key, name=name)


def standard_simplex(n: int) -> SimplicialSet:
    """Delta^n: nondegenerate q-cells are the (q+1)-subsets of {0..n}."""
    cells = {q: [tuple(c) for c in itertools.combinations(range(n + 1), q + 1)]
             for q in range(n + 1)}
    faces = {}
    for q in range(1, n + 1):
        for key in cells[q]:
            for i in range(q + 1):
                faces[(q, key, i)] = (key[:i] + key[i + 1:], ())
    return TableSSet(cells, faces, name=f"Delta{n}")


def circle() -> SimplicialSet:
    """One vertex, one nondegenerate 1-cell with both faces at the vertex."""
    return TableSSet({0: ["*"], 1: ["e"]},
                     {(1, "e", 0): ("*", ()), (1, "e", 1): ("*", ())},
                     basepoint_key="*", name="S1")


# ---------------------------------------------------------------------------
# raw-backed simplicial sets
# ---------------------------------------------------------------------------

class RawSSet(SimplicialSet):
    """Simplicial set presented by *all* its simplices per dimension.

    raw_cells(q) enumerates hashable raw values for the q-simplices,
    raw_face / raw_degen are total operators on raw values.  Normal forms
    (which raw values are degenerate, and of what) are derived here, so
    constructions like nerves, diagonals and quotients only need their
    unnormalized combinatorics.
    """

    def __init__(self, raw_cells, raw_face, raw_degen, dim_bound,
                 basepoint_raw=None, name=""):
        super().__init__(dim_bound=dim_bound, basepoint=None, name=name)
        self._raw_cells = raw_cells
        self._raw_face = raw_face
        self._raw_degen = raw_degen
        self._nf_memo: dict[tuple[int, Hashable], Simplex] = {}
        if basepoint_raw is not None:
            bp = self.normal_form(basepoint_raw, 0)
            self.basepoint = bp.cell

    def normal_form(self, raw, q: int) -> Simplex:
        key = (q, raw)
        got = self._nf_memo.get(key)
        if got is not None:
            return got
        nf = None
        for i in range(q - 1, -1, -1):
            u = self._raw_face(raw, q, i)
            if self._raw_degen(u, q - 1, i) == raw:
                nf = self.degenerate(self.normal_form(u, q - 1), i)
                break
        if nf is None:
            nf = Simplex(Cell(q, raw))
        with self._lock:
            self._nf_memo[key] = nf
        return nf

    def raw_of(self, x: Simplex | Cell):
        """Inverse of normal_form: rebuild the raw value of a simplex."""
        if isinstance(x, Cell):
            x = Simplex(x)
        raw = x.cell.key
        q = x.cell.dim
        for i in reversed(x.word):
            raw = self._raw_degen(raw, q, i)
            q += 1
        return raw

    def _cells(self, q):
        out = []
        for raw in self._raw_cells(q):
            nf = self.normal_form(raw, q)
            if not nf.is_degenerate:
                out.append(nf.cell)
        return out

    def _cell_face(self, cell, i):
        u = self._raw_face(cell.key, cell.dim, i)
        return self.normal_form(u, cell.dim - 1)


# ---------------------------------------------------------------------------
# products, disjoint unions, subsets
# ---------------------------------------------------------------------------

class ProductSSet(RawSSet):
    """Levelwise cartesian product; q-simplices are tuples of q-simplices.

    A tuple is nondegenerate exactly when no degeneracy index is shared by
    every component, which reproduces the shuffle decomposition of products
    of cells.
    """

    def __init__(self, factors: Sequence[SimplicialSet], name=""):
        self.factors = tuple(factors)
        bounds = [f.dim_bound for f in factors if f.dim_bound is not None]
        dim_bound = min(bounds) if bounds else None
        bp = None
        if all(f.is_based() for f in factors):
            bp = tuple(Simplex(f.basepoint) for f in factors)
        name = name or "(" + " x ".join(f.name or "?" for f in factors) + ")"
        super().__init__(self._enum, self._pface, self._pdegen,
                         dim_bound, basepoint_raw=bp, name=name)

    def _check_dim(self, q):
        if q < 0:
            raise ValueError(f"negative dimension {q}")
        for f in self.factors:
            if f.dim_bound is not None and q > f.dim_bound:
                raise TruncationError(
                    f"product {self.name}: factor {f.name or '?'} is the "
                    f"limiting bound (truncated at {f.dim_bound}, "
                    f"level {q} requested)")

    def _enum(self, q):
        return itertools.product(*[f.simplices(q) for f in self.factors])

    def _pface(self, raw, q, i):
        return tuple(f.face(x, i) for f, x in zip(self.factors, raw))

    def _pdegen(self, raw, q, i):
        return tuple(f.degenerate(x, i) for f, x in zip(self.factors, raw))


def product(x: SimplicialSet, y: SimplicialSet, name="") -> ProductSSet:
    return ProductSSet([x, y], name=name)


class DisjointUnionSSet(SimplicialSet):
    """Tagged disjoint union of simplicial sets."""

    def __init__(self, pieces: Sequence[SimplicialSet], name="",
                 basepoint_piece: int | None = None):
        self.pieces = tuple(pieces)
        bounds = [p.dim_bound for p in pieces if p.dim_bound is not None]
        dim_bound = min(bounds) if bounds else None
        bp = None
        if basepoint_piece is not None:
            inner = self.pieces[basepoint_piece].basepoint
            bp = Cell(0, (basepoint_piece, inner.key))
        super().__init__(dim_bound=dim_bound, basepoint=bp,
                         name=name or "disjoint-union")

    def _cells(self, q):
        out = []
        for t, p in enumerate(self.pieces):
            out.extend(Cell(q, (t, c.key)) for c in p.cells(q))
        return out

    def _cell_face(self, cell, i):
        t, key = cell.key
        inner = self.pieces[t].cell_face(Cell(cell.dim, key), i)
        return Simplex(Cell(inner.cell.dim, (t, inner.cell.key)), inner.word)

    def tag(self, t: int, x: Simplex | Cell) -> Simplex:
        if isinstance(x, Cell):
            x = Simplex(x)
        return Simplex(Cell(x.cell.dim, (t, x.cell.key)), x.word)

    def untag(self, x: Simplex | Cell) -> tuple[int, Simplex]:
        if isinstance(x, Cell):
            x = Simplex(x)
        t, key = x.cell.key
        return t, Simplex(Cell(x.cell.dim, key), x.word)


class SubSSet(SimplicialSet):
    """Full simplicial subset on a predicate over nondegenerate cells.

    The predicate must be closed under faces; this is checked as faces are
    taken.  Cells are shared with the ambient set, so the inclusion map is
    the identity on cells.
    """

    def __init__(self, ambient: SimplicialSet, keep: Callable[[Cell], bool],
                 name="", basepoint: Cell | None = None):
        super().__init__(dim_bound=ambient.dim_bound,
                         basepoint=basepoint if basepoint is not None
                         else ambient.basepoint, name=name or f"sub({ambient.name})")
        self.ambient = ambient
        self._keep = keep
        if self.basepoint is not None and not keep(self.basepoint):
            self.basepoint = None

    def _cells(self, q):
        return [c for c in self.ambient.cells(q) if self._keep(c)]

    def _cell_face(self, cell, i):
        got = self.ambient.cell_face(cell, i)
        if not self._keep(got.cell):
            raise ValidationError(
                f"subset {self.name} is not face-closed: d_{i}{cell!r} "
                f"leaves the subset")
        return got

    def include(self) -> "SimplicialMap":
        return SimplicialMap(self, self.ambient, lambda c: Simplex(c),
                             name=f"include({self.name})")


# ---------------------------------------------------------------------------
# simplicial maps
# ---------------------------------------------------------------------------

class SimplicialMap:
    """A map given by its action on nondegenerate cells (values may be
    degenerate); extension to all simplices is by the degeneracy word."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet,
                 on_cell: Callable[[Cell], Simplex], name=""):
        self.source = source
        self.target = target
        self._on_cell = on_cell
        self._memo: dict[Cell, Simplex] = {}
        self.name = name

    def cell_image(self, cell: Cell) -> Simplex:
        got = self._memo.get(cell)
        if got is None:
            got = self._on_cell(cell)
            if isinstance(got, Cell):
                got = Simplex(got)
            if got.dim != cell.dim:
                raise ValidationError(
                    f"map {self.name}: image of {cell!r} has dimension {got.dim}")
            self._memo[cell] = got
        return got

    def __call__(self, x: Simplex | Cell) -> Simplex:
        if isinstance(x, Cell):
            x = Simplex(x)
        res = self.cell_image(x.cell)
        for i in reversed(x.word):
            res = self.target.degenerate(res, i)
        return res

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other."""
        if other.target is not self.source:
            raise ValidationError("composition: sets do not match")
        return SimplicialMap(other.source, self.target,
                             lambda c: self(other(Simplex(c))),
                             name=f"{self.name}.{other.name}")

    def check(self, q_max: int, based: bool = True) -> None:
        """Verify commutation with faces up to q_max; raise on failure."""
        for q in range(1, q_max + 1):
            for c in self.source.cells(q):
                for i in range(q + 1):
                    lhs = self(self.source.face(Simplex(c), i))
                    rhs = self.target.face(self.cell_image(c), i)
                    if lhs != rhs:
                        raise ValidationError(
                            f"map {self.name} not simplicial at d_{i}{c!r}: "
                            f"{lhs!r} != {rhs!r}")
        if based and self.source.is_based() and self.target.is_based():
            if self(Simplex(self.source.basepoint)) != Simplex(self.target.basepoint):
                raise ValidationError(f"map {self.name} does not preserve basepoints")

    def is_isomorphism(self, q_max: int) -> bool:
        """Bijective on nondegenerate cells in each dimension <= q_max."""
        for q in range(q_max + 1):
            images = set()
            for c in self.source.cells(q):
                im = self.cell_image(c)
                if im.is_degenerate:
                    return False
                images.add(im.cell)
            if len(images) != len(self.source.cells(q)):
                return False
            if images != set(self.target.cells(q)):
                return False
        return True


def identity_map(x: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(x, x, lambda c: Simplex(c), name="id")


def constant_map(x: SimplicialSet, y: SimplicialSet) -> SimplicialMap:
    """Collapse to the basepoint of y."""
    return SimplicialMap(x, y, lambda c: y.basepoint_simplex(c.dim), name="const")


# ---------------------------------------------------------------------------
# pi_0
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if _sort_key(rb) < _sort_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


class Pi0:
    """Path components of the 0-cells, joined along nondegenerate 1-cells."""

    def __init__(self, x: SimplicialSet):
        if x.dim_bound is not None and x.dim_bound < 1:
            raise TruncationError("insufficient dimensions: pi0 needs level 1")
        self.space = x
        uf = _UnionFind()
        for c in x.cells(0):
            uf.find(c)
        for e in x.cells(1):
            a = x.face(Simplex(e), 0).cell
            b = x.face(Simplex(e), 1).cell
            uf.union(a, b)
        groups: dict[Cell, list[Cell]] = {}
        for c in x.cells(0):
            groups.setdefault(uf.find(c), []).append(c)
        reps = sorted(groups, key=_sort_key)
        self.classes = [tuple(sorted(groups[r], key=_sort_key)) for r in reps]
        self.reps = reps
        self._class_of = {c: idx for idx, members in enumerate(self.classes)
                          for c in members}

    def __len__(self):
        return len(self.classes)

    def class_of(self, x: Simplex | Cell) -> int:
        if isinstance(x, Simplex) or (isinstance(x, Cell) and x.dim > 0):
            x = self.space.vertex(x)
        return self._class_of[x]


def pi0(x: SimplicialSet) -> Pi0:
    return Pi0(x)


def component_subset(x: SimplicialSet, classes: set[int],
                     p0: Pi0 | None = None, name="") -> SubSSet:
    """The union of the chosen path components, as a simplicial subset."""
    p0 = p0 or pi0(x)
    keep = lambda c: p0.class_of(c) in classes
    bp = x.basepoint if (x.basepoint is not None and keep(x.basepoint)) else None
    return SubSSet(x, keep, name=name or f"components{sorted(classes)}",
                   basepoint=bp)


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

class QuotientSSet(SimplicialSet):
    """Quotient by the simplicial equivalence relation generated by pairs.

    The generating pairs (of equal-dimension simplices of X) are closed under
    faces, degeneracies and transitivity by a worklist; cells of the quotient
    are the classes containing no degenerate member, keyed by their minimal
    member.
    """

    def __init__(self, ambient: SimplicialSet, pairs, dim_bound=None,
                 name="", basepoint_from: Simplex | Cell | None = None):
        if dim_bound is None:
            dim_bound = ambient.dim_bound
        if dim_bound is None:
            raise TruncationError("quotient needs a dimension bound")
        super().__init__(dim_bound=dim_bound, basepoint=None,
                         name=name or f"{ambient.name}/~")
        self.ambient = ambient
        self._uf = _UnionFind()
        work: list[tuple[Simplex, Simplex]] = []
        for a, b in pairs:
            if isinstance(a, Cell):
                a = Simplex(a)
            if isinstance(b, Cell):
                b = Simplex(b)
            if a.dim != b.dim:
                raise ValidationError(
                    f"relation identifies cells of different dimensions: "
                    f"{a!r} ~ {b!r}")
            work.append((a, b))
        while work:
            a, b = work.pop()
            if a == b or not self._uf.union(a, b):
                continue
            q = a.dim
            if q >= 1:
                for i in range(q + 1):
                    work.append((ambient.face(a, i), ambient.face(b, i)))
            if q < dim_bound:
                for i in range(q + 1):
                    work.append((ambient.degenerate(a, i),
                                 ambient.degenerate(b, i)))
        self._members: dict[int, dict[Simplex, list[Simplex]]] = {}
        self._rep_of: dict[int, dict[Simplex, Simplex]] = {}
        self._nf_memo: dict[Simplex, Simplex] = {}
        if basepoint_from is not None:
            self.basepoint = self.class_simplex(basepoint_from).cell
        elif ambient.basepoint is not None:
            self.basepoint = self.class_simplex(Simplex(ambient.basepoint)).cell

    def _level(self, q: int) -> dict[Simplex, list[Simplex]]:
        got = self._members.get(q)
        if got is None:
            groups: dict[Simplex, list[Simplex]] = {}
            for s in self.ambient.simplices(q):
                groups.setdefault(self._uf.find(s), []).append(s)
            got = {}
            by_root = {}
            for root, v in groups.items():
                rep = min(v, key=_sort_key)
                got[rep] = sorted(v, key=_sort_key)
                by_root[root] = rep
            with self._lock:
                self._members[q] = got
                self._rep_of[q] = by_root
        return got

    def _rep(self, s: Simplex) -> Simplex:
        """Minimal member of the class of s."""
        self._level(s.dim)
        root = self._uf.find(s)
        try:
            return self._rep_of[s.dim][root]
        except KeyError:
            raise ValidationError(f"simplex {s!r} unknown to quotient {self.name}")

    def class_simplex(self, s: Simplex | Cell) -> Simplex:
        """Normal form, in the quotient, of the class of an ambient simplex."""
        if isinstance(s, Cell):
            s = Simplex(s)
        rep = self._rep(s)
        got = self._nf_memo.get(rep)
        if got is not None:
            return got
        nf = None
        for m in self._level(rep.dim)[rep]:
            if m.is_degenerate:
                i = m.word[0]
                inner = self.class_simplex(self.ambient.face(m, i))
                nf = self.degenerate(inner, i)
                break
        if nf is None:
            nf = Simplex(Cell(rep.dim, rep))
        with self._lock:
            self._nf_memo[rep] = nf
        return nf

    def _cells(self, q):
        out = []
        for rep, members in self._level(q).items():
            if not any(m.is_degenerate for m in members):
                out.append(Cell(q, rep))
        return sorted(out, key=_sort_key)

    def _cell_face(self, cell, i):
        rep: Simplex = cell.key
        return self.class_simplex(self.ambient.face(rep, i))

    def projection(self) -> SimplicialMap:
        return SimplicialMap(self.ambient, self,
                             lambda c: self.class_simplex(Simplex(c)),
                             name=f"proj({self.name})")


def quotient(x: SimplicialSet, pairs, dim_bound=None, name="") -> QuotientSSet:
    return QuotientSSet(x, pairs, dim_bound=dim_bound, name=name)


def collapse(x: SimplicialSet, doomed: Callable[[Simplex], bool],
             dim_bound=None, name="", basepoint_from=None) -> QuotientSSet:
    """Collapse the simplicial subset selected by ``doomed`` to a point.

    ``doomed`` is a predicate on simplices; the selected simplices are chained
    pairwise per dimension, which generates the full collapse relation.
    """
    bound = dim_bound if dim_bound is not None else x.dim_bound
    if bound is None:
        raise TruncationError("collapse needs a dimension bound")
    pairs = []
    bp = basepoint_from
    for q in range(bound + 1):
        prev = None
        for s in x.simplices(q):
            if doomed(s):
                if q == 0 and bp is None:
                    bp = s
                if prev is not None:
                    pairs.append((prev, s))
                prev = s
    return QuotientSSet(x, pairs, dim_bound=bound, name=name,
                        basepoint_from=bp)


def _is_basepoint_degenerate(x: SimplicialSet, s: Simplex) -> bool:
    return s.cell == x.basepoint


def smash(x: SimplicialSet, y: SimplicialSet, dim_bound=None) -> QuotientSSet:
    """x ^ y = (x times y) / (x v y)."""
    for z in (x, y):
        if not z.is_based():
            raise ValidationError("smash requires based factors")
    prod = ProductSSet([x, y])
    return collapse(
        prod,
        lambda s: (prod.raw_of(s)[0].cell == x.basepoint
                   or prod.raw_of(s)[1].cell == y.basepoint),
        dim_bound=dim_bound, name=f"({x.name}^{y.name})")


def half_smash(y: SimplicialSet, z: SimplicialSet, dim_bound=None) -> QuotientSSet:
    """y |x z = (y times z) / (y times *), based at the collapsed class."""
    if not z.is_based():
        raise ValidationError("half smash requires a based second factor")
    prod = ProductSSet([y, z])
    return collapse(
        prod,
        lambda s: prod.raw_of(s)[1].cell == z.basepoint,
        dim_bound=dim_bound, name=f"({y.name}|x{z.name})")


def smash_power(x: SimplicialSet, n: int, dim_bound=None) -> SimplicialSet:
    """x^(^n); the 0-th power is S^0."""
    if n == 0:
        return sphere0()
    out = x
    for _ in range(n - 1):
        out = smash(out, x, dim_bound=dim_bound)
    return out


# ---------------------------------------------------------------------------
# nerves
# ---------------------------------------------------------------------------

def nerve(m, dim_bound: int, name="") -> RawSSet:
    """Nerve of a finite monoid or groupoid (see ohskit.monoids).

    q-cells are composable q-strings; faces drop ends or multiply adjacent
    entries, degeneracies insert identities.  For partial monoids only
    strings all of whose contiguous products are defined are present.
    """
    from . import monoids as _m
    if isinstance(m, _m.Groupoid):
        return _groupoid_nerve(m, dim_bound, name)
    if not isinstance(m, _m.Monoid):
        raise ValidationError(f"nerve: unsupported input {m!r}")
    m.check()

    def raw_cells(q):
        if q == 0:
            return [()]
        return m.strings(q)

    def raw_face(raw, q, i):
        if i == 0:
            return raw[1:]
        if i == q:
            return raw[:-1]
        prod = m.mul(raw[i - 1], raw[i])
        if prod is None:
            raise ValidationError("nerve: face product undefined")
        return raw[:i - 1] + (prod,) + raw[i + 1:]

    def raw_degen(raw, q, i):
        return raw[:i] + (m.unit,) + raw[i:]

    return RawSSet(raw_cells, raw_face, raw_degen, dim_bound,
                   basepoint_raw=(), name=name or f"N({m.name})")


def _groupoid_nerve(g, dim_bound: int, name="") -> RawSSet:
    g.check()

    def raw_cells(q):
        if q == 0:
            return [(o,) for o in g.objects]
        out = []
        for path in itertools.product(g.objects, repeat=q + 1):
            if all(g.has_morphism(path[i], path[i + 1]) for i in range(q)):
                out.append(path)
        return out

    def raw_face(raw, q, i):
        return raw[:i] + raw[i + 1:]

    def raw_degen(raw, q, i):
        return raw[:i + 1] + raw[i:]

    return RawSSet(raw_cells, raw_face, raw_degen, dim_bound,
                   name=name or f"N({g.name})")


# ---------------------------------------------------------------------------
# bisimplicial sets and diagonals
# ---------------------------------------------------------------------------

class Bisimplicial:
    """Rows of simplicial sets with horizontal operators between them.

    Row p is the simplicial set in bidegree (p, -); hface(p, i) and
    hdegen(p, i) are simplicial maps row_p -> row_{p +- 1}, which makes the
    two directions commute by construction.
    """

    def __init__(self, rows: Sequence[SimplicialSet],
                 hface: Callable[[int, int], SimplicialMap],
                 hdegen: Callable[[int, int], SimplicialMap],
                 name=""):
        self.rows = tuple(rows)
        self.p_max = len(self.rows) - 1
        self._hface = hface
        self._hdegen = hdegen
        self.name = name or "bisimplicial"

    def hface(self, p: int, i: int) -> SimplicialMap:
        if not (1 <= p <= self.p_max and 0 <= i <= p):
            raise TruncationError(f"horizontal face d_{i} at row {p} out of range")
        return self._hface(p, i)

    def hdegen(self, p: int, i: int) -> SimplicialMap:
        if not (0 <= p < self.p_max and 0 <= i <= p):
            raise TruncationError(f"horizontal degeneracy s_{i} at row {p} out of range")
        return self._hdegen(p, i)

    def check_identities(self, q_max: int) -> None:
        """Horizontal simplicial identities, checked cellwise on the rows."""
        def eq(f, g, p):
            for q in range(min(q_max, self.rows[p].dim_bound
                               if self.rows[p].dim_bound is not None else q_max) + 1):
                for c in self.rows[p].cells(q):
                    if f(Simplex(c)) != g(Simplex(c)):
                        raise ValidationError(
                            f"{self.name}: horizontal identity fails on {c!r}")
        for p in range(2, self.p_max + 1):
            for j in range(p + 1):
                for i in range(j):
                    eq(self.hface(p - 1, i).compose(self.hface(p, j)),
                       self.hface(p - 1, j - 1).compose(self.hface(p, i)), p)
        for p in range(1, self.p_max):
            for j in range(p + 1):
                for i in range(j + 2):
                    lhs = self.hface(p + 1, i).compose(self.hdegen(p, j))
                    if i < j:
                        rhs = self.hdegen(p - 1, j - 1).compose(self.hface(p, i))
                    elif i in (j, j + 1):
                        rhs = identity_map(self.rows[p])
                    else:
                        rhs = self.hdegen(p - 1, j).compose(self.hface(p, i - 1))
                    eq(lhs, rhs, p)

    def diagonal(self, dim_bound: int | None = None, name="") -> RawSSet:
        """(diag B)_n = B_{n,n} with the diagonal operators."""
        bounds = [self.p_max]
        for r in self.rows:
            if r.dim_bound is not None:
                bounds.append(r.dim_bound)
        bound = min(bounds) if dim_bound is None else min(dim_bound, *bounds)

        def raw_cells(q):
            return tuple(self.rows[q].simplices(q))

        def raw_face(raw, q, i):
            h = self.hface(q, i)(raw)
            return self.rows[q - 1].face(h, i)

        def raw_degen(raw, q, i):
            h = self.hdegen(q, i)(raw)
            return self.rows[q + 1].degenerate(h, i)

        bp = None
        if self.rows[0].is_based():
            bp = Simplex(self.rows[0].basepoint)
        return RawSSet(raw_cells, raw_face, raw_degen, bound,
                       basepoint_raw=bp, name=name or f"diag({self.name})")


def constant_bisimplicial(x: SimplicialSet, p_max: int) -> Bisimplicial:
    ident = lambda p, i: identity_map(x)
    return Bisimplicial([x] * (p_max + 1), ident, ident,
                        name=f"const({x.name})")


def external_product(x: SimplicialSet, y: SimplicialSet, p_max: int) -> Bisimplicial:
    """(x box y)_{p,q} = X_p x Y_q; row p is a disjoint union of copies of y
    indexed by the p-simplices of x."""
    rows = []
    index: list[list[Simplex]] = []
    position: list[dict[Simplex, int]] = []
    for p in range(p_max + 1):
        sims = list(x.simplices(p))
        index.append(sims)
        position.append({s: t for t, s in enumerate(sims)})
        rows.append(DisjointUnionSSet([y] * len(sims),
                                      name=f"({x.name})_{p}x{y.name}"))

    def hmap(kind, p, i):
        src = rows[p]
        tp = p - 1 if kind == "face" else p + 1
        tgt = rows[tp]

        def on_cell(cell):
            t, inner = src.untag(cell)
            u = index[p][t]
            v = x.face(u, i) if kind == "face" else x.degenerate(u, i)
            return tgt.tag(position[tp][v], inner)
        return SimplicialMap(src, tgt, on_cell, name=f"h{kind}{i}")

    return Bisimplicial(rows, lambda p, i: hmap("face", p, i),
                        lambda p, i: hmap("degen", p, i),
                        name=f"{x.name}box{y.name}")


def diagonal(b: Bisimplicial, dim_bound: int | None = None) -> RawSSet:
    return b.diagonal(dim_bound=dim_bound)


# ---------------------------------------------------------------------------
# consistency suites used throughout the tests
# ---------------------------------------------------------------------------

def check_simplicial_identities(x: SimplicialSet, q_max: int) -> None:
    """Exhaustive d/s identity suite on all cells up to q_max; raises."""
    bound = x.dim_bound
    for q in range(q_max + 1):
        for c in x.cells(q):
            s = Simplex(c)
            if q >= 2:
                for j in range(q + 1):
                    for i in range(j):
                        lhs = x.face(x.face(s, j), i)
                        rhs = x.face(x.face(s, i), j - 1)
                        if lhs != rhs:
                            raise ValidationError(
                                f"{x.name}: d_{i} d_{j} fails on {c!r}")
            if bound is None or q + 2 <= bound:
                for j in range(q + 1):
                    for i in range(j + 1):
                        lhs = x.degenerate(x.degenerate(s, j), i)
                        rhs = x.degenerate(x.degenerate(s, i), j + 1)
                        if lhs != rhs:
                            raise ValidationError(
                                f"{x.name}: s_{i} s_{j} fails on {c!r}")
            if bound is None or q + 1 <= bound:
                for j in range(q + 1):
                    for i in range(q + 2):
                        lhs = x.face(x.degenerate(s, j), i)
                        if i < j:
                            rhs = x.degenerate(x.face(s, i), j - 1)
                        elif i in (j, j + 1):
                            rhs = s
                        else:
                            rhs = x.degenerate(x.face(s, i - 1), j)
                        if lhs != rhs:
                            raise ValidationError(
                                f"{x.name}: d_{i} s_{j} fails on {c!r}")
