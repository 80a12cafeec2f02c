"""Symmetric operads in simplicial sets.

An operad here is a family of (truncated) simplicial sets with a right
symmetric-group action, composition evaluated on tuples of equal-dimension
simplices, a unit vertex in level 1 and a basepoint vertex in level 0.
Evaluating composition diagonally on simplex tuples is the same data as a
simplicial map out of the levelwise product, and keeps the combinatorial
models (discrete operads, nerves of translation groupoids) lightweight.

Composition takes the arities explicitly: ``gamma(k, c, js, args)`` with c a
simplex of level k and args[s] a simplex of level js[s], all of one dimension.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from . import perms
from .monoids import Monoid, symmetric_group
from .perms import Perm
from .sset import (Cell, ProductSSet, RawSSet, Simplex, SimplicialMap,
                   SimplicialSet, SubSSet, TruncationError, ValidationError,
                   discrete, pi0, Pi0)


class Operad:
    """Base class; subclasses provide levels, composition and the action."""

    def __init__(self, arity_bound: int, dim_bound: int | None, name=""):
        self.arity_bound = arity_bound
        self.dim_bound = dim_bound
        self.name = name or type(self).__name__
        self._levels: dict[int, SimplicialSet] = {}
        # arity above which all levels are empty, when known (monoid operads)
        self.levels_vanish_above: int | None = None
        # discrete operads: all structure is carried by the 0-cells, and
        # gamma/act keep degeneracy words verbatim, so dimension-0 axiom
        # instances cover every dimension
        self.is_discrete = False

    # -- subclass surface ---------------------------------------------------
    def _level(self, n: int) -> SimplicialSet:
        raise NotImplementedError

    def gamma(self, k: int, c: Simplex, js: tuple[int, ...],
              args: tuple[Simplex, ...]) -> Simplex:
        raise NotImplementedError

    def act(self, n: int, x: Simplex, sigma: Perm) -> Simplex:
        """Right action x . sigma on a simplex of level n."""
        raise NotImplementedError

    @property
    def unit(self) -> Cell:
        raise NotImplementedError

    @property
    def basepoint(self) -> Cell:
        raise NotImplementedError

    # -- shared machinery ---------------------------------------------------
    def level(self, n: int) -> SimplicialSet:
        if n < 0:
            raise ValueError("negative arity")
        if n > self.arity_bound:
            raise TruncationError(
                f"operad {self.name} built through arity {self.arity_bound}; "
                f"level {n} requested")
        got = self._levels.get(n)
        if got is None:
            got = self._levels[n] = self._level(n)
        return got

    def _check_gamma_args(self, k, c, js, args):
        if k < 1:
            raise ValidationError("gamma needs arity k >= 1")
        if len(js) != k or len(args) != k:
            raise ValidationError("gamma: arity mismatch")
        q = c.dim
        for a in args:
            if a.dim != q:
                raise ValidationError("gamma: mixed simplex dimensions")

    def unit_simplex(self, q: int) -> Simplex:
        return self.level(1).degenerate_to(self.unit, q)

    def basepoint_simplex(self, q: int) -> Simplex:
        return self.level(0).degenerate_to(self.basepoint, q)

    def collapse_input(self, n: int, c: Simplex, i: int) -> Simplex:
        """sigma_i(c) = gamma(c; 1^i, *, 1^(n-i-1)), landing in level n-1."""
        q = c.dim
        js = tuple(1 if t != i else 0 for t in range(n))
        args = tuple(self.unit_simplex(q) if t != i else self.basepoint_simplex(q)
                     for t in range(n))
        return self.gamma(n, c, js, args)

    def collapse_all(self, n: int, c: Simplex) -> Simplex:
        """D(c) = gamma(c; *, ..., *) landing in level 0."""
        if n == 0:
            return c
        q = c.dim
        return self.gamma(n, c, (0,) * n,
                          tuple(self.basepoint_simplex(q) for _ in range(n)))

    def left_multiply(self, s1: Simplex, n: int, c: Simplex) -> Simplex:
        """gamma(s1; c) for a 1-ary s1, an endomap of level n."""
        return self.gamma(1, s1, (n,), (c,))

    def nonempty_arities(self, n_max: int) -> list[int]:
        return [n for n in range(min(n_max, self.arity_bound) + 1)
                if self.level(n).n_cells(0)]

    def __repr__(self):
        return f"<Operad {self.name}>"


# ---------------------------------------------------------------------------
# discrete operads
# ---------------------------------------------------------------------------

class DiscreteOperad(Operad):
    """All levels discrete; structure given on 0-cell keys.  A q-simplex of a
    discrete level is the full degeneracy of its cell, so composition acts on
    keys and keeps the word."""

    def __init__(self, arity_bound, level_keys: Callable[[int], Sequence[Hashable]],
                 gamma0, act0, unit_key, basepoint_key, name=""):
        super().__init__(arity_bound, dim_bound=None, name=name)
        self._level_keys = level_keys
        self._gamma0 = gamma0
        self._act0 = act0
        self._unit_key = unit_key
        self._basepoint_key = basepoint_key
        self.is_discrete = True
        self._gcache: dict = {}
        self._acache: dict = {}
        self._cell_cache: dict = {}

    def _level(self, n):
        keys = list(self._level_keys(n))
        bp = self._basepoint_key if n == 0 else None
        return discrete(keys, basepoint_key=bp, name=f"{self.name}({n})")

    def _cell(self, key) -> Cell:
        got = self._cell_cache.get(key)
        if got is None:
            got = self._cell_cache[key] = Cell(0, key)
        return got

    @property
    def unit(self) -> Cell:
        return self._cell(self._unit_key)

    @property
    def basepoint(self) -> Cell:
        return self._cell(self._basepoint_key)

    def gamma(self, k, c, js, args):
        self._check_gamma_args(k, c, js, args)
        ckey = (c.cell.key, js, tuple(a.cell.key for a in args))
        key = self._gcache.get(ckey)
        if key is None:
            key = self._gcache[ckey] = self._gamma0(ckey[0], ckey[2], js)
        return Simplex(self._cell(key), c.word)

    def act(self, n, x, sigma):
        ckey = (n, x.cell.key, sigma)
        key = self._acache.get(ckey)
        if key is None:
            key = self._acache[ckey] = self._act0(n, x.cell.key, sigma)
        return Simplex(self._cell(key), x.word)


def as_operad(arity_bound: int = 4) -> DiscreteOperad:
    """Level n is the discrete set Sigma_n; composition moves blocks by the
    outer permutation after acting inside them, the action is right
    multiplication."""
    def gamma0(c, ds, js):
        return perms.compose(perms.block_perm(c, js), perms.block_sum(ds))

    def act0(n, x, sigma):
        return perms.compose(x, sigma)

    return DiscreteOperad(arity_bound, perms.all_perms, gamma0, act0,
                          unit_key=(0,), basepoint_key=(), name="As")


def com_operad(arity_bound: int = 5) -> DiscreteOperad:
    return DiscreteOperad(arity_bound, lambda n: ["*"],
                          lambda c, ds, js: "*", lambda n, x, s: "*",
                          unit_key="*", basepoint_key="*", name="Com")


def monoid_operad(m: Monoid, name="") -> DiscreteOperad:
    """level 0 = point, level 1 = the monoid, all higher levels empty;
    composition is the monoid multiplication."""
    m.check()

    def level_keys(n):
        if n == 0:
            return ["*"]
        if n == 1:
            return list(m.elements)
        return []

    def gamma0(c, ds, js):
        if js[0] == 0:
            return "*"
        got = m.mul(c, ds[0])
        if got is None:
            raise ValidationError("monoid operad: product undefined")
        return got

    op = DiscreteOperad(2, level_keys, gamma0, lambda n, x, s: x,
                        unit_key=m.unit, basepoint_key="*",
                        name=name or f"M[{m.name}]")
    op.levels_vanish_above = 1
    return op


def abelian_monoid_operad(a: Monoid, arity_bound: int = 4, name="") -> DiscreteOperad:
    """Every level the commutative monoid a with the trivial action;
    composition is the sum of all entries.  Commutativity is what makes the
    trivial action equivariant."""
    a.check()
    if not a.is_commutative():
        raise ValidationError(
            f"abelian monoid operad needs a commutative monoid; {a.name} is not")

    def gamma0(c, ds, js):
        got = a.product_of((c,) + ds)
        if got is None:
            raise ValidationError("abelian monoid operad: sum undefined")
        return got

    return DiscreteOperad(arity_bound, lambda n: list(a.elements),
                          gamma0, lambda n, x, s: x,
                          unit_key=a.unit, basepoint_key=a.unit,
                          name=name or f"Ab[{a.name}]")


# ---------------------------------------------------------------------------
# the standard E-infinity model
# ---------------------------------------------------------------------------

def _translation_nerve(group: Monoid, dim_bound: int, name="") -> RawSSet:
    """Nerve of the groupoid with the group's elements as objects and a
    unique morphism between any two: raw q-simplices are (q+1)-tuples."""
    els = tuple(group.elements)

    def raw_cells(q):
        return itertools.product(els, repeat=q + 1)

    def raw_face(raw, q, i):
        return raw[:i] + raw[i + 1:]

    def raw_degen(raw, q, i):
        return raw[:i + 1] + raw[i:]

    return RawSSet(raw_cells, raw_face, raw_degen, dim_bound,
                   name=name or f"E({group.name})")


class BarrattEcclesOperad(Operad):
    """Level n is the nerve of the translation groupoid of Sigma_n, with
    composition applied componentwise and the free right action by
    simultaneous multiplication.  Levels are connected with point homology."""

    def __init__(self, arity_bound: int, dim_bound: int):
        super().__init__(arity_bound, dim_bound, name="E")
        self._gcache: dict = {}
        self._acache: dict = {}
        self._raw_cache: dict = {}

    def _level(self, n):
        return _translation_nerve(symmetric_group(n), self.dim_bound,
                                  name=f"E({n})")

    @property
    def unit(self) -> Cell:
        return Cell(0, (perms.identity(1),))

    @property
    def basepoint(self) -> Cell:
        return Cell(0, ((),))

    def _raw(self, n: int, x: Simplex):
        got = self._raw_cache.get(x)
        if got is None:
            got = self._raw_cache[x] = self.level(n).raw_of(x)
        return got

    def gamma(self, k, c, js, args):
        self._check_gamma_args(k, c, js, args)
        q = c.dim
        raw_c = self._raw(k, c)
        raw_args = tuple(self._raw(j, a) for j, a in zip(js, args))
        ckey = (raw_c, js, raw_args)
        got = self._gcache.get(ckey)
        if got is None:
            out = []
            for t in range(q + 1):
                ds_t = tuple(raw[t] for raw in raw_args)
                out.append(perms.compose(perms.block_perm(raw_c[t], js),
                                         perms.block_sum(ds_t)))
            lvl: RawSSet = self.level(sum(js))
            got = self._gcache[ckey] = lvl.normal_form(tuple(out), q)
        return got

    def act(self, n, x, sigma):
        ckey = (n, x, sigma)
        got = self._acache.get(ckey)
        if got is None:
            lvl: RawSSet = self.level(n)
            raw = self._raw(n, x)
            got = self._acache[ckey] = lvl.normal_form(
                tuple(perms.compose(p, sigma) for p in raw), x.dim)
        return got


def barratt_eccles(arity_bound: int = 3, dim_bound: int = 4) -> BarrattEcclesOperad:
    return BarrattEcclesOperad(arity_bound, dim_bound)


# ---------------------------------------------------------------------------
# products and pullbacks over As
# ---------------------------------------------------------------------------

class ProductOperad(Operad):
    """Levelwise product with the diagonal action and componentwise gamma."""

    def __init__(self, left: Operad, right: Operad, name=""):
        bounds = [b for b in (left.dim_bound, right.dim_bound) if b is not None]
        super().__init__(min(left.arity_bound, right.arity_bound),
                         min(bounds) if bounds else None,
                         name=name or f"({left.name}x{right.name})")
        self.left = left
        self.right = right
        vanishes = [v for v in (left.levels_vanish_above, right.levels_vanish_above)
                    if v is not None]
        self.levels_vanish_above = min(vanishes) if vanishes else None

    def _level(self, n):
        return ProductSSet([self.left.level(n), self.right.level(n)],
                           name=f"{self.name}({n})")

    def pair(self, n: int, a: Simplex, b: Simplex) -> Simplex:
        lvl: ProductSSet = self.level(n)
        return lvl.normal_form((a, b), a.dim)

    def split(self, n: int, x: Simplex) -> tuple[Simplex, Simplex]:
        lvl: ProductSSet = self.level(n)
        return lvl.raw_of(x)

    @property
    def unit(self) -> Cell:
        return self.pair(1, Simplex(self.left.unit), Simplex(self.right.unit)).cell

    @property
    def basepoint(self) -> Cell:
        return self.pair(0, Simplex(self.left.basepoint),
                         Simplex(self.right.basepoint)).cell

    def gamma(self, k, c, js, args):
        self._check_gamma_args(k, c, js, args)
        cl, cr = self.split(k, c)
        parts = [self.split(j, a) for j, a in zip(js, args)]
        gl = self.left.gamma(k, cl, js, tuple(p[0] for p in parts))
        gr = self.right.gamma(k, cr, js, tuple(p[1] for p in parts))
        return self.pair(sum(js), gl, gr)

    def act(self, n, x, sigma):
        l, r = self.split(n, x)
        return self.pair(n, self.left.act(n, l, sigma),
                         self.right.act(n, r, sigma))

    def projection(self, side: int) -> "OperadMap":
        """side 0 projects to the left factor, 1 to the right."""
        tgt = self.left if side == 0 else self.right

        def level_map(n):
            lvl: ProductSSet = self.level(n)
            return SimplicialMap(
                lvl, tgt.level(n),
                lambda cell: lvl.raw_of(Simplex(cell))[side],
                name=f"pr{side + 1}({n})")
        return OperadMap(self, tgt, level_map, name=f"pr{side + 1}")


def product_operad(left: Operad, right: Operad) -> ProductOperad:
    return ProductOperad(left, right)


class PullbackOverAsOperad(ProductOperad):
    """The levelwise pullback of two augmentations to As, as a suboperad of
    the product (pairs whose images in As agree)."""

    def __init__(self, delta_left: "OperadMap", delta_right: "OperadMap", name=""):
        if delta_left.target.name != delta_right.target.name:
            raise ValidationError("pullback needs augmentations to one target")
        super().__init__(delta_left.source, delta_right.source,
                         name=name or f"({delta_left.source.name}"
                                      f"x_As{delta_right.source.name})")
        self.delta_left = delta_left
        self.delta_right = delta_right

    def _level(self, n):
        prod = super()._level(n)
        fl = self.delta_left.level_map(n)
        fr = self.delta_right.level_map(n)

        def keep(cell):
            a, b = prod.raw_of(Simplex(cell))
            return fl(a) == fr(b)

        sub = SubSSet(prod, keep, name=f"{self.name}({n})")
        sub.raw_of = prod.raw_of                 # share the pair encoding
        sub.normal_form = prod.normal_form
        return sub


def product_over_as(delta_left: "OperadMap", delta_right: "OperadMap") -> PullbackOverAsOperad:
    return PullbackOverAsOperad(delta_left, delta_right)


# ---------------------------------------------------------------------------
# operad maps
# ---------------------------------------------------------------------------

class OperadMap:
    def __init__(self, source: Operad, target: Operad,
                 level_map: Callable[[int], SimplicialMap], name=""):
        self.source = source
        self.target = target
        self._level_map = level_map
        self._memo: dict[int, SimplicialMap] = {}
        self.name = name or f"{source.name}->{target.name}"

    def level_map(self, n: int) -> SimplicialMap:
        got = self._memo.get(n)
        if got is None:
            got = self._memo[n] = self._level_map(n)
        return got

    def __call__(self, n: int, x: Simplex) -> Simplex:
        return self.level_map(n)(x)

    def check(self, n_max: int, q_max: int, gamma_budget: int = 20000,
              seed: int = 0) -> None:
        """Simpliciality, unit/basepoint, equivariance and gamma
        compatibility (the latter on at most gamma_budget instances)."""
        for n in range(n_max + 1):
            qm = _level_q_max(self.source.level(n), q_max)
            self.level_map(n).check(qm, based=False)
        if self(1, Simplex(self.source.unit)) != Simplex(self.target.unit):
            raise ValidationError(f"{self.name} does not preserve the unit")
        if self(0, Simplex(self.source.basepoint)) != Simplex(self.target.basepoint):
            raise ValidationError(f"{self.name} does not preserve the basepoint")
        for n in range(n_max + 1):
            qm = _level_q_max(self.source.level(n), q_max)
            for q in range(qm + 1):
                for c in self.source.level(n).cells(q):
                    for sigma in perms.all_perms(n):
                        lhs = self(n, self.source.act(n, Simplex(c), sigma))
                        rhs = self.target.act(n, self(n, Simplex(c)), sigma)
                        if lhs != rhs:
                            raise ValidationError(
                                f"{self.name} not equivariant at {c!r}, {sigma}")
        rng = random.Random(seed)
        seen = 0
        for k, js, q, c, ds, _ in _gamma_instances(self.source, n_max, q_max,
                                                   gamma_budget, rng):
            lhs = self(sum(js), self.source.gamma(k, c, js, ds))
            rhs = self.target.gamma(k, self(k, c), js,
                                    tuple(self(j, d) for j, d in zip(js, ds)))
            if lhs != rhs:
                raise ValidationError(
                    f"{self.name} does not commute with gamma at "
                    f"k={k}, js={js}, dim {q}")
            seen += 1

    def compose(self, other: "OperadMap") -> "OperadMap":
        if other.target is not self.source:
            raise ValidationError("operad map composition mismatch")
        return OperadMap(other.source, self.target,
                         lambda n: self.level_map(n).compose(other.level_map(n)),
                         name=f"{self.name}.{other.name}")


def identity_operad_map(o: Operad) -> OperadMap:
    from .sset import identity_map
    return OperadMap(o, o, lambda n: identity_map(o.level(n)), name=f"id[{o.name}]")


def as_to_trivial(a_s: Operad, target: Operad, name="") -> OperadMap:
    """As -> target sending every level to the (degenerate) unit-component
    vertex: level n goes to gamma-closed identity elements.  Valid whenever
    the target action fixes those vertices (trivial actions, Com)."""
    def level_map(n):
        tgt = target.level(n)
        if n == 0:
            image = Simplex(target.basepoint)
        else:
            image = _nfold_unit(target, n)
        return SimplicialMap(a_s.level(n), tgt,
                             lambda cell: tgt.degenerate_to(image, cell.dim),
                             name=f"collapse({n})")
    return OperadMap(a_s, target, level_map, name=name or f"As->{target.name}")


def _nfold_unit(o: Operad, n: int) -> Simplex:
    """gamma(1; 1, ..., 1)-style canonical identity vertex of level n: for
    the operads used with as_to_trivial this is the unit element of the
    underlying commutative monoid in level n."""
    if n == 1:
        return Simplex(o.unit)
    # iterate binary pastings 1(2) . (1,1): arity grows one step at a time
    cur = Simplex(o.unit)
    cur_ar = 1
    two = _unit_of_level2(o)
    while cur_ar < n:
        cur = o.gamma(2, two, (cur_ar, 1), (cur, Simplex(o.unit)))
        cur_ar += 1
    return cur


def _unit_of_level2(o: Operad) -> Simplex:
    """The identity-element vertex of level 2 for monoid-like operads."""
    lvl = o.level(2)
    unit_key = o.unit.key
    for c in lvl.cells(0):
        if c.key == unit_key:
            return Simplex(c)
    raise ValidationError(f"{o.name}: no identity vertex in level 2")


def as_to_barratt_eccles(a_s: Operad, e: BarrattEcclesOperad) -> OperadMap:
    """The vertex inclusion Sigma_n = E(n)_0; the canonical A-infinity
    structure map of the Barratt-Eccles model."""
    def level_map(n):
        lvl: RawSSet = e.level(n)
        return SimplicialMap(a_s.level(n), lvl,
                             lambda cell: Simplex(Cell(0, (cell.key,))),
                             name=f"vertices({n})")
    return OperadMap(a_s, e, level_map, name="As->E")


# ---------------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------------

class GradingMonoid:
    """A finitely generated commutative monoid, table-backed via Monoid."""

    def __init__(self, monoid: Monoid, generators: Sequence[Hashable], name=""):
        monoid.check()
        if not monoid.is_commutative():
            raise ValidationError("grading monoid must be commutative")
        self.monoid = monoid
        self.generators = tuple(generators)
        self.name = name or monoid.name

    @property
    def zero(self):
        return self.monoid.unit

    def add(self, a, b):
        got = self.monoid.mul(a, b)
        if got is None:
            raise ValidationError(f"grading sum undefined in {self.name}")
        return got

    def sum(self, xs):
        out = self.zero
        for x in xs:
            out = self.add(out, x)
        return out

    def generator_product(self):
        """s, the product of the generators; trivial gradings give zero."""
        return self.sum(self.generators)

    def is_trivial(self) -> bool:
        return len(self.monoid.elements) == 1


def trivial_grading() -> GradingMonoid:
    from .monoids import trivial_monoid
    return GradingMonoid(trivial_monoid(), [], name="0")


def saturating_grading(cap: int) -> GradingMonoid:
    from .monoids import saturating_naturals
    return GradingMonoid(saturating_naturals(cap), [1], name=f"Nsat{cap}")


def product_grading(i: GradingMonoid, j: GradingMonoid) -> GradingMonoid:
    els = [(a, b) for a in i.monoid.elements for b in j.monoid.elements]

    def mul(x, y):
        a = i.monoid.mul(x[0], y[0])
        b = j.monoid.mul(x[1], y[1])
        return None if a is None or b is None else (a, b)

    m = Monoid(els, (i.zero, j.zero), mul, name=f"{i.name}x{j.name}",
               assume_checked=True)
    gens = [(g, j.zero) for g in i.generators] + \
           [(i.zero, g) for g in j.generators]
    return GradingMonoid(m, gens, name=f"{i.name}x{j.name}")


class GradedOperad:
    """An operad with a grade for each path component of each level."""

    def __init__(self, operad: Operad, grading: GradingMonoid,
                 grade_of_vertex: Callable[[int, Cell], Hashable], name=""):
        self.operad = operad
        self.grading = grading
        self._grade_of_vertex = grade_of_vertex
        self._pi0: dict[int, Pi0] = {}
        self.name = name or f"{operad.name} graded by {grading.name}"

    def level_pi0(self, n: int) -> Pi0:
        got = self._pi0.get(n)
        if got is None:
            got = self._pi0[n] = pi0(self.operad.level(n))
        return got

    def grade(self, n: int, x: Simplex | Cell):
        v = self.operad.level(n).vertex(x if isinstance(x, Simplex) else Simplex(x))
        return self._grade_of_vertex(n, v)

    def grade_piece(self, n: int, g, name="") -> SubSSet:
        lvl = self.operad.level(n)
        p0 = self.level_pi0(n)
        grade_of_class = {idx: self._grade_of_vertex(n, members[0])
                          for idx, members in enumerate(p0.classes)}
        keep = lambda c: grade_of_class[p0.class_of(c)] == g
        return SubSSet(lvl, keep, name=name or f"{self.operad.name}_{g}({n})")

    def audit(self, n_max: int, q_max: int, gamma_budget: int = 20000,
              seed: int = 0) -> list[str]:
        """Grade compatibility: constant on components, basepoint and unit in
        grade zero, action preserves grades, gamma adds them, and the input
        collapses sigma_i preserve them.  Returns failure strings."""
        errs = []
        op = self.operad
        for n in range(min(n_max, op.arity_bound) + 1):
            p0 = self.level_pi0(n)
            for members in p0.classes:
                grades = {self._grade_of_vertex(n, v) for v in members}
                if len(grades) > 1:
                    errs.append(f"level {n}: component with mixed grades {grades}")
        if self.grade(0, Simplex(op.basepoint)) != self.grading.zero:
            errs.append("basepoint is not in grade zero")
        if self.grade(1, Simplex(op.unit)) != self.grading.zero:
            errs.append("unit is not in grade zero")
        for n in range(min(n_max, op.arity_bound) + 1):
            for c in op.level(n).cells(0):
                g = self.grade(n, Simplex(c))
                for sigma in perms.all_perms(n):
                    if self.grade(n, op.act(n, Simplex(c), sigma)) != g:
                        errs.append(f"action moves grade at level {n}, {c!r}")
                if n >= 1:
                    for i in range(n):
                        got = self.grade(n - 1, op.collapse_input(n, Simplex(c), i))
                        if got != g:
                            errs.append(
                                f"sigma_{i} changes grade at level {n}, {c!r}")
        rng = random.Random(seed)
        for k, js, q, c, ds, _ in _gamma_instances(op, n_max, q_max, gamma_budget, rng):
            want = self.grading.sum([self.grade(k, c)] +
                                    [self.grade(j, d) for j, d in zip(js, ds)])
            got = self.grade(sum(js), op.gamma(k, c, js, ds))
            if got != want:
                errs.append(f"gamma does not add grades at k={k}, js={js}")
        return errs


def concentrated_in_degree_zero(operad: Operad, name="") -> GradedOperad:
    g = trivial_grading()
    return GradedOperad(operad, g, lambda n, v: g.zero, name=name)


def graded_by_value(operad: DiscreteOperad, grading: GradingMonoid,
                    name="") -> GradedOperad:
    """For discrete operads whose level keys are themselves grading values."""
    return GradedOperad(operad, grading, lambda n, v: v.key, name=name)


def graded_natural_operad(cap: int) -> tuple[GradedOperad, "OperadMap"]:
    """A small genuinely graded test operad: the abelian-monoid operad on the
    saturating naturals, graded by the element value, with its collapse
    multiplication from As."""
    from .monoids import saturating_naturals
    a = saturating_naturals(cap)
    op = abelian_monoid_operad(a, arity_bound=3, name=f"Ab[Nsat{cap}]")
    graded = graded_by_value(op, saturating_grading(cap))
    mu = as_to_trivial(as_operad(3), op)
    return graded, mu


# ---------------------------------------------------------------------------
# axiom checking
# ---------------------------------------------------------------------------

def _level_q_max(level: SimplicialSet, q_max: int) -> int:
    if level.dim_bound is not None:
        return min(q_max, level.dim_bound)
    return q_max


def _arity_tuples(o: Operad, k: int, total_max: int) -> list[tuple[int, ...]]:
    """Tuples (j_1..j_k) of nonempty-level arities with sum <= total_max."""
    alive = [n for n in range(total_max + 1)
             if n <= o.arity_bound and o.level(n).n_cells(0) > 0]
    out = []
    for tup in itertools.product(alive, repeat=k):
        if sum(tup) <= total_max:
            out.append(tup)
    return out


def _effective_q_max(o: Operad, q_max: int) -> int:
    return 0 if o.is_discrete else q_max


def _gamma_instances(o: Operad, n_max: int, q_max: int, budget: int,
                     rng: random.Random, shape_budget: int = 50_000):
    """Stream of (k, js, q, c, ds, sampled) composition instances.

    Each (shape, dimension) stratum is enumerated exhaustively when its
    instance count fits shape_budget, and sampled with the seeded rng
    otherwise; the overall budget caps the total."""
    q_max = _effective_q_max(o, q_max)
    strata = []
    for k in range(1, n_max + 1):
        if o.level(k).n_cells(0) == 0:
            continue
        for js in _arity_tuples(o, k, n_max):
            for q in range(_shape_q_max(o, (k,) + js, q_max) + 1):
                n_inst = len(o.level(k).simplices(q))
                for j in js:
                    n_inst *= len(o.level(j).simplices(q))
                if n_inst:
                    strata.append((k, js, q, n_inst))
    spent = 0
    for k, js, q, n_inst in strata:
        if spent >= budget:
            return
        pools = [o.level(j).simplices(q) for j in js]
        if n_inst <= shape_budget and spent + n_inst <= budget:
            spent += n_inst
            for c in o.level(k).simplices(q):
                for ds in itertools.product(*pools):
                    yield k, js, q, c, tuple(ds), False
        else:
            take = min(shape_budget, budget - spent)
            spent += take
            c_pool = o.level(k).simplices(q)
            for _ in range(take):
                c = c_pool[rng.randrange(len(c_pool))]
                ds = tuple(p[rng.randrange(len(p))] for p in pools)
                yield k, js, q, c, ds, True


def _shape_q_max(o: Operad, arities, q_max: int) -> int:
    qm = q_max
    for n in arities:
        qm = _level_q_max(o.level(n), qm)
    return qm


def _rand_simplex(level: SimplicialSet, q: int, rng: random.Random) -> Simplex:
    p = rng.randrange(q + 1)
    cells = level.cells(p)
    while not cells:
        p = rng.randrange(q + 1)
        cells = level.cells(p)
    c = cells[rng.randrange(len(cells))]
    word_pool = list(range(q))
    word = tuple(sorted(rng.sample(word_pool, q - p), reverse=True))
    return Simplex(c, word)


@dataclass
class AxiomReport:
    operad: str
    n_max: int
    q_max: int
    mode: str                       # "exhaustive" or "sampled"
    checked: dict[str, int] = field(default_factory=dict)
    witnesses: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> dict:
        return {"operad": self.operad, "n_max": self.n_max, "q_max": self.q_max,
                "mode": self.mode, "checked": dict(sorted(self.checked.items())),
                "passed": self.passed,
                "witnesses": self.witnesses[:10]}


def check_operad_axioms(o: Operad, n_max: int, q_max: int,
                        budget: int = 4_000_000, shape_budget: int = 50_000,
                        seed: int = 0) -> AxiomReport:
    """Associativity, unitality, equivariance and the action law, on all
    simplex tuples up to the bounds.

    Each (shape, dimension) stratum is exhausted when its instance count
    fits shape_budget; larger strata are checked on a seeded random sample
    and the report's mode says so.  Discrete operads are checked in
    dimension 0, which covers all dimensions because their composition and
    action carry degeneracy words verbatim.
    """
    n_max = min(n_max, o.arity_bound)
    rng = random.Random(seed)
    q_eff = _effective_q_max(o, q_max)
    report = AxiomReport(o.name, n_max, q_max, "exhaustive")
    wit = report.witnesses
    sampled = False

    # unitality
    count = 0
    for j in o.nonempty_arities(n_max):
        qm = _level_q_max(o.level(j), q_eff)
        for q in range(qm + 1):
            one = o.unit_simplex(q)
            for d in o.level(j).simplices(q):
                count += 1
                if o.gamma(1, one, (j,), (d,)) != d:
                    wit.append({"axiom": "left-unit", "arity": j, "dim": q,
                                "cell": repr(d)})
    for k in range(1, n_max + 1):
        if o.level(k).n_cells(0) == 0:
            continue
        qm = _level_q_max(o.level(k), q_eff)
        for q in range(qm + 1):
            ones = tuple(o.unit_simplex(q) for _ in range(k))
            for c in o.level(k).simplices(q):
                count += 1
                if o.gamma(k, c, (1,) * k, ones) != c:
                    wit.append({"axiom": "right-unit", "arity": k, "dim": q,
                                "cell": repr(c)})
    report.checked["unitality"] = count

    # action composition
    count = 0
    for n in range(n_max + 1):
        qm = _level_q_max(o.level(n), q_eff)
        pairs = list(itertools.product(perms.all_perms(n), repeat=2))
        for q in range(qm + 1):
            for x in o.level(n).simplices(q):
                for s, t in pairs:
                    count += 1
                    if o.act(n, o.act(n, x, s), t) != o.act(n, x, perms.compose(s, t)):
                        wit.append({"axiom": "action", "arity": n, "dim": q,
                                    "cell": repr(x), "sigma": s, "tau": t})
    report.checked["action"] = count

    # equivariance
    count = 0
    for k, js, q, c, ds, was_sampled in _gamma_instances(
            o, n_max, q_eff, budget, rng, shape_budget):
        sampled = sampled or was_sampled
        j_total = sum(js)
        base = o.gamma(k, c, js, ds)
        for sigma in perms.all_perms(k):
            count += 1
            lhs = o.gamma(k, o.act(k, c, sigma), js, ds)
            inv = perms.inverse(sigma)
            js_perm = tuple(js[inv[s]] for s in range(k))
            ds_perm = tuple(ds[inv[s]] for s in range(k))
            rhs = o.act(j_total, o.gamma(k, c, js_perm, ds_perm),
                        perms.block_perm(sigma, js))
            if lhs != rhs:
                wit.append({"axiom": "equivariance-outer", "k": k, "js": js,
                            "dim": q, "sigma": sigma, "cell": repr(c)})
        taus = [perms.all_perms(j) for j in js]
        n_tau = 1
        for t in taus:
            n_tau *= len(t)
        if n_tau <= 64:
            tau_iter = itertools.product(*taus)
        else:
            sampled = True
            tau_iter = [tuple(t[rng.randrange(len(t))] for t in taus)
                        for _ in range(64)]
        for tau in tau_iter:
            count += 1
            lhs = o.gamma(k, c, js, tuple(o.act(j, d, t)
                                          for j, d, t in zip(js, ds, tau)))
            rhs = o.act(j_total, base, perms.block_sum(tau))
            if lhs != rhs:
                wit.append({"axiom": "equivariance-inner", "k": k, "js": js,
                            "dim": q, "taus": tau, "cell": repr(c)})
    report.checked["equivariance"] = count

    # associativity, stratified by (k, js, iss, dim)
    count = 0
    strata = []
    for k in range(1, n_max + 1):
        if o.level(k).n_cells(0) == 0:
            continue
        for js in _arity_tuples(o, k, n_max):
            j_total = sum(js)
            if j_total == 0:
                continue
            for iss in _arity_tuples(o, j_total, n_max):
                qm = _shape_q_max(o, (k,) + js + iss, q_eff)
                for q in range(qm + 1):
                    n_inst = len(o.level(k).simplices(q))
                    for j in js:
                        n_inst *= len(o.level(j).simplices(q))
                    for i in iss:
                        n_inst *= len(o.level(i).simplices(q))
                    if n_inst:
                        strata.append((k, js, iss, q, n_inst))

    def assoc_check(k, js, iss, q, c, ds, es, inner_done=None):
        nonlocal count
        count += 1
        j_total = sum(js)
        lhs = o.gamma(j_total, inner_done or o.gamma(k, c, js, ds), iss, es)
        fs = []
        f_ar = []
        pos = 0
        for s in range(k):
            block = es[pos:pos + js[s]]
            bl_ar = iss[pos:pos + js[s]]
            pos += js[s]
            if js[s] == 0:
                fs.append(ds[s])
                f_ar.append(0)
            else:
                fs.append(o.gamma(js[s], ds[s], bl_ar, tuple(block)))
                f_ar.append(sum(bl_ar))
        rhs = o.gamma(k, c, tuple(f_ar), tuple(fs))
        if lhs != rhs:
            wit.append({"axiom": "associativity", "k": k, "js": js,
                        "iss": iss, "dim": q, "cell": repr(c)})

    spent = 0
    for k, js, iss, q, n_inst in strata:
        if spent >= budget:
            sampled = True
            break
        c_pool = o.level(k).simplices(q)
        d_pools = [o.level(j).simplices(q) for j in js]
        e_pools = [o.level(i).simplices(q) for i in iss]
        if n_inst <= shape_budget and spent + n_inst <= budget:
            spent += n_inst
            for c in c_pool:
                for ds in itertools.product(*d_pools):
                    inner = o.gamma(k, c, js, ds)
                    for es in itertools.product(*e_pools):
                        assoc_check(k, js, iss, q, c, ds, es, inner)
        else:
            sampled = True
            take = min(shape_budget, budget - spent)
            spent += take
            for _ in range(take):
                c = c_pool[rng.randrange(len(c_pool))]
                ds = tuple(p[rng.randrange(len(p))] for p in d_pools)
                es = tuple(p[rng.randrange(len(p))] for p in e_pools)
                assoc_check(k, js, iss, q, c, ds, es)
    report.checked["associativity"] = count
    if sampled:
        report.mode = "sampled"
    return report


# ---------------------------------------------------------------------------
# the weak homotopy-commutativity condition
# ---------------------------------------------------------------------------

@dataclass
class HtpycomVerdict:
    passed: bool
    image_components: int
    off_grade: list[str]

    def to_dict(self):
        return {"passed": self.passed,
                "image_components": self.image_components,
                "off_grade": self.off_grade}


def check_htpycom(mu: OperadMap, graded: GradedOperad | None = None) -> HtpycomVerdict:
    """The image of level 2 must land in grade zero and in one path
    component of the target level 2."""
    tgt = mu.target
    p0 = pi0(tgt.level(2)) if graded is None else graded.level_pi0(2)
    classes = set()
    off_grade = []
    for c in mu.source.level(2).cells(0):
        im = mu(2, Simplex(c))
        classes.add(p0.class_of(im.cell))
        if graded is not None:
            g = graded.grade(2, im)
            if g != graded.grading.zero:
                off_grade.append(f"{c!r} lands in grade {g}")
    return HtpycomVerdict(len(classes) == 1 and not off_grade,
                          len(classes), off_grade)
