"""Finite (and finitely truncated) monoids and groupoids.

A Monoid is a list of hashable elements with a multiplication that may be
partial: ``mul`` returning None marks a product that falls outside the
carried truncation (for example block sums of permutations beyond the arity
cap).  Nerves of partial monoids keep exactly the strings all of whose
contiguous products are defined.
"""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Sequence

from . import perms
from .sset import ValidationError


class Monoid:
    def __init__(self, elements: Sequence[Hashable], unit: Hashable,
                 mul: Callable[[Hashable, Hashable], Hashable | None],
                 name="monoid", assume_checked=False):
        self.elements = tuple(elements)
        self.unit = unit
        self.mul = mul
        self.name = name
        self._checked = assume_checked
        if unit not in self.elements:
            raise ValidationError(f"{name}: unit is not an element")

    def check(self) -> None:
        """Associativity wherever defined, and two-sided unit; raises with a
        witness triple on failure."""
        if self._checked:
            return
        elems = self.elements
        for a in elems:
            if self.mul(self.unit, a) != a or self.mul(a, self.unit) != a:
                raise ValidationError(f"{self.name}: unit fails at {a!r}")
        for a, b, c in itertools.product(elems, repeat=3):
            ab = self.mul(a, b)
            bc = self.mul(b, c)
            lhs = self.mul(ab, c) if ab is not None else None
            rhs = self.mul(a, bc) if bc is not None else None
            if ab is not None and bc is not None and lhs != rhs:
                raise ValidationError(
                    f"{self.name}: associativity fails at ({a!r}, {b!r}, {c!r})")
        self._checked = True

    def is_commutative(self) -> bool:
        for a, b in itertools.product(self.elements, repeat=2):
            if self.mul(a, b) != self.mul(b, a):
                return False
        return True

    def power(self, a: Hashable, k: int) -> Hashable | None:
        out = self.unit
        for _ in range(k):
            out = self.mul(out, a)
            if out is None:
                return None
        return out

    def product_of(self, xs) -> Hashable | None:
        out = self.unit
        for a in xs:
            out = self.mul(out, a)
            if out is None:
                return None
        return out

    def strings(self, q: int) -> list[tuple]:
        """Composable q-strings: every contiguous product is defined."""
        if q == 0:
            return [()]
        out = []
        for t in itertools.product(self.elements, repeat=q):
            ok = True
            for i in range(q):
                acc = t[i]
                for j in range(i + 1, q):
                    acc = self.mul(acc, t[j])
                    if acc is None:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(t)
        return out

    def __repr__(self):
        return f"Monoid({self.name}, {len(self.elements)} elements)"


def from_table(table: Sequence[Sequence[int]], name="table-monoid") -> Monoid:
    """Monoid on {0..n-1} from a multiplication table; element 0 is required
    to be the two-sided unit (checked by ``check``)."""
    n = len(table)
    for row in table:
        if len(row) != n:
            raise ValidationError(f"{name}: table is not square")
        for v in row:
            if not (0 <= v < n):
                raise ValidationError(f"{name}: table entry {v} out of range")
    return Monoid(range(n), 0, lambda a, b: table[a][b], name=name)


def trivial_monoid() -> Monoid:
    return Monoid([0], 0, lambda a, b: 0, name="1", assume_checked=True)


def cyclic_group(n: int) -> Monoid:
    return Monoid(range(n), 0, lambda a, b: (a + b) % n, name=f"Z/{n}",
                  assume_checked=True)


def symmetric_group(n: int) -> Monoid:
    els = perms.all_perms(n)
    return Monoid(els, perms.identity(n), perms.compose, name=f"Sigma{n}",
                  assume_checked=True)


def truncated_naturals(cap: int) -> Monoid:
    """{0..cap} under partial addition; sums above cap are undefined."""
    def add(a, b):
        s = a + b
        return s if s <= cap else None
    return Monoid(range(cap + 1), 0, add, name=f"N<={cap}", assume_checked=True)


def saturating_naturals(cap: int) -> Monoid:
    """{0..cap} under saturating addition; a total commutative monoid."""
    return Monoid(range(cap + 1), 0, lambda a, b: min(a + b, cap),
                  name=f"Nsat{cap}", assume_checked=True)


def block_sum_monoid(n_max: int) -> Monoid:
    """Disjoint union of the Sigma_n, n <= n_max, under block sum of
    permutations; block sums beyond n_max are undefined."""
    els = []
    for n in range(n_max + 1):
        els.extend((n, p) for p in perms.all_perms(n))

    def mul(a, b):
        (na, pa), (nb, pb) = a, b
        if na + nb > n_max:
            return None
        return (na + nb, perms.block_sum([pa, pb]))

    return Monoid(els, (0, ()), mul, name=f"Sigma<= {n_max}",
                  assume_checked=True)


def abelianization(m: Monoid) -> tuple[int, list[int]]:
    """(free rank, torsion) of the universal abelian group of a finite GROUP.

    Computed as the quotient of the free abelian group on the elements by the
    relations [a] + [b] - [ab]; this is independent of the homology engine
    and is used as an oracle for H_1 of classifying spaces.
    """
    from .homology import SparseIntMatrix, snf
    idx = {a: i for i, a in enumerate(m.elements)}
    n = len(m.elements)
    cols = []
    for a, b in itertools.product(m.elements, repeat=2):
        ab = m.mul(a, b)
        if ab is None:
            raise ValidationError("abelianization needs a total monoid")
        col = {}
        for el, s in ((a, 1), (b, 1), (ab, -1)):
            col[idx[el]] = col.get(idx[el], 0) + s
        cols.append(col)
    mat = SparseIntMatrix(n, len(cols))
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v:
                mat.set(i, j, v)
    res = snf(mat)
    d = res.diagonal
    torsion = [x for x in d if x > 1]
    rank = n - len([x for x in d if x != 0])
    return rank, torsion


class Groupoid:
    """A small groupoid: objects plus a predicate for (unique) morphisms.

    Only unique-morphism groupoids are needed here (translation groupoids of
    groups acting on themselves), so a morphism is determined by its source
    and target.
    """

    def __init__(self, objects: Sequence[Hashable],
                 has_morphism: Callable[[Hashable, Hashable], bool],
                 name="groupoid"):
        self.objects = tuple(objects)
        self.has_morphism = has_morphism
        self.name = name

    def check(self) -> None:
        for o in self.objects:
            if not self.has_morphism(o, o):
                raise ValidationError(f"{self.name}: missing identity at {o!r}")
        for a, b in itertools.product(self.objects, repeat=2):
            if self.has_morphism(a, b) != self.has_morphism(b, a):
                raise ValidationError(f"{self.name}: not a groupoid at ({a!r},{b!r})")

    def __repr__(self):
        return f"Groupoid({self.name}, {len(self.objects)} objects)"


def translation_groupoid(group: Monoid) -> Groupoid:
    """Objects the group elements, a unique morphism between any two."""
    return Groupoid(group.elements, lambda a, b: True,
                    name=f"E({group.name})")
