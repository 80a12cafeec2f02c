"""Exact integer homology of truncated simplicial sets.

Boundary matrices are sparse with arbitrary-precision Python integers, so no
computation can overflow.  Smith normal form carries optional unimodular
transform certificates (U M V = D with det U, det V = +-1), from which
homology groups come with explicit generating cycles and a coordinate solver
for pushing cycles forward along maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .sset import (Cell, Simplex, SimplicialMap, SimplicialSet,
                   TruncationError, ValidationError)


# ---------------------------------------------------------------------------
# sparse integer matrices
# ---------------------------------------------------------------------------

class SparseIntMatrix:
    """Row-major sparse matrix over Z with a column occupancy index."""

    __slots__ = ("nrows", "ncols", "rows", "cols")

    def __init__(self, nrows: int, ncols: int):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        m = cls(len(rows), len(rows[0]) if rows else 0)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.set(i, j, v)
        return m

    def get(self, i: int, j: int) -> int:
        return self.rows.get(i, {}).get(j, 0)

    def set(self, i: int, j: int, v: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"({i},{j}) out of range")
        row = self.rows.get(i)
        if v == 0:
            if row and j in row:
                del row[j]
                if not row:
                    del self.rows[i]
                s = self.cols[j]
                s.discard(i)
                if not s:
                    del self.cols[j]
        else:
            if row is None:
                row = self.rows[i] = {}
            row[j] = v
            self.cols.setdefault(j, set()).add(i)

    def add(self, i: int, j: int, v: int) -> None:
        self.set(i, j, self.get(i, j) + v)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def entries(self):
        for i, row in self.rows.items():
            for j, v in row.items():
                yield i, j, v

    def clone(self) -> "SparseIntMatrix":
        m = SparseIntMatrix(self.nrows, self.ncols)
        m.rows = {i: dict(r) for i, r in self.rows.items()}
        m.cols = {j: set(s) for j, s in self.cols.items()}
        return m

    def to_dense(self) -> list[list[int]]:
        return [[self.get(i, j) for j in range(self.ncols)]
                for i in range(self.nrows)]

    def is_zero(self) -> bool:
        return not self.rows

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.ncols} vs {other.nrows}")
        out = SparseIntMatrix(self.nrows, other.ncols)
        for i, row in self.rows.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                orow = other.rows.get(k)
                if orow:
                    for j, w in orow.items():
                        acc[j] = acc.get(j, 0) + v * w
            for j, v in acc.items():
                if v:
                    out.set(i, j, v)
        return out

    def matvec(self, vec: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, row in self.rows.items():
            s = 0
            for j, v in row.items():
                w = vec.get(j)
                if w:
                    s += v * w
            if s:
                out[i] = s
        return out

    def column(self, j: int) -> dict[int, int]:
        return {i: self.rows[i][j] for i in self.cols.get(j, ())}

    def submatrix_rows(self, row_ids: Sequence[int]) -> "SparseIntMatrix":
        out = SparseIntMatrix(len(row_ids), self.ncols)
        for new_i, i in enumerate(row_ids):
            for j, v in self.rows.get(i, {}).items():
                out.set(new_i, j, v)
        return out

    def equal(self, other: "SparseIntMatrix") -> bool:
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and \
            self.rows == other.rows

    # elementary operations; used by snf, which mirrors them on certificates
    def swap_rows(self, a: int, b: int) -> None:
        if a == b:
            return
        ra, rb = self.rows.pop(a, None), self.rows.pop(b, None)
        if rb is not None:
            self.rows[a] = rb
        if ra is not None:
            self.rows[b] = ra
        for j in set((ra or {})) | set((rb or {})):
            s = self.cols[j]
            ina, inb = a in s, b in s
            if ina != inb:
                if ina:
                    s.discard(a)
                    s.add(b)
                else:
                    s.discard(b)
                    s.add(a)

    def swap_cols(self, a: int, b: int) -> None:
        if a == b:
            return
        touched = self.cols.get(a, set()) | self.cols.get(b, set())
        for i in touched:
            row = self.rows[i]
            va, vb = row.get(a), row.get(b)
            for j, v in ((a, vb), (b, va)):
                if v is None:
                    row.pop(j, None)
                else:
                    row[j] = v
        ca, cb = self.cols.pop(a, None), self.cols.pop(b, None)
        if cb:
            self.cols[a] = cb
        if ca:
            self.cols[b] = ca

    def scale_row(self, i: int, c: int) -> None:
        row = self.rows.get(i)
        if not row:
            return
        if c == 0:
            for j in list(row):
                self.set(i, j, 0)
            return
        for j in row:
            row[j] *= c

    def scale_col(self, j: int, c: int) -> None:
        for i in list(self.cols.get(j, ())):
            self.set(i, j, self.get(i, j) * c if c else 0)

    def add_row_multiple(self, i: int, j: int, c: int) -> None:
        """row_i += c * row_j."""
        if c == 0 or i == j:
            return
        src = self.rows.get(j)
        if not src:
            return
        for col, v in list(src.items()):
            self.add(i, col, c * v)

    def add_col_multiple(self, j: int, k: int, c: int) -> None:
        """col_j += c * col_k."""
        if c == 0 or j == k:
            return
        for i in list(self.cols.get(k, ())):
            self.add(i, j, c * self.get(i, k))


def det_exact(dense: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant; exact over Z (small matrices)."""
    n = len(dense)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in dense]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SNFResult:
    """U @ M @ V == D, diagonal with d_1 | d_2 | ...; U, V unimodular.

    Only the certificates that were requested are populated; U_inv and V_inv
    satisfy U_inv @ U == I and V @ V_inv == I, so M == U_inv @ D @ V_inv.
    """
    nrows: int
    ncols: int
    diagonal: list[int]
    U: SparseIntMatrix | None = None
    V: SparseIntMatrix | None = None
    U_inv: SparseIntMatrix | None = None
    V_inv: SparseIntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def d_matrix(self) -> SparseIntMatrix:
        m = SparseIntMatrix(self.nrows, self.ncols)
        for t, d in enumerate(self.diagonal):
            m.set(t, t, d)
        return m

    def check(self, M: SparseIntMatrix) -> None:
        """Verify the certificate exactly (intended for small matrices)."""
        if self.U is None or self.V is None:
            raise ValidationError("snf check needs U and V certificates")
        lhs = self.U.matmul(M).matmul(self.V)
        if not lhs.equal(self.d_matrix()):
            raise ValidationError("snf certificate does not reproduce D")
        for name, mat in (("U", self.U), ("V", self.V)):
            if abs(det_exact(mat.to_dense())) != 1:
                raise ValidationError(f"snf certificate {name} is not unimodular")
        for a, b in zip(self.diagonal, self.diagonal[1:]):
            if b % a != 0:
                raise ValidationError("snf diagonal is not a divisibility chain")


class _SnfWork:
    def __init__(self, M: SparseIntMatrix, want_u, want_v, want_u_inv, want_v_inv):
        self.A = M.clone()
        n, m = M.nrows, M.ncols
        self.U = SparseIntMatrix.identity(n) if want_u else None
        self.Ui = SparseIntMatrix.identity(n) if want_u_inv else None
        self.V = SparseIntMatrix.identity(m) if want_v else None
        self.Vi = SparseIntMatrix.identity(m) if want_v_inv else None

    def swap_rows(self, a, b):
        self.A.swap_rows(a, b)
        if self.U is not None:
            self.U.swap_rows(a, b)
        if self.Ui is not None:
            self.Ui.swap_cols(a, b)

    def swap_cols(self, a, b):
        self.A.swap_cols(a, b)
        if self.V is not None:
            self.V.swap_cols(a, b)
        if self.Vi is not None:
            self.Vi.swap_rows(a, b)

    def negate_row(self, i):
        self.A.scale_row(i, -1)
        if self.U is not None:
            self.U.scale_row(i, -1)
        if self.Ui is not None:
            self.Ui.scale_col(i, -1)

    def add_row(self, i, j, c):
        """row_i += c * row_j."""
        self.A.add_row_multiple(i, j, c)
        if self.U is not None:
            self.U.add_row_multiple(i, j, c)
        if self.Ui is not None:
            self.Ui.add_col_multiple(j, i, -c)

    def add_col(self, j, k, c):
        """col_j += c * col_k."""
        self.A.add_col_multiple(j, k, c)
        if self.V is not None:
            self.V.add_col_multiple(j, k, c)
        if self.Vi is not None:
            self.Vi.add_row_multiple(k, j, -c)


def snf(M: SparseIntMatrix, want_u=False, want_v=False,
        want_u_inv=False, want_v_inv=False,
        fallback_threshold: int = 1 << 62) -> SNFResult:
    """Smith normal form by smallest-magnitude pivoting.

    Pivots of magnitude 1 are taken greedily in scan order; otherwise the
    smallest-magnitude entry wins, with a Markowitz fill tie-break once any
    coefficient has grown past ``fallback_threshold``.
    """
    w = _SnfWork(M, want_u, want_v, want_u_inv, want_v_inv)
    A = w.A
    t = 0
    limit = min(M.nrows, M.ncols)
    blown = False
    while t < limit:
        pivot = _find_pivot(A, t, blown)
        if pivot is None:
            break
        pi, pj, pv = pivot
        if abs(pv) > fallback_threshold:
            blown = True
        w.swap_rows(t, pi)
        w.swap_cols(t, pj)
        _clear_position(w, t)
        _enforce_divisibility(w, t)
        t += 1
    diagonal = [A.get(i, i) for i in range(t)]
    return SNFResult(M.nrows, M.ncols, diagonal,
                     U=w.U, V=w.V, U_inv=w.Ui, V_inv=w.Vi)


def _find_pivot(A: SparseIntMatrix, t: int, use_fill: bool):
    best = None
    for i in sorted(A.rows):
        if i < t:
            continue
        for j in sorted(A.rows[i]):
            if j < t:
                continue
            v = A.rows[i][j]
            av = abs(v)
            if not use_fill:
                if av == 1:
                    return (i, j, v)
                key = (av, i, j)
            else:
                fill = (len(A.rows[i]) - 1) * (len(A.cols[j]) - 1)
                key = (av, fill, i, j)
            if best is None or key < best[0]:
                best = (key, (i, j, v))
    return best[1] if best else None


def _clear_position(w: _SnfWork, t: int) -> None:
    A = w.A
    while True:
        if A.get(t, t) < 0:
            w.negate_row(t)
        d = A.get(t, t)
        restart = False
        for i in sorted(A.cols.get(t, ())):
            if i <= t:
                continue
            q = A.get(i, t) // d
            if q:
                w.add_row(i, t, -q)
            if A.get(i, t):
                w.swap_rows(t, i)     # strictly smaller pivot
                restart = True
                break
        if restart:
            continue
        row = A.rows.get(t, {})
        for j in sorted(row):
            if j <= t:
                continue
            q = row[j] // d
            if q:
                w.add_col(j, t, -q)
            if A.get(t, j):
                w.swap_cols(t, j)
                restart = True
                break
        if not restart:
            return


def _enforce_divisibility(w: _SnfWork, t: int) -> None:
    A = w.A
    while True:
        d = A.get(t, t)
        offender = None
        for i in sorted(A.rows):
            if i <= t:
                continue
            for j, v in A.rows[i].items():
                if j > t and v % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is None:
            return
        w.add_row(t, offender, 1)
        _clear_position(w, t)


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------

class ChainComplex:
    """Free Z-complex on explicit bases with sparse boundary matrices."""

    def __init__(self, basis: dict[int, tuple[Cell, ...]],
                 boundary: dict[int, SparseIntMatrix], top: int, name=""):
        self.basis = basis
        self.boundary = boundary
        self.top = top
        self.name = name
        self.index = {q: {c: i for i, c in enumerate(cs)}
                      for q, cs in basis.items()}

    def dim(self, q: int) -> int:
        return len(self.basis.get(q, ()))

    def bnd(self, q: int) -> SparseIntMatrix:
        if q <= 0 or q > self.top:
            return SparseIntMatrix(self.dim(q - 1) if q > 0 else 0, self.dim(q))
        return self.boundary[q]

    def check_dd_zero(self) -> None:
        for q in range(2, self.top + 1):
            prod = self.bnd(q - 1).matmul(self.bnd(q))
            if not prod.is_zero():
                raise ValidationError(f"{self.name}: boundary^2 != 0 in degree {q}")


def normalized_chains(x: SimplicialSet, q_max: int, name="") -> ChainComplex:
    """Chains on nondegenerate cells; degenerate faces are dropped."""
    if x.dim_bound is not None and x.dim_bound < q_max:
        raise TruncationError(
            f"normalized chains through degree {q_max} need {x.name or 'space'} "
            f"defined there (truncated at {x.dim_bound})")
    basis = {q: tuple(x.cells(q)) for q in range(q_max + 1)}
    index = {q: {c: i for i, c in enumerate(cs)} for q, cs in basis.items()}
    boundary = {}
    for q in range(1, q_max + 1):
        mat = SparseIntMatrix(len(basis[q - 1]), len(basis[q]))
        for j, c in enumerate(basis[q]):
            for i in range(q + 1):
                f = x.cell_face(c, i)
                if not f.is_degenerate:
                    mat.add(index[q - 1][f.cell], j, -1 if i % 2 else 1)
        boundary[q] = mat
    return ChainComplex(basis, boundary, q_max, name=name or f"C({x.name})")


# ---------------------------------------------------------------------------
# homology groups with generators
# ---------------------------------------------------------------------------

@dataclass
class HomologyGroup:
    degree: int
    free_rank: int
    torsion: list[int]
    # one entry per kernel-basis generator: ("free"|"torsion"|"killed", order)
    gen_kinds: list[tuple[str, int]] = field(repr=False, default_factory=list)
    gen_cycles: list[dict[int, int]] = field(repr=False, default_factory=list)
    basis: tuple[Cell, ...] = field(repr=False, default=())
    _kernel_coords: SparseIntMatrix | None = field(repr=False, default=None)
    _u_t: SparseIntMatrix | None = field(repr=False, default=None)
    _bnd: SparseIntMatrix | None = field(repr=False, default=None)

    def iso_type(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, tuple(self.torsion))

    def group_str(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def generator_positions(self) -> list[int]:
        """Kernel-basis positions that survive to homology (torsion then free
        in diagonal order)."""
        return [i for i, (kind, _) in enumerate(self.gen_kinds)
                if kind != "killed"]

    def generators(self) -> list[dict[int, int]]:
        return [self.gen_cycles[i] for i in self.generator_positions()]

    def orders(self) -> list[int]:
        """0 means infinite order."""
        return [self.gen_kinds[i][1] for i in self.generator_positions()]

    def coords_of_cycle(self, z: dict[int, int]) -> tuple[int, ...]:
        """Canonical coordinates of a cycle's class in the generator basis."""
        if self._bnd is not None:
            img = self._bnd.matvec(z)
            if img:
                raise ValidationError(f"vector is not a cycle in degree {self.degree}")
        w = self._kernel_coords.matvec(z) if self._kernel_coords is not None else {}
        wt = self._u_t.matvec(w) if self._u_t is not None else w
        out = []
        for i in self.generator_positions():
            kind, order = self.gen_kinds[i]
            v = wt.get(i, 0)
            out.append(v % order if kind == "torsion" else v)
        return tuple(out)


def homology(c: ChainComplex, q: int, strict_top=True) -> HomologyGroup:
    """H_q from Smith normal forms of the two adjacent boundaries."""
    if q < 0 or q > c.top:
        raise TruncationError(f"degree {q} out of range for {c.name}")
    if strict_top and q == c.top and c.top > 0:
        raise TruncationError(
            f"H_{q} needs boundary matrices through degree {q + 1}; "
            f"the complex stops at {c.top}")
    n = c.dim(q)
    A = c.bnd(q)
    if q == 0:
        ra, V, Vi = 0, SparseIntMatrix.identity(n), SparseIntMatrix.identity(n)
    else:
        res_a = snf(A, want_v=True, want_v_inv=True)
        ra, V, Vi = res_a.rank, res_a.V, res_a.V_inv
    k = n - ra
    kernel_coords = Vi.submatrix_rows(list(range(ra, n)))      # k x n
    B = c.bnd(q + 1)
    T = kernel_coords.matmul(B)                                # k x dim(q+1)
    res_t = snf(T, want_u=True, want_u_inv=True)
    diag = res_t.diagonal
    kinds: list[tuple[str, int]] = []
    for i in range(k):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            kinds.append(("killed", 1))
        elif d > 1:
            kinds.append(("torsion", d))
        else:
            kinds.append(("free", 0))
    # kernel basis K = columns ra..n-1 of V;  generators are K @ U_t^{-1}
    k_tilde = SparseIntMatrix(n, k)
    for i in range(n):
        for j in range(ra, n):
            v = V.get(i, j)
            if v:
                k_tilde.set(i, j - ra, v)
    k_tilde = k_tilde.matmul(res_t.U_inv)
    cycles = [k_tilde.column(j) for j in range(k)]
    torsion = [d for d in diag if d > 1]
    free_rank = sum(1 for kind, _ in kinds if kind == "free")
    return HomologyGroup(q, free_rank, torsion, kinds, cycles,
                         c.basis.get(q, ()), kernel_coords, res_t.U, A)


class ChainData:
    """Chains plus per-degree homology for one space, computed once."""

    def __init__(self, space: SimplicialSet, q_max: int):
        self.space = space
        self.q_max = q_max
        self.complex = normalized_chains(space, q_max)
        self._h: dict[int, HomologyGroup] = {}

    def homology(self, q: int) -> HomologyGroup:
        got = self._h.get(q)
        if got is None:
            got = self._h[q] = homology(self.complex, q)
        return got


def homology_of(x: SimplicialSet, q: int) -> HomologyGroup:
    """H_q(x), building normalized chains through degree q+1."""
    bound = q + 1
    if x.dim_bound is not None:
        bound = min(bound, x.dim_bound)
        if bound < q + 1:
            raise TruncationError(
                f"H_{q} needs {x.name or 'space'} defined through {q + 1}")
    return ChainData(x, bound).homology(q)


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------

def chain_map_matrix(f: SimplicialMap, src: ChainComplex, tgt: ChainComplex,
                     q: int) -> SparseIntMatrix:
    mat = SparseIntMatrix(tgt.dim(q), src.dim(q))
    for j, c in enumerate(src.basis.get(q, ())):
        im = f.cell_image(c)
        if not im.is_degenerate:
            mat.set(tgt.index[q][im.cell], j, 1)
    return mat


@dataclass
class HomologyMap:
    degree: int
    source: HomologyGroup
    target: HomologyGroup
    columns: list[tuple[int, ...]]      # image coords of each source generator

    def is_iso(self) -> bool:
        if self.source.iso_type() != self.target.iso_type():
            return False
        return self.is_surjective()

    def is_surjective(self) -> bool:
        """Images plus target relations generate the target group.  For
        finitely generated abelian groups of equal isomorphism type this is
        equivalent to bijectivity."""
        orders = self.target.orders()
        g = len(orders)
        cols: list[dict[int, int]] = []
        for col in self.columns:
            cols.append({i: v for i, v in enumerate(col) if v})
        for i, d in enumerate(orders):
            if d:
                cols.append({i: d})
        m = SparseIntMatrix(g, len(cols))
        for j, col in enumerate(cols):
            for i, v in col.items():
                m.set(i, j, v)
        res = snf(m)
        return res.rank == g and all(d == 1 for d in res.diagonal)

    def compose(self, other: "HomologyMap") -> "HomologyMap":
        """self after other (matrix product with torsion reduction)."""
        cols = []
        orders = self.target.orders()
        for col in other.columns:
            acc = [0] * len(orders)
            for s, v in enumerate(col):
                if v:
                    for t, w in enumerate(self.columns[s]):
                        acc[t] += v * w
            cols.append(tuple(a % d if d else a for a, d in zip(acc, orders)))
        return HomologyMap(self.degree, other.source, self.target, cols)

    def matrix(self) -> list[list[int]]:
        """Dense matrix, target coordinates in rows."""
        g = len(self.target.orders())
        return [[col[i] for col in self.columns] for i in range(g)]


def induced_map(f: SimplicialMap, q: int,
                src_data: ChainData | None = None,
                tgt_data: ChainData | None = None) -> HomologyMap:
    if src_data is None:
        src_data = ChainData(f.source, q + 1)
    if tgt_data is None:
        tgt_data = ChainData(f.target, q + 1)
    csrc, ctgt = src_data.complex, tgt_data.complex
    fq = chain_map_matrix(f, csrc, ctgt, q)
    if q >= 1:
        lhs = ctgt.bnd(q).matmul(fq)
        rhs = chain_map_matrix(f, csrc, ctgt, q - 1).matmul(csrc.bnd(q))
        if not lhs.equal(rhs):
            for j, cell in enumerate(csrc.basis[q]):
                if lhs.column(j) != rhs.column(j):
                    raise ValidationError(
                        f"not a chain map in degree {q}; witness cell {cell!r}")
    hs, ht = src_data.homology(q), tgt_data.homology(q)
    cols = []
    for z in hs.generators():
        fz = fq.matvec(z)
        cols.append(ht.coords_of_cycle(fz))
    return HomologyMap(q, hs, ht, cols)


@dataclass
class IsoVerdict:
    degree: int
    is_iso: bool
    source: tuple[int, tuple[int, ...]]
    target: tuple[int, tuple[int, ...]]


def is_homology_iso(f: SimplicialMap, degrees: Sequence[int]) -> dict[int, IsoVerdict]:
    q_top = max(degrees)
    src = ChainData(f.source, q_top + 1)
    tgt = ChainData(f.target, q_top + 1)
    out = {}
    for q in degrees:
        hm = induced_map(f, q, src, tgt)
        out[q] = IsoVerdict(q, hm.is_iso(), hm.source.iso_type(),
                            hm.target.iso_type())
    return out


# ---------------------------------------------------------------------------
# filtered colimits of homology (telescopes)
# ---------------------------------------------------------------------------

@dataclass
class ColimitResult:
    degree: int
    stabilized: bool
    stage: int | None
    group: HomologyGroup | None
    stage_types: list[tuple[int, tuple[int, ...]]]
    step_iso: list[bool]

    def group_str(self) -> str:
        return self.group.group_str() if self.group else "not stabilized"


def homology_colimit(ladder: Sequence[SimplicialMap], q: int,
                     window: int = 2) -> ColimitResult:
    """Stabilized H_q of X_0 -> X_1 -> ... -> X_G.

    Returns H_q(X_g) for the first g whose next ``window`` induced maps are
    all isomorphisms; reports non-stabilization otherwise (not an error).
    """
    if not ladder:
        raise ValidationError("homology colimit needs at least one map")
    for a, b in zip(ladder, ladder[1:]):
        if a.target is not b.source:
            raise ValidationError("ladder maps are not composable")
    if len(ladder) < window:
        raise ValidationError(
            f"ladder of {len(ladder)} maps cannot certify a window of {window}")
    spaces = [ladder[0].source] + [m.target for m in ladder]
    data = [ChainData(s, q + 1) for s in spaces]
    groups = [d.homology(q) for d in data]
    step_iso = []
    for g, m in enumerate(ladder):
        hm = induced_map(m, q, data[g], data[g + 1])
        step_iso.append(hm.is_iso())
    stage = None
    for g in range(len(ladder) - window + 1):
        if all(step_iso[g:g + window]):
            stage = g
            break
    return ColimitResult(
        q, stage is not None, stage,
        groups[stage] if stage is not None else None,
        [h.iso_type() for h in groups], step_iso)
