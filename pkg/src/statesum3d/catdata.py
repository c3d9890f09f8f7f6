"""Skeletal spherical group-graded fusion data.

A category backend is a finite package of exact scalars:

* a finite group ``G`` given by its multiplication table,
* a finite list of simple labels, each with a grade in G, a dual label,
  left/right dimensions and a pivotal coefficient in the ground field,
* a multiplicity-free fusion table ``N[i][j][k] in {0, 1}``,
* an F-symbol table for the change between the two parenthesizations of a
  triple product, stored in blocks.

Conventions fixed by this module (every consumer relies on them):

* splitting basis vectors ``B(a,b;c): c -> a (x) b`` are chosen once per
  admissible triple; the fusion vectors ``Y(a,b;c)`` are normalized by
  ``Y o B = id``;
* the F-table means
  ``(id_a (x) B(b,c;f)) B(a,f;d) = sum_e F[a,b,c,d]_{e,f} (B(a,b;e) (x) id_c) B(e,c;d)``;
* blocks with the unit among the first three labels are identity blocks and
  are not stored;
* duality scalars are derived, not stored:
  ``lcoev_i = B(i, i*; 1)``,
  ``lev_i   = A_i  Y(i*, i; 1)`` with ``A_i = 1 / Finv[i, i*, i, i][1, 1]``,
  ``rcoev_i = p_i  B(i*, i; 1)`` with ``p_i`` the stored pivotal coefficient,
  ``rev_i   = dim_r(i) Y(i, i*; 1)``.

Validation recomputes the snake and dimension identities these choices must
satisfy, so inconsistent files are rejected with named witnesses.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .exactnum import FieldElement, FieldSpec, make_field, root_of_unity
from .linalg import matrix_inverse

__all__ = [
    "FiniteGroup",
    "GroupHom",
    "CocycleTable",
    "GFusionData",
    "ValidationReport",
    "build_vec_g_theta",
    "fibonacci_category",
    "ising_like_category",
    "validate_category",
    "neutral_dimension",
    "graduator",
    "push_forward",
    "builtin_category",
    "builtin_category_names",
    "save_category",
    "load_category",
]


class FiniteGroup:
    """Finite group as a multiplication table over indices 0..n-1.

    Associativity, identity and inverses are verified on construction, so a
    FiniteGroup instance is always an actual group.
    """

    def __init__(self, table, name: str = "G"):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.name = name
        n = self.order
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table is not square")
        ident = None
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("multiplication table has no identity")
        self.identity = ident
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == ident:
                    inv[a] = b
        if any(v is None for v in inv):
            raise ValueError("multiplication table has a non-invertible element")
        self.inverse_table = tuple(inv)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(f"associativity fails at ({a},{b},{c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def elements(self):
        return range(self.order)

    def prod(self, items) -> int:
        out = self.identity
        for x in items:
            out = self.table[out][x]
        return out

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order {self.order})"

    # -- built-in families ------------------------------------------------

    @staticmethod
    def cyclic(n: int) -> FiniteGroup:
        return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)],
                           name=f"Z{n}")

    @staticmethod
    def trivial() -> FiniteGroup:
        return FiniteGroup([[0]], name="1")

    @staticmethod
    def dihedral(n: int) -> FiniteGroup:
        """Dihedral group of order 2n; element 2k = rotation r^k, 2k+1 = r^k s."""
        def enc(rot, flip):
            return 2 * (rot % n) + flip

        def mul(x, y):
            rx, fx = divmod(x, 2)
            ry, fy = divmod(y, 2)
            if fx == 0:
                return enc(rx + ry, fy)
            return enc(rx - ry, 1 - fy)

        return FiniteGroup([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)],
                           name=f"D{n}")

    @staticmethod
    def symmetric(n: int) -> FiniteGroup:
        if n > 4:
            raise ValueError("symmetric groups shipped only up to S4")
        perms = []

        def gen(prefix, rest):
            if not rest:
                perms.append(tuple(prefix))
                return
            for i, x in enumerate(rest):
                gen(prefix + [x], rest[:i] + rest[i + 1:])

        gen([], list(range(n)))
        perms.sort()
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
        return FiniteGroup(table, name=f"S{n}")

    @staticmethod
    def by_name(name: str) -> FiniteGroup:
        if name in ("1", "trivial"):
            return FiniteGroup.trivial()
        if name.startswith("Z"):
            return FiniteGroup.cyclic(int(name[1:]))
        if name.startswith("D"):
            return FiniteGroup.dihedral(int(name[1:]))
        if name.startswith("S"):
            return FiniteGroup.symmetric(int(name[1:]))
        raise ValueError(f"unknown group name {name!r}")


class GroupHom:
    """Homomorphism between FiniteGroups given by its value list."""

    def __init__(self, src: FiniteGroup, dst: FiniteGroup, values):
        self.src = src
        self.dst = dst
        self.values = tuple(values)
        if len(self.values) != src.order:
            raise ValueError("homomorphism value list has wrong length")
        for a in range(src.order):
            for b in range(src.order):
                if self.values[src.mul(a, b)] != dst.mul(self.values[a], self.values[b]):
                    raise ValueError(f"not a homomorphism at ({a},{b})")

    def __call__(self, a: int) -> int:
        return self.values[a]

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.dst.order

    def kernel(self):
        return [a for a in self.src.elements() if self.values[a] == self.dst.identity]

    @staticmethod
    def identity(g: FiniteGroup) -> GroupHom:
        return GroupHom(g, g, list(g.elements()))


class CocycleTable:
    """Normalized 3-cocycle on a finite group with values in roots of unity.

    ``values[(a, b, c)]`` is a FieldElement.  Construction checks
    normalization (value 1 whenever an argument is the identity) and the
    cocycle identity
    ``t(b,c,d) t(a,bc,d) t(a,b,c) = t(ab,c,d) t(a,b,cd)``
    for all quadruples, reporting the first violated quadruple.
    """

    def __init__(self, group: FiniteGroup, field: FieldSpec, values: dict):
        self.group = group
        self.field = field
        self.values = dict(values)
        e = group.identity
        one = field.one()
        for a, b, c in product(group.elements(), repeat=3):
            if (a, b, c) not in self.values:
                raise ValueError(f"cocycle table missing value at ({a},{b},{c})")
            if (a == e or b == e or c == e) and self.values[(a, b, c)] != one:
                raise ValueError(f"cocycle not normalized at ({a},{b},{c})")
        for a, b, c, d in product(group.elements(), repeat=4):
            lhs = self.values[(b, c, d)] * self.values[(a, group.mul(b, c), d)] \
                * self.values[(a, b, c)]
            rhs = self.values[(group.mul(a, b), c, d)] * self.values[(a, b, group.mul(c, d))]
            if lhs != rhs:
                raise ValueError(f"cocycle condition violated at quadruple ({a},{b},{c},{d})")

    def __call__(self, a: int, b: int, c: int) -> FieldElement:
        return self.values[(a, b, c)]

    @staticmethod
    def trivial(group: FiniteGroup, field: FieldSpec | None = None) -> CocycleTable:
        field = field or make_field("rational")
        one = field.one()
        vals = {(a, b, c): one for a, b, c in product(group.elements(), repeat=3)}
        return CocycleTable(group, field, vals)

    @staticmethod
    def cyclic_rep(n: int, q: int) -> CocycleTable:
        """Standard representative of the class q in H^3(Z/n; k*):
        theta_q(a,b,c) = zeta_n^(q a floor((b+c)/n)) with least residues."""
        group = FiniteGroup.cyclic(n)
        field = make_field("cyclotomic", n)
        vals = {}
        for a, b, c in product(range(n), repeat=3):
            vals[(a, b, c)] = root_of_unity(field, q * a * ((b + c) // n))
        return CocycleTable(group, field, vals)

    @staticmethod
    def from_values(group: FiniteGroup, field: FieldSpec, values: dict) -> CocycleTable:
        return CocycleTable(group, field, values)


class GFusionData:
    """Skeletal spherical G-graded fusion data; immutable after validation.

    F-symbols are stored sparsely as ``fsym[(a,b,c,d,e,f)]`` for blocks with
    no unit among (a, b, c).  Lookup goes through :meth:`f_entry`, which
    supplies the identity blocks and admissibility filtering.
    """

    def __init__(self, field: FieldSpec, group: FiniteGroup, names, grade, dual,
                 fusion_triples, fsym, dim_l, dim_r, pivotal, name: str = "category"):
        self.field = field
        self.group = group
        self.names = tuple(names)
        self.n = len(self.names)
        self.grade = tuple(grade)
        self.dual = tuple(dual)
        self.dim_l = tuple(dim_l)
        self.dim_r = tuple(dim_r)
        self.pivotal = tuple(pivotal)
        self.name = name
        # the unit is the label that fuses trivially on both sides
        self.fusion_set = frozenset(fusion_triples)
        unit = None
        for i in range(self.n):
            if all(((i, j, j) in self.fusion_set) and ((j, i, j) in self.fusion_set)
                   for j in range(self.n)):
                unit = i
                break
        if unit is None:
            raise ValueError("fusion table has no unit label")
        self.unit = unit
        self._products = {}
        for i in range(self.n):
            for j in range(self.n):
                self._products[(i, j)] = tuple(sorted(
                    k for k in range(self.n) if (i, j, k) in self.fusion_set))
        self.fsym = dict(fsym)
        self._fblock_cache: dict = {}
        self._finv_cache: dict = {}
        # duality scalars, see module docstring
        self._lev = {}
        self._rev = {}
        self._lcoev = {}
        self._rcoev = {}
        for i in range(self.n):
            idual = self.dual[i]
            finv_11 = self.finv_entry(i, idual, i, i, self.unit, self.unit)
            if finv_11 is None or finv_11.is_zero():
                raise ValueError(f"degenerate duality data for simple {self.names[i]}")
            self._lcoev[i] = field.one()
            self._lev[i] = finv_11.inv()
            self._rcoev[i] = self.pivotal[i]
            self._rev[i] = self.dim_r[i]

    # -- basic table access ----------------------------------------------

    def fuse(self, i: int, j: int) -> tuple:
        """Labels occurring in i (x) j."""
        return self._products[(i, j)]

    def nmat(self, i: int, j: int, k: int) -> int:
        return 1 if (i, j, k) in self.fusion_set else 0

    def sector(self, g: int):
        return [i for i in range(self.n) if self.grade[i] == g]

    def _fadm(self, a, b, c, d, e, f) -> bool:
        return (self.nmat(a, b, e) and self.nmat(e, c, d)
                and self.nmat(b, c, f) and self.nmat(a, f, d)) == 1

    def f_entry(self, a, b, c, d, e, f) -> FieldElement | None:
        """F[a,b,c,d]_{e,f}, or None when the index pair is inadmissible."""
        if not self._fadm(a, b, c, d, e, f):
            return None
        if a == self.unit or b == self.unit or c == self.unit:
            return self.field.one()
        return self.fsym[(a, b, c, d, e, f)]

    def f_block(self, a, b, c, d):
        """(e_list, f_list, rows) of the F-block at (a,b,c,d)."""
        key = (a, b, c, d)
        if key in self._fblock_cache:
            return self._fblock_cache[key]
        es = [e for e in self.fuse(a, b) if self.nmat(e, c, d)]
        fs = [f for f in self.fuse(b, c) if self.nmat(a, f, d)]
        rows = [[self.f_entry(a, b, c, d, e, f) or self.field.zero() for f in fs]
                for e in es]
        out = (es, fs, rows)
        self._fblock_cache[key] = out
        return out

    def finv_entry(self, a, b, c, d, f, e) -> FieldElement | None:
        """Entry (f, e) of the inverse F-block at (a,b,c,d)."""
        key = (a, b, c, d)
        if key not in self._finv_cache:
            es, fs, rows = self.f_block(a, b, c, d)
            if len(es) != len(fs):
                raise ValueError(f"non-square F-block at {key}")
            inv = matrix_inverse(rows, self.field)
            table = {}
            for fi, fv in enumerate(fs):
                for ei, ev in enumerate(es):
                    table[(fv, ev)] = inv[fi][ei]
            self._finv_cache[key] = table
        return self._finv_cache[key].get((f, e))

    # -- duality scalars ---------------------------------------------------

    def lev_scalar(self, i: int) -> FieldElement:
        return self._lev[i]

    def rev_scalar(self, i: int) -> FieldElement:
        return self._rev[i]

    def lcoev_scalar(self, i: int) -> FieldElement:
        return self._lcoev[i]

    def rcoev_scalar(self, i: int) -> FieldElement:
        return self._rcoev[i]

    def dim(self, i: int) -> FieldElement:
        return self.dim_l[i]

    def simple_index(self, name: str) -> int:
        return self.names.index(name)

    def __repr__(self):
        return f"GFusionData({self.name}: {self.n} simples over {self.group!r})"


# ---------------------------------------------------------------------------
# builders


def build_vec_g_theta(group: FiniteGroup, theta: CocycleTable,
                      name: str | None = None) -> GFusionData:
    """Pointed category: one invertible simple per group element, F-symbols
    given by the cocycle, all dimensions 1, pivotal coefficients chosen so
    the skeletal duality identities hold (p_g = theta(g, g^-1, g)^-1)."""
    if theta.group != group:
        raise ValueError("cocycle is over a different group")
    field = theta.field
    n = group.order
    names = [f"g{a}" for a in group.elements()]
    grade = list(group.elements())
    dual = [group.inv(a) for a in group.elements()]
    triples = {(a, b, group.mul(a, b)) for a in range(n) for b in range(n)}
    one = field.one()
    fsym = {}
    e = group.identity
    for a, b, c in product(group.elements(), repeat=3):
        if a == e or b == e or c == e:
            continue
        d = group.prod((a, b, c))
        fsym[(a, b, c, d, group.mul(a, b), group.mul(b, c))] = theta(a, b, c)
    dims = [one] * n
    pivotal = [theta(a, group.inv(a), a).inv() for a in group.elements()]
    return GFusionData(field, group, names, grade, dual, triples, fsym,
                       dims, dims, pivotal, name=name or f"vect_{group.name}^theta")


def fibonacci_category() -> GFusionData:
    """Fibonacci fusion data over Q(phi) in the rational gauge
    F[t,t,t,t] = [[1/phi, 1/phi], [1, -1/phi]] (rows/cols ordered unit, tau)."""
    field = make_field("algebraic", minpoly=[-1, -1, 1])
    phi = field.gen()
    one = field.one()
    group = FiniteGroup.trivial()
    names = ["1", "tau"]
    grade = [0, 0]
    dual = [0, 1]
    T = 1
    triples = {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)}
    invphi = phi.inv()
    fsym = {
        (T, T, T, T, 0, 0): invphi,
        (T, T, T, T, 0, T): invphi,
        (T, T, T, T, T, 0): one,
        (T, T, T, T, T, T): -invphi,
        (T, T, T, 0, T, T): one,
    }
    dims = [one, phi]
    # A_tau = phi, so the pivotal coefficient is dim/A = 1
    pivotal = [one, one]
    return GFusionData(field, group, names, grade, dual, triples, fsym,
                       dims, dims, pivotal, name="fibonacci")


def ising_like_category() -> GFusionData:
    """Ising-type fusion data {1, eps, sigma} over Q(sqrt2); the F-table is
    the pentagon solution with F[s,s,s,s] = (1/sqrt2)[[1,1],[1,-1]] and
    F[s,e,s,e] = F[e,s,e,s] = -1."""
    field = make_field("algebraic", minpoly=[-2, 0, 1])
    r = field.gen()
    one = field.one()
    half_r = r / field.rational(2)
    group = FiniteGroup.trivial()
    names = ["1", "eps", "sigma"]
    grade = [0, 0, 0]
    dual = [0, 1, 2]
    U, E, S = 0, 1, 2
    triples = set()
    base = {(U, U): (U,), (U, E): (E,), (U, S): (S,), (E, U): (E,), (S, U): (S,),
            (E, E): (U,), (E, S): (S,), (S, E): (S,), (S, S): (U, E)}
    for (i, j), ks in base.items():
        for k in ks:
            triples.add((i, j, k))
    fsym = {
        (S, S, S, S, U, U): half_r,
        (S, S, S, S, U, E): half_r,
        (S, S, S, S, E, U): half_r,
        (S, S, S, S, E, E): -half_r,
        (S, E, S, U, S, S): one,
        (S, E, S, E, S, S): -one,
        (E, S, E, S, S, S): -one,
        (E, S, S, U, S, E): one,
        (E, S, S, E, S, U): one,
        (S, S, E, U, E, S): one,
        (S, S, E, E, U, S): one,
        (E, E, S, S, U, S): one,
        (S, E, E, S, S, U): one,
        (E, E, E, E, U, U): one,
    }
    dims = [one, one, r]
    pivotal = [one, one, one]
    return GFusionData(field, group, names, grade, dual, triples, fsym,
                       dims, dims, pivotal, name="ising_like")


# ---------------------------------------------------------------------------
# validation


class ValidationReport:
    """Ordered list of (check, ok, detail) entries; never raises."""

    def __init__(self):
        self.entries = []

    def add(self, check: str, ok: bool, detail: str = ""):
        self.entries.append((check, bool(ok), detail))

    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.entries)

    def failures(self):
        return [(c, d) for c, ok, d in self.entries if not ok]

    def __repr__(self):
        status = "pass" if self.passed() else "FAIL"
        return f"ValidationReport({status}, {len(self.entries)} checks)"

    def lines(self):
        out = []
        for check, ok, detail in self.entries:
            mark = "ok  " if ok else "FAIL"
            out.append(f"{mark} {check}" + (f": {detail}" if detail else ""))
        return out


def validate_category(data: GFusionData) -> ValidationReport:
    """Structural, pentagon, duality and dimension checks; see spec of
    conventions in the module docstring."""
    rep = ValidationReport()
    n = data.n
    g = data.group
    unit = data.unit

    ok = data.grade[unit] == g.identity
    rep.add("unit grade", ok, "" if ok else "unit label has nontrivial grade")

    bad = [(i, j, k) for (i, j, k) in data.fusion_set
           if g.mul(data.grade[i], data.grade[j]) != data.grade[k]]
    rep.add("grading compatibility", not bad, f"violations: {bad[:3]}" if bad else "")

    bad = []
    for i in range(n):
        if data.fuse(unit, i) != (i,) or data.fuse(i, unit) != (i,):
            bad.append(i)
    rep.add("unit constraints", not bad, f"labels {bad}" if bad else "")

    bad = []
    for i in range(n):
        for j in range(n):
            expect = 1 if j == data.dual[i] else 0
            if data.nmat(i, j, unit) != expect:
                bad.append((i, j))
    rep.add("duality pairing", not bad, f"pairs {bad[:3]}" if bad else "")

    bad = [i for i in range(n)
           if data.dual[data.dual[i]] != i
           or data.grade[data.dual[i]] != g.inv(data.grade[i])]
    rep.add("dual involution and grade", not bad, f"labels {bad}" if bad else "")

    empty = [h for h in g.elements() if not data.sector(h)]
    rep.add("sectors non-empty", not empty, f"grades {empty}" if empty else "")

    bad = [i for i in range(n) if data.dim_l[i].is_zero() or data.dim_r[i].is_zero()]
    rep.add("dims invertible", not bad, f"labels {bad}" if bad else "")

    # F-table domain: stored keys exactly the admissible non-unit blocks
    expected = set()
    for a, b, c in product(range(n), repeat=3):
        if unit in (a, b, c):
            continue
        for e in data.fuse(a, b):
            for f in data.fuse(b, c):
                for d in range(n):
                    if data.nmat(e, c, d) and data.nmat(a, f, d):
                        expected.add((a, b, c, d, e, f))
    missing = expected - set(data.fsym)
    extra = set(data.fsym) - expected
    rep.add("F-table domain", not missing and not extra,
            f"missing {sorted(missing)[:2]} extra {sorted(extra)[:2]}"
            if missing or extra else "")

    # block invertibility
    bad = []
    for a, b, c in product(range(n), repeat=3):
        for d in range(n):
            es, fs, rows = data.f_block(a, b, c, d)
            if not es:
                continue
            if len(es) != len(fs):
                bad.append((a, b, c, d))
                continue
            try:
                data.finv_entry(a, b, c, d, fs[0], es[0])
            except ValueError:
                bad.append((a, b, c, d))
    rep.add("F-blocks invertible", not bad, f"blocks {bad[:3]}" if bad else "")
    if bad:
        return rep

    # pentagon
    witness = None
    for a, b, c, d in product(range(n), repeat=4):
        if witness:
            break
        for u in range(n):
            for e in data.fuse(a, b):
                for k in range(n):
                    for f in range(n):
                        for gg in data.fuse(c, d):
                            rhs1 = data.f_entry(a, b, gg, u, e, k)
                            rhs2 = data.f_entry(e, c, d, u, f, gg)
                            rhs = rhs1 * rhs2 if rhs1 is not None and rhs2 is not None else None
                            tot = data.field.zero()
                            seen = False
                            for h in range(n):
                                t1 = data.f_entry(b, c, d, k, h, gg)
                                t2 = data.f_entry(a, h, d, u, f, k)
                                t3 = data.f_entry(a, b, c, f, e, h)
                                if t1 is not None and t2 is not None and t3 is not None:
                                    tot = tot + t1 * t2 * t3
                                    seen = True
                            if rhs is None and not seen:
                                continue
                            if rhs is None:
                                rhs = data.field.zero()
                            if tot != rhs:
                                witness = (a, b, c, d, u, e, f, gg, k)
                                break
                        if witness:
                            break
                    if witness:
                        break
                if witness:
                    break
            if witness:
                break
    rep.add("pentagon", witness is None,
            f"violated at (a,b,c,d,u,e,f,g,k) = {witness}" if witness else "")

    # snake consistency and dimension identities
    bad = []
    for i in range(n):
        idu = data.dual[i]
        lhs = data.finv_entry(i, idu, i, i, unit, unit)
        rhs = data.f_entry(idu, i, idu, idu, unit, unit)
        if lhs is None or rhs is None or lhs != rhs:
            bad.append(i)
    rep.add("snake consistency", not bad, f"labels {bad}" if bad else "")

    bad = []
    for i in range(n):
        idu = data.dual[i]
        a_i = data.lev_scalar(i)
        if data.dim_l[i] != a_i * data.pivotal[i]:
            bad.append((i, "dim_l != A*pivotal"))
        f11 = data.f_entry(i, idu, i, i, unit, unit)
        if f11 is None or not (data.dim_r[i] * data.pivotal[i] * f11).is_one():
            bad.append((i, "dim_r * pivotal * F11 != 1"))
    rep.add("duality scalars", not bad, f"{bad[:3]}" if bad else "")

    bad = [i for i in range(n) if data.dim_l[i] != data.dim_r[i]]
    rep.add("spherical", not bad, f"labels {bad}" if bad else "")

    dim1 = neutral_dimension(data)
    rep.add("neutral dimension invertible", not dim1.is_zero(),
            "" if not dim1.is_zero() else "dim(C_1) = 0")
    bad = []
    for h in g.elements():
        sec = data.sector(h)
        if not sec:
            continue
        total = data.field.zero()
        for i in sec:
            total = total + data.dim_l[i] * data.dim_r[i]
        if total != dim1:
            bad.append(h)
    rep.add("sector dimension identity", not bad, f"grades {bad}" if bad else "")
    return rep


def neutral_dimension(data: GFusionData) -> FieldElement:
    total = data.field.zero()
    for i in data.sector(data.group.identity):
        total = total + data.dim_l[i] * data.dim_r[i]
    return total


# ---------------------------------------------------------------------------
# universal grading


def graduator(data: GFusionData):
    """Universal grading of the fusion ring: classes of simples under the
    congruence generated by 'co-summands of a product are equivalent',
    iterated until multiplication of classes is well defined.  Returns
    (FiniteGroup, projection list simple -> class index)."""
    n = data.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
            return True
        return False

    for i in range(n):
        for j in range(n):
            ks = data.fuse(i, j)
            for k in ks[1:]:
                union(ks[0], k)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if find(i) == find(j):
                    for c in range(n):
                        for x in data.fuse(i, c):
                            for y in data.fuse(j, c):
                                if union(x, y):
                                    changed = True
                        for x in data.fuse(c, i):
                            for y in data.fuse(c, j):
                                if union(x, y):
                                    changed = True
    reps = sorted({find(i) for i in range(n)})
    index = {r: k for k, r in enumerate(reps)}
    proj = [index[find(i)] for i in range(n)]
    m = len(reps)
    table = [[None] * m for _ in range(m)]
    for i in range(n):
        for j in range(n):
            ks = data.fuse(i, j)
            if not ks:
                continue
            ci, cj, ck = proj[i], proj[j], proj[ks[0]]
            if table[ci][cj] is None:
                table[ci][cj] = ck
            elif table[ci][cj] != ck:
                raise ValueError("fusion table admits no universal grading")
    for ci in range(m):
        for cj in range(m):
            if table[ci][cj] is None:
                raise ValueError("fusion table admits no universal grading")
    group = FiniteGroup(table, name=f"graduator({data.name})")
    return group, proj


def groups_isomorphic(g1: FiniteGroup, g2: FiniteGroup) -> bool:
    """Brute-force isomorphism search, intended for small orders."""
    if g1.order != g2.order:
        return False
    n = g1.order
    orders1 = sorted(_element_order(g1, a) for a in range(n))
    orders2 = sorted(_element_order(g2, a) for a in range(n))
    if orders1 != orders2:
        return False

    image = [None] * n
    used = [False] * n

    def extend(a):
        if a == n:
            return True
        for b in range(n):
            if used[b] or _element_order(g1, a) != _element_order(g2, b):
                continue
            image[a] = b
            used[b] = True
            ok = True
            for x in range(a + 1):
                for y in range(a + 1):
                    z = g1.mul(x, y)
                    if z <= a and g2.mul(image[x], image[y]) != image[z]:
                        ok = False
                        break
                    if z <= a and image[z] is None:
                        ok = False
                        break
                if not ok:
                    break
            if ok and extend(a + 1):
                return True
            image[a] = None
            used[b] = False
        return False

    return extend(0)


def _element_order(g: FiniteGroup, a: int) -> int:
    x = a
    k = 1
    while x != g.identity:
        x = g.mul(x, a)
        k += 1
    return k


# ---------------------------------------------------------------------------
# push-forward


def push_forward(data: GFusionData, phi: GroupHom) -> GFusionData:
    """Regrade along a surjective homomorphism with finite kernel: same
    simples, F-symbols and dimensions, grade composed with phi."""
    if phi.src != data.group:
        raise ValueError("homomorphism source does not match the grading group")
    if not phi.is_surjective():
        raise ValueError("push-forward needs a surjective homomorphism")
    grade = [phi(h) for h in data.grade]
    return GFusionData(data.field, phi.dst, data.names, grade, data.dual,
                       data.fusion_set, data.fsym, data.dim_l, data.dim_r,
                       data.pivotal, name=f"pushforward({data.name})")


# ---------------------------------------------------------------------------
# file format


def _compact(elem_text: str) -> str:
    return elem_text.replace(" ", "")


def save_category(data: GFusionData) -> str:
    """Serialize to the category file format (structured text, one datum
    per line; fusion triples carry a multiplicity column, 1 in v1)."""
    lines = [f"# statesum3d category v1", f"name {data.name}",
             f"field {data.field.to_text()}"]
    gname = data.group.name
    if gname and gname[0] in "ZDS1" and gname != "G":
        lines.append(f"group {gname}")
    else:
        lines.append(f"group table {data.group.order}")
        for row in data.group.table:
            lines.append("  " + " ".join(str(x) for x in row))
    lines.append(f"simples {data.n}")
    for i in range(data.n):
        lines.append(
            f"simple {i} name {data.names[i]} grade {data.grade[i]} dual {data.dual[i]} "
            f"dim_l {_compact(data.dim_l[i].to_text())} dim_r {_compact(data.dim_r[i].to_text())} "
            f"pivotal {_compact(data.pivotal[i].to_text())}")
    for (i, j, k) in sorted(data.fusion_set):
        lines.append(f"fusion {i} {j} {k} 1")
    for key in sorted(data.fsym):
        a, b, c, d, e, f = key
        lines.append(f"fsym {a} {b} {c} {d} {e} {f} {_compact(data.fsym[key].to_text())}")
    return "\n".join(lines) + "\n"


def load_category(text: str) -> GFusionData:
    lines = [ln.rstrip() for ln in text.splitlines()]
    idx = 0
    name = "category"
    field = None
    group = None
    nsimples = None
    names = {}
    grade = {}
    dual = {}
    dim_l = {}
    dim_r = {}
    pivotal = {}
    triples = set()
    fsym_raw = []

    def next_line():
        nonlocal idx
        while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("#")):
            idx += 1
        if idx >= len(lines):
            return None
        ln = lines[idx]
        idx += 1
        return ln

    while True:
        ln = next_line()
        if ln is None:
            break
        parts = ln.split(None, 1)
        key = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        if key == "name":
            name = rest.strip()
        elif key == "field":
            field = FieldSpec.from_text(rest)
        elif key == "group":
            toks = rest.split()
            if toks[0] == "table":
                n = int(toks[1])
                rows = []
                for _ in range(n):
                    row_ln = next_line()
                    rows.append([int(x) for x in row_ln.split()])
                group = FiniteGroup(rows)
            else:
                group = FiniteGroup.by_name(toks[0])
        elif key == "simples":
            nsimples = int(rest)
        elif key == "simple":
            toks = ln.split()
            i = int(toks[1])
            kv = dict(zip(toks[2::2], toks[3::2]))
            names[i] = kv["name"]
            grade[i] = int(kv["grade"])
            dual[i] = int(kv["dual"])
            dim_l[i] = FieldElement.from_text(field, kv["dim_l"])
            dim_r[i] = FieldElement.from_text(field, kv["dim_r"])
            pivotal[i] = FieldElement.from_text(field, kv["pivotal"])
        elif key == "fusion":
            toks = rest.split()
            i, j, k = int(toks[0]), int(toks[1]), int(toks[2])
            mult = int(toks[3]) if len(toks) > 3 else 1
            if mult != 1:
                raise ValueError("fusion multiplicities > 1 are not supported in v1")
            triples.add((i, j, k))
        elif key == "fsym":
            toks = rest.split(None, 6)
            a, b, c, d, e, f = (int(t) for t in toks[:6])
            fsym_raw.append(((a, b, c, d, e, f), toks[6]))
        else:
            raise ValueError(f"unknown category file key {key!r}")
    if field is None or group is None or nsimples is None:
        raise ValueError("category file missing field, group, or simples")
    fsym = {k: FieldElement.from_text(field, v) for k, v in fsym_raw}
    order = range(nsimples)
    return GFusionData(field, group, [names[i] for i in order],
                       [grade[i] for i in order], [dual[i] for i in order], triples,
                       fsym, [dim_l[i] for i in order], [dim_r[i] for i in order],
                       [pivotal[i] for i in order], name=name)


_BUILTIN_BUILDERS = {}


def _register_builtins():
    if _BUILTIN_BUILDERS:
        return
    for n in (2, 3, 4):
        for q in range(n):
            key = f"vect_Z{n}_theta{q}"
            _BUILTIN_BUILDERS[key] = (
                lambda n=n, q=q, key=key: build_vec_g_theta(
                    FiniteGroup.cyclic(n), CocycleTable.cyclic_rep(n, q), name=key))
    _BUILTIN_BUILDERS["vect_1_trivial"] = (
        lambda: build_vec_g_theta(FiniteGroup.trivial(),
                                  CocycleTable.trivial(FiniteGroup.trivial()),
                                  name="vect_1_trivial"))
    _BUILTIN_BUILDERS["fibonacci"] = fibonacci_category
    _BUILTIN_BUILDERS["ising_like"] = ising_like_category


def builtin_category_names():
    _register_builtins()
    return sorted(_BUILTIN_BUILDERS)


def builtin_category(name: str) -> GFusionData:
    _register_builtins()
    try:
        return _BUILTIN_BUILDERS[name]()
    except KeyError:
        raise ValueError(f"unknown built-in category {name!r}") from None
