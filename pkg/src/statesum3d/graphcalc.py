"""Multiplicity modules and evaluation of colored graphs on the 2-sphere.

The computational model is the strictified word category of a skeletal
backend: objects are words of simple labels, and a vector in
``Hom(1, w_1 (x) ... (x) w_n)`` is stored in the left-combed tree basis.  A
tree is the tuple of intermediate labels ``(m_1, ..., m_n)`` with
``m_j in m_(j-1) (x) w_j`` (``m_0`` the unit) and ``m_n`` the unit.  All
operations are insertions of ``id (x) elementary (x) id`` and are realized
on tree coordinates by single F-moves; see the convention block in
:mod:`statesum3d.catdata`.

Cyclic sets follow the surface convention that the half-edge order at a
vertex is taken clockwise (opposite surface orientation), a half-edge
pointing at the vertex carries sign +, and the object of a signed color
``(c, -)`` is the dual label.  A cap closing an edge is a left evaluation
when the tail-side strand is on the left and a right evaluation otherwise;
this matches the circle normalization where the invariant of a clockwise
unknot against a basis vector of Hom(1, U* (x) U) is the left evaluation.
"""

from __future__ import annotations

from .catdata import GFusionData
from .exactnum import FieldElement
from .linalg import matrix_inverse

__all__ = [
    "CyclicCSet",
    "MultiplicityBasis",
    "VertexTensorSlot",
    "ColoredGraph",
    "GraphTensor",
    "HomState",
    "hom_dim",
    "tree_paths",
    "rotation_matrix",
    "pairing_gram",
    "PairingData",
    "evaluate_graph",
    "trace_rotation_faces",
    "save_graph",
    "parse_graph",
]


class CyclicCSet:
    """Cyclically ordered sequence of signed colors; the stored tuple fixes
    a base order, rotation picks another anchor."""

    def __init__(self, items):
        self.items = tuple((int(c), int(s)) for c, s in items)
        if not self.items:
            raise ValueError("cyclic set must be non-empty")
        if any(s not in (1, -1) for _, s in self.items):
            raise ValueError("signs must be +1 or -1")

    def __len__(self):
        return len(self.items)

    def rotate(self, k: int) -> "CyclicCSet":
        k %= len(self.items)
        return CyclicCSet(self.items[k:] + self.items[:k])

    def opp(self) -> "CyclicCSet":
        """Dual cyclic set anchored so its word is the reversed dual word."""
        return CyclicCSet(tuple((c, -s) for c, s in reversed(self.items)))

    def word(self, data: GFusionData) -> tuple:
        return tuple(c if s > 0 else data.dual[c] for c, s in self.items)

    def __eq__(self, other):
        return isinstance(other, CyclicCSet) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __repr__(self):
        body = " ".join(f"{c}{'+' if s > 0 else '-'}" for c, s in self.items)
        return f"CyclicCSet({body})"


def tree_paths(data: GFusionData, word) -> list:
    """Left-combed basis trees of Hom(1, word), each a tuple of
    intermediates ending at the unit."""
    unit = data.unit
    paths = [()]
    for j, w in enumerate(word):
        nxt = []
        last = len(word) - 1 == j
        for p in paths:
            m = p[-1] if p else unit
            for m2 in data.fuse(m, w):
                if last and m2 != unit:
                    continue
                nxt.append(p + (m2,))
        paths = nxt
    if not word:
        return [()]
    return paths


def hom_dim(data: GFusionData, seq) -> int:
    """Rank of Hom(1, X1^e1 (x) ... (x) Xn^en) by fusion-table folding."""
    counts = {data.unit: 1}
    for c, s in seq:
        if not 0 <= c < data.n:
            raise ValueError(f"unknown simple index {c}")
        obj = c if s > 0 else data.dual[c]
        nxt: dict = {}
        for m, mult in counts.items():
            for m2 in data.fuse(m, obj):
                nxt[m2] = nxt.get(m2, 0) + mult
        counts = nxt
    return counts.get(data.unit, 0)


class HomState:
    """Vector in Hom(1, word) as a map from tree paths to scalars."""

    __slots__ = ("data", "word", "paths")

    def __init__(self, data: GFusionData, word: tuple, paths: dict):
        self.data = data
        self.word = word
        self.paths = paths

    @staticmethod
    def empty(data: GFusionData) -> "HomState":
        return HomState(data, (), {(): data.field.one()})

    @staticmethod
    def basis_tree(data: GFusionData, word, path) -> "HomState":
        return HomState(data, tuple(word), {tuple(path): data.field.one()})

    def scale(self, c: FieldElement) -> "HomState":
        if c.is_one():
            return self
        return HomState(self.data, self.word,
                        {p: v * c for p, v in self.paths.items()})

    def _add(self, store: dict, path: tuple, val: FieldElement):
        if path in store:
            s = store[path] + val
            if s.is_zero():
                del store[path]
            else:
                store[path] = s
        elif not val.is_zero():
            store[path] = val

    def insert_unit(self, p: int) -> "HomState":
        unit = self.data.unit
        word = self.word[:p] + (unit,) + self.word[p:]
        out: dict = {}
        for path, v in self.paths.items():
            prev = path[p - 1] if p > 0 else unit
            self._add(out, path[:p] + (prev,) + path[p:], v)
        return HomState(self.data, word, out)

    def delete_unit(self, p: int) -> "HomState":
        assert self.word[p] == self.data.unit
        word = self.word[:p] + self.word[p + 1:]
        out: dict = {}
        for path, v in self.paths.items():
            self._add(out, path[:p] + path[p + 1:], v)
        return HomState(self.data, word, out)

    def split(self, p: int, a: int, b: int) -> "HomState":
        """Compose with id (x) B(a,b; word[p]) (x) id."""
        data = self.data
        unit = data.unit
        x = self.word[p]
        if not data.nmat(a, b, x):
            raise ValueError("inadmissible split")
        word = self.word[:p] + (a, b) + self.word[p + 1:]
        out: dict = {}
        for path, v in self.paths.items():
            mb = path[p - 1] if p > 0 else unit
            ma = path[p]
            for mu in data.fuse(mb, a):
                coeff = data.f_entry(mb, a, b, ma, mu, x)
                if coeff is None or coeff.is_zero():
                    continue
                self._add(out, path[:p] + (mu,) + path[p:], v * coeff)
        return HomState(data, word, out)

    def fuse(self, p: int, c: int) -> "HomState":
        """Compose with id (x) Y(word[p], word[p+1]; c) (x) id."""
        data = self.data
        unit = data.unit
        a, b = self.word[p], self.word[p + 1]
        if not data.nmat(a, b, c):
            raise ValueError("inadmissible fuse")
        word = self.word[:p] + (c,) + self.word[p + 2:]
        out: dict = {}
        for path, v in self.paths.items():
            mb = path[p - 1] if p > 0 else unit
            mu = path[p]
            ma = path[p + 1]
            if not data.nmat(mb, c, ma):
                continue
            coeff = data.finv_entry(mb, a, b, ma, c, mu)
            if coeff is None or coeff.is_zero():
                continue
            self._add(out, path[:p] + path[p + 1:], v * coeff)
        return HomState(data, word, out)

    def cup(self, p: int, color: int, kind: str) -> "HomState":
        """Insert lcoev (kind 'l': letters (c, c*)) or rcoev ('r': (c*, c))."""
        data = self.data
        dual = data.dual[color]
        st = self.insert_unit(p)
        if kind == "l":
            return st.split(p, color, dual).scale(data.lcoev_scalar(color))
        if kind == "r":
            return st.split(p, dual, color).scale(data.rcoev_scalar(color))
        raise ValueError("cup kind must be 'l' or 'r'")

    def cap(self, p: int, color: int, kind: str) -> "HomState":
        """Apply lev (kind 'l': letters (c*, c)) or rev ('r': (c, c*))."""
        data = self.data
        dual = data.dual[color]
        if kind == "l":
            assert self.word[p] == dual and self.word[p + 1] == color
            st = self.fuse(p, data.unit).scale(data.lev_scalar(color))
        elif kind == "r":
            assert self.word[p] == color and self.word[p + 1] == dual
            st = self.fuse(p, data.unit).scale(data.rev_scalar(color))
        else:
            raise ValueError("cap kind must be 'l' or 'r'")
        return st.delete_unit(p)

    def insert_tree(self, p: int, letters, path) -> "HomState":
        """Insert the basis tree of Hom(1, letters) with the given
        intermediate tuple at word position p."""
        k = len(letters)
        st = self.insert_unit(p)
        for j in range(k - 1, 0, -1):
            st = st.split(p, path[j - 1], letters[j])
        if k:
            assert path[0] == letters[0]
        return st

    def insert_state(self, p: int, other: "HomState") -> "HomState":
        out: dict = {}
        word = None
        for path, v in other.paths.items():
            st = self.scale(v).insert_tree(p, other.word, path)
            word = st.word
            for q, u in st.paths.items():
                if q in out:
                    s = out[q] + u
                    if s.is_zero():
                        del out[q]
                    else:
                        out[q] = s
                elif not u.is_zero():
                    out[q] = u
        if word is None:
            word = self.word[:p] + tuple(other.word) + self.word[p:]
        return HomState(self.data, word, out)

    def scalar(self) -> FieldElement:
        assert self.word == ()
        return self.paths.get((), self.data.field.zero())


class MultiplicityBasis:
    """Tree basis of the multiplicity module of a cyclic set, anchored at a
    chosen element."""

    def __init__(self, data: GFusionData, cset: CyclicCSet, anchor: int = 0):
        self.data = data
        self.cset = cset
        self.anchor = anchor % len(cset)
        self.anchored = cset.rotate(self.anchor)
        self.word = self.anchored.word(data)
        self.trees = tree_paths(data, self.word)

    def dim(self) -> int:
        return len(self.trees)

    def state(self, tree_index: int) -> HomState:
        return HomState.basis_tree(self.data, self.word, self.trees[tree_index])

    def __repr__(self):
        return f"MultiplicityBasis({self.anchored!r}, dim {self.dim()})"


class VertexTensorSlot:
    """Requested reporting basis for one graph vertex."""

    def __init__(self, vertex: int, anchor: int = 0):
        self.vertex = vertex
        self.anchor = anchor


def _rotate_state_once(data: GFusionData, items, state: HomState):
    """One cone-isomorphism step H_(e1) -> H_(e2) on the anchored signed
    items; returns (rotated items, new state)."""
    color, sign = items[0]
    if sign > 0:
        st = HomState.empty(data).cup(0, color, "r")
        st = st.insert_state(1, state)
        st = st.cap(0, color, "l")
    else:
        st = HomState.empty(data).cup(0, color, "l")
        st = st.insert_state(1, state)
        st = st.cap(0, color, "r")
    return items[1:] + items[:1], st


def rotation_matrix(data: GFusionData, basis: MultiplicityBasis, steps: int):
    """Matrix R of the iterated cone isomorphism from ``basis`` to the basis
    anchored ``steps`` further on: image of basis vector s is
    ``sum_t R[t][s] (target tree t)``."""
    steps %= max(len(basis.cset), 1)
    target = MultiplicityBasis(data, basis.cset, basis.anchor + steps)
    index = {tuple(t): i for i, t in enumerate(target.trees)}
    cols = []
    for s in range(basis.dim()):
        st = basis.state(s)
        items = basis.anchored.items
        for _ in range(steps):
            items, st = _rotate_state_once(data, items, st)
        col = [data.field.zero()] * target.dim()
        assert st.word == target.word
        for path, v in st.paths.items():
            col[index[path]] = v
        cols.append(col)
    return [[cols[s][t] for s in range(basis.dim())] for t in range(target.dim())]


class PairingData:
    """Gram data of the duality pairing of a cyclic set E: rows are indexed
    by the trees of H(E^opp) (anchored per :meth:`CyclicCSet.opp`), columns
    by the trees of H(E)."""

    def __init__(self, data: GFusionData, cset: CyclicCSet):
        self.data = data
        self.basis = MultiplicityBasis(data, cset, 0)
        self.basis_opp = MultiplicityBasis(data, cset.opp(), 0)
        n = len(cset)
        rows = []
        for u in range(self.basis_opp.dim()):
            row = []
            for t in range(self.basis.dim()):
                st = HomState.empty(data)
                st = st.insert_tree(0, self.basis.word, self.basis.trees[t])
                st = st.insert_tree(n, self.basis_opp.word, self.basis_opp.trees[u])
                for k in range(n - 1, -1, -1):
                    color, sign = cset.items[k]
                    st = st.cap(k, color, "r" if sign > 0 else "l")
                row.append(st.scalar())
            rows.append(row)
        self.gram = rows
        self._inv = None

    def gram_inverse(self):
        """Inverse Gram; entry [t][u] pairs an H(E)-tree with an
        H(E^opp)-tree in the contraction of dual vectors."""
        if self._inv is None:
            self._inv = matrix_inverse(self.gram, self.data.field)
        return self._inv


def pairing_gram(data: GFusionData, cset: CyclicCSet):
    """Gram matrix of the duality pairing (rows: opp trees, cols: trees)."""
    return PairingData(data, cset).gram


# ---------------------------------------------------------------------------
# colored graphs on the sphere


def trace_rotation_faces(nvertices, edges, rotations):
    """Face orbits of a rotation system on any closed oriented surface.
    Returns (faces, dart_pos); corners (v, i) sit between rotations[v][i]
    and its cyclic successor."""
    dart_pos = {}
    for v, rot in enumerate(rotations):
        for i, d in enumerate(rot):
            dart_pos[tuple(d)] = (v, i)
    corners = {(v, i) for v in range(nvertices) for i in range(len(rotations[v]))}
    faces = []
    while corners:
        start = min(corners)
        walk = []
        cur = start
        while True:
            walk.append(cur)
            corners.discard(cur)
            v, i = cur
            rot = rotations[v]
            e, end = rot[(i + 1) % len(rot)]
            cur = dart_pos[(e, 1 - end)]
            if cur == start:
                break
        faces.append(tuple(walk))
    return faces, dart_pos


class ColoredGraph:
    """Oriented colored graph with a rotation system certified to embed in
    the 2-sphere.

    ``edges[k] = (tail, head, color)``; a dart is ``(edge, end)`` with end 0
    at the tail and 1 at the head.  ``rotations[v]`` lists the darts at v in
    the clockwise cyclic order.  Faces are traced from the rotation system;
    a supplied face list is checked against the traced one, and the Euler
    relation V - E + F = 2 is enforced.
    """

    def __init__(self, nvertices: int, edges, rotations, faces=None):
        self.nvertices = nvertices
        self.edges = [tuple(e) for e in edges]
        self.rotations = [tuple(tuple(d) for d in r) for r in rotations]
        if len(self.rotations) != nvertices:
            raise ValueError("rotation system must cover every vertex")
        seen = {}
        for v, rot in enumerate(self.rotations):
            if not rot:
                raise ValueError(f"vertex {v} has valence 0")
            for i, d in enumerate(rot):
                if d in seen:
                    raise ValueError(f"dart {d} listed twice")
                seen[d] = (v, i)
        for k, (t, h, _) in enumerate(self.edges):
            if (k, 0) not in seen or (k, 1) not in seen:
                raise ValueError(f"edge {k} missing darts in the rotation system")
            if seen[(k, 0)][0] != t or seen[(k, 1)][0] != h:
                raise ValueError(f"edge {k} endpoints disagree with the rotation system")
        self.dart_pos = seen
        orbits = self._trace_faces()
        if faces is None:
            self.faces = orbits
        else:
            # a supplied certificate may merge trace orbits (needed for
            # disconnected graphs, where the sphere embedding chooses a host
            # face per extra component)
            given = [frozenset(f) for f in faces]
            for orbit in orbits:
                hosts = [i for i, f in enumerate(given) if set(orbit) <= f]
                if len(hosts) != 1:
                    raise ValueError("embedding certificate inconsistent with rotation system")
            covered = set()
            for f in given:
                covered |= f
            if covered != {c for orbit in orbits for c in orbit}:
                raise ValueError("embedding certificate inconsistent with rotation system")
            self.faces = [tuple(sorted(f)) for f in given]
        ncomp = self._component_count()
        if len(self.faces) != 1 + ncomp - nvertices + len(self.edges):
            msg = ("embedding certificate inconsistent with rotation system"
                   if faces is not None else
                   "rotation system does not embed in the sphere "
                   f"(V-E+F = {nvertices}-{len(self.edges)}-{len(self.faces)})")
            raise ValueError(msg)
        self.corner_face = {}
        for fi, corners in enumerate(self.faces):
            for c in corners:
                self.corner_face[c] = fi

    def _component_count(self) -> int:
        parent = list(range(self.nvertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h, _ in self.edges:
            parent[find(t)] = find(h)
        return len({find(v) for v in range(self.nvertices)})

    def _trace_faces(self):
        corners = {(v, i) for v in range(self.nvertices)
                   for i in range(len(self.rotations[v]))}
        faces = []
        while corners:
            start = min(corners)
            walk = []
            cur = start
            while True:
                walk.append(cur)
                corners.discard(cur)
                v, i = cur
                rot = self.rotations[v]
                d = rot[(i + 1) % len(rot)]
                e, end = d
                cur = self.dart_pos[(e, 1 - end)]
                if cur == start:
                    break
            faces.append(tuple(walk))
        return faces

    def vertex_cset(self, v: int) -> CyclicCSet:
        items = []
        for e, end in self.rotations[v]:
            color = self.edges[e][2]
            items.append((color, 1 if end == 1 else -1))
        return CyclicCSet(items)

    def right_face_of_dart(self, dart) -> int:
        v, i = self.dart_pos[dart]
        return self.corner_face[(v, i)]


class GraphTensor:
    """Evaluation result: one index per vertex over the slot bases."""

    def __init__(self, data, vertices, bases, entries):
        self.data = data
        self.vertices = tuple(vertices)
        self.bases = list(bases)
        self.entries = dict(entries)

    def dims(self):
        return tuple(b.dim() for b in self.bases)

    def value(self, idx) -> FieldElement:
        return self.entries.get(tuple(idx), self.data.field.zero())

    def __eq__(self, other):
        return (isinstance(other, GraphTensor) and self.dims() == other.dims()
                and _dense(self) == _dense(other))

    def __repr__(self):
        return f"GraphTensor(dims {self.dims()}, {len(self.entries)} entries)"


def _dense(t: GraphTensor):
    from itertools import product as iproduct
    return {idx: t.value(idx) for idx in iproduct(*(range(d) for d in t.dims()))}


class _SweepFail(Exception):
    pass


def _find_layout(graph: ColoredGraph, outer_face: int):
    """Backtracking search for a bottom-up planar sweep realizing the given
    embedding with the chosen outer face.  Returns a list of actions
    ('box', vertex, offset, gap_index) and ('cap', strand_index)."""
    nv = graph.nvertices

    def search(frontier, gaps, placed, seen):
        if len(placed) == nv and not frontier:
            return []
        key = (frontier, gaps, placed)
        if key in seen:
            return None
        seen.add(key)
        # caps first
        for q in range(len(frontier) - 1):
            (e1, a1), (e2, a2) = frontier[q], frontier[q + 1]
            if e1 == e2 and a1 != a2:
                if gaps[q + 1] != graph.right_face_of_dart(frontier[q]):
                    continue
                if gaps[q] != gaps[q + 2]:
                    continue
                nf = frontier[:q] + frontier[q + 2:]
                ng = gaps[:q] + (gaps[q],) + gaps[q + 3:]
                rest = search(nf, ng, placed, seen)
                if rest is not None:
                    return [("cap", q)] + rest
        for v in range(nv):
            if v in placed:
                continue
            rot = graph.rotations[v]
            k = len(rot)
            for p in range(len(gaps)):
                for r in range(k):
                    under = graph.corner_face[(v, (r - 1) % k)]
                    if under != gaps[p]:
                        continue
                    emitted = tuple(rot[(r + j) % k] for j in range(k))
                    corner_gaps = tuple(graph.corner_face[(v, (r + j) % k)]
                                        for j in range(k - 1))
                    nf = frontier[:p] + emitted + frontier[p:]
                    ng = gaps[:p] + (gaps[p],) + corner_gaps + (gaps[p],) + gaps[p + 1:]
                    rest = search(nf, ng, placed | {v}, seen)
                    if rest is not None:
                        return [("box", v, r, p)] + rest
        return None

    actions = search((), (outer_face,), frozenset(), set())
    if actions is None:
        raise _SweepFail(f"no planar sweep found for outer face {outer_face}")
    return actions


def evaluate_graph(data: GFusionData, graph: ColoredGraph, slots=None,
                   outer_face: int | None = None) -> GraphTensor:
    """Invariant of a colored graph on the sphere as a tensor over the slot
    bases (one index per vertex).  The result does not depend on the outer
    face; passing one is useful for the sphericality tests."""
    if slots is None:
        slots = [VertexTensorSlot(v, 0) for v in range(graph.nvertices)]
    slot_by_vertex = {s.vertex: s for s in slots}
    if sorted(slot_by_vertex) != list(range(graph.nvertices)):
        raise ValueError("slots must cover each vertex exactly once")
    if outer_face is None:
        outer_face = 0
    actions = _find_layout(graph, outer_face)

    csets = [graph.vertex_cset(v) for v in range(graph.nvertices)]
    insert_offset = {}
    for act in actions:
        if act[0] == "box":
            insert_offset[act[1]] = act[2]
    insert_bases = {v: MultiplicityBasis(data, csets[v], insert_offset[v])
                    for v in range(graph.nvertices)}

    # symbolic sweep: state keyed by (tree path, choice tuple)
    field = data.field
    word: tuple = ()
    states: dict = {((), ()): field.one()}
    vertex_order = []
    strand_darts: list = []

    for act in actions:
        if act[0] == "box":
            _, v, r, p = act
            vertex_order.append(v)
            basis = insert_bases[v]
            letters = basis.word
            nxt: dict = {}
            for (path, choice), coeff in states.items():
                base = HomState(data, word, {path: coeff})
                for ti, tree in enumerate(basis.trees):
                    st = base.insert_tree(p, letters, tree)
                    for q, u in st.paths.items():
                        key = (q, choice + (ti,))
                        cur = nxt.get(key)
                        nxt[key] = u if cur is None else cur + u
            states = {k: v2 for k, v2 in nxt.items() if not v2.is_zero()}
            word = word[:p] + letters + word[p:]
            strand_darts[p:p] = [graph.rotations[v][(r + j) % len(graph.rotations[v])]
                                 for j in range(len(letters))]
        else:
            _, q = act
            e, end = strand_darts[q]
            color = graph.edges[e][2]
            kind = "l" if end == 0 else "r"
            nxt = {}
            for (path, choice), coeff in states.items():
                st = HomState(data, word, {path: coeff}).cap(q, color, kind)
                for pth, u in st.paths.items():
                    key = (pth, choice)
                    cur = nxt.get(key)
                    nxt[key] = u if cur is None else cur + u
            states = {k: v2 for k, v2 in nxt.items() if not v2.is_zero()}
            word = word[:q] + word[q + 2:]
            del strand_darts[q:q + 2]

    raw: dict = {}
    for (path, choice), coeff in states.items():
        assert path == ()
        raw[choice] = coeff

    # re-express each index in the requested slot basis
    out_bases = []
    nver = graph.nvertices
    order_pos = {v: i for i, v in enumerate(vertex_order)}
    mats = []
    for v in range(nver):
        slot = slot_by_vertex[v]
        slot_basis = MultiplicityBasis(data, csets[v], slot.anchor)
        out_bases.append(slot_basis)
        steps = (insert_offset[v] - slot.anchor) % len(csets[v])
        mats.append(rotation_matrix(data, slot_basis, steps))

    entries: dict = {}
    from itertools import product as iproduct
    dims = [b.dim() for b in out_bases]
    for sidx in iproduct(*(range(d) for d in dims)):
        total = field.zero()
        for choice, coeff in raw.items():
            term = coeff
            dead = False
            for v in range(nver):
                t = choice[order_pos[v]]
                factor = mats[v][t][sidx[v]]
                if factor.is_zero():
                    dead = True
                    break
                term = term * factor
            if not dead:
                total = total + term
        if not total.is_zero():
            entries[sidx] = total
    return GraphTensor(data, range(nver), out_bases, entries)


# ---------------------------------------------------------------------------
# graph files


def save_graph(graph: ColoredGraph) -> str:
    lines = ["# statesum3d graph v1", f"vertices {graph.nvertices}",
             f"edges {len(graph.edges)}"]
    for k, (t, h, c) in enumerate(graph.edges):
        lines.append(f"edge {k} {t} {h} color {c}")
    for v, rot in enumerate(graph.rotations):
        darts = " ".join(("i" if end == 1 else "o") + str(e) for (e, end) in rot)
        lines.append(f"rot {v} {darts}")
    for f in graph.faces:
        lines.append("face " + " ".join(f"{v}.{i}" for (v, i) in f))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColoredGraph:
    nv = 0
    edges = {}
    rots = {}
    faces = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "vertices":
            nv = int(toks[1])
        elif toks[0] == "edges":
            pass
        elif toks[0] == "edge":
            edges[int(toks[1])] = (int(toks[2]), int(toks[3]), int(toks[5]))
        elif toks[0] == "rot":
            v = int(toks[1])
            rots[v] = [(int(d[1:]), 1 if d[0] == "i" else 0) for d in toks[2:]]
        elif toks[0] == "face":
            faces.append(tuple(tuple(int(x) for x in t.split(".")) for t in toks[1:]))
        else:
            raise ValueError(f"unknown graph key {toks[0]!r}")
    edge_list = [edges[k] for k in range(len(edges))]
    rot_list = [rots[v] for v in range(nv)]
    return ColoredGraph(nv, edge_list, rot_list, faces=faces or None)
