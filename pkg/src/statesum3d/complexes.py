"""Closed oriented 3-manifold triangulations, Pachner moves, dual skeletons
and local skeleton moves.

Triangulations are face-gluing complexes: ``glue[(tet, face)] = (tet',
face', perm)`` with ``perm`` in S4 sending ``face`` to ``face'`` and the
other three vertex slots to vertex slots.  Orientability requires signs
``s(t)`` with ``s(t') = -s(t) sign(perm)`` across every gluing.

The dual skeleton places one 2-polyhedron vertex per tetrahedron, one edge
per triangle class, one disk region per edge class.  All cyclic orders,
edge orientations, branch signs and vertex-link rotation systems are
derived from one explicit rational-coordinate model of the standard
simplex; the conventions are:

* an edge class is directed by its lexicographically least representative;
* the dual region of a directed edge class is oriented so that the edge
  crosses it with intersection number +1;
* link spheres are oriented towards the enclosed vertex, and link rotation
  lists are taken in the opposite (clockwise) direction, matching the
  colored-graph convention of :mod:`statesum3d.graphcalc`;
* for a skeleton edge, the branch list stored at end 0 and the rotation at
  the end-1 link vertex are positionally reversed copies of each other, so
  the end-1 cyclic set is the dual of the end-0 cyclic set.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

__all__ = [
    "Triangulation",
    "parse_triangulation",
    "save_triangulation",
    "pachner",
    "Skeleton",
    "dual_skeleton",
    "MoveSpec",
    "apply_move",
    "parse_skeleton",
    "save_skeleton",
    "triangulations_isomorphic",
]


def _perm_sign(p) -> int:
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


def _perm_inv(p):
    out = [0] * 4
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


class Triangulation:
    """Closed oriented face-gluing complex with derived cell classes."""

    def __init__(self, ntets: int, gluings: dict):
        self.ntets = ntets
        self.gluings = {}
        for (t, f), (t2, f2, perm) in gluings.items():
            self.gluings[(t, f)] = (t2, f2, tuple(perm))
        self._validate_gluings()
        self._orient()
        self._build_classes()

    # -- structure ----------------------------------------------------------

    def _validate_gluings(self):
        for t in range(self.ntets):
            for f in range(4):
                if (t, f) not in self.gluings:
                    raise ValueError(f"not closed: face ({t},{f}) unglued")
        for (t, f), (t2, f2, perm) in self.gluings.items():
            if perm[f] != f2:
                raise ValueError(f"gluing perm at ({t},{f}) does not map the face")
            back = self.gluings.get((t2, f2))
            if back != (t, f, _perm_inv(perm)):
                raise ValueError(f"gluing involution fails at ({t},{f})")
            if t == t2 and f == f2:
                raise ValueError(f"face ({t},{f}) glued to itself")

    def _orient(self):
        sign = [0] * self.ntets
        for start in range(self.ntets):
            if sign[start]:
                continue
            sign[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for f in range(4):
                    t2, f2, perm = self.gluings[(t, f)]
                    want = -sign[t] * _perm_sign(perm)
                    if sign[t2] == 0:
                        sign[t2] = want
                        stack.append(t2)
                    elif sign[t2] != want:
                        raise ValueError("unorientable: no consistent tetrahedron signs")
        self.orientations = tuple(sign)

    def _build_classes(self):
        # vertex classes
        verts = {(t, v) for t in range(self.ntets) for v in range(4)}
        self.vertex_class = self._orbits(
            verts,
            lambda tv: [self._map_vertex(tv, f) for f in range(4) if f != tv[1]])
        self.nvertices = max(self.vertex_class.values()) + 1

        # directed edge classes
        dedges = {(t, a, b) for t in range(self.ntets)
                  for a in range(4) for b in range(4) if a != b}
        dclass = self._orbits(
            dedges,
            lambda e: [self._map_dedge(e, f) for f in range(4) if f not in e[1:]])
        # pair directed classes under reversal
        rev_of = {}
        for (t, a, b), c in dclass.items():
            rev_of[c] = dclass[(t, b, a)]
        for c, cr in rev_of.items():
            if c == cr:
                raise ValueError("edge class identified with its own reversal")
        chosen = {}
        eid = 0
        members = {}
        for e in sorted(dedges):
            c = dclass[e]
            if c in chosen or rev_of[c] in chosen:
                continue
            chosen[c] = eid
            eid += 1
        self.edge_class = {}
        for e, c in dclass.items():
            if c in chosen:
                self.edge_class[e] = chosen[c]
        self.nedges = eid
        self.edge_members = {}
        for e, c in sorted(self.edge_class.items()):
            self.edge_members.setdefault(c, []).append(e)

        # triangle classes
        self.triangle_class = {}
        tid = 0
        for t in range(self.ntets):
            for f in range(4):
                if (t, f) in self.triangle_class:
                    continue
                t2, f2, _ = self.gluings[(t, f)]
                self.triangle_class[(t, f)] = tid
                self.triangle_class[(t2, f2)] = tid
                tid += 1
        self.ntriangles = tid
        if 2 * self.ntriangles != 4 * self.ntets:
            raise ValueError("inconsistent triangle pairing")

    def _map_vertex(self, tv, f):
        t, v = tv
        if v == f:
            return tv
        t2, _, perm = self.gluings[(t, f)]
        return (t2, perm[v])

    def _map_dedge(self, e, f):
        t, a, b = e
        t2, _, perm = self.gluings[(t, f)]
        return (t2, perm[a], perm[b])

    @staticmethod
    def _orbits(items, neighbors):
        index = {}
        for start in sorted(items):
            if start in index:
                continue
            cls = len(set(index.values()))
            stack = [start]
            index[start] = cls
            while stack:
                x = stack.pop()
                for y in neighbors(x):
                    if y not in index:
                        index[y] = cls
                        stack.append(y)
                    elif index[y] != cls:
                        # merge should not happen with orbit-closure ordering
                        raise AssertionError("orbit closure conflict")
            # renumber densely below
        # compact class ids in first-seen order
        remap = {}
        out = {}
        for x in sorted(items):
            c = index[x]
            if c not in remap:
                remap[c] = len(remap)
            out[x] = remap[c]
        return out

    # -- derived data ---------------------------------------------------------

    def vertex_class_of(self, t, v):
        return self.vertex_class[(t, v)]

    def edge_class_of(self, t, a, b):
        """Class id and direction sign of the directed edge (a -> b) of t."""
        if (t, a, b) in self.edge_class:
            return self.edge_class[(t, a, b)], 1
        return self.edge_class[(t, b, a)], -1

    def edge_class_ends(self, eid):
        t, a, b = self.edge_members[eid][0]
        return self.vertex_class[(t, a)], self.vertex_class[(t, b)]

    def summary(self):
        return {"tets": self.ntets, "triangles": self.ntriangles,
                "edges": self.nedges, "vertices": self.nvertices}

    def walk_around_edge(self, eid):
        """Cyclic walk around a directed edge class in the positive linking
        direction: list of (tet, directed edge in tet, enter face, exit face),
        visiting each (tet, edge slot) exactly once."""
        t0, a0, b0 = self.edge_members[eid][0]
        walk = []
        t, a, b = t0, a0, b0
        enter = None
        seen = set()
        while True:
            fin, fout = _edge_walk_faces(self.orientations[t], a, b)
            if enter is not None and enter != fin:
                raise AssertionError("edge walk orientation mismatch")
            walk.append((t, a, b, fin, fout))
            key = (t, frozenset((a, b)))
            if key in seen:
                raise AssertionError("edge walk revisits a slot")
            seen.add(key)
            t2, f2, perm = self.gluings[(t, fout)]
            t, a, b, enter = t2, perm[a], perm[b], f2
            if (t, a, b) == (t0, a0, b0):
                fin0, _ = _edge_walk_faces(self.orientations[t0], a0, b0)
                if enter != fin0:
                    raise AssertionError("edge walk does not close compatibly")
                break
        expect = sum(1 for (tt, aa, bb) in self.edge_members[eid])
        if len(walk) != expect:
            raise AssertionError("edge walk misses slots")
        return walk


_SIMPLEX = {
    0: (Fraction(0), Fraction(0), Fraction(0)),
    1: (Fraction(1), Fraction(0), Fraction(0)),
    2: (Fraction(0), Fraction(1), Fraction(0)),
    3: (Fraction(0), Fraction(0), Fraction(1)),
}
_BARY = tuple(sum(_SIMPLEX[v][i] for v in range(4)) / 4 for i in range(3))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _vavg(*pts):
    n = len(pts)
    return tuple(sum(p[i] for p in pts) / n for i in range(3))


def _det3(u, v, w):
    return (u[0] * (v[1] * w[2] - v[2] * w[1])
            - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))


def _face_bary(k):
    return _vavg(*(setat for v, setat in _SIMPLEX.items() if v != k))


def _edge_walk_faces(sign, a, b):
    """Faces through which the positive loop around the directed edge (a,b)
    enters and exits a tetrahedron of the given orientation sign."""
    c, d = (x for x in range(4) if x not in (a, b))
    mid = _vavg(_SIMPLEX[a], _SIMPLEX[b])
    det = _det3(_vsub(_SIMPLEX[b], _SIMPLEX[a]),
                _vsub(_SIMPLEX[d], mid), _vsub(_SIMPLEX[c], mid))
    if det * sign > 0:
        # positive rotation carries the d side to the c side:
        # enter through the face containing d (missing c), exit missing d
        return c, d
    return d, c


def parse_triangulation(text: str) -> Triangulation:
    """Parse the triangulation file format: ``tets N`` then lines
    ``glue t f t' f' PPPP`` with PPPP the images of vertices 0..3."""
    ntets = None
    gluings = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "tets":
            ntets = int(toks[1])
        elif toks[0] == "glue":
            t, f, t2, f2 = (int(x) for x in toks[1:5])
            perm = tuple(int(c) for c in toks[5])
            if sorted(perm) != [0, 1, 2, 3]:
                raise ValueError(f"bad permutation {toks[5]}")
            gluings[(t, f)] = (t2, f2, perm)
            gluings.setdefault((t2, f2), (t, f, _perm_inv(perm)))
        else:
            raise ValueError(f"unknown triangulation key {toks[0]!r}")
    if ntets is None:
        raise ValueError("missing tets line")
    return Triangulation(ntets, gluings)


def save_triangulation(tri: Triangulation, name: str = "") -> str:
    lines = []
    if name:
        lines.append(f"# {name}")
    s = tri.summary()
    lines.append(f"# cells: tets {s['tets']} triangles {s['triangles']} "
                 f"edges {s['edges']} vertices {s['vertices']}")
    lines.append(f"tets {tri.ntets}")
    done = set()
    for (t, f), (t2, f2, perm) in sorted(tri.gluings.items()):
        if (t, f) in done:
            continue
        done.add((t, f))
        done.add((t2, f2))
        lines.append(f"glue {t} {f} {t2} {f2} " + "".join(str(x) for x in perm))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Pachner moves


def pachner(tri: Triangulation, move: str, location) -> Triangulation:
    """Bistellar move; ``move`` is one of '1-4', '2-3', '3-2', '4-1'.

    Locations: '1-4' takes a tetrahedron index; '2-3' a (tet, face) pair
    whose partner tetrahedron is distinct; '3-2' an edge class id of
    valence three with three distinct tetrahedra; '4-1' a vertex class id
    whose star is the cone pattern of four distinct tetrahedra.
    """
    if move == "1-4":
        return _pachner_14(tri, int(location))
    if move == "2-3":
        t, f = location
        return _pachner_23(tri, t, f)
    if move == "3-2":
        return _pachner_32(tri, int(location))
    if move == "4-1":
        return _pachner_41(tri, int(location))
    raise ValueError(f"unknown Pachner move {move!r}")


def _redirect(gluings, mapping):
    """Rewrite a gluing dict through face renames given by mapping:
    old (t,f) -> new (t,f); faces not in the mapping are kept."""
    out = {}
    for (t, f), (t2, f2, perm) in gluings.items():
        a = mapping.get((t, f), (t, f))
        b = mapping.get((t2, f2), (t2, f2))
        out[a] = (b[0], b[1], perm)
    return out


def _pachner_14(tri: Triangulation, t0: int) -> Triangulation:
    n = tri.ntets
    # new tets: T_k replaces t0 coned over face k; T_0 takes index t0,
    # T_1..T_3 are appended
    tid = {0: t0, 1: n, 2: n + 1, 3: n + 2}
    gl = {}
    for (t, f), val in tri.gluings.items():
        if t != t0 and val[0] != t0:
            gl[(t, f)] = val
    for k in range(4):
        t2, f2, perm = tri.gluings[(t0, k)]
        if t2 == t0:
            k2 = f2
            gl[(tid[k], k)] = (tid[k2], k2, perm)
            gl[(tid[k2], k2)] = (tid[k], k, _perm_inv(perm))
        else:
            gl[(tid[k], k)] = (t2, f2, perm)
            gl[(t2, f2)] = (tid[k], k, _perm_inv(perm))
    for k in range(4):
        for j in range(4):
            if j == k:
                continue
            perm = list(range(4))
            perm[k], perm[j] = j, k
            gl[(tid[k], j)] = (tid[j], k, tuple(perm))
    return Triangulation(n + 3, gl)


def _pachner_23(tri: Triangulation, tA: int, fA: int) -> Triangulation:
    tB, fB, pi = tri.gluings[(tA, fA)]
    if tA == tB:
        raise ValueError("2-3 move needs two distinct tetrahedra")
    xs = [v for v in range(4) if v != fA]          # face vertices in tA
    pA = fA
    pB = fB
    n = tri.ntets
    keep = [t for t in range(n) if t not in (tA, tB)]
    newid = {t: i for i, t in enumerate(keep)}
    nid = [len(keep), len(keep) + 1, len(keep) + 2]

    # vertex meaning of N_i: 0 -> apex of A, 1 -> apex of B,
    # 2 -> x_(i+1), 3 -> x_(i+2)
    mu = []
    nu = []
    for i in range(3):
        m = [None] * 4
        m[0] = pA
        m[1] = xs[i]
        m[2] = xs[(i + 1) % 3]
        m[3] = xs[(i + 2) % 3]
        mu.append(tuple(m))          # N_i label -> tA label (face 1 of N_i)
        w = [None] * 4
        w[0] = pi[xs[i]]
        w[1] = pB
        w[2] = pi[xs[(i + 1) % 3]]
        w[3] = pi[xs[(i + 2) % 3]]
        nu.append(tuple(w))          # N_i label -> tB label (face 0 of N_i)

    mapping = {}
    for i in range(3):
        mapping[(tA, xs[i])] = (nid[i], 1)
        mapping[(tB, pi[xs[i]])] = (nid[i], 0)
    for t in keep:
        for f in range(4):
            mapping[(t, f)] = (newid[t], f)

    gl = {}
    for (t, f), (t2, f2, perm) in tri.gluings.items():
        if (t, f) in ((tA, fA), (tB, fB)):
            continue
        if t in (tA, tB) and f != (fA if t == tA else fB):
            # rewrite the perm to new labels on the near side
            if t == tA:
                i = xs.index(f)
                near = mu[i]
            else:
                i = [pi[x] for x in xs].index(f)
                near = nu[i]
            src = mapping[(t, f)]
            dst = mapping.get((t2, f2), (newid.get(t2, t2), f2))
            if t2 in (tA, tB):
                if t2 == tA:
                    j = xs.index(f2)
                    far = mu[j]
                else:
                    j = [pi[x] for x in xs].index(f2)
                    far = nu[j]
                newperm = tuple(_pos(far, perm[near[k]]) for k in range(4))
            else:
                newperm = tuple(perm[near[k]] for k in range(4))
            gl[src] = (dst[0], dst[1], newperm)
        elif t not in (tA, tB):
            src = (newid[t], f)
            if t2 in (tA, tB):
                continue  # written from the other side
            gl[src] = (newid[t2], f2, perm)
    # ensure both directions present for rewritten external faces
    for (t, f), (t2, f2, perm) in list(gl.items()):
        gl[(t2, f2)] = (t, f, _perm_inv(perm))
    # internal gluings between the N_i around the new edge
    for i in range(3):
        j = (i + 1) % 3
        perm = (0, 1, 3, 2)
        gl[(nid[i], 2)] = (nid[j], 3, perm)
        gl[(nid[j], 3)] = (nid[i], 2, perm)
    return Triangulation(len(keep) + 3, gl)


def _pos(tup, val):
    return tup.index(val)


def _pachner_32(tri: Triangulation, eid: int) -> Triangulation:
    walk = tri.walk_around_edge(eid)
    if len(walk) != 3:
        raise ValueError("3-2 move needs an edge of valence three")
    tets = [w[0] for w in walk]
    if len(set(tets)) != 3:
        raise ValueError("3-2 move needs three distinct tetrahedra")
    # normalize each N_i so the shared edge is (apexA -> apexB)? Instead,
    # rebuild by inverting the 2-3 construction: the walk gives tets
    # N_0, N_1, N_2 around the edge (a_i -> b_i); equator vertices are the
    # remaining two in each tet.
    n = tri.ntets
    keep = [t for t in range(n) if t not in tets]
    newid = {t: i for i, t in enumerate(keep)}
    tA = len(keep)
    tB = len(keep) + 1
    # local labels: in N_i the directed edge is (a_i, b_i); faces fin/fout
    # pair with the neighbors. pA corresponds to all a_i, pB to all b_i.
    # equator vertex shared by N_i and N_(i+1) is the one opposite fout.
    a = {}
    b = {}
    fin = {}
    fout = {}
    for i, (t, aa, bb, fi, fo) in enumerate(walk):
        a[i], b[i], fin[i], fout[i] = aa, bb, fi, fo
    # choose labels of tA: apex pA=3, equator x_i = i for i in 0..2
    # x_i sits opposite the face of tA glued to ... we reconstruct directly:
    # tA's face i is glued to where N_i's face b_i led (the a-side cone).
    # vertex x_i of tA corresponds in N_i to the vertex e_i := the vertex of
    # N_i not in {a_i, b_i, (vertex opposite fin...)}; work with explicit
    # correspondences per walk step instead:
    # In N_i, the four vertices are a_i, b_i, u_i, w_i where u_i is opposite
    # fout[i] (shared with N_(i+1)) and w_i opposite fin[i].
    # the shared face between N_i and N_(i+1) is fout[i]; it contains the
    # edge vertices a, b and one equator vertex u_i
    u = {}
    w = {}
    for i in range(3):
        third = [x for x in range(4) if x != fout[i] and x not in (a[i], b[i])]
        u[i] = third[0]
        w[i] = fout[i]
    # tA vertices: pA=3 (corresponds to a_i), x_0=0, x_1=1, x_2=2 where the
    # equator vertex x_i lives in N_i as u_i and in N_(i+1) as ...
    # tA's face opposite x_i must glue to the outside through N_?'s face b-side.
    # Each N_i has two outside faces: opposite a_i (b-side cone -> tB) and
    # opposite b_i (a-side -> tA)?? The faces of N_i: fin, fout (internal),
    # face opposite a_i (contains b,u,w: outside, belongs to B cone),
    # face opposite b_i (outside, A cone).
    # Assign equator labels: x_i := vertex u_i viewed in tA/tB, for i=0,1,2.
    # In N_i the equator vertices are u_i (shared with N_(i+1)) and u_(i-1)
    # (shared with N_(i-1)), which appears in N_i as w'... derive from gluing:
    prev_u_in_i = {}
    for i in range(3):
        j = (i + 1) % 3
        _, _, perm = tri.gluings[(tets[i], fout[i])]
        prev_u_in_i[j] = perm[u[i]]
    # N_i contains equator vertices u[i] (=x_i) and prev_u_in_i[i] (=x_(i-1)).
    # outside faces of N_i:
    # A-side: opposite b_i, contains {a_i, u_i, x_(i-1)} -> tA face f = i+1
    #   mapping to tA labels: a_i -> 3(pA), u_i -> i, prev -> i-1
    # B-side: opposite a_i -> tB face, a-apex replaced by b.
    glA = {}
    mapping = {}
    for t in keep:
        for f in range(4):
            mapping[(t, f)] = (newid[t], f)
    gl = {}
    for i in range(3):
        im1 = (i - 1) % 3
        # A side
        srcA = (tets[i], b[i])
        labA = {a[i]: 3, u[i]: i, prev_u_in_i[i]: im1}
        # tA face index = the missing equator label (i+1 mod 3)? tA face
        # opposite vertex v: the outside face srcA contains vertices
        # {3, i, im1}: the missing one is (i+1)%3: face (i+1)%3 of tA.
        fAi = (i + 1) % 3
        t2, f2, perm = tri.gluings[srcA]
        # B side
        srcB = (tets[i], a[i])
        labB = {b[i]: 3, u[i]: i, prev_u_in_i[i]: im1}
        fBi = (i + 1) % 3
        for (src, lab, tnew, fnew) in ((srcA, labA, tA, fAi), (srcB, labB, tB, fBi)):
            t2, f2, perm = tri.gluings[src]
            if t2 in tets:
                continue  # handled when pairing both rewritten sides below
            inv = {v: k for k, v in lab.items()}
            newperm = [None] * 4
            for k in range(4):
                if k == fnew:
                    newperm[k] = f2
                else:
                    newperm[k] = perm[inv[k]]
            gl[(tnew, fnew)] = (newid[t2], f2, tuple(newperm))
            gl[(newid[t2], f2)] = (tnew, fnew, _perm_inv(tuple(newperm)))
    # outside faces glued between two of the removed tets (tA/tB self gluings)
    rewritten = {}
    for i in range(3):
        im1 = (i - 1) % 3
        labA = {a[i]: 3, u[i]: i, prev_u_in_i[i]: im1}
        labB = {b[i]: 3, u[i]: i, prev_u_in_i[i]: im1}
        rewritten[(tets[i], b[i])] = (tA, (i + 1) % 3, labA)
        rewritten[(tets[i], a[i])] = (tB, (i + 1) % 3, labB)
    for src, (tnew, fnew, lab) in rewritten.items():
        t2, f2, perm = tri.gluings[src]
        if (t2, f2) not in rewritten:
            continue
        tn2, fn2, lab2 = rewritten[(t2, f2)]
        inv = {v: k for k, v in lab.items()}
        newperm = [None] * 4
        for k in range(4):
            if k == fnew:
                newperm[k] = fn2
            else:
                newperm[k] = lab2[perm[inv[k]]]
        gl[(tnew, fnew)] = (tn2, fn2, tuple(newperm))
    for t in keep:
        for f in range(4):
            t2, f2, perm = tri.gluings[(t, f)]
            if t2 in tets:
                continue
            gl[(newid[t], f)] = (newid[t2], f2, perm)
    # internal gluing tA <-> tB along face 3 (the equator triangle x0x1x2)
    gl[(tA, 3)] = (tB, 3, (0, 1, 2, 3))
    gl[(tB, 3)] = (tA, 3, (0, 1, 2, 3))
    return Triangulation(len(keep) + 2, gl)


def _pachner_41(tri: Triangulation, vclass: int) -> Triangulation:
    corners = sorted((t, v) for (t, v), c in tri.vertex_class.items() if c == vclass)
    star = [t for (t, v) in corners]
    if len(star) != 4 or len(set(star)) != 4:
        raise ValueError("4-1 move needs a vertex with cone star of four tetrahedra")
    center = dict(corners)
    # reconstruct the labels of the replacement tetrahedron: mu[T] maps the
    # non-center vertices of T to new-tet labels, slot[T] is the new face
    # covered by T's external face
    t0 = star[0]
    mu = {t0: {v: v for v in range(4) if v != center[t0]}}
    slot = {t0: center[t0]}
    queue = [t0]
    seen = {t0}
    while queue:
        t = queue.pop(0)
        for f in range(4):
            if f == center[t]:
                continue
            t2, f2, perm = tri.gluings[(t, f)]
            if t2 not in star:
                raise ValueError("4-1 star face leaves the cone")
            if perm[center[t]] != center[t2]:
                raise ValueError("4-1 star centers do not match across a face")
            if t2 in seen:
                continue
            mu2 = {}
            for v in range(4):
                if v in (center[t], f):
                    continue
                mu2[perm[v]] = mu[t][v]
            s2 = mu[t][f]
            rest_label = next(x for x in range(4)
                              if x != s2 and x not in mu2.values())
            rest_vertex = next(x for x in range(4)
                               if x != center[t2] and x not in mu2)
            mu2[rest_vertex] = rest_label
            mu[t2] = mu2
            slot[t2] = s2
            seen.add(t2)
            queue.append(t2)
    if len(seen) != 4 or len(set(slot.values())) != 4:
        raise ValueError("4-1 star is not internally a cone")
    n = tri.ntets
    keep = [t for t in range(n) if t not in star]
    newid = {t: i for i, t in enumerate(keep)}
    tnew = len(keep)
    gl = {}
    for t in keep:
        for f in range(4):
            t2, f2, perm = tri.gluings[(t, f)]
            if t2 in star:
                continue
            gl[(newid[t], f)] = (newid[t2], f2, perm)
    inv_mu = {t: {lab: v for v, lab in mu[t].items()} for t in star}
    for t in star:
        ext = center[t]
        t2, f2, perm = tri.gluings[(t, ext)]
        fnew = slot[t]
        if t2 in star:
            if f2 != center[t2]:
                raise ValueError("4-1 external face glued into the cone interior")
            newperm = [None] * 4
            newperm[fnew] = slot[t2]
            for lab in range(4):
                if lab == fnew:
                    continue
                newperm[lab] = mu[t2][perm[inv_mu[t][lab]]]
            gl[(tnew, fnew)] = (tnew, slot[t2], tuple(newperm))
        else:
            newperm = [None] * 4
            newperm[fnew] = f2
            for lab in range(4):
                if lab == fnew:
                    continue
                newperm[lab] = perm[inv_mu[t][lab]]
            gl[(tnew, fnew)] = (t2 if t2 not in newid else newid[t2], f2,
                                tuple(newperm))
            gl[(newid[t2], f2)] = (tnew, fnew, _perm_inv(tuple(newperm)))
    return Triangulation(len(keep) + 1, gl)


def _inv_lab(lab, k):
    for v, x in lab.items():
        if x == k:
            return v
    raise KeyError(k)


def triangulations_isomorphic(t1: Triangulation, t2: Triangulation) -> bool:
    if t1.ntets != t2.ntets:
        return False
    return _canonical_signature(t1) == _canonical_signature(t2)


def _canonical_signature(tri: Triangulation):
    best = None
    for start in range(tri.ntets):
        for perm0 in permutations(range(4)):
            sig = _signature_from(tri, start, perm0)
            if best is None or sig < best:
                best = sig
    return best


def _signature_from(tri: Triangulation, start, perm0):
    label = {start: tuple(perm0)}   # tet -> relabeling old vertex -> new vertex
    order = [start]
    queue = [start]
    sig = []
    while queue:
        t = queue.pop(0)
        lab = label[t]
        inv = _perm_inv(lab)
        for fnew in range(4):
            f = inv[fnew]
            t2, f2, perm = tri.gluings[(t, f)]
            if t2 not in label:
                # transported labeling: new = old composed to keep this
                # gluing the identity on the face and minimal overall
                fresh = [None] * 4
                for v in range(4):
                    if v != f:
                        fresh[perm[v]] = lab[v]
                fresh[f2] = next(x for x in range(4) if x not in fresh)
                label[t2] = tuple(fresh)
                order.append(t2)
                queue.append(t2)
            idx = order.index(t2)
            lab2 = label[t2]
            pimg = tuple(lab2[perm[inv[v]]] for v in range(4))
            sig.append((order.index(t), fnew, idx, pimg))
    return tuple(sorted(sig))


# ---------------------------------------------------------------------------
# skeletons


class LinkGraph:
    """Vertex link: graph on the link sphere; arcs are region germs and
    link vertices (gvertices) are skeleton-edge ends."""

    def __init__(self, arcs, rotations):
        # arcs: list of (tail_gv, head_gv, region); rotations: per gvertex,
        # list of darts (arc, end) with end 0 = tail, 1 = head
        self.arcs = [tuple(a) for a in arcs]
        self.rotations = [list(r) for r in rotations]

    def copy(self):
        return LinkGraph([tuple(a) for a in self.arcs],
                         [list(r) for r in self.rotations])

    def items_at(self, gv):
        """Cyclic set [(region, sign)] at a gvertex; incoming arc = +1."""
        out = []
        for arc, end in self.rotations[gv]:
            tail, head, region = self.arcs[arc]
            out.append((region, 1 if end == 1 else -1))
        return out


class Skeleton:
    """Oriented stratified 2-polyhedron of a closed manifold.

    regions: list of (chi, ball_neg, ball_pos); vertices: LinkGraph per
    skeleton vertex; edges: ((v0, gv0), (v1, gv1)).  The branch data of an
    edge is the rotation list at its end-0 gvertex; validation enforces the
    positional duality with the end-1 list.
    """

    def __init__(self, regions, ball_count, links, edges, name="skeleton"):
        self.regions = [tuple(r) for r in regions]
        self.ball_count = ball_count
        self.links = links
        self.edges = [tuple(map(tuple, e)) for e in edges]
        self.name = name
        self.validate()

    def copy(self):
        return Skeleton([tuple(r) for r in self.regions], self.ball_count,
                        [lk.copy() for lk in self.links],
                        [tuple(map(tuple, e)) for e in self.edges], name=self.name)

    # -- validation ---------------------------------------------------------

    def validate(self):
        owner = {}
        for eid, ((v0, g0), (v1, g1)) in enumerate(self.edges):
            for key in ((v0, g0), (v1, g1)):
                if key in owner:
                    raise ValueError(f"link vertex {key} used by two edge ends")
                owner[key] = eid
        for v, lk in enumerate(self.links):
            for g in range(len(lk.rotations)):
                if (v, g) not in owner:
                    raise ValueError(f"link vertex ({v},{g}) not attached to an edge")
                if len(lk.rotations[g]) < 2:
                    raise ValueError(f"link vertex ({v},{g}) has fewer than 2 half-edges")
            seen = {}
            for g, rot in enumerate(lk.rotations):
                for pos, dart in enumerate(rot):
                    if dart in seen:
                        raise ValueError(f"dart {dart} repeated in link of vertex {v}")
                    seen[tuple(dart)] = (g, pos)
            for a, (tail, head, region) in enumerate(lk.arcs):
                if (a, 0) not in seen or (a, 1) not in seen:
                    raise ValueError(f"arc {a} of vertex {v} missing from rotations")
                if seen[(a, 0)][0] != tail or seen[(a, 1)][0] != head:
                    raise ValueError(f"arc {a} of vertex {v} endpoint mismatch")
                if not (0 <= region < len(self.regions)):
                    raise ValueError(f"arc {a} of vertex {v} has bad region")
            self._check_link_sphere(v, lk)
        for eid, ((v0, g0), (v1, g1)) in enumerate(self.edges):
            items0 = self.links[v0].items_at(g0)
            items1 = self.links[v1].items_at(g1)
            want = [(r, -s) for (r, s) in reversed(items0)]
            if items1 != want:
                raise ValueError(f"edge {eid} ends are not positionally dual")
        for chi, bn, bp in self.regions:
            if not (0 <= bn < self.ball_count and 0 <= bp < self.ball_count):
                raise ValueError("region adjacent to unknown ball")

    def _check_link_sphere(self, v, lk):
        from .graphcalc import ColoredGraph
        try:
            ColoredGraph(len(lk.rotations),
                         [(t, h, r) for (t, h, r) in lk.arcs], lk.rotations)
        except ValueError as exc:
            raise ValueError(f"vertex {v} link is not a sphere graph: {exc}") from None

    # -- views ---------------------------------------------------------------

    def edge_branches(self, eid):
        """Branch list [(region, sign)] of an edge, end-0 anchored."""
        (v0, g0), _ = self.edges[eid]
        return self.links[v0].items_at(g0)

    def nvertices(self):
        return len(self.links)

    def nregions(self):
        return len(self.regions)

    def region_euler(self, r):
        return self.regions[r][0]

    def region_balls(self, r):
        return self.regions[r][1], self.regions[r][2]

    def link_colored_graph(self, v, coloring):
        """The link of v as a ColoredGraph colored through region -> simple."""
        from .graphcalc import ColoredGraph
        lk = self.links[v]
        return ColoredGraph(len(lk.rotations),
                            [(t, h, coloring[r]) for (t, h, r) in lk.arcs],
                            lk.rotations)

    def is_spine(self):
        """Matveev-special check: one ball, at least two vertices, every
        link the tetrahedral graph."""
        if self.ball_count != 1 or len(self.links) < 2:
            return False
        for lk in self.links:
            if len(lk.rotations) != 4 or len(lk.arcs) != 6:
                return False
            if any(len(r) != 3 for r in lk.rotations):
                return False
            pairs = {frozenset((t, h)) for (t, h, _) in lk.arcs}
            if len(pairs) != 6:
                return False
        return True

    def summary(self):
        return {"regions": len(self.regions), "edges": len(self.edges),
                "vertices": len(self.links), "balls": self.ball_count}


def dual_skeleton(tri: Triangulation) -> Skeleton:
    """Dual skeleton of a closed oriented triangulation: regions are edge
    classes (disks), edges are triangle classes, vertices are tetrahedra
    with tetrahedral-graph links, balls are vertex classes."""
    regions = []
    for eid in range(tri.nedges):
        tail, head = tri.edge_class_ends(eid)
        regions.append((1, tail, head))

    links = []
    arc_index = {}   # (tet, frozenset edge) -> arc id
    for t in range(tri.ntets):
        sign = tri.orientations[t]
        arcs = []
        rotations = [[] for _ in range(4)]
        arc_of_edge = {}
        for a in range(4):
            for b in range(a + 1, 4):
                c, d = (x for x in range(4) if x not in (a, b))
                eid, dirsign = tri.edge_class_of(t, a, b)
                # direction of the class inside this tet
                aa, bb = (a, b) if dirsign > 0 else (b, a)
                mid = _vavg(_SIMPLEX[aa], _SIMPLEX[bb])
                mc, md = _face_bary(c), _face_bary(d)
                x = _vavg(mc, md)
                nu = _vsub(_BARY, x)
                wvec = _vsub(md, mc)
                s = _det3(_vsub(_SIMPLEX[bb], _SIMPLEX[aa]), nu, wvec)
                if s * sign > 0:
                    tail_gv, head_gv = c, d
                else:
                    tail_gv, head_gv = d, c
                arc_id = len(arcs)
                arcs.append((tail_gv, head_gv, eid))
                arc_of_edge[frozenset((a, b))] = arc_id
                arc_index[(t, frozenset((a, b)))] = arc_id
        for k in range(4):
            face_vs = [x for x in range(4) if x != k]
            mk = _face_bary(k)
            naxis = _vsub(_BARY, mk)
            # the three arcs at gvertex k belong to the edges of face k;
            # order them clockwise (minus the link-sphere orientation)
            pairs = [(face_vs[0], face_vs[1]), (face_vs[0], face_vs[2]),
                     (face_vs[1], face_vs[2])]
            us = [_vsub(_vavg(_SIMPLEX[x], _SIMPLEX[y]), mk) for (x, y) in pairs]
            d01 = _det3(naxis, us[0], us[1])
            d12 = _det3(naxis, us[1], us[2])
            d20 = _det3(naxis, us[2], us[0])
            pos = sum(1 for dd in (d01, d12, d20) if dd * sign > 0)
            ccw = [pairs[0], pairs[1], pairs[2]] if pos >= 2 else \
                  [pairs[0], pairs[2], pairs[1]]
            clockwise = list(reversed(ccw))
            rotations[k] = []
            for (x, y) in clockwise:
                arc_id = arc_of_edge[frozenset((x, y))]
                tail_gv, head_gv, _ = arcs[arc_id]
                end = 1 if head_gv == k else 0
                rotations[k].append((arc_id, end))
        links.append(LinkGraph(arcs, rotations))

    # edges: one per triangle class; align the end-1 rotation positionally
    edges = []
    done = set()
    for t in range(tri.ntets):
        for f in range(4):
            if (t, f) in done:
                continue
            t2, f2, perm = tri.gluings[(t, f)]
            done.add((t, f))
            done.add((t2, f2))
            # match branches across the gluing and re-anchor the end-1 list
            rot0 = links[t].rotations[f]
            part0 = [_pair_of_arc(t, arc_id, arc_index, f) for arc_id, _ in rot0]
            want_pairs = [tuple(sorted((perm[x], perm[y]))) for (x, y) in reversed(part0)]
            rot1 = links[t2].rotations[f2]
            pairs1 = [_pair_of_arc(t2, arc_id, arc_index, f2) for arc_id, _ in rot1]
            shift = None
            m = len(rot1)
            for s in range(m):
                if [pairs1[(s + i) % m] for i in range(m)] == want_pairs:
                    shift = s
                    break
            if shift is None:
                raise AssertionError("triangle gluing does not align link rotations")
            links[t2].rotations[f2] = [rot1[(shift + i) % m] for i in range(m)]
            edges.append(((t, f), (t2, f2)))

    # renumber edge ends as (vertex, gvertex) = (tet, face)
    sk = Skeleton(regions, tri.nvertices, links,
                  [((t, f), (t2, f2)) for ((t, f), (t2, f2)) in edges],
                  name="dual")
    return sk


def _pair_of_arc(t, arc_id, arc_index, f):
    vs = [x for x in range(4) if x != f]
    for i, x in enumerate(vs):
        for y in vs[i + 1:]:
            if arc_index[(t, frozenset((x, y)))] == arc_id:
                return (x, y)
    raise KeyError((t, arc_id))


# ---------------------------------------------------------------------------
# region boundary walks (used by the local moves)


def region_boundary_walks(sk: Skeleton, region: int):
    """Boundary circles of a region as cyclic slot lists.

    Slots alternate ('edge', eid, branch, from_end) and ('arc', vertex,
    arc_id).  The walk follows the region's boundary orientation: link arcs
    are always traversed tail to head; an edge germ is traversed away from
    the end where its arc-dart points into the link vertex.
    """
    germ_slots = []
    for eid in range(len(sk.edges)):
        for j, (r, s) in enumerate(sk.edge_branches(eid)):
            if r == region:
                germ_slots.append((eid, j))
    arcs_by_vertex = {}
    for v, lk in enumerate(sk.links):
        for a, (tail, head, r) in enumerate(lk.arcs):
            if r == region:
                arcs_by_vertex.setdefault(v, []).append(a)

    def dart_location(eid, j, end):
        (v0, g0), (v1, g1) = sk.edges[eid]
        n = len(sk.links[v0].rotations[g0])
        if end == 0:
            return v0, g0, j
        return v1, g1, n - 1 - j

    def arc_at(v, g, pos):
        lk = sk.links[v]
        return lk.rotations[g][pos]

    cycles = []
    remaining = set(germ_slots)
    while remaining:
        start = min(remaining)
        cycle = []
        eid, j = start
        while True:
            sign0 = sk.edge_branches(eid)[j][1]
            from_end = 0 if sign0 > 0 else 1
            cycle.append(("edge", eid, j, from_end))
            remaining.discard((eid, j))
            exit_end = 1 - from_end
            v, g, pos = dart_location(eid, j, exit_end)
            arc_id, arc_end = arc_at(v, g, pos)
            if arc_end != 0:
                raise AssertionError("region walk does not enter the arc at its tail")
            if sk.links[v].arcs[arc_id][2] != region:
                raise AssertionError("region walk color mismatch")
            cycle.append(("arc", v, arc_id))
            head_gv = sk.links[v].arcs[arc_id][1]
            pos2 = next(p for p, d in enumerate(sk.links[v].rotations[head_gv])
                        if d == (arc_id, 1))
            eid2, end2 = _edge_of_gvertex(sk, v, head_gv)
            n2 = len(sk.links[v].rotations[head_gv])
            j2 = pos2 if end2 == 0 else n2 - 1 - pos2
            eid, j = eid2, j2
            if (eid, j) == start:
                break
        cycles.append(cycle)
    return cycles


def _edge_of_gvertex(sk: Skeleton, v, g):
    for eid, ((v0, g0), (v1, g1)) in enumerate(sk.edges):
        if (v0, g0) == (v, g):
            return eid, 0
        if (v1, g1) == (v, g):
            return eid, 1
    raise KeyError((v, g))


# ---------------------------------------------------------------------------
# local moves on labeled skeletons


class MoveSpec:
    """Local move description.

    kinds and parameters:
      T1:    vertex1, arc1, vertex2, arc2   (arcs colored by one region)
      T1inv: edge
      T2:    edge
      T2inv: vertex, circle (list of arc ids crossed in cyclic order)
      T4:    region, side ('+' or '-'), label (group element for D+)
      T4inv: vertex
    """

    def __init__(self, kind: str, **params):
        self.kind = kind
        self.params = params

    def __repr__(self):
        return f"MoveSpec({self.kind}, {self.params})"


def apply_move(sk: Skeleton, labeling: dict, spec: MoveSpec, group):
    """Apply a labeled local move; returns (skeleton, labeling).  Labels of
    surviving regions are preserved bit-exactly; small-region labels follow
    the product condition."""
    if spec.kind == "T1":
        return _move_t1(sk, labeling, group, **spec.params)
    if spec.kind == "T1inv":
        return _move_t1_inv(sk, labeling, group, **spec.params)
    if spec.kind == "T2":
        return _move_t2(sk, labeling, group, **spec.params)
    if spec.kind == "T2inv":
        return _move_t2_inv(sk, labeling, group, **spec.params)
    if spec.kind == "T4":
        return _move_t4(sk, labeling, group, **spec.params)
    if spec.kind == "T4inv":
        return _move_t4_inv(sk, labeling, group, **spec.params)
    raise ValueError(f"unknown move kind {spec.kind!r}")


def _move_t4(sk: Skeleton, labeling, group, region: int, side: str, label: int):
    chi, bn, bp = sk.regions[region]
    if side not in ("+", "-"):
        raise ValueError("T4 side must be '+' or '-'")
    b = bp if side == "+" else bn
    sk2 = sk.copy()
    b_new = sk2.ball_count
    sk2.ball_count += 1
    r_dm = len(sk2.regions)
    r_dp = r_dm + 1
    if side == "+":
        dm_balls = (bn, b_new)
        dp_balls = (b_new, b)
    else:
        dm_balls = (b_new, bp)
        dp_balls = (bn, b_new)
    sk2.regions[region] = (chi - 1, bn, bp)
    sk2.regions.append((1, dm_balls[0], dm_balls[1]))
    sk2.regions.append((1, dp_balls[0], dp_balls[1]))
    # theta link of the new vertex; branch order at the outgoing end:
    #   side '+': (r out-, D- in+, D+ in+)   side '-': (r out-, D+ in+, D- in+)
    if side == "+":
        arcs = [(0, 1, region), (1, 0, r_dm), (1, 0, r_dp)]
        rot0 = [(0, 0), (1, 1), (2, 1)]
        rot1 = [(2, 0), (1, 0), (0, 1)]
    else:
        arcs = [(0, 1, region), (1, 0, r_dp), (1, 0, r_dm)]
        rot0 = [(0, 0), (1, 1), (2, 1)]
        rot1 = [(2, 0), (1, 0), (0, 1)]
    w = len(sk2.links)
    sk2.links.append(LinkGraph(arcs, [rot0, rot1]))
    sk2.edges.append(((w, 0), (w, 1)))
    lab2 = dict(labeling)
    g = label
    lr = labeling[region]
    if side == "+":
        # product around the new edge: l(r)^-1 l(D-) l(D+) = 1
        lab2[r_dm] = group.mul(lr, group.inv(g))
    else:
        # l(r)^-1 l(D+) l(D-) = 1
        lab2[r_dm] = group.mul(group.inv(g), lr)
    lab2[r_dp] = g
    out = Skeleton(sk2.regions, sk2.ball_count, sk2.links, sk2.edges, name=sk.name)
    return out, lab2


def _move_t4_inv(sk: Skeleton, labeling, group, vertex: int):
    lk = sk.links[vertex]
    if len(lk.rotations) != 2 or len(lk.arcs) != 3:
        raise ValueError("T4inv: vertex link is not a three-arc theta graph")
    eid, end = _edge_of_gvertex(sk, vertex, 0)
    (va, ga), (vb, gb) = sk.edges[eid]
    if va != vertex or vb != vertex:
        raise ValueError("T4inv: the vertex edge is not a loop")
    # find the bubble pair: two disk regions incident only to this bubble
    counts = {}
    for v2, lk2 in enumerate(sk.links):
        for (t, h, r) in lk2.arcs:
            counts[r] = counts.get(r, 0) + 1
    regs = {r for (_, _, r) in lk.arcs}
    disks = [r for r in regs if sk.regions[r][0] == 1 and counts.get(r) == 1]
    if len(disks) < 2:
        raise ValueError("T4inv: no bubble pair at this vertex")
    ball_usage = {}
    for r, (chi, x, y) in enumerate(sk.regions):
        for bball in (x, y):
            ball_usage.setdefault(bball, set()).add(r)
    pair = None
    for dm in disks:
        for dp in disks:
            if dm == dp:
                continue
            shared = set(sk.regions[dm][1:]) & set(sk.regions[dp][1:])
            for bb in shared:
                if ball_usage.get(bb, set()) <= {dm, dp}:
                    pair = (dm, dp, bb)
        if pair:
            break
    if pair is None:
        raise ValueError("T4inv: no bubble ball found")
    dm, dp, bub = pair
    r = next(x for x in regs if x not in (dm, dp))
    sk2 = sk.copy()
    chi, bn, bp = sk2.regions[r]
    sk2.regions[r] = (chi + 1, bn, bp)

    def drop(indexed, dead):
        remap = {}
        out = []
        for i, item in enumerate(indexed):
            if i in dead:
                continue
            remap[i] = len(out)
            out.append(item)
        return out, remap

    regions2, rmap = drop(sk2.regions, {dm, dp})
    links2, vmap = drop(sk2.links, {vertex})
    # balls: delete bub, renumber
    bmap = {i: (i if i < bub else i - 1) for i in range(sk2.ball_count) if i != bub}
    regions3 = [(chi2, bmap[x], bmap[y]) for (chi2, x, y) in regions2]
    links3 = [LinkGraph([(t, h, rmap[rr]) for (t, h, rr) in lk2.arcs], lk2.rotations)
              for lk2 in links2]
    edges2 = []
    for eid2, ((v0, g0), (v1, g1)) in enumerate(sk2.edges):
        if eid2 == eid:
            continue
        edges2.append(((vmap[v0], g0), (vmap[v1], g1)))
    lab2 = {rmap[k]: v for k, v in labeling.items() if k in rmap}
    out = Skeleton(regions3, sk2.ball_count - 1, links3, edges2, name=sk.name)
    return out, lab2


def _move_t1(sk: Skeleton, labeling, group, vertex1: int, arc1: int,
             vertex2: int, arc2: int):
    if vertex1 == vertex2:
        raise ValueError("T1 endpoints must be distinct vertices")
    region = sk.links[vertex1].arcs[arc1][2]
    if sk.links[vertex2].arcs[arc2][2] != region:
        raise ValueError("T1 arcs must bound the same region")
    cycles = region_boundary_walks(sk, region)

    def locate(v, a):
        for ci, cyc in enumerate(cycles):
            for pos, slot in enumerate(cyc):
                if slot[0] == "arc" and slot[1] == v and slot[2] == a:
                    return ci, pos
        raise ValueError("arc is not on the region boundary")

    c1, p1 = locate(vertex1, arc1)
    c2, p2 = locate(vertex2, arc2)
    chi = sk.regions[region][0]
    if c1 == c2:
        if chi != 1 or len(cycles) != 1:
            raise ValueError("ambiguous T1 on a non-disk region; rejected")
        split = True
    else:
        split = False

    sk2 = sk.copy()
    lk1 = sk2.links[vertex1]
    lk2 = sk2.links[vertex2]
    bn, bp = sk.regions[region][1], sk.regions[region][2]
    if split:
        r1 = region
        r2 = len(sk2.regions)
        sk2.regions.append((1, bn, bp))
        sk2.regions[region] = (1, bn, bp)
    else:
        r1 = r2 = region
        sk2.regions[region] = (chi + 1, bn, bp)

    # side slots (walk direction): side 1 from after arc1 to before arc2
    if split:
        cyc = cycles[c1]
        m = len(cyc)
        side1 = [cyc[(p1 + k) % m] for k in range(1, (p2 - p1) % m)]
        side2 = [cyc[(p2 + k) % m] for k in range(1, (p1 - p2) % m)]
        arcs_side1 = {(s[1], s[2]) for s in side1 if s[0] == "arc"}
        arcs_side2 = {(s[1], s[2]) for s in side2 if s[0] == "arc"}
    else:
        arcs_side1 = set()
        arcs_side2 = set()

    def cut(lk, arc_id, x_gv):
        tail, head, _ = lk.arcs[arc_id]
        pre = arc_id                       # tail -> x (reuse id)
        post = len(lk.arcs)                # x -> head
        lk.arcs[arc_id] = (tail, x_gv, None)
        lk.arcs.append((x_gv, head, None))
        for g, rot in enumerate(lk.rotations):
            for i, (a, e) in enumerate(rot):
                if a == arc_id and e == 1:
                    rot[i] = (post, 1)
        return pre, post

    x1 = len(lk1.rotations)
    lk1.rotations.append([])
    pre1, post1 = cut(lk1, arc1, x1)
    x2 = len(lk2.rotations)
    lk2.rotations.append([])
    pre2, post2 = cut(lk2, arc2, x2)
    # sides: r1 gets post1, W1 arcs, pre2; r2 gets post2, W2 arcs, pre1
    lk1.arcs[pre1] = (lk1.arcs[pre1][0], lk1.arcs[pre1][1], r2)
    lk1.arcs[post1] = (lk1.arcs[post1][0], lk1.arcs[post1][1], r1)
    lk2.arcs[pre2] = (lk2.arcs[pre2][0], lk2.arcs[pre2][1], r1)
    lk2.arcs[post2] = (lk2.arcs[post2][0], lk2.arcs[post2][1], r2)
    if split:
        for (v, a) in arcs_side1:
            lk = sk2.links[v]
            lk.arcs[a] = (lk.arcs[a][0], lk.arcs[a][1], r1)
        for (v, a) in arcs_side2:
            lk = sk2.links[v]
            lk.arcs[a] = (lk.arcs[a][0], lk.arcs[a][1], r2)
    lk1.rotations[x1] = [(pre1, 1), (post1, 0)]
    lk2.rotations[x2] = [(pre2, 1), (post2, 0)]
    sk2.edges.append(((vertex1, x1), (vertex2, x2)))
    lab2 = dict(labeling)
    lab2[r2] = labeling[region]
    lab2[r1] = labeling[region]
    out = Skeleton(sk2.regions, sk2.ball_count, sk2.links, sk2.edges, name=sk.name)
    return out, lab2


def _move_t1_inv(sk: Skeleton, labeling, group, edge: int):
    (v0, g0), (v1, g1) = sk.edges[edge]
    items = sk.edge_branches(edge)
    if len(items) != 2:
        raise ValueError("T1inv needs a valence-2 edge")
    if v0 == v1:
        raise ValueError("T1inv needs distinct endpoints")
    if len(sk.links[v0].rotations) < 2 or len(sk.links[v1].rotations) < 2:
        raise ValueError("T1inv endpoints must meet other edges")
    (ra, sa), (rb, sb) = items
    if sa == sb:
        raise ValueError("T1inv: adjacent region orientations are incompatible")
    if labeling[ra] != labeling[rb]:
        raise ValueError("T1inv: labels disagree across the edge")
    sk2 = sk.copy()
    if ra != rb:
        chiA = sk.regions[ra][0]
        chiB = sk.regions[rb][0]
        keep, dead = min(ra, rb), max(ra, rb)
        sk2.regions[keep] = (chiA + chiB - 1, sk.regions[keep][1], sk.regions[keep][2])
    else:
        keep, dead = ra, None
        sk2.regions[keep] = (sk.regions[ra][0] - 1, sk.regions[ra][1], sk.regions[ra][2])

    def heal(lk, gv):
        a_in = a_out = None
        darts = lk.rotations[gv]
        if len(darts) != 2:
            raise ValueError("T1inv: edge end is not 2-valent")
        for (a, e) in darts:
            if e == 1:
                a_in = a
            else:
                a_out = a
        if a_in is None or a_out is None:
            raise ValueError("T1inv: incompatible dart pattern")
        if a_in == a_out:
            raise ValueError("T1inv would close a vertexless circle; rejected")
        tail = lk.arcs[a_in][0]
        head = lk.arcs[a_out][1]
        rcol = lk.arcs[a_in][2]
        lk.arcs[a_in] = (tail, head, rcol)
        # redirect darts of a_out
        for g2, rot in enumerate(lk.rotations):
            for i, (a, e) in enumerate(rot):
                if a == a_out:
                    rot[i] = (a_in, e)
        return a_out, gv

    dead_arc0, dg0 = heal(sk2.links[v0], g0)
    dead_arc1, dg1 = heal(sk2.links[v1], g1)

    def compact_link(lk, dead_arc, dead_gv):
        amap = {}
        arcs = []
        for i, a in enumerate(lk.arcs):
            if i == dead_arc:
                continue
            amap[i] = len(arcs)
            arcs.append(a)
        gmap = {}
        rots = []
        for g, rot in enumerate(lk.rotations):
            if g == dead_gv:
                continue
            gmap[g] = len(rots)
            rots.append([(amap[a], e) for (a, e) in rot])
        arcs = [(gmap[t], gmap[h], r) for (t, h, r) in arcs]
        return LinkGraph(arcs, rots), gmap

    sk2.links[v0], gmap0 = compact_link(sk2.links[v0], dead_arc0, g0)
    sk2.links[v1], gmap1 = compact_link(sk2.links[v1], dead_arc1, g1)
    edges2 = []
    for eid, ((a0, b0), (a1, b1)) in enumerate(sk2.edges):
        if eid == edge:
            continue
        nb0 = gmap0[b0] if a0 == v0 else (gmap1[b0] if a0 == v1 else b0)
        nb1 = gmap0[b1] if a1 == v0 else (gmap1[b1] if a1 == v1 else b1)
        edges2.append(((a0, nb0), (a1, nb1)))
    # region renumber if merged
    if dead is not None:
        rmap = {i: (i if i < dead else i - 1) for i in range(len(sk2.regions)) if i != dead}
        rmap[dead] = rmap.get(keep, keep if keep < dead else keep - 1)
        regions2 = [r for i, r in enumerate(sk2.regions) if i != dead]
        links2 = [LinkGraph([(t, h, rmap[r]) for (t, h, r) in lk.arcs], lk.rotations)
                  for lk in sk2.links]
        lab2 = {}
        for rid, val in labeling.items():
            if rid == dead:
                continue
            lab2[rmap[rid]] = val
        out = Skeleton(regions2, sk2.ball_count, links2, edges2, name=sk.name)
        return out, lab2
    out = Skeleton(sk2.regions, sk2.ball_count, sk2.links, edges2, name=sk.name)
    return out, dict(labeling)


def _move_t2(sk: Skeleton, labeling, group, edge: int):
    (v0, g0), (v1, g1) = sk.edges[edge]
    if v0 == v1:
        raise ValueError("T2 is allowed only when the endpoints of the edge are distinct")
    if len(sk.links[v0].rotations) < 2 and len(sk.links[v1].rotations) < 2:
        raise ValueError("T2 needs an endpoint meeting another edge")
    lk0, lk1 = sk.links[v0], sk.links[v1]
    n = len(lk0.rotations[g0])

    # segments: (side, arc_id) with open ends where they met g0/g1
    def seg_ends(side, lk, gv):
        out = {}
        for a, (tail, head, r) in enumerate(lk.arcs):
            out[(side, a)] = {"tail": ("open", side, a, 0) if tail == gv else ("real", side, tail, a, 0),
                              "head": ("open", side, a, 1) if head == gv else ("real", side, head, a, 1)}
        return out

    ends0 = seg_ends(0, lk0, g0)
    ends1 = seg_ends(1, lk1, g1)
    ends = {**ends0, **ends1}

    # pair open ends across the contracted edge positionally
    pairing = {}
    for j in range(n):
        a0, e0 = lk0.rotations[g0][j]
        a1, e1 = lk1.rotations[g1][n - 1 - j]
        pairing[(0, a0, e0)] = (1, a1, e1)
        pairing[(1, a1, e1)] = (0, a0, e0)

    # build chains, each starting at a real tail end
    segs = list(ends.keys())
    chains = []
    used = set()
    for seg in segs:
        if ends[seg]["tail"][0] != "real":
            continue
        chain = [seg]
        while ends[chain[-1]]["head"][0] == "open":
            side, a = chain[-1]
            nxt = pairing[(side, a, 1)]
            if nxt[2] != 0:
                raise ValueError("T2 splice direction mismatch")
            chain.append((nxt[0], nxt[1]))
        chains.append(chain)
        used.update(chain)
    if used != set(segs):
        raise ValueError("T2 would create a closed region circle in the link")

    # region colors along a chain must agree
    newarcs = []
    for chain in chains:
        side0, a0 = chain[0]
        r = (lk0 if side0 == 0 else lk1).arcs[a0][2]
        for (sd, aa) in chain:
            r2 = (lk0 if sd == 0 else lk1).arcs[aa][2]
            if r2 != r:
                raise AssertionError("T2 chain changes region")
        tail_desc = ends[chain[0]]["tail"]
        head_desc = ends[chain[-1]]["head"]
        newarcs.append((tail_desc, head_desc, r))

    # merged link vertex
    gmap = {}
    rots = []
    for g in range(len(lk0.rotations)):
        if g == g0:
            continue
        gmap[(0, g)] = len(rots)
        rots.append(lk0.rotations[g])
    for g in range(len(lk1.rotations)):
        if g == g1:
            continue
        gmap[(1, g)] = len(rots)
        rots.append(lk1.rotations[g])
    arcs2 = []
    for (tail_desc, head_desc, r) in newarcs:
        _, sdt, gvt, at, _ = tail_desc
        _, sdh, gvh, ah, _ = head_desc
        arcs2.append((gmap[(sdt, gvt)], gmap[(sdh, gvh)], r))
    # rewrite darts: dart (arc a, end e) at a surviving gvertex belongs to the
    # chain containing (side, a); the chain's new dart is (chain_id, e) only
    # at its extreme ends
    dart_map = {}
    for cid, chain in enumerate(chains):
        dart_map[(chain[0][0], chain[0][1], 0)] = (cid, 0)
        dart_map[(chain[-1][0], chain[-1][1], 1)] = (cid, 1)
    new_rots = []
    idx = 0
    for g in range(len(lk0.rotations)):
        if g == g0:
            continue
        new_rots.append([dart_map[(0, a, e)] for (a, e) in lk0.rotations[g]])
    for g in range(len(lk1.rotations)):
        if g == g1:
            continue
        new_rots.append([dart_map[(1, a, e)] for (a, e) in lk1.rotations[g]])
    merged = LinkGraph(arcs2, new_rots)

    # assemble skeleton
    links2 = []
    vmap = {}
    for v in range(len(sk.links)):
        if v in (v0, v1):
            continue
        vmap[v] = len(links2)
        links2.append(sk.links[v].copy())
    vnew = len(links2)
    vmap[v0] = vnew
    vmap[v1] = vnew
    links2.append(merged)
    edges2 = []
    for eid, ((a0, b0), (a1, b1)) in enumerate(sk.edges):
        if eid == edge:
            continue
        nb0 = gmap[(0 if a0 == v0 else 1, b0)] if a0 in (v0, v1) else b0
        nb1 = gmap[(0 if a1 == v0 else 1, b1)] if a1 in (v0, v1) else b1
        edges2.append(((vmap[a0], nb0), (vmap[a1], nb1)))
    out = Skeleton([tuple(r) for r in sk.regions], sk.ball_count, links2, edges2,
                   name=sk.name)
    return out, dict(labeling)


def _move_t2_inv(sk: Skeleton, labeling, group, vertex: int, circle):
    lk = sk.links[vertex]
    crossed = list(circle)
    if len(set(crossed)) != len(crossed) or not crossed:
        raise ValueError("T2inv circle must cross distinct arcs")
    # side split by BFS over non-crossed arcs
    adj = {}
    for a, (tail, head, r) in enumerate(lk.arcs):
        if a in crossed:
            continue
        adj.setdefault(tail, set()).add(head)
        adj.setdefault(head, set()).add(tail)
    all_gv = set(range(len(lk.rotations)))
    comp = {}
    for start in sorted(all_gv):
        if start in comp:
            continue
        cid = len(set(comp.values()))
        stack = [start]
        comp[start] = cid
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in comp:
                    comp[y] = cid
                    stack.append(y)
    sides = sorted(set(comp.values()))
    if len(sides) != 2:
        raise ValueError("T2inv circle does not split the link into two sides")
    for a in crossed:
        tail, head, _ = lk.arcs[a]
        if comp[tail] == comp[head]:
            raise ValueError("T2inv circle must cross arcs joining the two sides")
    side_a = comp[lk.arcs[crossed[0]][0]]

    # product condition for the transported labeling
    total = group.identity
    for a in crossed:
        tail, head, r = lk.arcs[a]
        sgn = 1 if comp[tail] == side_a else -1
        val = labeling[r] if sgn > 0 else group.inv(labeling[r])
        total = group.mul(total, val)
    if total != group.identity:
        raise ValueError("T2inv circle violates the product condition")

    def build_side(side_id, order, which):
        gsel = [g for g in range(len(lk.rotations)) if comp[g] == side_id]
        gmap = {g: i for i, g in enumerate(gsel)}
        x = len(gsel)
        arcs = []
        amap = {}
        for a, (tail, head, r) in enumerate(lk.arcs):
            if a in crossed:
                continue
            if comp[tail] != side_id:
                continue
            amap[a] = len(arcs)
            arcs.append((gmap[tail], gmap[head], r))
        half = {}
        for a in order:
            tail, head, r = lk.arcs[a]
            if comp[tail] == side_id:
                half[a] = len(arcs)
                arcs.append((gmap[tail], x, r))    # tail-side half: into x
            else:
                half[a] = len(arcs)
                arcs.append((x, gmap[head], r))    # head-side half: out of x
        rots = []
        for g in gsel:
            rots.append([( (amap[a], e) if a in amap else (half[a], e) )
                         for (a, e) in lk.rotations[g]])
        xrot = []
        for a in order:
            tail, head, r = lk.arcs[a]
            if comp[tail] == side_id:
                xrot.append((half[a], 1))
            else:
                xrot.append((half[a], 0))
        rots.append(xrot)
        return LinkGraph(arcs, rots), gmap, x

    link_a, gmap_a, xa = build_side(side_a, crossed, 0)
    other = next(s for s in sides if s != side_a)
    link_b, gmap_b, xb = build_side(other, list(reversed(crossed)), 1)

    links2 = []
    vmap = {}
    for v in range(len(sk.links)):
        if v == vertex:
            continue
        vmap[v] = len(links2)
        links2.append(sk.links[v].copy())
    va = len(links2)
    links2.append(link_a)
    vb = len(links2)
    links2.append(link_b)
    edges2 = []
    for eid, ((a0, b0), (a1, b1)) in enumerate(sk.edges):
        def newend(v, g):
            if v != vertex:
                return (vmap[v], g)
            if comp[g] == side_a:
                return (va, gmap_a[g])
            return (vb, gmap_b[g])
        edges2.append((newend(a0, b0), newend(a1, b1)))
    edges2.append(((va, xa), (vb, xb)))
    out = Skeleton([tuple(r) for r in sk.regions], sk.ball_count, links2, edges2,
                   name=sk.name)
    return out, dict(labeling)


# ---------------------------------------------------------------------------
# skeleton files


def save_skeleton(sk: Skeleton) -> str:
    lines = ["# statesum3d skeleton v1", f"name {sk.name}", f"balls {sk.ball_count}",
             f"regions {len(sk.regions)}"]
    for i, (chi, bn, bp) in enumerate(sk.regions):
        lines.append(f"region {i} chi {chi} balls {bn} {bp}")
    lines.append(f"vertices {len(sk.links)}")
    for v, lk in enumerate(sk.links):
        lines.append(f"vertex {v} gvertices {len(lk.rotations)} arcs {len(lk.arcs)}")
        for a, (tail, head, r) in enumerate(lk.arcs):
            lines.append(f"arc {v} {a} tail {tail} head {head} region {r}")
        for g, rot in enumerate(lk.rotations):
            darts = " ".join(("i" if e == 1 else "o") + str(a) for (a, e) in rot)
            lines.append(f"rot {v} {g} {darts}")
    lines.append(f"edges {len(sk.edges)}")
    for eid, ((v0, g0), (v1, g1)) in enumerate(sk.edges):
        lines.append(f"edge {eid} ends {v0} {g0} {v1} {g1}")
    return "\n".join(lines) + "\n"


def parse_skeleton(text: str) -> Skeleton:
    name = "skeleton"
    balls = None
    regions = {}
    nvert = 0
    arcs = {}
    rots = {}
    sizes = {}
    edges = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "name":
            name = toks[1]
        elif toks[0] == "balls":
            balls = int(toks[1])
        elif toks[0] == "regions":
            pass
        elif toks[0] == "region":
            regions[int(toks[1])] = (int(toks[3]), int(toks[5]), int(toks[6]))
        elif toks[0] == "vertices":
            nvert = int(toks[1])
        elif toks[0] == "vertex":
            sizes[int(toks[1])] = (int(toks[3]), int(toks[5]))
        elif toks[0] == "arc":
            v, a = int(toks[1]), int(toks[2])
            arcs[(v, a)] = (int(toks[4]), int(toks[6]), int(toks[8]))
        elif toks[0] == "rot":
            v, g = int(toks[1]), int(toks[2])
            rot = []
            for d in toks[3:]:
                end = 1 if d[0] == "i" else 0
                rot.append((int(d[1:]), end))
            rots[(v, g)] = rot
        elif toks[0] == "edges":
            pass
        elif toks[0] == "edge":
            edges[int(toks[1])] = ((int(toks[3]), int(toks[4])),
                                   (int(toks[5]), int(toks[6])))
        else:
            raise ValueError(f"unknown skeleton key {toks[0]!r}")
    if balls is None:
        raise ValueError("skeleton file missing balls")
    links = []
    for v in range(nvert):
        ng, na = sizes[v]
        links.append(LinkGraph([arcs[(v, a)] for a in range(na)],
                               [rots[(v, g)] for g in range(ng)]))
    region_list = [regions[i] for i in range(len(regions))]
    edge_list = [edges[i] for i in range(len(edges))]
    return Skeleton(region_list, balls, links, edge_list, name=name)
