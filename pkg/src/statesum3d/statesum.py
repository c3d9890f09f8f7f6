"""State-sum invariants of labeled closed skeletons.

The invariant of a closed labeled skeleton P with backend data C is

    dim(C_1)^(-|P|) * sum over admissible colorings c of
        prod_r dim(c(r))^chi(r) * full contraction of the link tensors,

where a coloring assigns to each region a simple of the grade given by the
labeling, each vertex link evaluated as a colored graph on its sphere
contributes a tensor, and every edge contracts the two end tensors through
the inverse Gram matrix of the duality pairing of its branch cyclic set.
"""

from __future__ import annotations
import time

from .catdata import FiniteGroup, GFusionData, neutral_dimension
from .complexes import Skeleton
from .exactnum import FieldElement
from .gauge import enumerate_labelings, gauge_orbits
from .graphcalc import CyclicCSet, PairingData, VertexTensorSlot, evaluate_graph, hom_dim

__all__ = [
    "StateSumResult",
    "closed_invariant",
    "unnormalized_invariant",
    "partition_all_classes",
    "PartitionTable",
]


class StateSumResult:
    def __init__(self, value: FieldElement, visited: int, admissible: int,
                 seconds: float):
        self.value = value
        self.colorings_visited = visited
        self.colorings_admissible = admissible
        self.seconds = seconds

    def __repr__(self):
        return (f"StateSumResult({self.value.to_text()}, admissible "
                f"{self.colorings_admissible}/{self.colorings_visited})")


class _Evaluator:
    """Shared machinery: coloring enumeration with edge-admissibility
    pruning, link tensors with memoization, Gram caches."""

    def __init__(self, sk: Skeleton, cat: GFusionData):
        self.sk = sk
        self.cat = cat
        self.link_cache: dict = {}
        self.gram_cache: dict = {}
        # regions incident to each edge, and the edges completed at a region
        nreg = len(sk.regions)
        self.edge_regions = []
        for eid in range(len(sk.edges)):
            self.edge_regions.append([(r, s) for (r, s) in sk.edge_branches(eid)])
        self.edges_done_at = [[] for _ in range(nreg)]
        for eid, branches in enumerate(self.edge_regions):
            regions = [r for r, _ in branches]
            if regions:
                self.edges_done_at[max(regions)].append(eid)

    def colorings(self, labeling):
        """Admissible colorings (region -> simple), grading-constrained and
        pruned edge by edge; yields dicts."""
        sk, cat = self.sk, self.cat
        nreg = len(sk.regions)
        sectors = [cat.sector(labeling[r]) for r in range(nreg)]
        coloring = [None] * nreg
        visited = [0]

        def admissible_edge(eid):
            items = [(coloring[r], s) for (r, s) in self.edge_regions[eid]]
            return hom_dim(cat, items) >= 1

        def go(r):
            if r == nreg:
                visited[0] += 1
                yield dict(enumerate(coloring))
                return
            for c in sectors[r]:
                coloring[r] = c
                visited[0] += 1
                if all(admissible_edge(e) for e in self.edges_done_at[r]):
                    yield from go(r + 1)
                coloring[r] = None

        self.visited = visited
        return go(0)

    def edge_cset(self, eid, coloring) -> CyclicCSet:
        return CyclicCSet([(coloring[r], s) for (r, s) in self.edge_regions[eid]])

    def gram_inv(self, eid, coloring):
        key = (eid, tuple(coloring[r] for r, _ in self.edge_regions[eid]))
        if key not in self.gram_cache:
            pd = PairingData(self.cat, self.edge_cset(eid, coloring))
            self.gram_cache[key] = pd.gram_inverse()
        return self.gram_cache[key]

    def link_tensor(self, v, coloring):
        lk = self.sk.links[v]
        key = (v, tuple(coloring[r] for (_, _, r) in lk.arcs))
        if key not in self.link_cache:
            graph = self.sk.link_colored_graph(v, coloring)
            self.link_cache[key] = evaluate_graph(self.cat, graph)
        return self.link_cache[key]

    def contribution(self, coloring) -> FieldElement:
        """prod_r dim^chi times the full contraction for one coloring."""
        sk, cat = self.sk, self.cat
        field = cat.field
        weight = field.one()
        for r in range(len(sk.regions)):
            weight = weight * cat.dim(coloring[r]) ** sk.region_euler(r)
        tensors = [self.link_tensor(v, coloring) for v in range(sk.nvertices())]
        # contract edges one at a time over the tensor product of link tensors
        # state: map (per-vertex index tuples, partially contracted) -> value;
        # represent as dict keyed by a tuple of per-vertex index tuples
        from itertools import product as iproduct
        entries = {}
        keys = [list(t.entries.keys()) for t in tensors]
        for combo in iproduct(*keys):
            val = field.one()
            for t, idx in zip(tensors, combo):
                val = val * t.entries[idx]
            entries[combo] = val
        for eid, ((v0, g0), (v1, g1)) in enumerate(sk.edges):
            ginv = self.gram_inv(eid, coloring)
            nxt = {}
            for combo, val in entries.items():
                t_idx = combo[v0][g0]
                u_idx = combo[v1][g1]
                factor = ginv[t_idx][u_idx]
                if factor.is_zero():
                    continue
                newcombo = []
                for vv, idxs in enumerate(combo):
                    if vv in (v0, v1):
                        lst = list(idxs)
                        if vv == v0:
                            lst[g0] = None
                        if vv == v1:
                            lst[g1] = None
                        newcombo.append(tuple(lst))
                    else:
                        newcombo.append(idxs)
                newcombo = tuple(newcombo)
                cur = nxt.get(newcombo)
                add = val * factor
                nxt[newcombo] = add if cur is None else cur + add
            entries = nxt
        total = field.zero()
        for combo, val in entries.items():
            assert all(x is None for ix in combo for x in ix)
            total = total + val
        return weight * total


def _sigma(sk: Skeleton, labeling, cat: GFusionData, ev: _Evaluator | None = None):
    ev = ev or _Evaluator(sk, cat)
    total = cat.field.zero()
    admissible = 0
    for coloring in ev.colorings(labeling):
        admissible += 1
        total = total + ev.contribution(coloring)
    return total, ev.visited[0], admissible


def closed_invariant(sk: Skeleton, labeling, cat: GFusionData,
                     _ev: _Evaluator | None = None) -> StateSumResult:
    """Normalized invariant of a closed labeled skeleton."""
    nd = neutral_dimension(cat)
    if nd.is_zero():
        raise ValueError("neutral dimension is zero; normalized invariant undefined")
    t0 = time.perf_counter()
    total, visited, admissible = _sigma(sk, labeling, cat, _ev)
    value = total * nd.inv() ** sk.ball_count
    return StateSumResult(value, visited, admissible, time.perf_counter() - t0)


def unnormalized_invariant(sk: Skeleton, labeling, cat: GFusionData) -> FieldElement:
    """Spine state sum without the neutral-dimension normalization; requires
    a special spine (one ball, at least two vertices, tetrahedral links)."""
    if not sk.is_spine():
        raise ValueError("unnormalized invariant needs a special spine "
                         "(one ball, >= 2 vertices, tetrahedral links)")
    total, _, _ = _sigma(sk, labeling, cat)
    return total


class PartitionTable:
    def __init__(self, rows, aggregate, group_order, ball_count):
        self.rows = rows            # list of (representative labeling, orbit size, value)
        self.aggregate = aggregate
        self.group_order = group_order
        self.ball_count = ball_count

    def orbit_values(self):
        return [value for (_, _, value) in self.rows]

    def __repr__(self):
        return f"PartitionTable({len(self.rows)} orbits, aggregate {self.aggregate.to_text()})"


def partition_all_classes(sk: Skeleton, cat: GFusionData) -> PartitionTable:
    """Per-orbit invariant table plus the aggregate
    |G|^(-|P|) * sum over all labelings of the invariant."""
    group = cat.group
    labelings = enumerate_labelings(sk, group)
    orbits = gauge_orbits(sk, group, labelings)
    ev = _Evaluator(sk, cat)
    field = cat.field
    rows = []
    total = field.zero()
    for rep, members in orbits:
        value = closed_invariant(sk, rep, cat, _ev=ev).value
        rows.append((rep, len(members), value))
        total = total + value * field.rational(len(members))
    aggregate = total * field.rational(group.order).inv() ** sk.ball_count
    return PartitionTable(rows, aggregate, group.order, sk.ball_count)
