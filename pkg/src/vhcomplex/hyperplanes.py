"""Hyperplanes of a square complex and their cleanness.

A hyperplane is a maximal class of edges under "opposite sides of a
square", together with the midcubes realizing the closure: midcube
(i, 0) joins the midpoints of sides 0 and 2 of square i, midcube (i, 1)
joins sides 1 and 3.  Extraction is lenient: it needs structural validity
but not the VH or link conditions, so degenerate inputs (self-crossing
hyperplanes, one-sided behaviour) can be examined rather than rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .complexes import (DisjointSet, SquareComplex, square_corners,
                        structural_violations)


@dataclass(frozen=True)
class Hyperplane:
    complex: SquareComplex
    dual_edges: frozenset
    midcubes: tuple   # (square index, pair in {0,1}), sorted

    @property
    def id(self) -> int:
        # hyperplanes are addressed by their least dual edge id
        return min(self.dual_edges)

    @property
    def orientation_class(self) -> Optional[str]:
        labels = {self.complex.edge(e).label for e in self.dual_edges}
        return labels.pop() if len(labels) == 1 else None


def midcube_dual_pair(cx: SquareComplex, midcube) -> tuple:
    i, pair = midcube
    w = cx.squares[i]
    return abs(w[pair]), abs(w[pair + 2])


def hyperplanes(cx: SquareComplex) -> tuple:
    """All hyperplanes, sorted by least dual edge id.

    Every edge lies in exactly one class; an edge in no square is a point
    hyperplane with no midcubes.
    """
    if structural_violations(cx):
        raise ValueError("complex is structurally invalid")
    ds = DisjointSet(range(1, cx.num_edges + 1))
    for w in cx.squares:
        ds.union(abs(w[0]), abs(w[2]))
        ds.union(abs(w[1]), abs(w[3]))
    cubes = {}
    for i in range(cx.num_squares):
        for pair in (0, 1):
            root = ds.find(abs(cx.squares[i][pair]))
            cubes.setdefault(root, []).append((i, pair))
    out = []
    for cls in ds.classes():
        root = ds.find(min(cls))
        out.append(Hyperplane(cx, cls, tuple(sorted(cubes.get(root, ())))))
    return tuple(sorted(out, key=lambda h: h.id))


def hyperplane_of_edge(hyps, eid: int) -> Hyperplane:
    for h in hyps:
        if eid in h.dual_edges:
            return h
    raise ValueError("no hyperplane contains edge %d" % eid)


def hyperplane_graph(h: Hyperplane):
    """(nodes, arcs): nodes are dual edge ids, arcs are
    (edge, edge, midcube) triples."""
    cx = h.complex
    arcs = []
    for m in h.midcubes:
        a, b = midcube_dual_pair(cx, m)
        arcs.append((min(a, b), max(a, b), m))
    return tuple(sorted(h.dual_edges)), tuple(arcs)


def self_crossing(h: Hyperplane) -> bool:
    """True iff both midcubes of some square lie in this hyperplane."""
    cubes = set(h.midcubes)
    return any((i, 0) in cubes and (i, 1) in cubes
               for i, _ in cubes)


# ---------------------------------------------------------------------------
# two-sidedness


@dataclass(frozen=True)
class TwoSidedness:
    two_sided: bool
    co_orientation: Optional[dict]  # dual edge -> +1/-1, least edge gets +1
    witness: Optional[tuple]        # midcubes forming an odd flip cycle

    def __bool__(self):
        return self.two_sided


def _midcube_parity(cx: SquareComplex, midcube) -> int:
    """0 when the two dual sides must take the same transverse sign."""
    i, pair = midcube
    w = cx.squares[i]
    return 1 if (w[pair] > 0) == (w[pair + 2] > 0) else 0


def is_two_sided(h: Hyperplane) -> TwoSidedness:
    """Parity union-find over the midcube constraints.

    Every midcube relates the transverse signs of its two dual edges; the
    hyperplane is 2-sided iff no cycle of midcubes forces a sign flip onto
    itself.  No path compression, so a contradiction unwinds to the exact
    odd cycle.
    """
    cx = h.complex
    parent = {e: e for e in h.dual_edges}
    rel = {e: 0 for e in h.dual_edges}    # parity between e and parent[e]
    via = {e: None for e in h.dual_edges}

    def walk(e):
        path = []
        par = 0
        while parent[e] != e:
            path.append((e, via[e]))
            par ^= rel[e]
            e = parent[e]
        return e, par, path

    for m in h.midcubes:
        a, b = midcube_dual_pair(cx, m)
        p = _midcube_parity(cx, m)
        ra, pa, patha = walk(a)
        rb, pb, pathb = walk(b)
        if ra != rb:
            # hang one root under the other, preserving parities
            parent[ra] = rb
            rel[ra] = pa ^ pb ^ p
            via[ra] = m
        elif pa ^ pb != p:
            # odd cycle: paths to the common root plus this midcube,
            # trimmed of their shared tail
            vias_a = [v for _, v in patha]
            vias_b = [v for _, v in pathb]
            while vias_a and vias_b and vias_a[-1] == vias_b[-1]:
                vias_a.pop()
                vias_b.pop()
            cycle = tuple(vias_a + [m] + list(reversed(vias_b)))
            return TwoSidedness(False, None, cycle)

    base = min(h.dual_edges)
    _, base_par, _ = walk(base)
    sigma = {}
    for e in h.dual_edges:
        _, par, _ = walk(e)
        sigma[e] = 1 if par == base_par else -1
    return TwoSidedness(True, sigma, None)


# ---------------------------------------------------------------------------
# pushing maps


@dataclass(frozen=True)
class PushingMap:
    """One side of the trivialized carrier, mapped into the 1-skeleton.

    vertices: dual edge -> the endpoint on this side.
    edges: midcube -> the boundary edge of its square on this side.
    """
    hyperplane: Hyperplane
    side: int
    vertices: tuple   # ((edge id, vertex), ...) sorted
    edges: tuple      # ((midcube, edge id), ...) sorted

    def vertex_of(self, eid: int) -> int:
        return dict(self.vertices)[eid]

    def edge_of(self, midcube) -> int:
        return dict(self.edges)[midcube]


def pushing_map(h: Hyperplane, side: int,
                orientation: Optional[dict] = None) -> PushingMap:
    """Push the hyperplane off itself to the given side.

    With the co-orientation sign +1 on an edge, side 0 lies at its tail.
    The parallel boundary edges of a square sit before and after each dual
    side in the boundary word, which is what the index arithmetic reads off.
    """
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    cx = h.complex
    if orientation is None:
        ts = is_two_sided(h)
        if not ts.two_sided:
            raise ValueError("hyperplane %d is one-sided" % h.id)
        orientation = ts.co_orientation
    verts = []
    for e in sorted(h.dual_edges):
        edge = cx.edge(e)
        at_tail = (orientation[e] == 1) == (side == 0)
        verts.append((e, edge.tail if at_tail else edge.head))
    arcs = []
    for m in h.midcubes:
        i, pair = m
        w = cx.squares[i]
        u = orientation[abs(w[pair])] * (1 if w[pair] > 0 else -1)
        before = abs(w[(pair + 3) % 4])
        after = abs(w[(pair + 1) % 4])
        if (u == 1) == (side == 0):
            arcs.append((m, before))
        else:
            arcs.append((m, after))
    return PushingMap(h, side, tuple(verts), tuple(sorted(arcs)))


# ---------------------------------------------------------------------------
# cleanness


@dataclass(frozen=True)
class CleanlinessReport:
    hyperplane: Hyperplane
    two_sided: bool
    self_crossing: bool
    self_osculation_witnesses: tuple  # (side, "edges"|"midcubes", (a, b))
    clean: bool


def _collisions(assignments, kind, side):
    by_image = {}
    for key, image in assignments:
        by_image.setdefault(image, []).append(key)
    out = []
    for image in sorted(by_image):
        keys = by_image[image]
        if len(keys) > 1:
            for a, b in combinations(sorted(keys), 2):
                out.append((side, kind, (a, b)))
    return out


def is_clean(h: Hyperplane) -> CleanlinessReport:
    """Both pushing maps must be embeddings.

    Injectivity on pushed vertices and pushed edges is exactly topological
    embedding for maps that send arcs across single edges.  A one-sided
    hyperplane has no pushing maps and is never clean.
    """
    sc = self_crossing(h)
    ts = is_two_sided(h)
    if not ts.two_sided:
        return CleanlinessReport(h, False, sc, (), False)
    witnesses = []
    for side in (0, 1):
        pm = pushing_map(h, side, ts.co_orientation)
        witnesses.extend(_collisions(pm.vertices, "edges", side))
        witnesses.extend(_collisions(pm.edges, "midcubes", side))
    witnesses.sort()
    clean = not sc and not witnesses
    return CleanlinessReport(h, True, sc, tuple(witnesses), clean)


def inter_osculates(h1: Hyperplane, h2: Hyperplane) -> bool:
    """Two distinct hyperplanes inter-osculate iff they cross in some
    square and also meet at a vertex where no square corner pairs their
    two edge-ends."""
    if h1.dual_edges == h2.dual_edges:
        raise ValueError("inter-osculation needs two distinct hyperplanes")
    return (_crosses(h1, h2) and
            _osculation_witness(h1, h2) is not None)


def _crosses(h1: Hyperplane, h2: Hyperplane) -> bool:
    cubes1, cubes2 = set(h1.midcubes), set(h2.midcubes)
    squares1 = {i for i, _ in cubes1}
    for i in squares1:
        if ((i, 0) in cubes1 and (i, 1) in cubes2) or \
           ((i, 1) in cubes1 and (i, 0) in cubes2):
            return True
    return False


def _osculation_witness(h1: Hyperplane, h2: Hyperplane):
    """A vertex contact of the two hyperplanes spanning no square corner,
    as (vertex, node1, node2), or None."""
    cx = h1.complex
    corners_at = {}
    for i in range(cx.num_squares):
        for v, pair in square_corners(cx, i):
            corners_at.setdefault(v, set()).add(pair)
    found = []
    for e1 in sorted(h1.dual_edges):
        edge1 = cx.edge(e1)
        for end1, v1 in ((0, edge1.tail), (1, edge1.head)):
            for e2 in sorted(h2.dual_edges):
                edge2 = cx.edge(e2)
                for end2, v2 in ((0, edge2.tail), (1, edge2.head)):
                    if v1 != v2:
                        continue
                    n1, n2 = (e1, end1), (e2, end2)
                    pair = (n1, n2) if n1 <= n2 else (n2, n1)
                    if pair not in corners_at.get(v1, ()):
                        found.append((v1, n1, n2))
    return min(found) if found else None


def is_complex_clean(cx: SquareComplex) -> bool:
    return all(is_clean(h).clean for h in hyperplanes(cx))


def is_special(cx: SquareComplex) -> bool:
    """Clean and free of inter-osculating pairs."""
    hyps = hyperplanes(cx)
    if not all(is_clean(h).clean for h in hyps):
        return False
    for h1, h2 in combinations(hyps, 2):
        if inter_osculates(h1, h2):
            return False
    return True
