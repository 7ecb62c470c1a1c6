"""Finite-sheeted covers as permutation data.

A degree-d cover assigns each edge a permutation of {0..d-1}: the sheet
at the tail maps to the sheet at the head along the edge.  Boundary words
of squares must transport every sheet back to itself.  Covers stay in
permutation form until a caller realizes the total space.

Conventions: sheets are 0-based, the basepoint lift of interest is sheet
0, and covers produced by enumerate_covers give tree edges the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import permutations as perm
from .complexes import (CellularMap, DisjointSet, Edge, EdgePath,
                        SquareComplex, is_connected_complex, trace)
from .hyperplanes import Hyperplane, hyperplanes
from .presentations import Pi1Presentation, pi1_presentation


@dataclass(frozen=True)
class Cover:
    base: SquareComplex
    degree: int
    perms: tuple   # per edge id, a tuple permutation

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(tuple(p) for p in self.perms))

    def perm(self, eid: int) -> tuple:
        return self.perms[eid - 1]


def _check_shape(c: Cover):
    if c.degree < 1:
        raise ValueError("degree must be positive")
    if len(c.perms) != c.base.num_edges:
        raise ValueError("%d permutations for %d edges"
                         % (len(c.perms), c.base.num_edges))
    for eid, p in enumerate(c.perms, start=1):
        if not perm.is_permutation(p, c.degree):
            raise ValueError("edge %d: %r is not a permutation of %d sheets"
                             % (eid, p, c.degree))


def transport(c: Cover, word: Sequence[int]) -> tuple:
    """Sheet permutation realized by a word of darts."""
    p = perm.identity(c.degree)
    for d in word:
        q = c.perms[abs(d) - 1]
        if d < 0:
            q = perm.inverse(q)
        p = perm.compose(p, q)
    return p


def validate_cover(c: Cover) -> bool:
    """True iff every square boundary transports to the identity.
    Malformed permutation data raises instead."""
    _check_shape(c)
    ident = perm.identity(c.degree)
    return all(transport(c, w) == ident for w in c.base.squares)


def trivial_cover(cx: SquareComplex) -> Cover:
    return Cover(cx, 1, tuple((0,) for _ in range(cx.num_edges)))


# ---------------------------------------------------------------------------
# realization


@dataclass(frozen=True)
class TotalSpace:
    complex: SquareComplex
    cover: Cover
    projection: CellularMap

    def vertex_index(self, v: int, sheet: int) -> int:
        return v * self.cover.degree + sheet

    def edge_index(self, eid: int, sheet: int) -> int:
        return (eid - 1) * self.cover.degree + sheet + 1

    def square_index(self, i: int, sheet: int) -> int:
        return i * self.cover.degree + sheet

    def vertex_fiber(self, zv: int) -> tuple:
        return divmod(zv, self.cover.degree)

    def edge_fiber(self, ze: int) -> tuple:
        e, s = divmod(ze - 1, self.cover.degree)
        return e + 1, s


def lift_dart(c: Cover, d: int, sheet: int):
    """(edge copy index within the fiber, lifted dart sign, next sheet)."""
    p = c.perms[abs(d) - 1]
    if d > 0:
        return sheet, 1, p[sheet]
    u = perm.inverse(p)[sheet]
    return u, -1, u


def total_space(c: Cover) -> TotalSpace:
    """Realize the covering complex with d copies of every cell.

    Vertex (v, s) gets index v*d+s, edge (e, s) gets id (e-1)*d+s+1, and
    square (i, s) index i*d+s, where s is the sheet at the cell's start.
    """
    if not validate_cover(c):
        raise ValueError("square relations fail; not a cover")
    base, d = c.base, c.degree
    verts = base.num_vertices * d
    edges = []
    for e in base.edges:
        p = c.perms[len(edges) // d]
        for s in range(d):
            edges.append(Edge(e.tail * d + s, e.head * d + p[s], e.label))
    squares = []
    for w in base.squares:
        for s in range(d):
            t = s
            lifted = []
            for dart in w:
                copy, sign, t = lift_dart(c, dart, t)
                lifted.append(sign * ((abs(dart) - 1) * d + copy + 1))
            squares.append(tuple(lifted))
    z = SquareComplex(verts, tuple(edges), tuple(squares))
    proj = CellularMap(
        z, base,
        tuple(v // d for v in range(verts)),
        tuple(((ze - 1) // d + 1,) for ze in range(1, len(edges) + 1)),
        tuple(i // d for i in range(len(squares))))
    return TotalSpace(z, c, proj)


def is_connected(c: Cover) -> bool:
    """Connectivity of the total space, computed without realizing it."""
    _check_shape(c)
    d = c.degree
    ds = DisjointSet(range(c.base.num_vertices * d))
    for eid, e in enumerate(c.base.edges, start=1):
        p = c.perms[eid - 1]
        for s in range(d):
            ds.union(e.tail * d + s, e.head * d + p[s])
    return len(ds.classes()) <= 1


def lift_path(c: Cover, p: EdgePath, start_sheet: int = 0):
    """The unique lift from (start vertex, start_sheet).

    Returns (path in the total-space indexing, end sheet); a based loop
    lifts closed iff the end sheet equals the start sheet.
    """
    if not (0 <= start_sheet < c.degree):
        raise ValueError("no sheet %r" % (start_sheet,))
    trace(c.base, p)   # reject invalid base paths
    d = c.degree
    t = start_sheet
    word = []
    for dart in p.word:
        copy, sign, t = lift_dart(c, dart, t)
        word.append(sign * ((abs(dart) - 1) * d + copy + 1))
    return EdgePath(p.start * d + start_sheet, tuple(word)), t


# ---------------------------------------------------------------------------
# monodromy, normality, regular closure


def monodromy(c: Cover, basepoint: int = 0,
              pres: Optional[Pi1Presentation] = None):
    """Images of the spanning-tree generators: one sheet permutation per
    generator loop (tree path out, edge, tree path back)."""
    if pres is None:
        pres = pi1_presentation(c.base, basepoint)
    gens = []
    for k in range(1, len(pres.generators) + 1):
        gens.append(transport(c, pres.generator_loop(k).word))
    return pres, tuple(gens)


def is_normal(c: Cover, basepoint: int = 0) -> bool:
    """Deck transformations act transitively on fibers iff the monodromy
    stabilizers of all sheets coincide."""
    if not is_connected(c):
        raise ValueError("normality is only defined for connected covers")
    _, gens = monodromy(c, basepoint)
    group = perm.mulclose(gens, c.degree)
    stab0 = frozenset(g for g in group if g[0] == 0)
    return all(frozenset(g for g in group if g[s] == s) == stab0
               for s in range(1, c.degree))


@dataclass(frozen=True)
class RegularClosure:
    cover: Cover
    group: tuple    # monodromy group elements, sorted; the closure's sheets
    factor: tuple   # closure sheet -> sheet of the original basepoint fiber


def regular_closure(c: Cover, basepoint: int = 0) -> RegularClosure:
    """The normal cover from the monodromy group acting on itself.

    Sheets are the elements of the monodromy group G in sorted order; a
    non-tree edge moves g to g * (its generator's monodromy), tree edges
    stay put.  The result has degree |G| (dividing d!), is normal, and
    factors through c on the basepoint fiber by evaluation at sheet 0.
    """
    if not is_connected(c):
        raise ValueError("regular closure needs a connected cover")
    pres, gens = monodromy(c, basepoint)
    group = sorted(perm.mulclose(gens, c.degree))
    index = {g: i for i, g in enumerate(group)}
    dd = len(group)
    by_edge = []
    gen_pos = {eid: k for k, eid in enumerate(pres.generators)}
    for eid in range(1, c.base.num_edges + 1):
        if eid in gen_pos:
            m = gens[gen_pos[eid]]
            by_edge.append(tuple(index[perm.compose(g, m)] for g in group))
        else:
            by_edge.append(perm.identity(dd))
    closure = Cover(c.base, dd, tuple(by_edge))
    return RegularClosure(closure, tuple(group),
                          tuple(g[0] for g in group))


# ---------------------------------------------------------------------------
# hyperplane preimages


def preimage_hyperplane_components(c: Cover, y: Hyperplane):
    """Components of the preimage of a base hyperplane, each a hyperplane
    of the realized total space, sorted by least dual edge id."""
    if y.complex != c.base:
        raise ValueError("hyperplane is not from this cover's base")
    ts = total_space(c)
    d = c.degree
    out = []
    for h in hyperplanes(ts.complex):
        base_eid = (h.id - 1) // d + 1
        if base_eid in y.dual_edges:
            out.append(h)
    return tuple(out)


# ---------------------------------------------------------------------------
# enumeration


def cover_from_assignment(cx: SquareComplex, pres: Pi1Presentation,
                          degree: int, assignment) -> Cover:
    """The cover with identity tree edges and the given non-tree images."""
    ident = perm.identity(degree)
    by_edge = []
    k = 0
    for eid in range(1, cx.num_edges + 1):
        if eid in pres.tree_edges:
            by_edge.append(ident)
        else:
            by_edge.append(assignment[k])
            k += 1
    return Cover(cx, degree, tuple(by_edge))


def iter_covers(cx: SquareComplex, degree: int,
                connected: bool = False,
                up_to_conjugacy: bool = False,
                basepoint: int = 0,
                pres: Optional[Pi1Presentation] = None,
                first_images: Optional[Sequence[tuple]] = None,
                budget: Optional[perm.NodeBudget] = None):
    """Stream of degree-d covers with identity on a spanning tree.

    Every cover of a connected complex is isomorphic to one of these.
    Enumeration backtracks over generators in id order with images in
    lexicographic order; `up_to_conjugacy` keeps an assignment only when
    it is the least among its simultaneous sheet relabelings, which picks
    one representative per isomorphism class of (unbased) covers.
    `first_images` and `budget` pass through to the underlying relator
    search.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    if pres is None:
        pres = pi1_presentation(cx, basepoint)
    for assignment in perm.iter_homs(len(pres.generators), pres.relators,
                                     degree, first_images=first_images,
                                     budget=budget):
        if connected and not perm.is_transitive(assignment, degree):
            continue
        if up_to_conjugacy and assignment and \
                perm.canonical_under_relabeling(assignment) != assignment:
            continue
        yield cover_from_assignment(cx, pres, degree, assignment)


def enumerate_covers(cx: SquareComplex, degree: int,
                     connected: bool = False,
                     up_to_conjugacy: bool = False,
                     basepoint: int = 0,
                     pres: Optional[Pi1Presentation] = None):
    """All degree-d covers with identity on a spanning tree, as a tuple."""
    return tuple(iter_covers(cx, degree, connected=connected,
                             up_to_conjugacy=up_to_conjugacy,
                             basepoint=basepoint, pres=pres))


# ---------------------------------------------------------------------------
# pullback


def pullback_cover(c: Cover, f: CellularMap) -> Cover:
    """Pull a cover of f's target back along f.

    Each source edge receives the transport along its image path; edges
    collapsed by f get the identity.  Square relations hold because
    boundary images of squares are null-homotopic in the target.
    """
    if f.target != c.base:
        raise ValueError("map does not land in the cover's base")
    by_edge = tuple(transport(c, f.edge_map[e - 1])
                    for e in range(1, f.source.num_edges + 1))
    pulled = Cover(f.source, c.degree, by_edge)
    if not validate_cover(pulled):
        raise ValueError("pullback failed square relations; "
                         "the map does not commute with boundaries")
    return pulled
