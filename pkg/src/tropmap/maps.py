"""Parametrized tropical stable maps and their combinatorial types.

A map assigns to every non-marked ("finite") vertex a position in the fan's
ambient space and to every edge a primitive integer direction with an
integer expansion factor.  Marked vertices sit at infinity along their leaf
ray and carry no position.  The three validity axioms are

* integrality: along a bounded edge oriented tail -> head,
  position(head) - position(tail) = length * weight * direction;
* balancing: at every finite vertex the outgoing weighted directions sum
  to zero;
* stability: no 2-valent vertex whose star maps into the relative interior
  of a single cone.

Contracted edges (image a point) are encoded with zero direction and zero
weight; a weight is zero exactly when the direction is zero, and self-loops
are always contracted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Optional, Sequence

from . import curves
from .curves import (
    Edge,
    InfiniteLength,
    Marking,
    TropicalCurve,
    Vertex,
    betti_and_genus,
    DiscreteData,
    discrete_data,
    tropical_curve,
    validate_curve,
)
from .exactgeom import (
    Cone,
    Fan,
    IntVec,
    RatVec,
    canonical_cone,
    cone_locate,
    format_rational,
    is_zero_vec,
    rank,
    ratvec,
    vector_content,
    vscale,
    vsub,
    zero_cone,
)

ZERO_LENGTH = Fraction(0)


@dataclass(frozen=True)
class EdgeMapData:
    """Direction, expansion factor, and chosen tail of one edge.

    ``u`` is primitive integral or the zero vector; ``w`` is zero iff ``u``
    is zero.  For marked leaf-edges the tail is the finite endpoint, so the
    weighted direction w*u is the contact vector of the marking.
    """

    u: IntVec
    w: int
    tail: str


@dataclass(frozen=True)
class TropicalStableMap:
    curve: TropicalCurve
    fan: Fan
    positions: Mapping[str, RatVec]
    edge_data: Mapping[str, EdgeMapData]

    def direction_from(self, edge: Edge, vid: str) -> IntVec:
        """Direction of the edge read outward from the given endpoint."""
        d = self.edge_data[edge.id]
        return d.u if d.tail == vid else tuple(-x for x in d.u)

    def weighted_direction(self, edge_id: str) -> IntVec:
        d = self.edge_data[edge_id]
        return tuple(d.w * x for x in d.u)


def stable_map(
    curve: TropicalCurve,
    fan: Fan,
    positions: Mapping[str, Sequence],
    edge_data: Mapping[str, EdgeMapData],
) -> TropicalStableMap:
    """Normalizing constructor.

    Sorts nothing (the curve already is), converts positions to exact
    rationals, and reorients marked leaf-edges so their tail is the finite
    endpoint.
    """
    pos = {vid: ratvec(p) for vid, p in positions.items()}
    data = dict(edge_data)
    marked = curve.marked_vertex_ids
    for e in curve.edges:
        d = data.get(e.id)
        if d is None:
            continue
        a, b = e.ends
        finite_end = b if a in marked else a
        if (a in marked or b in marked) and d.tail != finite_end:
            data[e.id] = EdgeMapData(tuple(-x for x in d.u), d.w, finite_end)
    return TropicalStableMap(curve, fan, pos, data)


# ---------------------------------------------------------------------------
# validation

def _edge_data_diagnostics(c: TropicalCurve, edge_data: Mapping[str, EdgeMapData], ambient: int) -> list[str]:
    diags = []
    for e in c.edges:
        d = edge_data.get(e.id)
        if d is None:
            diags.append(f"edge {e.id} has no direction/weight data")
            continue
        if d.tail not in e.ends:
            diags.append(f"edge {e.id}: tail {d.tail} is not an endpoint")
        if len(d.u) != ambient:
            diags.append(f"edge {e.id}: direction has length {len(d.u)}, expected {ambient}")
            continue
        zero = is_zero_vec(d.u)
        if d.w < 0:
            diags.append(f"edge {e.id}: negative weight {d.w}")
        if zero != (d.w == 0):
            diags.append(f"edge {e.id}: weight is zero exactly when the direction is zero")
        if not zero and vector_content(d.u) != 1:
            diags.append(f"edge {e.id}: direction {d.u} is not primitive")
        if e.ends[0] == e.ends[1] and not (zero and d.w == 0):
            diags.append(f"self-loop {e.id} must be contracted (zero direction and weight)")
    for eid in edge_data:
        if not c.has_edge(eid):
            diags.append(f"direction data for unknown edge {eid}")
    return diags


def validate_map(m: TropicalStableMap, data: Optional[DiscreteData] = None) -> list[str]:
    """Diagnostics for the map axioms and (optionally) fixed discrete data.

    Returns the empty list iff the map is valid; each entry names the vertex
    or edge and the violated condition.
    """
    diags = [f"curve: {d}" for d in validate_curve(m.curve)]
    if diags:
        return diags
    if not curves.is_smooth(m.curve):
        diags.append("curve: unmarked edge of infinite length (map source must be smooth)")
        return diags

    ambient = m.fan.ambient_dim
    diags.extend(_edge_data_diagnostics(m.curve, m.edge_data, ambient))

    marked = m.curve.marked_vertex_ids
    finite_ids = m.curve.unmarked_vertex_ids()
    for vid in finite_ids:
        p = m.positions.get(vid)
        if p is None:
            diags.append(f"vertex {vid} has no position")
        elif len(p) != ambient:
            diags.append(f"vertex {vid}: position has length {len(p)}, expected {ambient}")
    for vid in m.positions:
        if vid in marked:
            diags.append(f"marked vertex {vid} cannot carry a position")
        elif not m.curve.has_vertex(vid):
            diags.append(f"position for unknown vertex {vid}")
    if diags:
        return diags

    # integrality along bounded edges
    for e in m.curve.edges:
        if m.curve.is_marked_leaf_edge(e):
            continue
        d = m.edge_data[e.id]
        tail = d.tail
        head = e.ends[0] if e.ends[1] == tail else e.ends[1]
        if e.ends[0] == e.ends[1]:
            continue  # contracted by the loop rule; no displacement constraint
        assert not isinstance(e.length, InfiniteLength)
        expected = vscale(e.length * d.w, ratvec(d.u))
        actual = vsub(m.positions[head], m.positions[tail])
        if actual != expected:
            diags.append(
                f"integrality violated on edge {e.id}: displacement "
                f"{tuple(map(format_rational, actual))} != length*weight*direction"
            )

    # balancing at finite vertices
    for vid in finite_ids:
        total = [Fraction(0)] * ambient
        for e in m.curve.edges_at(vid):
            if e.ends[0] == e.ends[1]:
                continue  # the two half-edges of a loop cancel
            out = m.direction_from(e, vid)
            w = m.edge_data[e.id].w
            total = [t + w * x for t, x in zip(total, out)]
        if not is_zero_vec(total):
            diags.append(
                f"balancing violated at vertex {vid}: net weighted direction "
                f"{tuple(map(format_rational, total))}"
            )

    # stability of 2-valent vertices
    for vid in finite_ids:
        if m.curve.valence(vid) != 2:
            continue
        if _star_in_single_cone_interior(m, vid):
            diags.append(f"stability violated at 2-valent vertex {vid}")

    # position membership in the fan support
    if not m.fan.embedded:
        for vid in finite_ids:
            if cone_locate(m.fan, m.positions[vid]) is None:
                diags.append(f"vertex {vid}: position outside the fan support")

    if data is not None:
        g = betti_and_genus(m.curve)[1]
        if g != data.genus:
            diags.append(f"genus {g} != declared genus {data.genus}")
        labels = {mk.label for mk in m.curve.markings}
        if labels != set(data.contact):
            diags.append("marking labels differ from the declared contact data")
        else:
            for mk in m.curve.markings:
                e = m.curve.edges_at(mk.vertex)[0]
                got = m.weighted_direction(e.id)
                if got != tuple(data.contact[mk.label]):
                    diags.append(
                        f"marking {mk.label}: weighted direction {got} != contact "
                        f"vector {tuple(data.contact[mk.label])}"
                    )
    return diags


def _star_in_single_cone_interior(m: TropicalStableMap, vid: str) -> bool:
    """Is the image of the star of a 2-valent vertex contained in the
    relative interior of a single cone?

    In embedded mode the whole space plays that role, so any 2-valent vertex
    is redundant.  Otherwise the candidate cone is the one whose relative
    interior holds the position, and a short segment p + eps*d stays inside
    exactly when d lies in the cone's linear span.
    """
    if m.fan.embedded:
        return True
    sigma = cone_locate(m.fan, m.positions[vid])
    if sigma is None:
        return False
    span_rows = [ratvec(r) for r in sigma.rays]
    for e in m.curve.edges_at(vid):
        dirs = [m.direction_from(e, vid)]
        if e.ends[0] == e.ends[1]:
            dirs.append(tuple(-x for x in dirs[0]))
        for u in dirs:
            w = m.edge_data[e.id].w
            d = [Fraction(w * x) for x in u]
            if is_zero_vec(d):
                continue
            if not span_rows:
                return False
            if rank(span_rows + [tuple(d)]) != rank(span_rows):
                return False
    return True


def discrete_data_of(m: TropicalStableMap) -> DiscreteData:
    """The genus, marking count, and contact vectors realized by the map."""
    g = betti_and_genus(m.curve)[1]
    contact = {}
    for mk in m.curve.markings:
        e = m.curve.edges_at(mk.vertex)[0]
        contact[mk.label] = m.weighted_direction(e.id)
    return discrete_data(g, contact)


# ---------------------------------------------------------------------------
# combinatorial and recession types

PLACEHOLDER_LENGTH = Fraction(1)


@dataclass(frozen=True)
class CombinatorialType:
    """A map with lengths and positions forgotten.

    ``graph`` carries placeholder length 1 on every bounded edge (a type has
    no metric; the placeholder keeps the curve machinery reusable), the fan
    is retained so degenerations know where cones live, and ``vertex_cones``
    records the cone attached to each finite vertex.
    """

    graph: TropicalCurve
    fan: Fan
    vertex_cones: Mapping[str, Cone]
    edge_data: Mapping[str, EdgeMapData]

    def bounded_edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.graph.edges if not self.graph.is_marked_leaf_edge(e))

    def weighted_direction(self, edge_id: str) -> IntVec:
        d = self.edge_data[edge_id]
        return tuple(d.w * x for x in d.u)

    def direction_from(self, edge: Edge, vid: str) -> IntVec:
        d = self.edge_data[edge.id]
        return d.u if d.tail == vid else tuple(-x for x in d.u)


@dataclass(frozen=True)
class RecessionType:
    """Everything bounded collapsed to one vertex: genus plus the marked
    contact vectors, which necessarily sum to zero."""

    genus: int
    contacts: tuple[tuple[str, IntVec], ...]


def _strip_lengths(c: TropicalCurve) -> TropicalCurve:
    edges = [
        Edge(e.id, e.ends, curves.INF if c.is_marked_leaf_edge(e) else PLACEHOLDER_LENGTH)
        for e in c.edges
    ]
    return tropical_curve(c.vertices, edges, c.markings)


def make_type(
    graph: TropicalCurve,
    fan: Fan,
    edge_data: Mapping[str, EdgeMapData],
    vertex_cones: Optional[Mapping[str, Cone]] = None,
) -> CombinatorialType:
    """Build a type directly; in embedded mode the vertex cones default to
    the zero cone."""
    graph = _strip_lengths(graph)
    marked = graph.marked_vertex_ids
    if vertex_cones is None:
        vertex_cones = {}
    cones = dict(vertex_cones)
    for vid in graph.unmarked_vertex_ids():
        cones.setdefault(vid, zero_cone(fan.ambient_dim))
    cones = {vid: canonical_cone(c) for vid, c in cones.items() if vid not in marked}
    data = dict(edge_data)
    for e in graph.edges:
        d = data.get(e.id)
        if d is None:
            raise ValueError(f"edge {e.id} has no direction/weight data")
        a, b = e.ends
        finite_end = b if a in marked else a
        if (a in marked or b in marked) and d.tail != finite_end:
            data[e.id] = EdgeMapData(tuple(-x for x in d.u), d.w, finite_end)
    return CombinatorialType(graph, fan, cones, data)


def combinatorial_type(m: TropicalStableMap) -> CombinatorialType:
    """Forget lengths and positions.

    In embedded mode every finite vertex receives the zero cone (positions
    roam the whole space); otherwise the vertex cone is the minimal fan cone
    whose relative interior contains the position.
    """
    cones: dict[str, Cone] = {}
    if not m.fan.embedded:
        for vid in m.curve.unmarked_vertex_ids():
            located = cone_locate(m.fan, m.positions[vid])
            if located is None:
                raise ValueError(f"vertex {vid}: position outside the fan support")
            cones[vid] = located
    return make_type(m.curve, m.fan, m.edge_data, cones)


def recession_type(t: CombinatorialType) -> RecessionType:
    g = betti_and_genus(t.graph)[1]
    contacts = []
    for mk in t.graph.markings:
        e = t.graph.edges_at(mk.vertex)[0]
        contacts.append((mk.label, t.weighted_direction(e.id)))
    contacts.sort()
    total = [0] * t.fan.ambient_dim
    for _, vec in contacts:
        total = [a + b for a, b in zip(total, vec)]
    if any(x != 0 for x in total):
        raise ValueError("contact vectors do not balance at the collapsed vertex")
    return RecessionType(g, tuple(contacts))


# ---------------------------------------------------------------------------
# canonical forms

def _lex_positive(u: IntVec) -> bool:
    for x in u:
        if x > 0:
            return True
        if x < 0:
            return False
    return False


def canonical_edge_data(graph: TropicalCurve, data: Mapping[str, EdgeMapData]) -> dict[str, EdgeMapData]:
    """Reorient each edge so its direction is lexicographically positive
    (marked leaf-edges keep the finite tail; zero directions take the
    smaller endpoint as tail)."""
    marked = graph.marked_vertex_ids
    out = {}
    for e in graph.edges:
        d = data[e.id]
        a, b = e.ends
        if a in marked or b in marked:
            out[e.id] = d
        elif is_zero_vec(d.u):
            out[e.id] = EdgeMapData(d.u, d.w, min(a, b))
        elif _lex_positive(d.u):
            out[e.id] = d
        else:
            other = a if d.tail == b else b
            out[e.id] = EdgeMapData(tuple(-x for x in d.u), d.w, other)
    return out


def canonical_type(t: CombinatorialType) -> CombinatorialType:
    return CombinatorialType(t.graph, t.fan, dict(t.vertex_cones), canonical_edge_data(t.graph, t.edge_data))


def canonical_map(m: TropicalStableMap) -> TropicalStableMap:
    return TropicalStableMap(m.curve, m.fan, dict(m.positions), canonical_edge_data(m.curve, m.edge_data))


# ---------------------------------------------------------------------------
# decorated isomorphisms and automorphisms

@dataclass(frozen=True)
class TypeAutomorphism:
    """A decorated-graph automorphism: a vertex permutation together with an
    edge permutation; an edge entry maps to (image edge, reversed?)."""

    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, tuple[str, bool]]


def _edge_signature(t: CombinatorialType, e: Edge, vid: str) -> tuple:
    return (t.edge_data[e.id].w, t.direction_from(e, vid))


def _vertex_profile(t: CombinatorialType, vid: str) -> tuple:
    sigs = sorted(_edge_signature(t, e, vid) for e in t.graph.edges_at(vid))
    v = t.graph.vertex(vid)
    return (v.genus, t.graph.valence(vid), tuple(sigs))


def decorated_isomorphisms(
    t1: CombinatorialType,
    t2: CombinatorialType,
    vertex_ok: Optional[Callable[[str, str], bool]] = None,
) -> Iterator[tuple[dict[str, str], dict[str, tuple[str, bool]]]]:
    """All isomorphisms graph(t1) -> graph(t2) fixing markings pointwise and
    preserving genus, weights, directions up to reorientation (a reversed
    edge negates its direction), and — via ``vertex_ok`` — the vertex cones.

    The default ``vertex_ok`` demands equal canonical cones.
    """
    if vertex_ok is None:
        def vertex_ok(v1: str, v2: str) -> bool:
            return canonical_cone(t1.vertex_cones[v1]) == canonical_cone(t2.vertex_cones[v2])

    g1, g2 = t1.graph, t2.graph
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return
    labels1 = {m.label: m.vertex for m in g1.markings}
    labels2 = {m.label: m.vertex for m in g2.markings}
    if set(labels1) != set(labels2):
        return

    marked1 = g1.marked_vertex_ids
    vmap: dict[str, str] = {}
    used: set[str] = set()
    for label, v1 in labels1.items():
        v2 = labels2[label]
        e1, e2 = g1.marked_edge(label), g2.marked_edge(label)
        d1, d2 = t1.edge_data[e1.id], t2.edge_data[e2.id]
        if (d1.u, d1.w) != (d2.u, d2.w):
            return
        vmap[v1] = v2
        used.add(v2)

    free1 = sorted(g1.unmarked_vertex_ids(), key=lambda v: (-g1.valence(v), v))
    free2 = set(g2.unmarked_vertex_ids())
    profiles2 = {v: _vertex_profile(t2, v) for v in free2}

    def edges_between(t: CombinatorialType, a: str, b: str) -> list[Edge]:
        return [e for e in t.graph.edges_at(a) if set(e.ends) == ({a, b} if a != b else {a})]

    def extend(idx: int) -> Iterator[dict[str, str]]:
        if idx == len(free1):
            yield dict(vmap)
            return
        v1 = free1[idx]
        prof1 = _vertex_profile(t1, v1)
        for v2 in sorted(free2 - used):
            if profiles2[v2] != prof1 or not vertex_ok(v1, v2):
                continue
            ok = True
            for u1, u2 in vmap.items():
                sig1 = sorted(
                    _edge_signature(t1, e, v1) for e in edges_between(t1, v1, u1)
                )
                sig2 = sorted(
                    _edge_signature(t2, e, v2) for e in edges_between(t2, v2, u2)
                )
                if sig1 != sig2:
                    ok = False
                    break
            if not ok:
                continue
            vmap[v1] = v2
            used.add(v2)
            yield from extend(idx + 1)
            del vmap[v1]
            used.discard(v2)

    for full_vmap in extend(0):
        yield from _match_edges(t1, t2, full_vmap)


def _match_edges(
    t1: CombinatorialType,
    t2: CombinatorialType,
    vmap: dict[str, str],
) -> Iterator[tuple[dict[str, str], dict[str, tuple[str, bool]]]]:
    g1, g2 = t1.graph, t2.graph
    emap: dict[str, tuple[str, bool]] = {}
    labels2 = {m.label: m.vertex for m in g2.markings}
    for m1 in g1.markings:
        e1 = g1.marked_edge(m1.label)
        e2 = g2.marked_edge(m1.label)
        emap[e1.id] = (e2.id, False)

    groups: dict[tuple[str, str], list[Edge]] = {}
    for e in g1.edges:
        if g1.is_marked_leaf_edge(e):
            continue
        a, b = sorted((vmap[e.ends[0]], vmap[e.ends[1]]))
        groups.setdefault((a, b), []).append(e)
    targets: dict[tuple[str, str], list[Edge]] = {}
    for e in g2.edges:
        if g2.is_marked_leaf_edge(e):
            continue
        a, b = sorted(e.ends)
        targets.setdefault((a, b), []).append(e)
    if set(groups) != set(targets):
        return

    def candidates(e1: Edge, e2: Edge) -> list[bool]:
        # possible "reversed" flags sending e1 to e2 compatibly with vmap
        out = []
        d1, d2 = t1.edge_data[e1.id], t2.edge_data[e2.id]
        if d1.w != d2.w:
            return out
        a1 = d1.tail
        b1 = e1.ends[0] if e1.ends[1] == a1 else e1.ends[1]
        if e1.ends[0] == e1.ends[1]:
            if e2.ends[0] != e2.ends[1] or vmap[a1] != e2.ends[0]:
                return out
            if d1.u == d2.u:
                out.append(False)
            if tuple(-x for x in d1.u) == d2.u:
                out.append(True)
            if d1.u == d2.u == tuple(-x for x in d1.u):
                out = [False, True]  # contracted loop: both orientations
            return sorted(set(out))
        if {vmap[a1], vmap[b1]} != set(e2.ends):
            return out
        if d2.tail == vmap[a1] and d1.u == d2.u:
            out.append(False)
        if d2.tail == vmap[b1] and tuple(-x for x in d1.u) == d2.u:
            out.append(True)
        return sorted(set(out))

    group_list = sorted(groups)

    def assign(gi: int) -> Iterator[dict[str, tuple[str, bool]]]:
        if gi == len(group_list):
            yield dict(emap)
            return
        key = group_list[gi]
        sources = groups[key]
        sinks = targets.get(key, [])
        if len(sources) != len(sinks):
            return

        def match(si: int, remaining: list[Edge]) -> Iterator[None]:
            if si == len(sources):
                yield None
                return
            e1 = sources[si]
            for e2 in list(remaining):
                for flip in candidates(e1, e2):
                    emap[e1.id] = (e2.id, flip)
                    rest = [x for x in remaining if x.id != e2.id]
                    yield from match(si + 1, rest)
                emap.pop(e1.id, None)

        for _ in match(0, sinks):
            yield from assign(gi + 1)

    for final_emap in assign(0):
        yield dict(vmap), final_emap


def type_automorphisms(t: CombinatorialType) -> list[TypeAutomorphism]:
    """All decorated automorphisms of the type (markings fixed pointwise).

    A contracted self-loop may map to itself with either orientation, so each
    such loop contributes a factor of two.
    """
    t = canonical_type(t)
    out = []
    for vmap, emap in decorated_isomorphisms(t, t):
        out.append(TypeAutomorphism(vmap, emap))
    return out


# ---------------------------------------------------------------------------
# stars

def star(m: TropicalStableMap, vid: str) -> TropicalStableMap:
    """The one-vertex map seen at ``vid``: every incident bounded edge becomes
    an unbounded marked ray with the inherited direction and weight, existing
    markings stay, and contracted self-loops contribute nothing."""
    if not m.curve.has_vertex(vid):
        raise ValueError(f"unknown vertex {vid}")
    if vid in m.curve.marked_vertex_ids:
        raise ValueError(f"vertex {vid} is a marked leaf vertex")
    center = m.curve.vertex(vid)
    vertices = [center]
    edges: list[Edge] = []
    markings: list[Marking] = []
    edge_data: dict[str, EdgeMapData] = {}
    marked = m.curve.marked_vertex_ids
    for e in m.curve.edges_at(vid):
        a, b = e.ends
        if a == b:
            d = m.edge_data[e.id]
            if d.w != 0 or not is_zero_vec(d.u):
                raise ValueError(f"self-loop {e.id} is not contracted")
            continue  # contracted loop: its two rays have zero direction
        other = b if a == vid else a
        if other in marked:
            label = next(mk.label for mk in m.curve.markings if mk.vertex == other)
            vertices.append(m.curve.vertex(other))
            edges.append(Edge(e.id, e.ends, curves.INF))
            markings.append(Marking(label, other))
            edge_data[e.id] = m.edge_data[e.id]
        else:
            leaf = f"inf:{e.id}"
            vertices.append(Vertex(leaf, 0))
            edges.append(Edge(e.id, (vid, leaf), curves.INF))
            markings.append(Marking(f"star:{e.id}", leaf))
            u = m.direction_from(e, vid)
            edge_data[e.id] = EdgeMapData(u, m.edge_data[e.id].w, vid)
    c = tropical_curve(vertices, edges, markings)
    return stable_map(c, m.fan, {vid: m.positions[vid]}, edge_data)
