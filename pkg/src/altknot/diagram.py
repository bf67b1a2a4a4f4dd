"""Sign-labeled link diagrams as 4-valent planar combinatorial maps.

A diagram is a set of 4-valent crossings, each with a counterclockwise
cyclic slot order, plus edges joining slot pairs.  Which opposite slot
pair carries the over strand determines the +/- label at every edge end
(+ = over), and an edge is *alternating* when its two end labels differ.
Crossing-free closed components ("loops") are stored separately so the
zero-crossing unknot diagram exists.

PD text format: whitespace-separated records ``X(a,b,c,d)`` listing the
four edge ids counterclockwise from the incoming under-strand edge
(under strand = {a,c}, over strand = {b,d}), plus ``O(k)`` records for
crossing-free loops.  ``#`` starts a line comment.

All operations are pure: they return new Diagram values and never
mutate their inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    IncidenceError,
    InvariantError,
    PDSyntaxError,
    SphericityError,
    UnknownCrossing,
    UnknownEdge,
)


class Sign(Enum):
    """End label of an edge at a crossing: ``+`` means the over strand."""

    PLUS = "+"
    MINUS = "-"

    @property
    def opposite(self) -> "Sign":
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS

    def __str__(self) -> str:
        return self.value


End = tuple  # (crossing id, slot) pairs; plain tuples keep surgery cheap


@dataclass(frozen=True)
class Crossing:
    """4-valent vertex.  ``slots[i]`` is the edge id at slot i, slots in
    counterclockwise cyclic order.  ``over_slots`` names the opposite
    slot pair carried by the over strand; only (0,2) and (1,3) are
    legal, but illegal values are representable so validation has
    something to report."""

    id: int
    slots: tuple[int, int, int, int]
    over_slots: tuple[int, int] = (1, 3)

    def label(self, slot: int) -> Sign:
        return Sign.PLUS if slot in self.over_slots else Sign.MINUS


@dataclass(frozen=True)
class Edge:
    """Arc between two crossing passages.

    ``origin`` is the id of the pre-augmentation edge this arc is a
    piece of (stable across subdivisions); ``component`` is the link
    component the arc belongs to."""

    id: int
    ends: tuple[End, End]
    origin: int | None
    component: int

    def other_end(self, end: End) -> End:
        a, b = self.ends
        return b if a == end else a


@dataclass(frozen=True)
class Face:
    """Complementary region of the diagram in the sphere.

    ``corners`` lists (crossing, incoming edge, outgoing edge) in cyclic
    order; ``corner_slots`` gives the matching (crossing, slot) pairs,
    where slot i names the quadrant counterclockwise of slot i.  Loop
    faces (the two sides of a crossing-free loop) have no corners and
    carry the loop id instead."""

    id: int
    corners: tuple[tuple[int, int, int], ...]
    boundary_edges: tuple[int, ...]
    loop: int | None = None
    corner_slots: tuple[End, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.corners)

    def crossings(self) -> frozenset[int]:
        return frozenset(c for c, _i, _o in self.corners)

    @property
    def is_bigon(self) -> bool:
        return self.loop is None and self.degree == 2 and len(self.crossings()) == 2


@dataclass(frozen=True)
class Diagram:
    """Immutable sign-labeled 4-valent map plus crossing-free loops."""

    crossings: dict[int, Crossing]
    edges: dict[int, Edge]
    loops: dict[int, int] = field(default_factory=dict)  # loop id -> component
    augmenting_component: int | None = None

    # -- cheap readers --------------------------------------------------------

    def edge_at(self, c: int, slot: int) -> int:
        return self.crossings[c].slots[slot % 4]

    def label(self, c: int, slot: int) -> Sign:
        return self.crossings[c].label(slot % 4)

    def other_end(self, end: End) -> End:
        c, s = end
        return self.edges[self.edge_at(c, s)].other_end((c, s % 4))

    def edge_labels(self, e: int) -> tuple[Sign, Sign]:
        (c0, s0), (c1, s1) = self.edges[e].ends
        return (self.label(c0, s0), self.label(c1, s1))

    def components(self) -> dict[int, list[int]]:
        """Component id -> sorted edge ids; a crossing-free loop's
        component maps to an empty edge list."""
        out: dict[int, list[int]] = {}
        for e in self.edges.values():
            out.setdefault(e.component, []).append(e.id)
        for comp in self.loops.values():
            out.setdefault(comp, [])
        return {k: sorted(v) for k, v in sorted(out.items())}

    def next_edge_id(self) -> int:
        taken = set(self.edges) | set(self.loops)
        return max(taken, default=0) + 1

    def next_crossing_id(self) -> int:
        return max(self.crossings, default=-1) + 1

    def next_component_id(self) -> int:
        comps = {e.component for e in self.edges.values()} | set(self.loops.values())
        return max(comps, default=-1) + 1


# -- strand and connectivity structure ----------------------------------------

def strand_pairs(c: Crossing) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two transversal strands at a crossing, as slot pairs."""
    return (0, 2), (1, 3)


def strand_components(d: Diagram) -> list[frozenset[int]]:
    """Orbits of edges under going straight through crossings."""
    parent = {e: e for e in d.edges}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        parent[find(a)] = find(b)

    for c in d.crossings.values():
        union(c.slots[0], c.slots[2])
        union(c.slots[1], c.slots[3])
    groups: dict[int, set[int]] = {}
    for e in d.edges:
        groups.setdefault(find(e), set()).add(e)
    return [frozenset(g) for g in sorted(groups.values(), key=min)]


def connected_pieces(d: Diagram) -> list[tuple[frozenset[int], frozenset[int]]]:
    """(crossing ids, edge ids) per connected piece of the 4-valent map;
    crossing-free loops are separate pieces and are not listed here."""
    seen: set[int] = set()
    pieces = []
    for start in sorted(d.crossings):
        if start in seen:
            continue
        stack, cs, es = [start], set(), set()
        seen.add(start)
        while stack:
            c = stack.pop()
            cs.add(c)
            for e in d.crossings[c].slots:
                es.add(e)
                for (c2, _s) in d.edges[e].ends:
                    if c2 not in seen:
                        seen.add(c2)
                        stack.append(c2)
        pieces.append((frozenset(cs), frozenset(es)))
    return pieces


def piece_count(d: Diagram) -> int:
    return len(connected_pieces(d)) + len(d.loops)


def is_connected(d: Diagram) -> bool:
    return piece_count(d) == 1


# -- faces ---------------------------------------------------------------------

class FaceSet:
    """Faces of the map plus corner and edge-side lookup tables.

    The face walk keeps the face on the right of the travel direction:
    from the corner between slots i and i+1 at a crossing, leave through
    the edge in slot i+1 and arrive at the corner just counterclockwise
    of its far end.  Corner (c, i) therefore denotes the quadrant swept
    counterclockwise from slot i."""

    def __init__(self, faces: list[Face], corner_face: dict[End, int]):
        self.faces = faces
        self.corner_face = corner_face
        self.by_id = {f.id: f for f in faces}

    def face_of_corner(self, c: int, slot: int) -> int:
        return self.corner_face[(c, slot % 4)]

    def edge_sides(self, d: Diagram, e: int) -> tuple[int, int]:
        """(left face, right face) of edge e directed end0 -> end1."""
        (c0, s0), (c1, s1) = d.edges[e].ends
        return self.face_of_corner(c0, s0), self.face_of_corner(c1, s1)

    def faces_of_edge(self, d: Diagram, e: int) -> frozenset[int]:
        return frozenset(self.edge_sides(d, e))


def face_set(d: Diagram) -> FaceSet:
    corner_face: dict[End, int] = {}
    faces: list[Face] = []
    for c in sorted(d.crossings):
        for s in range(4):
            if (c, s) in corner_face:
                continue
            fid = len(faces)
            corners = []
            slots = []
            edges = []
            cc, ss = c, s
            while True:
                corner_face[(cc, ss)] = fid
                out_edge = d.edge_at(cc, ss + 1)
                corners.append((cc, d.edge_at(cc, ss), out_edge))
                slots.append((cc, ss))
                edges.append(out_edge)
                cc, ss = d.other_end((cc, (ss + 1) % 4))
                if (cc, ss) == (c, s):
                    break
                if (cc, ss) in corner_face:  # broken rotation data
                    raise InvariantError(f"face walk collided at corner {(cc, ss)}")
            faces.append(Face(fid, tuple(corners), tuple(edges), corner_slots=tuple(slots)))
    nxt = len(faces)
    for loop_id in sorted(d.loops):
        faces.append(Face(nxt, (), (), loop=loop_id))
        faces.append(Face(nxt + 1, (), (), loop=loop_id))
        nxt += 2
    return FaceSet(faces, corner_face)


def faces(d: Diagram) -> list[Face]:
    """All complementary regions (two per crossing-free loop)."""
    return face_set(d).faces


def euler_by_piece(d: Diagram, fs: FaceSet | None = None) -> list[tuple[int, int, int]]:
    """(V, E, F) per crossing-bearing connected piece."""
    fs = fs or face_set(d)
    out = []
    for cs, es in connected_pieces(d):
        nf = sum(1 for f in fs.faces if f.corners and f.corners[0][0] in cs)
        out.append((len(cs), len(es), nf))
    return out


# -- labels --------------------------------------------------------------------

def end_labels(d: Diagram) -> dict[int, tuple[Sign, Sign]]:
    """Edge id -> (label at end0, label at end1); + marks the over strand."""
    return {e: d.edge_labels(e) for e in sorted(d.edges)}


def is_alternating_edge(d: Diagram, e: int) -> bool:
    a, b = d.edge_labels(e)
    return a != b


# -- parsing and serialization --------------------------------------------------

_RECORD = re.compile(r"([XO])\(([^()]*)\)")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def parse_pd(text: str) -> Diagram:
    """Parse PD text into a validated Diagram.

    Raises PDSyntaxError for malformed records, IncidenceError when an
    edge id is not used exactly twice, SphericityError when the rotation
    system is not spherical.
    """
    clean = _strip_comments(text)
    records = []
    pos = 0
    for m in _RECORD.finditer(clean):
        if clean[pos:m.start()].strip():
            raise PDSyntaxError(f"unrecognized text: {clean[pos:m.start()].strip()!r}")
        pos = m.end()
        kind, body = m.group(1), m.group(2)
        try:
            ids = tuple(int(tok) for tok in body.split(","))
        except ValueError:
            raise PDSyntaxError(f"bad record body: {m.group(0)!r}") from None
        if any(i <= 0 for i in ids):
            raise PDSyntaxError(f"edge ids must be positive: {m.group(0)!r}")
        if kind == "X" and len(ids) != 4:
            raise PDSyntaxError(f"X record needs 4 edges: {m.group(0)!r}")
        if kind == "O" and len(ids) != 1:
            raise PDSyntaxError(f"O record needs 1 id: {m.group(0)!r}")
        records.append((kind, ids))
    if clean[pos:].strip():
        raise PDSyntaxError(f"unrecognized text: {clean[pos:].strip()!r}")

    crossings: dict[int, Crossing] = {}
    loops: dict[int, int] = {}
    uses: dict[int, list[End]] = {}
    for kind, ids in records:
        if kind == "X":
            cid = len(crossings)
            crossings[cid] = Crossing(cid, ids, over_slots=(1, 3))
            for s, e in enumerate(ids):
                uses.setdefault(e, []).append((cid, s))
        else:
            (k,) = ids
            if k in loops:
                raise IncidenceError(f"loop id {k} repeated")
            loops[k] = -1  # component assigned below

    bad = {e: len(u) for e, u in uses.items() if len(u) != 2}
    bad.update({k: 3 for k in loops if k in uses})
    if bad:
        raise IncidenceError(f"edge ids not used exactly twice: {sorted(bad)}")

    edges = {
        e: Edge(e, (u[0], u[1]), origin=e, component=-1) for e, u in uses.items()
    }
    d = Diagram(crossings, edges, loops)
    d = _assign_components(d)
    for v, e, f in euler_by_piece(d):
        if v - e + f != 2:
            raise SphericityError(f"V-E+F = {v - e + f} on a connected piece")
    return d


def _assign_components(d: Diagram) -> Diagram:
    comps = strand_components(d)
    edge_comp: dict[int, int] = {}
    for i, grp in enumerate(comps):
        for e in grp:
            edge_comp[e] = i
    n = len(comps)
    loops = {}
    for k in sorted(d.loops):
        loops[k] = n
        n += 1
    edges = {
        e: Edge(e, d.edges[e].ends, d.edges[e].origin, edge_comp[e])
        for e in d.edges
    }
    return Diagram(d.crossings, edges, loops, d.augmenting_component)


def serialize_pd(d: Diagram) -> str:
    """Emit PD text; parse_pd(serialize_pd(d)) reproduces the map."""
    parts = []
    for cid in sorted(d.crossings):
        c = d.crossings[cid]
        if c.over_slots == (1, 3):
            start = 0
        elif c.over_slots == (0, 2):
            start = 1
        else:
            raise InvariantError(f"crossing {cid} has illegal over_slots {c.over_slots}")
        ids = [c.slots[(start + k) % 4] for k in range(4)]
        parts.append(f"X({ids[0]},{ids[1]},{ids[2]},{ids[3]})")
    for k in sorted(d.loops):
        parts.append(f"O({k})")
    return " ".join(parts)


# -- validation -----------------------------------------------------------------

@dataclass
class ValidationReport:
    valid: bool
    failures: list[str]
    v: int
    e: int
    f: int
    components: int

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "failures": list(self.failures),
            "v": self.v,
            "e": self.e,
            "f": self.f,
            "components": self.components,
        }


def validate_diagram(d: Diagram) -> ValidationReport:
    """Check 4-valence, incidence, label consistency, sphericity and the
    component census; failures are reported, not raised."""
    failures: list[str] = []
    uses: dict[int, list[End]] = {}
    for cid, c in d.crossings.items():
        if len(c.slots) != 4:
            failures.append(f"valence: crossing {cid} has {len(c.slots)} slots")
            continue
        for s, e in enumerate(c.slots):
            if e not in d.edges:
                failures.append(f"incidence: crossing {cid} slot {s} names missing edge {e}")
            uses.setdefault(e, []).append((cid, s))
    for e, u in sorted(uses.items()):
        if len(u) != 2:
            failures.append(f"incidence: edge {e} used {len(u)} times")
    for e, rec in sorted(d.edges.items()):
        if e in d.loops:
            failures.append(f"incidence: id {e} is both edge and loop")
        want = sorted(uses.get(e, []))
        if sorted(rec.ends) != want:
            failures.append(f"incidence: edge {e} ends {rec.ends} do not match slots")
    for cid, c in sorted(d.crossings.items()):
        if tuple(sorted(c.over_slots)) not in ((0, 2), (1, 3)):
            word = "".join(str(c.label(s)) for s in range(4))
            failures.append(f"labels: crossing {cid} reads ({word}) around, not (+-+-)")

    v = len(d.crossings)
    e = len(d.edges)
    f = 0
    structural_ok = not any(msg.startswith(("incidence", "valence")) for msg in failures)
    if structural_ok:
        try:
            fs = face_set(d)
            f = len(fs.faces)
            for pv, pe, pf in euler_by_piece(d, fs):
                if pv - pe + pf != 2:
                    failures.append(f"sphericity: V-E+F = {pv - pe + pf} on a piece")
        except InvariantError as exc:
            failures.append(f"sphericity: {exc}")
        comps = strand_components(d)
        for i, grp in enumerate(comps):
            labels = {d.edges[x].component for x in grp}
            if len(labels) != 1:
                failures.append(f"components: strand {i} carries mixed ids {sorted(labels)}")
    ncomp = len({rec.component for rec in d.edges.values()} | set(d.loops.values()))
    return ValidationReport(not failures, failures, v, e, f, ncomp)


# -- map equality ----------------------------------------------------------------

def same_map(a: Diagram, b: Diagram, check_origins: bool = True) -> bool:
    """Combinatorial-map equality preserving edge ids, up to rotating each
    crossing's slot numbering (which the serialization of a flipped
    crossing does).  Crossings match by id when the id sets agree, else
    positionally in sorted order (PD text carries no crossing ids, so a
    parse after a serialize renumbers them in record order)."""
    if set(a.edges) != set(b.edges) or set(a.loops) != set(b.loops):
        return False
    if len(a.crossings) != len(b.crossings):
        return False
    if set(a.crossings) == set(b.crossings):
        cmap = {c: c for c in a.crossings}
    else:
        cmap = dict(zip(sorted(a.crossings), sorted(b.crossings)))
    rot: dict[int, int] = {}
    for cid, ca in a.crossings.items():
        cb = b.crossings[cmap[cid]]
        for r in range(4):
            if tuple(ca.slots[(i + r) % 4] for i in range(4)) == tuple(cb.slots):
                pa = ca.over_slots[0] % 2
                pb = cb.over_slots[0] % 2
                if (pa - r) % 2 == pb:
                    rot[cid] = r
                    break
        else:
            return False
    comp_map: dict[int, int] = {}
    comp_seen: set[int] = set()

    def comps_match(ca: int, cb: int) -> bool:
        if ca in comp_map:
            return comp_map[ca] == cb
        if cb in comp_seen:
            return False
        comp_map[ca] = cb
        comp_seen.add(cb)
        return True

    for e, ra in a.edges.items():
        rb = b.edges[e]
        mapped = {(cmap[c], (s - rot[c]) % 4) for c, s in ra.ends}
        if mapped != set((c, s % 4) for c, s in rb.ends):
            return False
        if not comps_match(ra.component, rb.component):
            return False
        if check_origins and ra.origin != rb.origin:
            return False
    for k, comp in a.loops.items():
        if not comps_match(comp, b.loops[k]):
            return False
    return True


# -- local edits -----------------------------------------------------------------

class MapBuilder:
    """Mutable scratch copy of a diagram for surgery.  Keeps the slot
    tables and edge records consistent through welds and deletions; call
    ``build()`` to freeze (and re-derive strand components)."""

    def __init__(self, d: Diagram):
        self.slots: dict[int, list[int]] = {c: list(x.slots) for c, x in d.crossings.items()}
        self.over: dict[int, tuple[int, int]] = {c: x.over_slots for c, x in d.crossings.items()}
        self.ends: dict[int, list[End]] = {e: list(x.ends) for e, x in d.edges.items()}
        self.origin: dict[int, int | None] = {e: x.origin for e, x in d.edges.items()}
        self.comp: dict[int, int] = {e: x.component for e, x in d.edges.items()}
        self.loops: dict[int, int] = dict(d.loops)
        self.augmenting = d.augmenting_component
        self._next_edge = d.next_edge_id()
        self._next_crossing = d.next_crossing_id()
        self._next_comp = d.next_component_id()

    def new_edge_id(self) -> int:
        self._next_edge += 1
        return self._next_edge - 1

    def new_crossing_id(self) -> int:
        self._next_crossing += 1
        return self._next_crossing - 1

    def new_component_id(self) -> int:
        self._next_comp += 1
        return self._next_comp - 1

    def add_crossing(self, cid: int, slots: list[int], over_slots: tuple[int, int]) -> None:
        self.slots[cid] = slots
        self.over[cid] = over_slots

    def add_edge(self, eid: int, ends: list[End], origin: int | None, comp: int) -> None:
        self.ends[eid] = [tuple(x) for x in ends]
        self.origin[eid] = origin
        self.comp[eid] = comp
        for c, s in ends:
            self.slots[c][s] = eid

    def remove_edge(self, eid: int) -> None:
        del self.ends[eid], self.origin[eid], self.comp[eid]

    def remove_crossing(self, cid: int) -> None:
        del self.slots[cid], self.over[cid]

    def reattach(self, eid: int, old_end: End, new_end: End) -> None:
        ends = self.ends[eid]
        ends[ends.index(tuple(old_end))] = tuple(new_end)
        c, s = new_end
        self.slots[c][s] = eid

    def weld(self, c: int, s1: int, s2: int) -> int | None:
        """Join the two edges entering crossing ``c`` at slots s1, s2 into
        one arc that no longer touches c (the crossing is being removed).
        Returns the surviving edge id, or None when the strand closed up
        into a crossing-free loop."""
        e1, e2 = self.slots[c][s1], self.slots[c][s2]
        if e1 == e2:
            # both ends of one edge at the removed crossing: a free loop
            comp = self.comp[e1]
            origin_id = e1
            self.remove_edge(e1)
            self.loops[origin_id] = comp
            return None
        far1 = self._far_end(e1, (c, s1))
        far2 = self._far_end(e2, (c, s2))
        keep, drop = (e1, e2) if e1 < e2 else (e2, e1)
        comp = self.comp[e1]
        origin = self.origin[e1] if self.origin[e1] == self.origin[e2] else None
        self.remove_edge(e1)
        self.remove_edge(e2)
        self.add_edge(keep, [far1, far2], origin, comp)
        return keep

    def _far_end(self, eid: int, end: End) -> End:
        a, b = self.ends[eid]
        return tuple(b) if tuple(a) == tuple(end) else tuple(a)

    def build(self, reassign_components: bool = False) -> Diagram:
        crossings = {
            c: Crossing(c, tuple(slots), self.over[c]) for c, slots in self.slots.items()
        }
        edges = {
            e: Edge(e, (tuple(ends[0]), tuple(ends[1])), self.origin[e], self.comp[e])
            for e, ends in self.ends.items()
        }
        d = Diagram(crossings, edges, dict(self.loops), self.augmenting)
        if reassign_components:
            d = _assign_components(d)
        return d


def flip_crossing(d: Diagram, c: int) -> Diagram:
    """Toggle which strand passes over at crossing ``c``."""
    if c not in d.crossings:
        raise UnknownCrossing(f"no crossing {c}")
    cur = d.crossings[c]
    flipped = Crossing(c, cur.slots, (1, 3) if cur.over_slots == (0, 2) else (0, 2))
    crossings = dict(d.crossings)
    crossings[c] = flipped
    return Diagram(crossings, d.edges, d.loops, d.augmenting_component)


def subdivide_edge_with_crossing(
    d: Diagram,
    e: int,
    e_sign: Sign,
    new_component: int | None = None,
) -> Diagram:
    """Insert one transverse crossing on edge ``e``.

    The edge splits into two halves sharing the new crossing, both
    inheriting the origin of ``e``; the strand of ``e`` carries
    ``e_sign`` there and the crossing strand the negation.  The crossing
    strand is a one-edge closed loop through the new crossing, labeled
    ``new_component`` (fresh when omitted).

    Parity caveat: a closed curve meets a closed strand an even number
    of times in the sphere, so a diagram with a lone transversal loop
    crossing fails the Euler check until further crossings of the same
    inserted strand even the count out (``overlay_unlink`` inserts whole
    curves at once for exactly this reason).  Everything local -- labels,
    origins, V+1/E+2 -- behaves as for one step of a curve insertion."""
    if e not in d.edges:
        raise UnknownEdge(f"no edge {e}")
    b = MapBuilder(d)
    rec = d.edges[e]
    x = b.new_crossing_id()
    h0, h1 = b.new_edge_id(), b.new_edge_id()
    loop_edge = b.new_edge_id()
    comp = new_component if new_component is not None else b.new_component_id()
    over = (1, 3) if e_sign is Sign.MINUS else (0, 2)
    b.remove_edge(e)
    b.add_crossing(x, [0, 0, 0, 0], over)
    b.add_edge(h0, [tuple(rec.ends[0]), (x, 0)], rec.origin, rec.component)
    b.add_edge(h1, [(x, 2), tuple(rec.ends[1])], rec.origin, rec.component)
    b.add_edge(loop_edge, [(x, 1), (x, 3)], None, comp)
    return b.build()


def drop_component(d: Diagram, comp: int) -> Diagram:
    """Remove one link component, fusing the strands it crossed.

    Sub-edges welded back together must share an origin id; the fused
    edge takes that origin as its id, so dropping an augmenting curve
    reconstructs the original diagram verbatim."""
    from .errors import MappingError

    b = MapBuilder(d)
    comp_edges = sorted(e for e, c in b.comp.items() if c == comp)
    hit = sorted(
        c for c, slots in b.slots.items()
        if any(b.comp[e] == comp for e in slots)
    )
    def weld_checked(c: int, s1: int, s2: int) -> None:
        o1, o2 = b.origin[b.slots[c][s1]], b.origin[b.slots[c][s2]]
        if o1 != o2:
            raise MappingError(
                f"strand through crossing {c} mixes origins {o1} and {o2}"
            )
        b.weld(c, s1, s2)

    for c in hit:
        slots = b.slots[c]
        on = [b.comp[slots[s]] == comp for s in range(4)]
        if all(on):
            for s in (0, 1):
                if slots[s] in b.ends:
                    weld_checked(c, s, s + 2)
        elif on[0] and on[2] and not (on[1] or on[3]):
            weld_checked(c, 1, 3)
        elif on[1] and on[3] and not (on[0] or on[2]):
            weld_checked(c, 0, 2)
        else:
            raise MappingError(f"crossing {c} mixes component {comp} within a strand")
        b.remove_crossing(c)
    for e in comp_edges:
        if e in b.ends:
            b.remove_edge(e)
    for k in [k for k, cc in b.loops.items() if cc == comp]:
        del b.loops[k]
    # rename fused arcs back to their origin ids
    renames = {}
    for e in sorted(b.ends):
        o = b.origin[e]
        if o is not None and o != e:
            if o in b.ends or o in renames.values():
                raise MappingError(f"origin id {o} already taken while fusing edge {e}")
            renames[e] = o
    for e, o in renames.items():
        ends, origin, compid = b.ends[e], b.origin[e], b.comp[e]
        b.remove_edge(e)
        b.add_edge(o, ends, origin, compid)
    out = b.build(reassign_components=True)
    return Diagram(out.crossings, out.edges, out.loops, None)
