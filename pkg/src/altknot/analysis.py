"""Diagram predicates and statistics.

Everything the rest of the package reasons with lives here: which edges
alternate, the checkerboard shading and the two crossing classes it
induces, bigons and twist regions with their topology, reducedness /
R2-reducedness / primality flags, detection of the standard two-strand
torus diagram, and the partition-refinement check comparing a diagram's
twist regions with those of an augmentation containing it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .diagram import (
    Diagram,
    Face,
    FaceSet,
    Sign,
    drop_component,
    face_set,
    is_connected,
    piece_count,
    same_map,
    validate_diagram,
)
from .errors import (
    InvariantError,
    MappingError,
    NotConnected,
    SigmaMismatch,
)


# -- edge classification --------------------------------------------------------

@dataclass(frozen=True)
class EdgeClassification:
    alternating: frozenset[int]
    non_alternating: frozenset[int]
    is_alternating: bool
    is_non_alternating: bool


def classify_edges(d: Diagram) -> EdgeClassification:
    """Split edges by whether their two end labels differ.

    A diagram is alternating when every edge is (a bare loop counts as
    alternating); it is non-alternating when at least one edge is not.
    """
    alt, non = set(), set()
    for e in d.edges:
        a, b = d.edge_labels(e)
        (alt if a != b else non).add(e)
    has_strands = bool(d.crossings) or bool(d.loops)
    return EdgeClassification(
        alternating=frozenset(alt),
        non_alternating=frozenset(non),
        is_alternating=not non and has_strands,
        is_non_alternating=bool(non),
    )


# -- checkerboard shading and crossing classes ------------------------------------

@dataclass(frozen=True)
class ShadingClasses:
    """Proper 2-coloring of the faces plus the two induced crossing
    classes: a crossing is in ``plus_class`` when rotating its over
    strand a quarter turn counterclockwise sweeps shaded quadrants."""

    shading: dict[int, bool]  # face id -> shaded
    plus_class: frozenset[int]
    minus_class: frozenset[int]

    def class_of(self, c: int) -> Sign:
        return Sign.PLUS if c in self.plus_class else Sign.MINUS


def shading_classes(d: Diagram, fs: FaceSet | None = None) -> ShadingClasses:
    """Checkerboard-color the faces and classify the crossings.

    Seeded by leaving the face on the left of the lowest-id edge
    unshaded.  Cross-checked: the edges joining the two classes must be
    exactly the non-alternating edges (SigmaMismatch otherwise, which
    would mean a core bug).
    """
    if not d.crossings:
        raise NotConnected("shading classes need at least one crossing")
    if not is_connected(d):
        raise NotConnected("diagram is not connected")
    fs = fs or face_set(d)

    lowest = min(d.edges)
    seed = fs.edge_sides(d, lowest)[0]
    shading = {seed: False}
    stack = [seed]
    adj: dict[int, list[int]] = {}
    for e in d.edges:
        l, r = fs.edge_sides(d, e)
        adj.setdefault(l, []).append(r)
        adj.setdefault(r, []).append(l)
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in shading:
                shading[g] = not shading[f]
                stack.append(g)
            elif shading[g] == shading[f]:
                raise SigmaMismatch("face adjacency is not 2-colorable")

    plus, minus = set(), set()
    for cid, c in d.crossings.items():
        p = c.over_slots[0]
        quadrant_face = fs.face_of_corner(cid, p)
        (plus if shading[quadrant_face] else minus).add(cid)

    out = ShadingClasses(shading, frozenset(plus), frozenset(minus))
    cross = {
        e for e, rec in d.edges.items()
        if (rec.ends[0][0] in plus) != (rec.ends[1][0] in plus)
    }
    if cross != set(classify_edges(d).non_alternating):
        raise SigmaMismatch(
            "cross-class edges differ from the non-alternating edges"
        )
    return out


# -- twist regions ----------------------------------------------------------------

class RegionTopology(Enum):
    DISK = "disk"
    ANNULUS = "annulus"
    SPHERE = "sphere"


@dataclass(frozen=True)
class TwistRegion:
    """Maximal chain of bigons (or a lone crossing).  ``links`` records
    the retract graph on the bigons: one entry per crossing shared by
    exactly two of them."""

    crossings: frozenset[int]
    bigons: tuple[int, ...]
    links: tuple[tuple[int, int, int], ...]  # (bigon face, bigon face, crossing)
    topology: RegionTopology


@dataclass(frozen=True)
class TwistPartition:
    bigon_faces: frozenset[int]
    regions: tuple[TwistRegion, ...]
    t: int

    def region_of(self, crossing: int) -> TwistRegion:
        for r in self.regions:
            if crossing in r.crossings:
                return r
        raise KeyError(crossing)


def _region_topology(d: Diagram, fs: FaceSet, bigons: list[Face]) -> RegionTopology:
    if not bigons:
        return RegionTopology.DISK
    vs: set[int] = set()
    es: set[int] = set()
    for f in bigons:
        vs |= f.crossings()
        es |= set(f.boundary_edges)
    chi = len(vs) - len(es) + len(bigons)
    if chi == 1:
        return RegionTopology.DISK
    if chi == 0:
        return RegionTopology.ANNULUS
    if chi == 2:
        return RegionTopology.SPHERE
    raise InvariantError(f"twist region with Euler characteristic {chi}")


def twist_partition(d: Diagram, fs: FaceSet | None = None) -> TwistPartition:
    """Bigon faces, the regions they chain into, and the twist count t.

    Every crossing lies in exactly one region: crossings incident to no
    bigon form singleton regions.
    """
    fs = fs or face_set(d)
    bigons = [f for f in fs.faces if f.is_bigon]
    parent = {f.id: f.id for f in bigons}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_crossing: dict[int, list[Face]] = {}
    for f in bigons:
        for c in f.crossings():
            by_crossing.setdefault(c, []).append(f)
    for c, fl in by_crossing.items():
        for other in fl[1:]:
            parent[find(other.id)] = find(fl[0].id)

    grouped: dict[int, list[Face]] = {}
    for f in bigons:
        grouped.setdefault(find(f.id), []).append(f)

    regions = []
    for fl in grouped.values():
        crossings = frozenset().union(*(f.crossings() for f in fl))
        links = []
        for c, shared in sorted(by_crossing.items()):
            here = [f for f in shared if f in fl]
            if len(here) == 2:
                a, b = sorted(f.id for f in here)
                links.append((a, b, c))
        regions.append(
            TwistRegion(
                crossings,
                tuple(sorted(f.id for f in fl)),
                tuple(links),
                _region_topology(d, fs, fl),
            )
        )
    in_bigon = set(by_crossing)
    for c in sorted(d.crossings):
        if c not in in_bigon:
            regions.append(TwistRegion(frozenset([c]), (), (), RegionTopology.DISK))
    regions.sort(key=lambda r: min(r.crossings))
    return TwistPartition(
        frozenset(f.id for f in bigons), tuple(regions), len(regions)
    )


def twist_region_topology(d: Diagram, region: TwistRegion) -> TwistRegion:
    """Re-derive a region's topology and, for connected R2-reduced
    diagrams, enforce that a non-disk region forces the standard
    two-strand torus diagram."""
    fs = face_set(d)
    bigons = [fs.by_id[fid] for fid in region.bigons]
    topo = _region_topology(d, fs, bigons)
    out = TwistRegion(region.crossings, region.bigons, region.links, topo)
    if topo is not RegionTopology.DISK:
        flags = diagram_flags(d)
        if flags.connected and flags.r2_reduced:
            if detect_two_strand_torus(d) is None:
                raise InvariantError(
                    "non-disk twist region in a connected R2-reduced diagram "
                    "that is not the standard two-strand torus diagram"
                )
    return out


# -- flags: connected / reduced / R2-reduced / prime -------------------------------

@dataclass(frozen=True)
class PrimalityWitness:
    kind: str  # prime | cut_pair | cut_vertex | disconnected | trivial
    edges: tuple[int, int] | None = None
    sides: tuple[int, int] | None = None
    crossing: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "edges": list(self.edges) if self.edges else None,
            "sides": list(self.sides) if self.sides else None,
            "crossing": self.crossing,
        }


@dataclass(frozen=True)
class DiagramFlags:
    connected: bool
    reduced: bool
    r2_reduced: bool
    prime: bool
    witness: PrimalityWitness


def cut_vertices(d: Diagram) -> list[int]:
    """Crossings whose removal disconnects the diagram as a subset of the
    sphere.  The four strand stubs at the crossing are kept as separate
    points, so a kink crossing is a cut vertex even though the abstract
    multigraph would not notice."""
    out = []
    for c in sorted(d.crossings):
        nodes: dict[object, object] = {}

        def find(x):
            while nodes[x] != x:
                nodes[x] = nodes[nodes[x]]
                x = nodes[x]
            return x

        def union(a, b):
            nodes.setdefault(a, a)
            nodes.setdefault(b, b)
            nodes[find(a)] = find(b)

        for s in range(4):
            nodes[("stub", s)] = ("stub", s)
        for e, rec in d.edges.items():
            pts = [
                ("stub", s) if cid == c else ("x", cid) for cid, s in rec.ends
            ]
            union(pts[0], pts[1])
        roots = {find(("stub", s)) for s in range(4)}
        if len(roots) > 1:
            out.append(c)
    return out


def _two_edge_cut(d: Diagram, fs: FaceSet) -> tuple[int, int] | None:
    """Lowest pair of distinct edges bounding the same pair of faces.
    In a bridgeless planar map these are exactly the two-edge cuts."""
    seen: dict[frozenset[int], int] = {}
    for e in sorted(d.edges):
        key = fs.faces_of_edge(d, e)
        if len(key) == 1:
            raise InvariantError(f"edge {e} borders one face on both sides")
        if key in seen:
            return (seen[key], e)
        seen[key] = e
    return None


def _cut_sides(d: Diagram, pair: tuple[int, int]) -> tuple[int, int]:
    """Crossing counts of the two pieces left after removing the pair."""
    banned = set(pair)
    seen: set[int] = set()
    sides = []
    for start in sorted(d.crossings):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        n = 0
        while stack:
            c = stack.pop()
            n += 1
            for e in d.crossings[c].slots:
                if e in banned:
                    continue
                for c2, _s in d.edges[e].ends:
                    if c2 not in seen:
                        seen.add(c2)
                        stack.append(c2)
        sides.append(n)
    if len(sides) != 2:
        raise InvariantError(f"edge pair {pair} does not split into two sides")
    return (sides[0], sides[1])


def diagram_flags(d: Diagram, fs: FaceSet | None = None) -> DiagramFlags:
    """Connectivity, reducedness, R2-reducedness and diagram primality.

    Primality uses the dual reading of the separating-curve definition:
    a simple closed curve meeting the diagram in two edge points exists
    exactly when two edges border the same pair of faces.
    """
    fs = fs or face_set(d)
    connected = piece_count(d) == 1
    cuts = cut_vertices(d)
    reduced = not cuts

    r2_reduced = True
    for f in fs.faces:
        if f.is_bigon:
            e = f.boundary_edges[0]
            a, b = d.edge_labels(e)
            if a == b:
                r2_reduced = False
                break

    if not connected:
        witness = PrimalityWitness("disconnected")
        prime = False
    elif not d.crossings:
        # a crossing-free diagram presents an unknot, which is not prime
        witness = PrimalityWitness("trivial")
        prime = False
    else:
        pair = _two_edge_cut(d, fs) if len(d.crossings) >= 2 else None
        if pair is None:
            witness = PrimalityWitness("prime")
            prime = True
        else:
            prime = False
            if cuts:
                witness = PrimalityWitness("cut_vertex", crossing=cuts[0])
            else:
                witness = PrimalityWitness("cut_pair", edges=pair, sides=_cut_sides(d, pair))
    return DiagramFlags(connected, reduced, r2_reduced, prime, witness)


# -- standard two-strand torus diagram ----------------------------------------------

def detect_two_strand_torus(d: Diagram) -> int | None:
    """Return q when the map is the standard diagram of two parallel
    strands with q >= 2 crossings (q crossings in a single cyclic chain
    of q bigons), else None.  Purely combinatorial: labels play no role.
    """
    if d.loops or not d.crossings or not is_connected(d):
        return None
    q = len(d.crossings)
    if q < 2:
        return None
    fs = face_set(d)
    tp = twist_partition(d, fs)
    if tp.t != 1:
        return None
    region = tp.regions[0]
    if region.topology is RegionTopology.SPHERE:
        return 2
    if region.topology is not RegionTopology.ANNULUS:
        return None
    if len(region.bigons) != q:
        return None
    covered = set()
    for fid in region.bigons:
        covered |= set(fs.by_id[fid].boundary_edges)
    if covered != set(d.edges):
        return None
    return q


# -- refinement of twist partitions ---------------------------------------------------

@dataclass(frozen=True)
class RefinementReport:
    P: tuple[frozenset[int], ...]
    P_prime: tuple[frozenset[int], ...]
    refines: bool
    sizes: tuple[int, int, int]  # |P|, |P'|, t of the ambient diagram
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "P": [sorted(x) for x in self.P],
            "P_prime": [sorted(x) for x in self.P_prime],
            "refines": self.refines,
            "sizes": list(self.sizes),
            "failures": list(self.failures),
        }


def _is_sub_twist(x: frozenset[int], region: TwistRegion, fs: FaceSet) -> bool:
    """x qualifies as a sub twist region of ``region``: one crossing, or
    the corner set of a connected subcollection of the region's bigons."""
    if len(x) == 1:
        return True
    inside = [
        fid for fid in region.bigons if fs.by_id[fid].crossings() <= x
    ]
    if not inside:
        return False
    covered = frozenset().union(*(fs.by_id[f].crossings() for f in inside))
    if covered != x:
        return False
    # connectivity of the chosen bigons inside the retract
    chosen = set(inside)
    adj: dict[int, set[int]] = {f: set() for f in chosen}
    for a, b, _c in region.links:
        if a in chosen and b in chosen:
            adj[a].add(b)
            adj[b].add(a)
    seen = {inside[0]}
    stack = [inside[0]]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return seen == chosen


def _verify_refinement(
    p: list[frozenset[int]],
    p_prime: list[frozenset[int]],
    d_partition: TwistPartition,
    d_faces: FaceSet,
    t_ambient: int,
) -> RefinementReport:
    failures = []
    flat: list[int] = []
    for x in p_prime:
        flat.extend(x)
    if len(flat) != len(set(flat)):
        failures.append("distinct parts intersect")
    all_d = frozenset().union(*p) if p else frozenset()
    if frozenset(flat) != all_d:
        failures.append("parts do not cover every crossing")
    for x in p_prime:
        hosts = [y for y in p if x <= y]
        if not hosts:
            failures.append(f"part {sorted(x)} fits inside no twist region")
            continue
        region = d_partition.region_of(min(x))
        if not _is_sub_twist(x, region, d_faces):
            failures.append(f"part {sorted(x)} is not a sub twist region")
    refines = not failures
    if refines and not (len(p) <= len(p_prime) <= t_ambient):
        failures.append("size chain |P| <= |P'| <= t violated")
        refines = False
    return RefinementReport(
        tuple(p), tuple(p_prime), refines,
        (len(p), len(p_prime), t_ambient), tuple(failures),
    )


def refinement_check(
    g: Diagram,
    augmenting: int | None = None,
    expected_d: Diagram | None = None,
) -> RefinementReport:
    """Compare the twist partition of the diagram reconstructed from the
    origin-labeled edges of ``g`` with the partition its crossings
    inherit from the twist regions of ``g``.

    The inherited partition must refine the reconstructed one: parts are
    pairwise disjoint, each is a sub twist region, and together they
    cover every reconstructed crossing.
    """
    aug = augmenting if augmenting is not None else g.augmenting_component
    if aug is None:
        d = g
    else:
        d = drop_component(g, aug)
        if expected_d is not None:
            from .diagram import _assign_components

            want = _assign_components(expected_d)
            if not same_map(_assign_components(d), want, check_origins=False):
                raise MappingError("reconstructed diagram differs from the expected one")
    d_fs = face_set(d)
    d_tp = twist_partition(d, d_fs)
    p = [r.crossings for r in d_tp.regions]

    g_tp = twist_partition(g)
    d_crossings = set(d.crossings)
    if not d_crossings <= set(g.crossings):
        raise MappingError("reconstructed crossings are not a subset of the ambient ones")
    p_prime = []
    for r in g_tp.regions:
        x = frozenset(r.crossings & d_crossings)
        if x:
            p_prime.append(x)
    return _verify_refinement(p, p_prime, d_tp, d_fs, g_tp.t)


# -- aggregate report ------------------------------------------------------------------

def analysis_report(d: Diagram) -> dict:
    """JSON-ready summary used by the CLI ``analyze`` command."""
    fs = face_set(d)
    cls = classify_edges(d)
    flags = diagram_flags(d, fs)
    tp = twist_partition(d, fs)
    rep = validate_diagram(d)
    return {
        "valid": rep.valid,
        "v": rep.v,
        "e": rep.e,
        "f": rep.f,
        "components": rep.components,
        "alternating": cls.is_alternating,
        "non_alternating_edges": sorted(cls.non_alternating),
        "connected": flags.connected,
        "reduced": flags.reduced,
        "r2_reduced": flags.r2_reduced,
        "prime": flags.prime,
        "primality_witness": flags.witness.to_json(),
        "t": tp.t,
        "twist_regions": [
            {
                "crossings": sorted(r.crossings),
                "bigons": list(r.bigons),
                "topology": r.topology.value,
            }
            for r in tp.regions
        ],
        "torus_2q": detect_two_strand_torus(d),
    }
