"""Reduce diagrams to the form the augmentation pipeline requires.

Two moves, both link-type preserving: untwisting a nugatory crossing
(a cut vertex of the projection) and removing a bigon whose two edges
are non-alternating via a Reidemeister II move.  ``preprocess`` applies
them lowest-id-first until neither fires; the result is reduced and
R2-reduced, with crossing count strictly decreasing along the way and
the twist count never increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import cut_vertices, twist_partition
from .diagram import Diagram, MapBuilder, face_set, validate_diagram
from .errors import (
    InvariantError,
    NotNugatory,
    NotR2Bigon,
    ReductionInvariantError,
    UnknownCrossing,
    UnknownFace,
)


@dataclass
class ReductionStep:
    kind: str  # "nugatory" | "r2"
    crossings_removed: tuple[int, ...]
    crossings_after: int
    t_after: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "crossings_removed": list(self.crossings_removed),
            "crossings_after": self.crossings_after,
            "t_after": self.t_after,
        }


@dataclass
class ReductionTrace:
    steps: list[ReductionStep] = field(default_factory=list)
    crossings_before: int = 0
    crossings_after: int = 0
    t_before: int = 0
    t_after: int = 0

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "crossings_before": self.crossings_before,
            "crossings_after": self.crossings_after,
            "t_before": self.t_before,
            "t_after": self.t_after,
        }


def remove_nugatory_crossing(d: Diagram, c: int) -> Diagram:
    """Delete cut-vertex crossing ``c``, rejoining each strand through it
    directly.  Geometrically this rotates one side half a turn, so the
    link type survives; V drops by one."""
    if c not in d.crossings:
        raise UnknownCrossing(f"no crossing {c}")
    if c not in cut_vertices(d):
        raise NotNugatory(f"crossing {c} is not a cut vertex")
    b = MapBuilder(d)
    b.weld(c, 0, 2)
    b.weld(c, 1, 3)
    b.remove_crossing(c)
    out = b.build()
    rep = validate_diagram(out)
    if not rep.valid:
        raise InvariantError(f"nugatory removal broke the map: {rep.failures}")
    return out


def remove_r2_bigon(d: Diagram, f: int) -> Diagram:
    """Remove the bigon face ``f`` when its two edges are non-alternating
    (one ++, one --): delete both crossings and rejoin the four outer
    strand ends in parallel.  Clasps (alternating edges) are refused."""
    fs = face_set(d)
    if f not in fs.by_id:
        raise UnknownFace(f"no face {f}")
    face = fs.by_id[f]
    if not face.is_bigon:
        raise NotR2Bigon(f"face {f} is not a bigon")
    e1, e2 = face.boundary_edges
    l1, l2 = d.edge_labels(e1), d.edge_labels(e2)
    if l1[0] != l1[1] or l2[0] != l2[1] or l1[0] == l2[0]:
        raise NotR2Bigon(f"bigon {f} is a clasp; its edges alternate")

    x, y = sorted(face.crossings())
    b = MapBuilder(d)
    for inner in (e1, e2):
        sx = [s for s, e in enumerate(d.crossings[x].slots) if e == inner]
        sy = [s for s, e in enumerate(d.crossings[y].slots) if e == inner]
        if len(sx) != 1 or len(sy) != 1:
            raise NotR2Bigon(f"bigon {f} edges are not simple between two crossings")
    # weld each strand across the pair: for the strand carrying ``inner``,
    # the outer stubs sit opposite it at x and at y
    for inner in (e1, e2):
        if inner not in b.ends:
            continue
        sx = d.crossings[x].slots.index(inner)
        sy = d.crossings[y].slots.index(inner)
        # remove the inner edge first so the welds see only outer arcs
        b.remove_edge(inner)
        ex = b.slots[x][(sx + 2) % 4]
        ey = b.slots[y][(sy + 2) % 4]
        if ex == ey:
            comp = b.comp[ex]
            b.remove_edge(ex)
            b.loops[ex] = comp
        else:
            keep, drop = (ex, ey) if ex < ey else (ey, ex)
            fx = b._far_end(ex, (x, (sx + 2) % 4))
            fy = b._far_end(ey, (y, (sy + 2) % 4))
            comp = b.comp[ex]
            origin = b.origin[ex] if b.origin[ex] == b.origin[ey] else None
            b.remove_edge(ex)
            b.remove_edge(ey)
            b.add_edge(keep, [fx, fy], origin, comp)
    b.remove_crossing(x)
    b.remove_crossing(y)
    out = b.build()
    rep = validate_diagram(out)
    if not rep.valid:
        raise InvariantError(f"R2 removal broke the map: {rep.failures}")
    return out


def _r2_bigon_ids(d: Diagram) -> list[int]:
    fs = face_set(d)
    out = []
    for f in fs.faces:
        if f.is_bigon:
            a, b = d.edge_labels(f.boundary_edges[0])
            if a == b:
                out.append(f.id)
    return out


def preprocess(d: Diagram) -> tuple[Diagram, ReductionTrace]:
    """Apply nugatory and R2 removals (lowest id first, nugatory first)
    until neither applies.  The fixpoint is reduced and R2-reduced; every
    edge of the result is re-stamped as its own origin."""
    trace = ReductionTrace(
        crossings_before=len(d.crossings),
        t_before=twist_partition(d).t,
    )
    t_prev = trace.t_before
    cur = d
    while True:
        cuts = cut_vertices(cur)
        if cuts:
            c = cuts[0]
            cur = remove_nugatory_crossing(cur, c)
            kind, removed = "nugatory", (c,)
        else:
            bigons = _r2_bigon_ids(cur)
            if not bigons:
                break
            f = bigons[0]
            removed_set = face_set(cur).by_id[f].crossings()
            cur = remove_r2_bigon(cur, f)
            kind, removed = "r2", tuple(sorted(removed_set))
        t_now = twist_partition(cur).t
        trace.steps.append(ReductionStep(kind, removed, len(cur.crossings), t_now))
        if t_now > t_prev:
            raise ReductionInvariantError(
                f"{kind} removal raised the twist count {t_prev} -> {t_now}"
            )
        t_prev = t_now
    trace.crossings_after = len(cur.crossings)
    trace.t_after = t_prev
    cur = _restamp_origins(cur)
    return cur, trace


def _restamp_origins(d: Diagram) -> Diagram:
    from .diagram import Edge

    edges = {
        e: Edge(e, rec.ends, e, rec.component) for e, rec in d.edges.items()
    }
    return Diagram(d.crossings, edges, d.loops, d.augmenting_component)
