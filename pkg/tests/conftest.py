"""Shared fixtures and independent oracles.

The oracles re-derive facts from the PD text or by brute force, without
touching the package's analysis code paths, so tests compare two
genuinely different computations.
"""

from __future__ import annotations

import re

import pytest

from altknot import parse_pd
from altknot.generate import braid_closure, random_knot_diagram, two_strand_torus

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
KINK_UNKNOT = "X(1,1,2,2)"
# single-component two-crossing diagram with one R2 bigon (edges 1,3)
CURL = "X(4,1,3,4) X(2,2,3,1)"
# two trefoils spliced along edges 1 and 7
GRANNY_SUM = (
    "X(1,4,2,5) X(3,6,4,7) X(5,2,6,3) "
    "X(7,10,8,11) X(9,12,10,1) X(11,8,12,9)"
)


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL)


@pytest.fixture
def kink_unknot():
    return parse_pd(KINK_UNKNOT)


@pytest.fixture
def curl():
    return parse_pd(CURL)


@pytest.fixture
def granny_sum():
    return parse_pd(GRANNY_SUM)


@pytest.fixture
def hopf():
    return two_strand_torus(2)


@pytest.fixture
def fig8():
    return braid_closure([1, -2, 1, -2], strands=3)


@pytest.fixture
def borromean():
    return braid_closure([1, -2, 1, -2, 1, -2], strands=3)


def corpus_diagrams(n, start_seed=0, letters=(8, 10, 12, 14, 16), max_crossings=30):
    """Deterministic list of n qualifying random knot diagrams."""
    out = []
    seed = start_seed
    while len(out) < n:
        d, _ = random_knot_diagram(
            seed, letters[len(out) % len(letters)], 1 + seed % 3,
            max_crossings=max_crossings,
        )
        out.append((seed, d))
        seed += 1
    return out


# -- oracles ----------------------------------------------------------------------

def oracle_labels_from_pd(text: str) -> dict[int, list[str]]:
    """End labels straight from the record grammar: the under strand of
    X(a,b,c,d) is {a,c}, the over strand {b,d}."""
    labels: dict[int, list[str]] = {}
    for m in re.finditer(r"X\(([^()]*)\)", text):
        a, b, c, d = (int(x) for x in m.group(1).split(","))
        for e, lab in ((a, "-"), (c, "-"), (b, "+"), (d, "+")):
            labels.setdefault(e, []).append(lab)
    return labels


def oracle_alternating_edges(text: str) -> set[int]:
    return {
        e for e, labs in oracle_labels_from_pd(text).items()
        if sorted(labs) == ["+", "-"]
    }


def oracle_two_edge_cuts(d) -> list[tuple[int, int]]:
    """Exhaustive crossing-separating two-edge cuts: remove each pair of
    distinct edges and test connectivity of the crossing multigraph."""
    import itertools

    edges = sorted(d.edges)
    crossings = sorted(d.crossings)
    if len(crossings) < 2:
        return []
    cuts = []
    for e1, e2 in itertools.combinations(edges, 2):
        banned = {e1, e2}
        seen = {crossings[0]}
        stack = [crossings[0]]
        while stack:
            c = stack.pop()
            for e in d.crossings[c].slots:
                if e in banned:
                    continue
                for c2, _s in d.edges[e].ends:
                    if c2 not in seen:
                        seen.add(c2)
                        stack.append(c2)
        if len(seen) != len(crossings):
            cuts.append((e1, e2))
    return cuts


def oracle_cut_vertices(d) -> list[int]:
    """Stub-splitting reimplementation of projection cut vertices."""
    out = []
    for c in sorted(d.crossings):
        groups: list[set] = []
        for e, rec in d.edges.items():
            pts = {("s", s) if cid == c else ("c", cid) for cid, s in rec.ends}
            merged = [g for g in groups if g & pts]
            for g in merged:
                groups.remove(g)
                pts |= g
            groups.append(pts)
        stub_groups = {
            frozenset(x for x in g if x[0] == "s")
            for g in groups
            if any(x[0] == "s" for x in g)
        }
        if len(stub_groups) > 1:
            out.append(c)
    return out


def oracle_bigon_faces(d) -> list[frozenset[int]]:
    """Edge pairs bounding bigons, via the package's face walk but an
    independent filtering."""
    from altknot import faces

    out = []
    for f in faces(d):
        if f.loop is None and len(f.corners) == 2:
            cs = {c for c, _i, _o in f.corners}
            if len(cs) == 2:
                out.append(frozenset(f.boundary_edges))
    return out


def oracle_twist_count(d) -> int:
    """Union-find over crossings joined through bigons; independent of
    the package's TwistPartition construction."""
    from altknot import faces

    parent = {c: c for c in d.crossings}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in faces(d):
        if f.loop is None and len(f.corners) == 2:
            cs = sorted({c for c, _i, _o in f.corners})
            if len(cs) == 2:
                parent[find(cs[0])] = find(cs[1])
    return len({find(c) for c in d.crossings})
