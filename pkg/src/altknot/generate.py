"""Random diagram generation via braid closures.

Braid closures are planar by construction, so they make a cheap corpus
generator: draw a word, close it, flip some crossings to break
alternation, reduce, and keep the result when it satisfies the
augmentation preconditions (connected, reduced, R2-reduced, prime,
non-alternating, single component).
"""

from __future__ import annotations

import random

from .analysis import classify_edges, diagram_flags
from .diagram import Crossing, Diagram, Edge, _assign_components, flip_crossing
from .errors import PDSyntaxError, RetryExhausted
from .reduction import preprocess


def braid_closure(word: list[int], strands: int | None = None) -> Diagram:
    """Close a braid word to a diagram.

    Letters are nonzero integers: +i crosses strands i and i+1 with the
    left strand passing under, -i with it passing over.  Unused strands
    close into crossing-free loops.
    """
    if not word or any(x == 0 for x in word):
        raise PDSyntaxError("braid word must be nonempty with nonzero letters")
    width = max(abs(x) for x in word) + 1
    if strands is not None:
        if strands < width:
            raise PDSyntaxError(f"braid needs at least {width} strands")
        width = strands

    next_edge = width + 1
    pos = list(range(1, width + 1))  # current edge id on each strand position
    first = list(pos)
    crossings: dict[int, Crossing] = {}
    uses: dict[int, list[tuple[int, int]]] = {}

    def put(eid: int, cid: int, slot: int) -> None:
        uses.setdefault(eid, []).append((cid, slot))

    for k, letter in enumerate(word):
        i = abs(letter) - 1  # 0-based left position
        left_in, right_in = pos[i], pos[i + 1]
        out_left, out_right = next_edge, next_edge + 1
        next_edge += 2
        cid = len(crossings)
        if letter > 0:
            # under strand runs NW -> SE; slots ccw: (u_in, o_out, u_out, o_in)
            slots = (left_in, out_left, out_right, right_in)
        else:
            # under strand runs NE -> SW; slots ccw: (ne_in, nw_in, sw_out, se_out)
            slots = (right_in, left_in, out_left, out_right)
        crossings[cid] = Crossing(cid, slots, over_slots=(1, 3))
        for s, e in enumerate(slots):
            put(e, cid, s)
        pos[i], pos[i + 1] = out_left, out_right

    # close each strand position: identify the final edge with the first
    rename: dict[int, int] = {}
    for j in range(width):
        a, b = first[j], pos[j]
        if a != b:
            rename[b] = a

    def resolve(e: int) -> int:
        while e in rename:
            e = rename[e]
        return e

    merged_uses: dict[int, list[tuple[int, int]]] = {}
    for e, ends in uses.items():
        merged_uses.setdefault(resolve(e), []).extend(ends)
    fixed = {}
    for cid, c in crossings.items():
        fixed[cid] = Crossing(cid, tuple(resolve(e) for e in c.slots), c.over_slots)

    edges = {}
    loops = {}
    for e, ends in merged_uses.items():
        if len(ends) != 2:
            raise PDSyntaxError(f"braid closure wiring error at edge {e}")
        edges[e] = Edge(e, (ends[0], ends[1]), origin=e, component=-1)
    for j in range(width):
        if first[j] == pos[j] and first[j] not in merged_uses:
            loops[first[j]] = -1  # strand never crossed: free loop
    return _assign_components(Diagram(fixed, edges, loops))


def two_strand_torus(n: int) -> Diagram:
    """Standard diagram of the closed two-strand braid with n crossings."""
    return braid_closure([1] * n, strands=2)


def random_knot_diagram(
    seed: int,
    n_letters: int,
    flips: int,
    max_tries: int = 1000,
    max_crossings: int | None = None,
):
    """Deterministically draw a connected, reduced, R2-reduced, prime,
    non-alternating knot diagram.

    Draws braid words on 3-5 strands, keeps single-component closures,
    flips ``flips`` random crossings, reduces, and retries until the
    result qualifies.  Returns (diagram, trace) of the qualifying draw.
    """
    if n_letters < 1:
        raise PDSyntaxError("need at least one braid letter")
    rng = random.Random(seed)
    for _ in range(max_tries):
        strands = rng.randint(3, 5)
        gens = list(range(1, strands)) + [-i for i in range(1, strands)]
        word = [rng.choice(gens) for _ in range(n_letters)]
        d = braid_closure(word, strands=strands)
        if d.loops or len(d.components()) != 1 or not d.crossings:
            continue
        for _ in range(flips):
            d = flip_crossing(d, rng.choice(sorted(d.crossings)))
        d, trace = preprocess(d)
        if d.loops or not d.crossings or len(d.components()) != 1:
            continue
        if max_crossings is not None and len(d.crossings) > max_crossings:
            continue
        flags = diagram_flags(d)
        cls = classify_edges(d)
        if (
            flags.connected
            and flags.reduced
            and flags.r2_reduced
            and flags.prime
            and cls.is_non_alternating
        ):
            return d, trace
    raise RetryExhausted(
        f"no qualifying diagram in {max_tries} draws (seed={seed}, "
        f"letters={n_letters}, flips={flips})"
    )
