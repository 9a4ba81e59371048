"""Multigraphs with edge multiplicities.

Automorphism groups are computed as stabilizer chains: level i stores one
witness automorphism per reachable image of vertex i among the maps fixing
0..i-1 pointwise.  The group order is the product of the transversal sizes,
so highly symmetric graphs (an edgeless graph on 12 vertices has order 12!)
never require element enumeration; `elements` stays available, capped.

Canonical certificates come from color refinement plus branch-and-bound over
the orderings that respect the refined classes, minimizing the column-major
upper-triangle encoding of the multiplicity matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceeded, InputError

ELEMENT_CAP = 10_000
CERTIFICATE_NODE_CAP = 2_000_000


@dataclass(frozen=True)
class Multigraph:
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.mult)
        for i, row in enumerate(self.mult):
            if len(row) != n:
                raise InputError("multiplicity matrix must be square")
            for j, m in enumerate(row):
                if not isinstance(m, int) or m < 0:
                    raise InputError("multiplicities must be nonnegative integers")
                if m != self.mult[j][i]:
                    raise InputError("multiplicity matrix must be symmetric")
            if row[i] != 0:
                raise InputError("multiplicity matrix must have zero diagonal")

    @property
    def n(self) -> int:
        return len(self.mult)

    @staticmethod
    def from_edges(n: int, edges) -> "Multigraph":
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        m = [[0] * n for _ in range(n)]
        for i, j, k in edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise InputError(f"bad edge ({i}, {j})")
            if m[i][j]:
                raise InputError(f"duplicate edge ({i}, {j})")
            m[i][j] = m[j][i] = int(k)
        return Multigraph(tuple(tuple(row) for row in m))

    def degree(self, v: int) -> int:
        return sum(self.mult[v])

    def relabel(self, perm) -> "Multigraph":
        n = self.n
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out[perm[i]][perm[j]] = self.mult[i][j]
        return Multigraph(tuple(tuple(row) for row in out))

    def induced(self, vertices) -> "Multigraph":
        vs = list(vertices)
        return Multigraph(
            tuple(tuple(self.mult[a][b] for b in vs) for a in vs)
        )


def color_refinement(graph: Multigraph, initial=None) -> tuple[int, ...]:
    """Stable vertex coloring refined by weighted neighborhood profiles.
    Color ids are canonical: isomorphic graphs get matching colors."""
    n = graph.n
    if initial is None:
        colors = [0] * n
    else:
        ranking = {c: i for i, c in enumerate(sorted(set(initial)))}
        colors = [ranking[c] for c in initial]
    while True:
        sigs = []
        for v in range(n):
            profile = sorted(
                (graph.mult[v][w], colors[w])
                for w in range(n)
                if graph.mult[v][w]
            )
            sigs.append((colors[v], tuple(profile)))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return tuple(colors)
        colors = new


def compose_perm(a, b) -> tuple[int, ...]:
    """a after b."""
    return tuple(a[b[i]] for i in range(len(a)))


def invert_perm(a) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class PermutationGroup:
    """Permutation group on {0..n-1} held as a stabilizer chain."""

    __slots__ = ("n", "levels")

    def __init__(self, n: int, levels):
        self.n = n
        self.levels = levels

    def order(self) -> int:
        total = 1
        for level in self.levels:
            total *= len(level)
        return total

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        ident = tuple(range(self.n))
        gens = sorted(
            {p for level in self.levels for p in level.values()} - {ident}
        )
        return tuple(gens) if gens else (ident,)

    def elements(self, cap: int | None = ELEMENT_CAP):
        if cap is not None and self.order() > cap:
            raise CapExceeded(
                f"group of order {self.order()} exceeds the cap of {cap}"
            )
        elems = [tuple(range(self.n))]
        for level in reversed(self.levels):
            elems = [
                compose_perm(t, e) for t in level.values() for e in elems
            ]
        return sorted(elems)

    def contains(self, perm) -> bool:
        perm = tuple(perm)
        if len(perm) != self.n:
            return False
        current = perm
        for i, level in enumerate(self.levels):
            w = current[i]
            if w not in level:
                return False
            current = compose_perm(invert_perm(level[w]), current)
        return current == tuple(range(self.n))


def _extend_automorphism(graph, colors, forced):
    """One automorphism consistent with the (vertex -> image) assignments in
    `forced`, or None.  Vertices are assigned in index order."""
    n = graph.n
    images = [-1] * n
    used = [False] * n
    for v, u in forced.items():
        if colors[v] != colors[u]:
            return None
        images[v] = u
        if used[u]:
            return None
        used[u] = True
    for v, u in forced.items():
        for w in forced:
            if graph.mult[v][w] != graph.mult[u][images[w]]:
                return None

    def extend(v: int):
        if v == n:
            return True
        if images[v] >= 0:
            return extend(v + 1)
        for u in range(n):
            if used[u] or colors[u] != colors[v]:
                continue
            ok = True
            for j in range(n):
                if images[j] >= 0 and graph.mult[v][j] != graph.mult[u][images[j]]:
                    ok = False
                    break
            if ok:
                images[v] = u
                used[u] = True
                if extend(v + 1):
                    return True
                images[v] = -1
                used[u] = False
        return False

    if extend(0):
        return tuple(images)
    return None


def graph_automorphism_group(graph: Multigraph) -> PermutationGroup:
    """The full automorphism group, with exact order."""
    n = graph.n
    colors = color_refinement(graph)
    levels = []
    prefix: dict[int, int] = {}
    for i in range(n):
        level = {}
        for w in range(n):
            if colors[w] != colors[i]:
                continue
            witness = _extend_automorphism(graph, colors, {**prefix, i: w})
            if witness is not None:
                level[w] = witness
        levels.append(level)
        prefix[i] = i
    return PermutationGroup(n, levels)


def canonical_certificate(
    graph: Multigraph, cap: int = CERTIFICATE_NODE_CAP
) -> str:
    """Isomorphism-invariant certificate: two multigraphs get equal strings
    exactly when they are isomorphic."""
    n = graph.n
    if n == 0:
        return "0|"
    colors = color_refinement(graph)
    classes: list[list[int]] = [[] for _ in range(max(colors) + 1)]
    for v, c in enumerate(colors):
        classes[c].append(v)
    slots = [c for c, cls in enumerate(classes) for _ in cls]

    best: list[int] | None = None
    enc: list[int] = []
    chosen: list[int] = []
    used = [False] * n
    nodes = 0

    def twins(u: int, v: int) -> bool:
        # the transposition (u v) is an automorphism, so only one of the
        # pair needs to be tried at any position
        row_u, row_v = graph.mult[u], graph.mult[v]
        return all(
            row_u[w] == row_v[w] for w in range(n) if w != u and w != v
        )

    def extend(pos: int, tight: bool):
        nonlocal best, nodes
        if pos == n:
            if best is None or enc < best:
                best = enc.copy()
            return
        tried: list[int] = []
        for v in classes[slots[pos]]:
            if used[v]:
                continue
            if any(twins(u, v) for u in tried):
                continue
            tried.append(v)
            nodes += 1
            if nodes > cap:
                raise CapExceeded("certificate search exceeded the node cap")
            col = [graph.mult[u][v] for u in chosen]
            branch_tight = tight
            if best is not None and tight:
                base = len(enc)
                ref = best[base : base + len(col)]
                if col > ref:
                    continue
                if col < ref:
                    branch_tight = False
            enc.extend(col)
            chosen.append(v)
            used[v] = True
            extend(pos + 1, branch_tight)
            used[v] = False
            chosen.pop()
            del enc[len(enc) - len(col) :]

    extend(0, True)
    assert best is not None
    return f"{n}|" + ",".join(str(x) for x in best)


def girth(graph: Multigraph) -> int | None:
    """Length of a shortest cycle; a repeated edge is a 2-cycle.  None when
    the graph is acyclic."""
    n = graph.n
    if any(graph.mult[i][j] >= 2 for i in range(n) for j in range(i + 1, n)):
        return 2
    adj = [
        [w for w in range(n) if graph.mult[v][w]] for v in range(n)
    ]
    best: int | None = None
    for s in range(n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        while queue:
            nxt = []
            for x in queue:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        nxt.append(y)
                    elif parent[x] != y:
                        cycle = dist[x] + dist[y] + 1
                        if best is None or cycle < best:
                            best = cycle
            queue = nxt
    return best
