"""Fermion-to-qubit encodings.

Two encoders live here: the Jordan-Wigner map for 1D chains with one, two or
three colors per site (color-major within a site, site-major overall), and a
graph-based encoding that places fermionic modes on the vertices of a
connected even-degree multigraph, represents the even algebra through edge
and vertex operators stabilized by loop products, and extends it to odd
operators through a rooted path construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .paulis import OperatorSum, PauliTerm

N_COLORS = {"U1": 1, "SU2": 2, "SU3": 3}


# --------------------------------------------------------------------- JW


@dataclass(frozen=True)
class JwLayout:
    """Qubit layout for a 1D staggered chain: one qubit per (site, color)."""

    theory: str
    sites: int

    def __post_init__(self):
        if self.theory not in N_COLORS:
            raise ValueError(f"unknown theory {self.theory!r}")

    @property
    def n_colors(self) -> int:
        return N_COLORS[self.theory]

    @property
    def width(self) -> int:
        return self.n_colors * self.sites

    def mode_index(self, x: int, color: int = 1) -> int:
        """Qubit position of mode (site x, color); colors are 1-based."""
        if not 0 <= x < self.sites:
            raise ValueError(f"site {x} outside chain of {self.sites}")
        if not 1 <= color <= self.n_colors:
            raise ValueError(f"color {color} invalid for {self.theory}")
        return self.n_colors * x + (color - 1)


def jw_lower(layout: JwLayout, x: int, color: int = 1, width: int | None = None) -> OperatorSum:
    """Annihilation operator image: sigma^z string times sigma^+ at the mode.

    ``width`` widens the register (extra qubits above the fermionic block are
    untouched), which is how link registers are appended downstream.
    """
    q = layout.mode_index(x, color)
    w = layout.width if width is None else width
    string = {p: "Z" for p in range(q)}
    xterm = OperatorSum.from_letter_map(w, 0.5, {**string, q: "X"})
    yterm = OperatorSum.from_letter_map(w, 0.5j, {**string, q: "Y"})
    return xterm + yterm


def jw_raise(layout: JwLayout, x: int, color: int = 1, width: int | None = None) -> OperatorSum:
    return jw_lower(layout, x, color, width).adjoint()


def jw_number(layout: JwLayout, x: int, color: int = 1, width: int | None = None) -> OperatorSum:
    """Occupation ξ†ξ = (1 - σ^z)/2 at the mode."""
    q = layout.mode_index(x, color)
    w = layout.width if width is None else width
    return OperatorSum.identity(w, 0.5) + OperatorSum.from_letter_map(w, -0.5, {q: "Z"})


# --------------------------------------------------------------------- GSE


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class GseGraph:
    """Oriented even-degree multigraph carrying one fermionic mode per vertex.

    ``edges[k] = (I, J)`` means the arrow points I -> J.  Each vertex hosts
    d(I)/2 qubits; the edge endpoints at a vertex are numbered by slots, in
    ``slot_orders`` order (default: edge-list order).  ``root_edge`` is the
    (S, T) edge used by the odd-operator construction.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    root_edge: int = -1  # -1: lexicographically smallest edge
    slot_orders: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        for a, b in edges:
            if a == b:
                raise GraphError("self-loops are not supported")
            if not (0 <= a < self.num_vertices and 0 <= b < self.num_vertices):
                raise GraphError("edge endpoint outside vertex range")
        degrees = [0] * self.num_vertices
        for a, b in edges:
            degrees[a] += 1
            degrees[b] += 1
        if any(d == 0 or d % 2 for d in degrees):
            raise GraphError("every vertex must have even, nonzero degree")
        if not self._connected(degrees):
            raise GraphError("graph must be connected")
        if self.root_edge == -1:
            best = min(range(len(edges)), key=lambda k: tuple(sorted(edges[k])))
            object.__setattr__(self, "root_edge", best)
        if not self.slot_orders:
            orders: list[list[int]] = [[] for _ in range(self.num_vertices)]
            for k, (a, b) in enumerate(edges):
                orders[a].append(k)
                orders[b].append(k)
            object.__setattr__(self, "slot_orders", tuple(tuple(o) for o in orders))
        for v, order in enumerate(self.slot_orders):
            incident = sorted(
                k for k, (a, b) in enumerate(edges) if v in (a, b)
            )
            if sorted(order) != incident:
                raise GraphError(f"slot order at vertex {v} does not list its edges")

    def _connected(self, degrees) -> bool:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.num_vertices

    # ------------------------------------------------------------- layout
    @property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.num_vertices
        for a, b in self.edges:
            d[a] += 1
            d[b] += 1
        return tuple(d)

    @cached_property
    def qubit_offsets(self) -> tuple[int, ...]:
        offs, total = [], 0
        for d in self.degrees:
            offs.append(total)
            total += d // 2
        return tuple(offs)

    @property
    def width(self) -> int:
        return sum(d // 2 for d in self.degrees)

    def slot(self, vertex: int, edge_index: int) -> int:
        """Slot number (0-based) of the given edge's endpoint at ``vertex``."""
        return self.slot_orders[vertex].index(edge_index)

    def find_edge(self, a: int, b: int) -> int:
        hits = [
            k
            for k, (i, j) in enumerate(self.edges)
            if (i, j) == (a, b) or (i, j) == (b, a)
        ]
        if not hits:
            raise GraphError(f"no edge between {a} and {b}")
        if len(hits) > 1:
            raise GraphError(f"edge ({a},{b}) is ambiguous; pass the edge index")
        return hits[0]

    # ---------------------------------------------------------- operators
    def local_majorana(self, vertex: int, slot: int) -> PauliTerm:
        """Mode 2k slot -> Z..Z X on the vertex's k-th qubit; 2k+1 -> Z..Z Y."""
        d = self.degrees[vertex]
        if not 0 <= slot < d:
            raise GraphError(f"vertex {vertex} has no slot {slot}")
        base = self.qubit_offsets[vertex]
        k, odd = divmod(slot, 2)
        z = 0
        for p in range(k):
            z |= 1 << (base + p)
        q = base + k
        if odd:
            z |= 1 << q  # Y carries both bits
        x = 1 << q
        return PauliTerm(1.0, z, x, self.width)

    def local_majorana_set(self, vertex: int) -> "LocalMajoranaSet":
        d = self.degrees[vertex]
        return LocalMajoranaSet(
            vertex, tuple(self.local_majorana(vertex, i) for i in range(d))
        )

    def edge_term(self, edge_index: int, source: int | None = None) -> PauliTerm:
        """Edge operator as a single Pauli term, traversed from ``source``."""
        a, b = self.edges[edge_index]
        if source is None:
            source = a
        if source == a:
            tail, head, eps = a, b, 1.0
        elif source == b:
            tail, head, eps = b, a, -1.0
        else:
            raise GraphError(f"vertex {source} is not an endpoint of edge {edge_index}")
        g_tail = self.local_majorana(tail, self.slot(tail, edge_index))
        g_head = self.local_majorana(head, self.slot(head, edge_index))
        return (g_tail * g_head).scaled(eps)

    def vertex_term(self, vertex: int) -> PauliTerm:
        """(-i)^{d/2} gamma_1 ... gamma_d on the vertex's qubits."""
        d = self.degrees[vertex]
        out = PauliTerm.identity(self.width, (-1j) ** (d // 2))
        for i in range(d):
            out = out * self.local_majorana(vertex, i)
        return out

    def loop_term(self, steps: list[tuple[int, int]]) -> PauliTerm:
        """i^s times the product of edge operators along a closed walk.

        ``steps`` lists (edge_index, source_vertex); consecutive steps must
        chain head-to-tail and the walk must return to its starting vertex.
        """
        self._check_walk(steps, closed=True)
        s = len(steps)
        out = PauliTerm.identity(self.width, (1j) ** s)
        for edge_index, source in steps:
            out = out * self.edge_term(edge_index, source)
        return out

    def path_term(self, steps: list[tuple[int, int]]) -> PauliTerm:
        """i^{s-1} times the edge-operator product along an open walk of s-1 edges."""
        if not steps:
            return PauliTerm.identity(self.width)
        self._check_walk(steps, closed=False)
        out = PauliTerm.identity(self.width, (1j) ** len(steps))
        for edge_index, source in steps:
            out = out * self.edge_term(edge_index, source)
        return out

    def _walk_head(self, edge_index: int, source: int) -> int:
        a, b = self.edges[edge_index]
        return b if source == a else a

    def _check_walk(self, steps, closed: bool):
        for (e1, s1), (e2, s2) in zip(steps, steps[1:]):
            if self._walk_head(e1, s1) != s2:
                raise GraphError("walk steps do not chain")
        if closed and steps:
            if self._walk_head(*steps[-1]) != steps[0][1]:
                raise GraphError("walk does not close")

    # -------------------------------------------------- stabilizer structure
    @cached_property
    def spanning_tree(self) -> tuple[int, ...]:
        """Edge indices of a BFS spanning tree (deterministic order)."""
        parent_edge: dict[int, int] = {}
        seen = {0}
        queue = [0]
        incident: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for k, (a, b) in enumerate(self.edges):
            incident[a].append(k)
            incident[b].append(k)
        while queue:
            v = queue.pop(0)
            for k in incident[v]:
                w = self._walk_head(k, v)
                if w not in seen:
                    seen.add(w)
                    parent_edge[w] = k
                    queue.append(w)
        return tuple(sorted(parent_edge.values()))

    def _tree_path(self, start: int, goal: int, tree: set[int]) -> list[tuple[int, int]]:
        if start == goal:
            return []
        prev: dict[int, tuple[int, int]] = {}
        seen = {start}
        queue = [start]
        while queue:
            v = queue.pop(0)
            for k in sorted(tree):
                a, b = self.edges[k]
                if v in (a, b):
                    w = self._walk_head(k, v)
                    if w not in seen:
                        seen.add(w)
                        prev[w] = (k, v)
                        queue.append(w)
        steps = []
        v = goal
        while v != start:
            k, src = prev[v]
            steps.append((k, src))
            v = src
        return list(reversed(steps))

    def fundamental_cycles(self) -> list[list[tuple[int, int]]]:
        """One closed walk per non-tree edge: E - V + 1 independent loops."""
        tree = set(self.spanning_tree)
        cycles = []
        for k, (a, b) in enumerate(self.edges):
            if k in tree:
                continue
            walk = [(k, a)] + self._tree_path(b, a, tree)
            cycles.append(walk)
        return cycles

    def eulerian_cycle(self) -> list[tuple[int, int]]:
        """Closed walk using every edge exactly once (iterative Hierholzer)."""
        pending: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for k, (a, b) in enumerate(self.edges):
            pending[a].append(k)
            pending[b].append(k)
        used = [False] * len(self.edges)
        vstack = [self.edges[0][0]]
        estack: list[tuple[int, int]] = []
        walk: list[tuple[int, int]] = []
        while vstack:
            v = vstack[-1]
            while pending[v] and used[pending[v][-1]]:
                pending[v].pop()
            if pending[v]:
                k = pending[v].pop()
                used[k] = True
                estack.append((k, v))
                vstack.append(self._walk_head(k, v))
            else:
                vstack.pop()
                if estack and vstack:
                    walk.append(estack.pop())
        walk.reverse()
        if len(walk) != len(self.edges):
            raise GraphError("no Eulerian cycle found")
        self._check_walk(walk, closed=True)
        return walk

    # ----------------------------------------------------------- odd sector
    @property
    def root_vertices(self) -> tuple[int, int]:
        return self.edges[self.root_edge]

    @cached_property
    def root_paths(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Shortest path from S to every vertex avoiding the root edge.

        BFS with ascending vertex/edge order, so operators are reproducible.
        """
        s_vertex = self.root_vertices[0]
        incident: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for k, (a, b) in enumerate(self.edges):
            if k == self.root_edge:
                continue
            incident[a].append(k)
            incident[b].append(k)
        prev: dict[int, tuple[int, int]] = {}
        seen = {s_vertex}
        queue = [s_vertex]
        while queue:
            v = queue.pop(0)
            for k in incident[v]:
                w = self._walk_head(k, v)
                if w not in seen:
                    seen.add(w)
                    prev[w] = (k, v)
                    queue.append(w)
        if len(seen) != self.num_vertices:
            raise GraphError("graph minus the root edge is disconnected")
        paths = []
        for goal in range(self.num_vertices):
            steps = []
            v = goal
            while v != s_vertex:
                k, src = prev[v]
                steps.append((k, src))
                v = src
            paths.append(tuple(reversed(steps)))
        return tuple(paths)

    def root_majorana(self) -> PauliTerm:
        """gamma_{S1}: the local mode at S attached to the root edge."""
        s_vertex = self.root_vertices[0]
        return self.local_majorana(s_vertex, self.slot(s_vertex, self.root_edge))

    def odd_majorana(self, vertex: int, sign: str) -> PauliTerm:
        """Encoded Majorana mode; ``sign`` is '+' or '-'."""
        if sign not in "+-":
            raise GraphError("sign must be '+' or '-'")
        gamma = self.root_majorana()
        path = self.path_term(list(self.root_paths[vertex]))
        out = gamma * path
        if sign == "-":
            out = (out * self.vertex_term(vertex)).scaled(1j)
        return out

    def lower(self, vertex: int) -> OperatorSum:
        """Annihilation operator (gamma^+ + i gamma^-)/2 at the vertex."""
        gp = self.odd_majorana(vertex, "+")
        gm = self.odd_majorana(vertex, "-")
        return OperatorSum([gp.scaled(0.5), gm.scaled(0.5j)], self.width)

    def raise_(self, vertex: int) -> OperatorSum:
        return self.lower(vertex).adjoint()

    # -------------------------------------------------------- serialization
    def to_json(self) -> str:
        return json.dumps(
            {
                "num_vertices": self.num_vertices,
                "edges": [list(e) for e in self.edges],
                "root_edge": self.root_edge,
                "slot_orders": [list(o) for o in self.slot_orders],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "GseGraph":
        data = json.loads(text)
        return cls(
            num_vertices=data["num_vertices"],
            edges=tuple(tuple(e) for e in data["edges"]),
            root_edge=data.get("root_edge", -1),
            slot_orders=tuple(tuple(o) for o in data.get("slot_orders", [])),
        )


@dataclass(frozen=True)
class LocalMajoranaSet:
    """The d(I) anticommuting local modes carried by one vertex."""

    vertex: int
    modes: tuple[PauliTerm, ...]


def gse_edge_op(g: GseGraph, edge, source: int | None = None) -> OperatorSum:
    """Edge operator; ``edge`` is an index or an (I, J) pair."""
    if isinstance(edge, tuple):
        source = edge[0] if source is None else source
        edge = g.find_edge(*edge)
    return OperatorSum.from_term(g.edge_term(edge, source))


def gse_vertex_op(g: GseGraph, vertex: int) -> OperatorSum:
    return OperatorSum.from_term(g.vertex_term(vertex))


def gse_loop_op(g: GseGraph, steps) -> OperatorSum:
    return OperatorSum.from_term(g.loop_term(list(steps)))


def gse_odd_majorana(g: GseGraph, vertex: int, sign: str) -> OperatorSum:
    return OperatorSum.from_term(g.odd_majorana(vertex, sign))


def stabilizer_projector(g: GseGraph, flip_root: bool = False) -> np.ndarray:
    """Dense projector onto the joint +1 eigenspace of all loop operators.

    ``flip_root`` reverses the root edge's arrow first, which exchanges the
    even- and odd-sector subspaces.
    """
    dim = 1 << g.width
    proj = np.eye(dim, dtype=np.complex128)
    for cycle in g.fundamental_cycles():
        term = g.loop_term(cycle)
        if flip_root and any(k == g.root_edge for k, _ in cycle):
            term = term.scaled(-1.0)
        mat = OperatorSum.from_term(term).materialize(dense_cap=g.width)
        proj = proj @ (np.eye(dim) + mat) / 2.0
    return proj


# ------------------------------------------------------------------ presets


def hypercubic_preset(n_colors: int, dims: tuple[int, ...]) -> GseGraph:
    """Encoding graph for an SU(N)-type theory on a periodic hypercubic lattice.

    Colors at a site chain together and the chain closes through the +x
    neighbor; each transverse direction k contributes a rung of edges on
    color (k mod n_colors).  Every site then carries n_colors + d - 1 qubits,
    and the 1D case degenerates to a single ring (Jordan-Wigner-like).
    """
    if n_colors < 1:
        raise GraphError("need at least one color")
    dims = tuple(int(L) for L in dims)
    if any(L < 2 for L in dims):
        raise GraphError("extents must be at least 2 (periodic wrap)")
    d = len(dims)
    n_sites = int(np.prod(dims))

    def site_index(coords):
        idx = 0
        for L, c in zip(dims, coords):
            idx = idx * L + (c % L)
        return idx

    def vertex(coords, color):
        return site_index(coords) * n_colors + color

    sites = list(np.ndindex(*dims))
    edges: list[tuple[int, int]] = []
    for coords in sites:
        for c in range(n_colors - 1):
            edges.append((vertex(coords, c), vertex(coords, c + 1)))
        nxt = list(coords)
        nxt[0] += 1
        edges.append((vertex(coords, n_colors - 1), vertex(tuple(nxt), 0)))
        for k in range(1, d):
            c = k % n_colors
            nxt = list(coords)
            nxt[k] += 1
            edges.append((vertex(coords, c), vertex(tuple(nxt), c)))
    return GseGraph(num_vertices=n_sites * n_colors, edges=tuple(edges))


def random_even_graph(rng: np.random.Generator, num_vertices: int, num_edges: int) -> GseGraph:
    """Random connected even-degree multigraph from a closed random walk.

    Used by the encoding verification suite; every visit contributes two
    endpoints, so degrees are automatically even.
    """
    if num_edges < num_vertices:
        raise GraphError("need at least one edge per vertex to touch them all")
    order = list(rng.permutation(num_vertices))
    walk = order + [
        int(v) for v in rng.integers(0, num_vertices, size=num_edges - num_vertices)
    ]
    # remove immediate repeats (self-loops)
    cleaned = [walk[0]]
    for v in walk[1:]:
        if v != cleaned[-1]:
            cleaned.append(v)
    while len(cleaned) > 1 and cleaned[-1] == cleaned[0]:
        cleaned.pop()
    if len(cleaned) < 2:
        cleaned = [0, 1]
    edges = [(cleaned[i], cleaned[(i + 1) % len(cleaned)]) for i in range(len(cleaned))]
    seen = {v for e in edges for v in e}
    for v in range(num_vertices):
        if v not in seen:
            edges.append((v, int(cleaned[0])))
            edges.append((v, int(cleaned[0])))
    return GseGraph(num_vertices=num_vertices, edges=tuple(edges))
