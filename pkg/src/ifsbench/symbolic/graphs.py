"""Labeled graphs presenting sofic shifts, and the subset automaton over them.

A :class:`LabeledGraph` is a finite directed multigraph whose edges carry
symbols.  The shift it presents is the set of label sequences of infinite
walks.  Most language questions are answered on the *subset automaton*: the
deterministic graph whose states are the vertex sets reachable from the set
of all vertices after reading a word.  A word is admissible exactly when
reading it from the full vertex set leaves a non-empty set (after removing
vertices that cannot start an infinite walk).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Tuple

import networkx as nx

from .words import Word, WordLike, as_word, word_str

Edge = Tuple[Hashable, Hashable, int]


@dataclass(frozen=True)
class LabeledGraph:
    """Directed labeled multigraph; ``edges`` keep their insertion order.

    >>> g = LabeledGraph.from_edges([("A", "A", 0), ("A", "B", 1), ("B", "A", 0)])
    >>> g.right_resolving, g.irreducible
    (True, True)
    """

    vertices: Tuple[Hashable, ...]
    edges: Tuple[Edge, ...]
    _out: Dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        edges = tuple((s, t, int(a)) for s, t, a in self.edges)
        vs = set(verts)
        for s, t, _ in edges:
            if s not in vs or t not in vs:
                raise ValueError(f"edge {s}->{t} uses an unknown vertex")
        out: Dict = {v: [] for v in verts}
        for idx, (s, t, a) in enumerate(edges):
            out[s].append((a, t, idx))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_out", out)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[Hashable] = ()):
        edges = list(edges)
        order = list(dict.fromkeys(list(vertices) + [v for s, t, _ in edges for v in (s, t)]))
        return cls(tuple(order), tuple(edges))

    def out_edges(self, v) -> List[Tuple[int, Hashable, int]]:
        """``(label, target, edge_index)`` triples leaving ``v``."""
        return self._out[v]

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(sorted({a for _, _, a in self.edges}))

    @property
    def right_resolving(self) -> bool:
        for v in self.vertices:
            labels = [a for a, _, _ in self._out[v]]
            if len(labels) != len(set(labels)):
                return False
        return True

    @property
    def irreducible(self) -> bool:
        if not self.vertices:
            return False
        return nx.is_strongly_connected(self.to_networkx())

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for s, t, a in self.edges:
            g.add_edge(s, t, label=a)
        return g

    def to_dot(self, name: str = "cover") -> str:
        """Graphviz DOT text."""
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for s, t, a in self.edges:
            lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"vertices": [str(v) for v in self.vertices],
                "edges": [[str(s), str(t), a] for s, t, a in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledGraph":
        return cls.from_edges([(str(s), str(t), int(a)) for s, t, a in data["edges"]],
                              [str(v) for v in data.get("vertices", ())])

    def subgraph(self, keep) -> "LabeledGraph":
        keep = set(keep)
        return LabeledGraph(tuple(v for v in self.vertices if v in keep),
                            tuple(e for e in self.edges if e[0] in keep and e[1] in keep))

    def walk(self, start, w: WordLike) -> Optional[List[int]]:
        """Edge indices of the walk labeled ``w`` from ``start`` (right-resolving graphs)."""
        path = []
        v = start
        for a in as_word(w):
            nxt = [(t, idx) for b, t, idx in self._out[v] if b == a]
            if not nxt:
                return None
            if len(nxt) > 1:
                raise ValueError("walk() needs a right-resolving graph")
            v, idx = nxt[0]
            path.append(idx)
        return path


def prune_sinks(g: LabeledGraph) -> LabeledGraph:
    """Drop vertices that cannot start an infinite walk."""
    alive = set(g.vertices)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if not any(t in alive for _, t, _ in g.out_edges(v)):
                alive.discard(v)
                changed = True
    return g.subgraph(alive)


def isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    """Label-preserving graph isomorphism."""
    def edge_match(d1, d2):
        return sorted(e["label"] for e in d1.values()) == sorted(e["label"] for e in d2.values())

    return nx.is_isomorphic(g.to_networkx(), h.to_networkx(), edge_match=edge_match)


def step_set(graph: LabeledGraph, vertices: FrozenSet, a: int) -> FrozenSet:
    return frozenset(t for v in vertices for b, t, _ in graph.out_edges(v) if b == a)


class SubsetAutomaton:
    """Deterministic automaton on vertex sets of a sink-free labeled graph.

    State 0 is the set of all vertices.  ``delta[i][a]`` is the index of the
    state reached by reading ``a`` or ``None`` when the set becomes empty.
    """

    def __init__(self, graph: LabeledGraph, start: Optional[FrozenSet] = None):
        self.graph = graph
        self.labels = graph.labels
        first = frozenset(graph.vertices) if start is None else frozenset(start)
        self.states: List[FrozenSet] = [first]
        self.index: Dict[FrozenSet, int] = {first: 0}
        self.delta: List[Dict[int, Optional[int]]] = []
        queue = deque([0])
        while queue:
            i = queue.popleft()
            row = {}
            for a in self.labels:
                nxt = self.step_set(self.states[i], a)
                if not nxt:
                    row[a] = None
                    continue
                if nxt not in self.index:
                    self.index[nxt] = len(self.states)
                    self.states.append(nxt)
                    queue.append(self.index[nxt])
                row[a] = self.index[nxt]
            self.delta.append(row)
        self._classes = None

    def step_set(self, vertices: FrozenSet, a: int) -> FrozenSet:
        return step_set(self.graph, vertices, a)

    def read(self, state: Optional[int], w: WordLike) -> Optional[int]:
        for a in as_word(w):
            if state is None:
                return None
            state = self.delta[state].get(a)
        return state

    def classes(self) -> List[int]:
        """Follower-set equivalence classes of the states (Moore refinement)."""
        if self._classes is None:
            part = [0] * len(self.states)
            n_blocks = 1
            while True:
                sigs = {}
                new = []
                for i in range(len(self.states)):
                    sig = (part[i],) + tuple(
                        -1 if self.delta[i][a] is None else part[self.delta[i][a]]
                        for a in self.labels)
                    new.append(sigs.setdefault(sig, len(sigs)))
                if len(sigs) == n_blocks:
                    break
                part, n_blocks = new, len(sigs)
            self._classes = new
        return self._classes

    def reachable_from(self, state: int) -> set:
        seen = {state}
        stack = [state]
        while stack:
            i = stack.pop()
            for j in self.delta[i].values():
                if j is not None and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.states)))
        for i, row in enumerate(self.delta):
            for j in row.values():
                if j is not None:
                    g.add_edge(i, j)
        return g

    def terminal_components(self) -> List[set]:
        g = self.to_networkx()
        cond = nx.condensation(g)
        return [set(cond.nodes[c]["members"]) for c in cond.nodes if cond.out_degree(c) == 0]

    def shortest_path_to(self, start: int, accept) -> Optional[Word]:
        """Shortest, then lexicographically least, word leading to an accepted state."""
        parent = {start: None}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            if accept(i):
                word = []
                while parent[i] is not None:
                    i, a = parent[i]
                    word.append(a)
                return tuple(reversed(word))
            for a in self.labels:
                j = self.delta[i][a]
                if j is not None and j not in parent:
                    parent[j] = (i, a)
                    queue.append(j)
        return None


def same_followers(graph: LabeledGraph, p: FrozenSet, q: FrozenSet) -> bool:
    """Whether two vertex sets of a sink-free graph read exactly the same words."""
    labels = graph.labels
    seen = {(p, q)}
    queue = deque([(p, q)])
    while queue:
        a_set, b_set = queue.popleft()
        if bool(a_set) != bool(b_set):
            return False
        if not a_set:
            continue
        for a in labels:
            pair = (step_set(graph, a_set, a), step_set(graph, b_set, a))
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


def has_periodic_walk(graph: LabeledGraph, u: Word) -> bool:
    """Whether ``u`` repeated forever labels an infinite walk."""
    step = {}
    for v in graph.vertices:
        cur = frozenset([v])
        for a in u:
            cur = step_set(graph, cur, a)
        step[v] = cur
    alive = set(graph.vertices)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if not (step[v] & alive):
                alive.discard(v)
                changed = True
    return bool(alive)


def morse_cover(n_vertices: int) -> LabeledGraph:
    """Truncation of the infinite cover built on the Morse fixed point.

    Vertex ``i`` steps to ``i+1`` with label ``m_i`` (the Morse fixed point
    starting with 0), and every even vertex ``i >= 2`` returns to vertex 0
    with label 2.
    """
    from .streams import morse

    m = morse(0)
    edges = []
    for i in range(n_vertices - 1):
        edges.append((i, i + 1, m.symbol_at(i)))
    for i in range(2, n_vertices, 2):
        edges.append((i, 0, 2))
    return LabeledGraph(tuple(range(n_vertices)), tuple(edges))


def graph_summary(g: LabeledGraph) -> str:
    rows = [f"{len(g.vertices)} vertices, {len(g.edges)} edges"]
    for s, t, a in g.edges:
        rows.append(f"  {s} --{a}--> {t}")
    return "\n".join(rows)


__all__ = ["LabeledGraph", "SubsetAutomaton", "prune_sinks", "isomorphic", "same_followers",
           "has_periodic_walk", "morse_cover", "graph_summary", "word_str"]
