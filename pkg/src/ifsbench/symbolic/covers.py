"""Fischer covers, edge shifts and sliding block codes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Union

import networkx as nx

from .graphs import LabeledGraph, SubsetAutomaton, prune_sinks
from .shifts import SFT, SoficShift, is_irreducible
from .streams import SubstitutionFixedPoint, SymbolStream
from .words import Word, WordLike, as_word, word_str


class ReducibleShiftError(ValueError):
    """The presented shift is reducible, so it has no Fischer cover."""


class NotSoficError(ValueError):
    pass


class BlockMapError(KeyError):
    pass


@dataclass(frozen=True)
class BlockMap:
    """Sliding block code with ``memory`` symbols of past and ``anticipation`` of future.

    One-sided convention: output position ``i`` reads the input window
    starting at ``i``, so words shrink by ``memory + anticipation``.
    """

    memory: int
    anticipation: int
    table: Dict[Word, int]

    @property
    def window(self) -> int:
        return self.memory + self.anticipation + 1

    def __call__(self, block: Word) -> int:
        try:
            return self.table[tuple(block)]
        except KeyError:
            raise BlockMapError(f"block {word_str(block)} is not in the table") from None

    def on_word(self, w: WordLike) -> Word:
        w = as_word(w)
        n = self.window
        if len(w) < n:
            raise ValueError(f"word shorter than the block window {n}")
        return tuple(self(w[i:i + n]) for i in range(len(w) - n + 1))

    @classmethod
    def one_block(cls, mapping: Dict[int, int]) -> "BlockMap":
        return cls(0, 0, {(a,): b for a, b in mapping.items()})


class MappedStream(SymbolStream):
    def __init__(self, base: SymbolStream, block_map: BlockMap):
        self.base = base
        self.block_map = block_map
        if base.horizon is not None:
            self.horizon = max(base.horizon - block_map.window + 1, 0)

    def _symbol(self, i):
        return self.block_map(self.base.window(i, self.block_map.window))

    def describe(self):
        return {"type": "mapped", "base": self.base.describe(),
                "memory": self.block_map.memory, "anticipation": self.block_map.anticipation}


def apply_block_map(block_map: BlockMap, s: Union[SymbolStream, WordLike]):
    """Apply a block code to a word (finite output) or a stream (lazy output)."""
    if isinstance(s, SymbolStream):
        return MappedStream(s, block_map)
    return block_map.on_word(s)


class EdgeShift(SFT):
    """1-step SFT on the edges of a labeled graph; symbols are edge indices."""

    def __init__(self, graph: LabeledGraph):
        self.cover = graph
        edges = graph.edges
        forbidden = [(i, j) for i, e in enumerate(edges) for j, f in enumerate(edges) if e[1] != f[0]]
        super().__init__(len(edges), forbidden)
        self.label_map = BlockMap.one_block({i: e[2] for i, e in enumerate(edges)})

    def describe(self):
        d = super().describe()
        d["edges_of"] = self.cover.to_dict()
        return d


def edge_shift(graph: LabeledGraph) -> EdgeShift:
    return EdgeShift(graph)


def fischer_cover(graph: LabeledGraph) -> LabeledGraph:
    """Minimal right-resolving presentation of the irreducible sofic shift of ``graph``.

    Subset construction, merge states with equal follower sets, keep the
    unique terminal irreducible component.  Vertices are numbered by the
    shortest-then-lexicographically-least word reaching them.
    """
    g = prune_sinks(graph)
    if not g.vertices:
        raise ReducibleShiftError("the graph presents the empty shift")
    if not is_irreducible(SoficShift(g)):
        raise ReducibleShiftError("the presented shift is reducible; its Fischer cover is not unique")
    aut = SubsetAutomaton(g)
    cls = aut.classes()
    quotient = nx.DiGraph()
    moves = {}
    for i, row in enumerate(aut.delta):
        quotient.add_node(cls[i])
        for a, j in row.items():
            if j is not None:
                quotient.add_edge(cls[i], cls[j])
                moves[(cls[i], a)] = cls[j]
    cond = nx.condensation(quotient)
    terminal = [set(cond.nodes[c]["members"]) for c in cond.nodes if cond.out_degree(c) == 0]
    if len(terminal) != 1:
        raise ReducibleShiftError("follower-set graph has several terminal components")
    comp = terminal[0]

    # name the component's vertices by shortest-lex access words
    access = {cls[0]: ()}
    queue = deque([cls[0]])
    while queue:
        c = queue.popleft()
        for a in aut.labels:
            d = moves.get((c, a))
            if d is not None and d not in access:
                access[d] = access[c] + (a,)
                queue.append(d)
    order = sorted(comp, key=lambda c: (len(access[c]), access[c]))
    name = {c: k for k, c in enumerate(order)}
    edges = [(name[c], name[moves[(c, a)]], a) for c in order for a in aut.labels
             if (c, a) in moves and moves[(c, a)] in comp]
    return LabeledGraph(tuple(range(len(order))), tuple(edges))


def substitution_fixed_point(rules: Dict[int, WordLike], seed: int) -> SubstitutionFixedPoint:
    return SubstitutionFixedPoint(rules, seed)
