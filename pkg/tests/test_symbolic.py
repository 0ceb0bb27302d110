from __future__ import annotations

import itertools
import re

import pytest
from hypothesis import given, settings, strategies as st

from ifsbench.symbolic import (SFT, BlockMap, FullShift, LabeledGraph, NotIrreducibleError,
                               ReducibleShiftError, SoficShift, SubstitutionShift, apply_block_map,
                               edge_shift, fischer_cover, glue, is_irreducible, is_synchronizing,
                               isomorphic, morse, morse_cover_shift, periodic, shift_stream,
                               subshift_periodic_points, transitive_stream)
from ifsbench.symbolic.graphs import has_periodic_walk


def words(k, n):
    return set(itertools.product(range(k), repeat=n))


def clean(w, forbidden):
    s = "".join(map(str, w))
    return not any(f in s for f in forbidden)


def sft_oracle(k, forbidden, n, slack=8):
    """Words of length n that are clean and extend to a clean word n + slack long."""
    out = set()
    for w in words(k, n):
        if not clean(w, forbidden):
            continue
        if any(clean(w + tail, forbidden) for tail in itertools.product(range(k), repeat=slack)):
            out.add(w)
    return out


def even_oracle(w):
    # interior runs of zeros (between two ones) must have even length
    s = "".join(map(str, w))
    return all(len(run) % 2 == 0 for run in re.findall(r"(?<=1)0+(?=1)", s))


# -- words and streams ---------------------------------------------------------

def test_periodic_stream_is_canonical():
    a = periodic([1, 0], [0, 1, 0])
    b = periodic([0, 1], [0, 1])
    assert a == b
    assert a.prefix(7) == (0, 1, 0, 1, 0, 1, 0)
    assert periodic([0, 0, 0]).period == (0,)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=4),
       st.lists(st.integers(0, 2), max_size=4), st.integers(0, 12))
def test_shifted_periodic_matches_prefix(per, pre, k):
    s = periodic(per, pre)
    assert shift_stream(s, k).prefix(20) == s.window(k, 20)


def test_morse_prefix():
    assert "".join(map(str, morse(0).prefix(16))) == "0110100110010110"


def test_morse_is_overlap_free_on_prefix():
    m = "".join(map(str, morse(0).prefix(512)))
    for n in range(1, 40):
        for i in range(len(m) - 2 * n):
            w = m[i:i + n]
            assert not (m[i + n:i + 2 * n] == w and m[i + 2 * n:i + 2 * n + 1] == w[:1])


# -- languages against brute force ----------------------------------------------

@pytest.mark.parametrize("forbidden", [["11"], ["00", "111"], ["101"], ["010", "11"]])
def test_sft_language_matches_oracle(forbidden):
    shift = SFT(2, forbidden)
    for n in range(1, 8):
        assert shift.language(n) == sft_oracle(2, forbidden, n)


def test_golden_mean_counts_are_fibonacci():
    shift = SFT(2, ["11"])
    assert [len(shift.language(n)) for n in range(1, 10)] == [2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_even_shift_language_matches_oracle(even_shift):
    for n in range(1, 10):
        assert even_shift.language(n) == {w for w in words(2, n) if even_oracle(w)}


def test_full_shift_language():
    assert FullShift(3).language(2) == words(3, 2)


def test_substitution_shift_language_is_morse_factors():
    shift = SubstitutionShift({0: [0, 1], 1: [1, 0]}, 0)
    m = morse(0).prefix(4096)
    for n in (1, 3, 6):
        assert shift.language(n) == {m[i:i + n] for i in range(len(m) - n + 1)}
    assert not shift.is_admissible((0, 0, 0))


def test_morse_cover_shift_walks():
    shift = morse_cover_shift(64)
    assert shift.is_admissible((0, 1, 1, 0, 2, 0))
    assert shift.is_admissible((2, 0, 1, 1))
    assert not shift.is_admissible((2, 2))


# -- irreducibility, gluing, transitive points -----------------------------------

def test_irreducibility():
    assert is_irreducible(SFT(2, ["11"]))
    assert not is_irreducible(SFT(2, ["10"]))


@given(st.lists(st.integers(0, 1), min_size=1, max_size=5),
       st.lists(st.integers(0, 1), min_size=1, max_size=5))
@settings(max_examples=60)
def test_glue_is_shortest(u, v):
    shift = SFT(2, ["11"])
    u, v = tuple(u), tuple(v)
    if not (shift.is_admissible(u) and shift.is_admissible(v)):
        return
    w = glue(shift, u, v)
    assert shift.is_admissible(u + w + v)
    for n in range(len(w)):
        assert all(not shift.is_admissible(u + x + v) for x in words(2, n))


def test_glue_on_reducible_shift_raises():
    with pytest.raises(NotIrreducibleError):
        glue(SFT(2, ["10"]), (1,), (0,))


def test_transitive_stream_contains_every_short_word(even_shift):
    t = transitive_stream(even_shift).prefix(4000)
    s = "".join(map(str, t))
    for n in range(1, 7):
        for w in even_shift.language(n):
            assert "".join(map(str, w)) in s
    assert even_shift.is_admissible(t[:200])


def test_synchronizing_words(even_shift):
    assert is_synchronizing(even_shift, (1,))
    assert not is_synchronizing(even_shift, (0,))
    assert is_synchronizing(SFT(2, ["11"]), (0,))


def test_periodic_points():
    assert subshift_periodic_points(SFT(2, ["11"]), 2) == {(0, 0), (0, 1), (1, 0)}


def test_even_shift_periodic_points(even_shift):
    pts = subshift_periodic_points(even_shift, 3)
    # (w)^infinity must have every 0-run between ones even, cyclically
    expect = {w for w in words(2, 3) if even_oracle(w * 3)}
    assert pts == expect


# -- covers and block maps ------------------------------------------------------

def test_even_shift_fischer_cover(even_shift):
    cover = fischer_cover(even_shift.presentation)
    assert cover.vertices == (0, 1)
    assert sorted(cover.edges) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert cover.right_resolving and cover.irreducible


def test_fischer_cover_presents_the_same_language(even_shift):
    cover = fischer_cover(even_shift.presentation)
    for n in range(1, 9):
        assert SoficShift(cover).language(n) == even_shift.language(n)


def test_fischer_cover_is_invariant_under_presentation():
    g1 = LabeledGraph.from_edges([("a", "a", 0), ("a", "b", 1), ("b", "a", 0)])
    c1 = fischer_cover(g1)
    assert isomorphic(c1, fischer_cover(LabeledGraph.from_edges(
        [("x", "y", 0), ("y", "x", 0), ("x", "x", 0), ("y", "z", 1), ("x", "z", 1), ("z", "x", 0)])))


def test_fischer_cover_rejects_reducible():
    g = LabeledGraph.from_edges([(0, 0, 0), (0, 1, 1), (1, 1, 1)])
    with pytest.raises(ReducibleShiftError):
        fischer_cover(g)


def test_edge_shift_projects_onto_labels(even_shift):
    cover = fischer_cover(even_shift.presentation)
    es = edge_shift(cover)
    proj = BlockMap.one_block({i: e[2] for i, e in enumerate(cover.edges)})
    for n in range(1, 7):
        assert {proj.on_word(w) for w in es.language(n)} == even_shift.language(n)


def test_block_map_on_streams():
    xor = BlockMap(0, 1, {(a, b): a ^ b for a in (0, 1) for b in (0, 1)})
    m = morse(0)
    out = apply_block_map(xor, m)
    assert out.prefix(20) == xor.on_word(m.prefix(21))


def test_periodic_walk(even_shift):
    g = even_shift.presentation
    assert has_periodic_walk(g, (1, 0, 0))
    assert not has_periodic_walk(g, (1, 0))
