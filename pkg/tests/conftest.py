from fractions import Fraction

import pytest

from ifsbench.symbolic import FullShift, SFT, LabeledGraph, SoficShift
from ifsbench.systems import Circle, CircleAffine, FunctionFamily, GeneralizedIFS, doubling, rotation


@pytest.fixture
def circle():
    return Circle()


@pytest.fixture
def even_shift():
    g = LabeledGraph.from_edges([("a", "a", 1), ("a", "b", 0), ("b", "a", 0),
                                 ("a", "c", 1), ("c", "a", 1), ("c", "b", 0)])
    return SoficShift(g)


@pytest.fixture
def ex36(circle):
    return GeneralizedIFS(circle, FunctionFamily([doubling(), CircleAffine(1)]), FullShift(2))


@pytest.fixture
def doubling_ifs(circle):
    return GeneralizedIFS(circle, FunctionFamily([doubling()]), FullShift(1))


@pytest.fixture
def rotation_ifs(circle):
    return GeneralizedIFS(circle, FunctionFamily([rotation("θ")]), FullShift(1))
