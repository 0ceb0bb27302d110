"""Phase spaces, exact maps, families, orbits and the NDS metric."""

from .spaces import Circle, FiniteDiscrete, Interval, PhaseSpace, space_from_dict
from .intervals import IntervalUnion, Piece
from .maps import (CircleAffine, FiniteMap, MapSpec, NotSurjectiveError, PiecewiseAffine,
                   doubling, map_from_dict, rotation)
from .family import (CompatibilityError, FactorReport, FunctionFamily, GeneralizedIFS,
                     InadmissibleError, OrbitSegment, apply_word, image_of_intervals,
                     is_surjective, lift_family, nds_distance, orbit, preimages,
                     shifted_family, space_kind, verify_ifs_factor)
