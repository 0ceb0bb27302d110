"""Checkers for specification, shadowing, mixing and periodicity along a stream."""

from .reports import FAIL, INCONCLUSIVE, PASS, PropertyReport, as_tolerance
from .search import TraceResult, pull_back, trace_search
from .specification import (SegmentSpec, SegmentSpecError, check_lws, check_specification,
                            check_ssp, estimate_spec_constant, random_segment_spec)
from .shadowing import (NotExpandingError, PseudoOrbit, PseudoOrbitError, backward_shadow,
                        check_shadowing, drift_pseudo_orbit, gen_pseudo_orbit)
from .mixing import probe_mixing_exact
from .periodicity import detect_periodicity, parse_kind, periodicity_audit
