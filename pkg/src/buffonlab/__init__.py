"""buffonlab: a Buffon-needle Monte Carlo laboratory.

Estimate pi from needle-line crossings and e from run lengths of the same
throws' normalized offsets, replay Lazzarini's optional-stopping cheat,
and estimate areas from segment-intersection counts on a torus.  All
randomness is counter-based and splittable, so every experiment is a pure
function of (seed, workers, configuration).
"""

from .antfield import (Segment, SegmentSet, TorusRegion, estimate_area,
                       intersect_count, scatter)
from .backend import backend_name
from .errors import (ConfigurationError, InsufficientDataError,
                     NoCrossingsError, NoIntersectionsError)
from .experiments import (AntResult, ConvergeResult, JointResult,
                          NeedleResult, run_ant, run_convergence, run_joint,
                          run_needle)
from .needle import (FloorSpec, NeedleSpec, Tally, Throw, ThrowBatch,
                     crosses, crossing_probability, estimate_pi, sample_throw,
                     sample_throws)
from .runlength import (RunLengthState, RunLengthTally, estimate_e,
                        expected_draws, feed, feed_many)
from .sequential import (CheatReport, FixedN, RationalEstimate,
                         SequentialTrace, TargetWindow, cheat_report,
                         exact_estimate_rational, run_sequential,
                         sign_crossings)
from .stats import (EstimateSummary, StreamingMoments, fit_error_slope,
                    merge, stderr_proportion, update, update_many)
from .streams import StreamSpec, UnitStream, make_stream, split

__version__ = "0.1.0"

__all__ = [
    "AntResult", "CheatReport", "ConfigurationError", "ConvergeResult",
    "EstimateSummary", "FixedN", "FloorSpec", "InsufficientDataError",
    "JointResult", "NeedleResult", "NeedleSpec", "NoCrossingsError",
    "NoIntersectionsError", "RationalEstimate", "RunLengthState",
    "RunLengthTally", "Segment", "SegmentSet", "SequentialTrace",
    "StreamSpec", "StreamingMoments", "Tally", "TargetWindow", "Throw",
    "ThrowBatch", "TorusRegion", "UnitStream", "backend_name",
    "cheat_report", "crosses", "crossing_probability", "estimate_area",
    "estimate_e", "estimate_pi", "exact_estimate_rational", "expected_draws",
    "feed", "feed_many", "fit_error_slope", "intersect_count", "make_stream",
    "merge", "run_ant", "run_convergence", "run_joint", "run_needle",
    "run_sequential", "sample_throw", "sample_throws", "scatter",
    "sign_crossings", "split", "stderr_proportion", "update", "update_many",
]
