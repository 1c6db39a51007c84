"""Random-order online maximum independent set of intervals, boxes and fat objects."""
from .bounded_rom import (BoundedHyperrectRunner, BoundedInstanceMeta, BoundedIntervalRunner,
                          exact_interval_opt, run_bounded_hyperrects, run_bounded_intervals,
                          select_class_hyperrects, select_class_intervals)
from .classifier import ClassId, ClassParams, hyperrect_class, interval_class
from .geometry import (HyperRect, Instance, SigmaObject, coord, ellipse, intersects,
                       is_independent_set, out_box, side_length)
from .greedy import GreedyState, greedy_run, greedy_step
from .oracle import brute_force_mis, sample_hypergeometric, sample_max_gap
from .rescale import (FullPipeline, Scale, apply_scale, build_scale, run_full_hyperrects,
                      run_full_intervals, run_full_sigma)

__version__ = "0.1.0"
