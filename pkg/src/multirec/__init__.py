"""Coincidence reasoning over doubly recurring eventuality sequences."""

from .coincidence import (
    CoincidenceQuery,
    Found,
    Impossible,
    Witness,
    check_cycle_regularity,
    similar,
    solve_brute_force,
    solve_in_cycle,
    solve_residue,
)
from .eventuality import Component, Eventuality, comp, layout, period_duration, plus_interval
from .interval_core import (
    AllenRelation,
    DurationScale,
    Interval,
    TimeMap,
    aux,
    common,
    compose,
    cover,
    cover_star,
    is_disjoint,
    is_sub,
    is_within,
    normalize_durations,
    relate,
)
from .recurrence import (
    IncidenceModel,
    MultiRecurrence,
    Recurrence,
    check_axioms,
    cycle_duration,
    cycles,
    eta,
    mt_intervals,
    phi,
    tt_holds,
)

__version__ = "0.1.0"
