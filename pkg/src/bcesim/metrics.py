"""Age-of-Information sample-path accounting and derived statistics.

The age of the tracked key rises with slope 1 and drops at each commit of
fresher data to (commit time - generation time); it never touches zero.
All statistics are computed exactly on the piecewise-linear path, never by
sampling.  Commits of stale data (possible under LCFS reordering) do not
reset the age: freshness is defined by the largest committed generation
time seen so far.
"""

import math
from dataclasses import dataclass

from .core import ConfigError, SimulationError
from .pipeline import MVCC_INVALID, VALID, VSCC_INVALID


class AoISamplePath:
    """Ordered commit reset points (t_u, t_g) over an observation window."""

    __slots__ = ("start", "end", "resets", "freshest_gen", "_last_commit")

    def __init__(self, start, end):
        self.start = start
        self.end = end
        self.resets = []  # (t_u, t_g), t_u strictly increasing, t_g increasing
        self.freshest_gen = -math.inf
        self._last_commit = -math.inf

    def record_commit(self, t_u, t_g):
        """Register a committed update; appended as a reset only if fresher."""
        if t_u < self._last_commit:
            raise SimulationError(
                f"commit at t={t_u} behind previous commit at t={self._last_commit}"
            )
        if t_u <= t_g:
            raise SimulationError(f"commit time {t_u} not after generation time {t_g}")
        self._last_commit = t_u
        if t_g > self.freshest_gen:
            self.resets.append((t_u, t_g))
            self.freshest_gen = t_g

    def restricted(self, start, end):
        """Copy of the path truncated to resets with t_u inside [start, end]."""
        path = AoISamplePath(start, end)
        for t_u, t_g in self.resets:
            if start <= t_u <= end:
                path.resets.append((t_u, t_g))
        if path.resets:
            path.freshest_gen = path.resets[-1][1]
            path._last_commit = path.resets[-1][0]
        return path

    def age_at(self, t):
        """Age at time t: elapsed since the freshest generation committed by t."""
        gen = None
        for t_u, t_g in self.resets:
            if t_u > t:
                break
            gen = t_g
        if gen is None:
            return None
        return t - gen


def _segments(path):
    """Linear pieces (seg_start, seg_end, age_at_seg_start) of the sawtooth.

    Measurement runs from the first reset to the path end; the age in each
    piece rises with slope exactly 1.
    """
    resets = path.resets
    for i, (t_u, t_g) in enumerate(resets):
        seg_end = resets[i + 1][0] if i + 1 < len(resets) else path.end
        yield t_u, seg_end, t_u - t_g


def average_aoi(path):
    """Time-average age over [first reset, end]; None for an empty path."""
    if not path.resets:
        return None
    t0 = path.resets[0][0]
    if not path.end > t0:
        raise SimulationError(f"horizon {path.end} not beyond first reset {t0}")
    area = 0.0
    for seg_start, seg_end, age in _segments(path):
        length = seg_end - seg_start
        area += (age + (age + length)) * 0.5 * length
    return area / (path.end - t0)


def violation_probability(path, target):
    """Fraction of measurement time with age above the target threshold."""
    if target < 0:
        raise ConfigError(f"target AoI must be >= 0, got {target}")
    if not path.resets:
        return None
    above = 0.0
    for seg_start, seg_end, age in _segments(path):
        length = seg_end - seg_start
        # slope 1: time above target within the piece
        above += min(length, max(0.0, age + length - target))
    return above / (path.end - path.resets[0][0])


def aoi_ccdf(path, grid):
    """Violation probabilities over a sorted copy of the grid; nonincreasing."""
    return [violation_probability(path, g) for g in sorted(grid)]


@dataclass
class LatencyBreakdown:
    """Per-phase latency means of committed target-key transactions, plus
    outcome counts over all generated proposals."""

    comm_mean: float | None
    endorse_mean: float | None
    order_mean: float | None
    validate_mean: float | None
    total_mean: float | None
    n_generated: int
    n_valid: int
    n_mvcc_invalid: int
    n_vscc_invalid: int
    n_lost: int


def latency_breakdown(transactions, n_lost, n_generated, target_key):
    """Aggregate a finished transaction trace into a LatencyBreakdown."""
    n_valid = n_mvcc = n_vscc = 0
    sums = [0.0, 0.0, 0.0, 0.0, 0.0]
    n_target = 0
    for tx in transactions:
        if tx.validity == VALID:
            n_valid += 1
        elif tx.validity == MVCC_INVALID:
            n_mvcc += 1
        elif tx.validity == VSCC_INVALID:
            n_vscc += 1
        if tx.key == target_key and tx.validity == VALID:
            n_target += 1
            sums[0] += tx.arrive_time - tx.gen_time
            sums[1] += tx.endorse_done - tx.arrive_time
            sums[2] += tx.order_done - tx.endorse_done
            sums[3] += tx.commit_time - tx.order_done
            sums[4] += tx.commit_time - tx.gen_time
    means = [s / n_target for s in sums] if n_target else [None] * 5
    return LatencyBreakdown(
        comm_mean=means[0],
        endorse_mean=means[1],
        order_mean=means[2],
        validate_mean=means[3],
        total_mean=means[4],
        n_generated=n_generated,
        n_valid=n_valid,
        n_mvcc_invalid=n_mvcc,
        n_vscc_invalid=n_vscc,
        n_lost=n_lost,
    )
