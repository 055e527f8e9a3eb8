"""Scenario presets, replication management, and CSV result emission.

Each scenario sweeps one parameter of a preset configuration and writes one
aggregated row per swept value.  Replication k derives its streams from
master_seed + k, so re-running any scenario with the same config and seed
reproduces the output byte for byte.
"""

import io
from dataclasses import dataclass

from .core import ConfigError
from .config import SWEEPABLE, SimConfig, paper_default
from .dists import Delay
from .metrics import average_aoi, violation_probability
from .simulation import run_once

CSV_HEADER = (
    "swept_param,value,rep_count,avg_aoi_mean,avg_aoi_std,comm_lat,endorse_lat,"
    "order_lat,validate_lat,mvcc_invalid_frac,block_rate,violation_prob"
)

TRACE_HEADER = (
    "rep,id,key,channel,gen_time,arrive_time,endorse_done,captured_version,"
    "order_done,commit_time,validity"
)


@dataclass
class RunSummary:
    """Per-replication observables, the unit aggregated into a ResultRow."""

    avg_aoi: float | None
    violation_prob: float | None
    comm_lat: float | None
    endorse_lat: float | None
    order_lat: float | None
    validate_lat: float | None
    mvcc_invalid_frac: float
    block_rate: float
    n_generated: int
    n_delivered: int
    n_valid: int
    n_mvcc_invalid: int
    n_vscc_invalid: int
    n_lost: int


def summarize(cfg, result):
    """Reduce one RunResult to the observables reported per replication."""
    bd = result.breakdown
    violation = None
    if cfg.target_aoi is not None and result.path.resets:
        violation = violation_probability(result.path, cfg.target_aoi)
    frac = bd.n_mvcc_invalid / result.n_generated if result.n_generated else 0.0
    return RunSummary(
        avg_aoi=average_aoi(result.path),
        violation_prob=violation,
        comm_lat=bd.comm_mean,
        endorse_lat=bd.endorse_mean,
        order_lat=bd.order_mean,
        validate_lat=bd.validate_mean,
        mvcc_invalid_frac=frac,
        block_rate=result.blocks_in_window / (cfg.horizon - cfg.warmup),
        n_generated=result.n_generated,
        n_delivered=result.n_delivered,
        n_valid=bd.n_valid,
        n_mvcc_invalid=bd.n_mvcc_invalid,
        n_vscc_invalid=bd.n_vscc_invalid,
        n_lost=bd.n_lost,
    )


def run_replication(cfg, k):
    """Run replication k of a config (seed master_seed + k)."""
    return summarize(cfg, run_once(cfg, cfg.master_seed + k))


def run_replications(cfg):
    """All replications of one config, in replication order."""
    cfg.validate()
    return [run_replication(cfg, k) for k in range(cfg.replications)]


def _mean_std(values):
    present = [v for v in values if v is not None]
    if not present:
        return None, None
    mean = sum(present) / len(present)
    if len(present) < 2:
        return mean, None
    var = sum((v - mean) ** 2 for v in present) / (len(present) - 1)
    return mean, var ** 0.5


def _fmt(x):
    if x is None:
        return "NA"
    return format(x, ".10g")


def aggregate_row(param, value, summaries):
    """One CSV data row: means over replications, stddev for the average AoI."""
    aoi_mean, aoi_std = _mean_std([s.avg_aoi for s in summaries])
    cells = [
        param,
        value if isinstance(value, str) else format(value, "g"),
        str(len(summaries)),
        _fmt(aoi_mean),
        _fmt(aoi_std),
        _fmt(_mean_std([s.comm_lat for s in summaries])[0]),
        _fmt(_mean_std([s.endorse_lat for s in summaries])[0]),
        _fmt(_mean_std([s.order_lat for s in summaries])[0]),
        _fmt(_mean_std([s.validate_lat for s in summaries])[0]),
        _fmt(_mean_std([s.mvcc_invalid_frac for s in summaries])[0]),
        _fmt(_mean_std([s.block_rate for s in summaries])[0]),
        _fmt(_mean_std([s.violation_prob for s in summaries])[0]),
    ]
    return ",".join(cells)


def run_sweep(base, param, values):
    """Sweep one config key, returning (rows, summaries-per-value)."""
    if param not in SWEEPABLE:
        raise ConfigError(f"unknown sweep parameter '{param}'")
    configs = [base.replace(**{param: value}) for value in values]  # validate first
    rows = []
    all_summaries = []
    for value, cfg in zip(values, configs):
        summaries = run_replications(cfg)
        rows.append(aggregate_row(param, value, summaries))
        all_summaries.append(summaries)
    return rows, all_summaries


def _frange(values):
    return [round(v, 10) for v in values]


SCENARIO_SWEEPS = {
    "fig2": ("block_size", list(range(1, 21)), {}),
    "fig3": (
        "timeout",
        _frange([0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0]),
        {},
    ),
    "fig4": (
        "target_ratio",
        _frange([0.05 * i for i in range(1, 20)]),
        {"timeout": 1.0},
    ),
    "fig5": (
        "stp",
        _frange([0.1 * i for i in range(1, 11)]),
        {
            "total_rate": 20.0,
            "timeout": 1.0,
            "transmit_time": 0.01,
            "comm_latency": Delay("fixed", 0.05),
        },
    ),
    "fig6": (
        "target_aoi",
        _frange([0.5, 1.0, 1.5, 2.0, 2.5, 3.0]),
        {"timeout": 1.0},
    ),
}

SCENARIOS = tuple(SCENARIO_SWEEPS) + ("nodes",)


def run_scenario(name, base=None):
    """Run a preset sweep and return the full CSV text.

    `nodes` reports the endorser count sweep at the minimum Kafka cluster,
    then the Kafka count sweep at three endorsers.
    """
    if base is None:
        base = paper_default()
    if name in SCENARIO_SWEEPS:
        param, values, overrides = SCENARIO_SWEEPS[name]
        rows, _ = run_sweep(base.replace(**overrides), param, values)
    elif name == "nodes":
        node_base = base.replace(timeout=1.0)
        rows, _ = run_sweep(node_base.replace(n_kafka=4), "n_endorsers", [1, 2, 3])
        more, _ = run_sweep(node_base.replace(n_endorsers=3), "n_kafka", [4, 5])
        rows += more
    else:
        raise ConfigError(f"unknown scenario '{name}' (choose from {', '.join(SCENARIOS)})")
    return CSV_HEADER + "\n" + "\n".join(rows) + "\n"


def run_plain(cfg):
    """No sweep: a single aggregated row for the config as given."""
    summaries = run_replications(cfg)
    row = aggregate_row("none", "NA", summaries)
    return CSV_HEADER + "\n" + row + "\n"


def trace_csv(cfg):
    """Per-transaction debug trace over all replications of a config."""
    out = io.StringIO()
    out.write(TRACE_HEADER + "\n")
    for k in range(cfg.replications):
        result = run_once(cfg, cfg.master_seed + k)
        for tx in result.transactions:
            out.write(
                f"{k},{tx.id},{tx.key},{tx.channel},{_fmt(tx.gen_time)},"
                f"{_fmt(tx.arrive_time)},{_fmt(tx.endorse_done)},"
                f"{tx.captured_version},{_fmt(tx.order_done)},"
                f"{_fmt(tx.commit_time)},{tx.validity}\n"
            )
        for pid, key, channel, gen_time in result.lost:
            out.write(f"{k},{pid},{key},{channel},{_fmt(gen_time)},NA,NA,NA,NA,NA,lost\n")
    return out.getvalue()
