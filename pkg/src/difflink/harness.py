"""Monte Carlo experiment orchestration and result files.

Runs are split into fixed batches of ``batch_size``; each batch draws its
sample paths once and feeds the same paths to every algorithm, so the
algorithms are compared on common random numbers. Batches may run in
worker processes, but results are merged in run order and the batch
boundaries do not depend on the worker count, so output bytes are the
same for any degree of parallelism.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, validate
from .diffusion import ATCCombiner, run_network
from .esls import ESLSCombiner
from .metrics import LearningCurve, aggregate, steady_state_db
from .sils import SILSCombiner, SilsParams
from .signals import generate_path, stack_paths
from .topology import (NetworkTopology, generate_random_geometric,
                       load_edge_list, metropolis_weights, save_edge_list)

log = logging.getLogger(__name__)

CSV_HEADER = ("iteration", "algorithm", "emse_db", "msd_db")


def build_topology(cfg: ExperimentConfig) -> NetworkTopology:
    """Load the configured edge list, or generate a graph from the root
    stream of the master seed (runs use child streams)."""
    if cfg.topology.edge_list:
        topo = load_edge_list(cfg.topology.edge_list)
        if topo.node_count != cfg.n_nodes:
            raise ValueError(f"edge list has {topo.node_count} nodes, config says {cfg.n_nodes}")
        return topo
    return generate_random_geometric(cfg.n_nodes, cfg.topology.radius,
                                     np.random.SeedSequence(cfg.seed))


def make_combiner(name, cfg: ExperimentConfig, topology, weights, trace=False):
    if name == "atc":
        return ATCCombiner(topology, weights)
    if name == "esls":
        return ESLSCombiner(topology, weights,
                            renormalize=cfg.esls.renormalize,
                            require_self=cfg.esls.require_self,
                            max_neighborhood=cfg.esls.max_neighborhood,
                            trace=trace)
    if name == "sils":
        return SILSCombiner(topology, weights,
                            SilsParams(cfg.sils_rho, cfg.sils.epsilon),
                            persist=cfg.sils.persist_coeffs,
                            clamp=cfg.sils.clamp, trace=trace)
    raise ValueError(f"unknown algorithm {name!r}")


def batch_paths(cfg: ExperimentConfig, runs):
    mode = "markov" if cfg.scenario == "time_varying" else "static"
    return stack_paths(
        generate_path(cfg.seed, r, n_nodes=cfg.n_nodes, filter_len=cfg.filter_len,
                      iterations=cfg.iterations, noise_var=cfg.noise_var,
                      ar_range=tuple(cfg.ar_coeff_range), mode=mode,
                      markov_std=cfg.markov_std, complex_valued=cfg.complex_valued)
        for r in runs
    )


@dataclass
class BatchResult:
    apriori_sq: dict
    msd: dict
    sils_stats: dict = field(default_factory=dict)
    esls_trace: list = field(default_factory=list)
    sils_trace: list = field(default_factory=list)


def run_batch(cfg: ExperimentConfig, topology, weights, runs) -> BatchResult:
    path = batch_paths(cfg, runs)
    trace = cfg.trace and runs[0] == 0
    out = BatchResult({}, {})
    for name in cfg.algorithms:
        combiner = make_combiner(name, cfg, topology, weights, trace)
        res = run_network(path, combiner, cfg.step_size)
        out.apriori_sq[name] = res.apriori_sq
        out.msd[name] = res.msd
        if name == "sils":
            out.sils_stats = {"max_sum_error": combiner.max_sum_error,
                              "negative_count": combiner.negative_count}
            out.sils_trace = combiner.trace
        if name == "esls":
            out.esls_trace = combiner.trace
    return out


def _run_batch_star(args):
    return run_batch(*args)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    topology: NetworkTopology
    curves: dict
    apriori_sq: dict
    msd: dict
    sils_stats: dict
    esls_trace: list
    sils_trace: list

    def steady_state(self, tail_fraction=0.2) -> dict:
        return {name: steady_state_db(c.emse_db, tail_fraction)
                for name, c in self.curves.items()}


def simulate(cfg: ExperimentConfig, topology=None, weights=None) -> ExperimentResult:
    """Run every configured algorithm over ``cfg.runs`` paired runs."""
    validate(cfg)
    topology = topology if topology is not None else build_topology(cfg)
    weights = metropolis_weights(topology) if weights is None else np.asarray(weights)
    batches = [list(range(s, min(s + cfg.batch_size, cfg.runs)))
               for s in range(0, cfg.runs, cfg.batch_size)]
    jobs = [(cfg, topology, weights, b) for b in batches]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_batch_star, jobs))
    else:
        results = [_run_batch_star(j) for j in jobs]

    apriori = {a: np.concatenate([r.apriori_sq[a] for r in results]) for a in cfg.algorithms}
    msd = {a: np.concatenate([r.msd[a] for r in results]) for a in cfg.algorithms}
    curves = {a: aggregate(apriori[a], msd[a], a) for a in cfg.algorithms}
    stats = {}
    if "sils" in cfg.algorithms:
        stats = {"max_sum_error": max(r.sils_stats["max_sum_error"] for r in results),
                 "negative_count": sum(r.sils_stats["negative_count"] for r in results)}
        if stats["negative_count"]:
            log.info("SILS produced %d negative coefficients", stats["negative_count"])
    return ExperimentResult(cfg, topology, curves, apriori, msd, stats,
                            results[0].esls_trace, results[0].sils_trace)


def curves_csv(curves: dict) -> str:
    """Learning curves as CSV text, one row per (iteration, algorithm)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    names = list(curves)
    length = len(curves[names[0]])
    for i in range(length):
        for name in names:
            c = curves[name]
            writer.writerow([i, name, f"{c.emse_db[i]:.17g}", f"{c.msd_db[i]:.17g}"])
    return buf.getvalue()


def read_curves_csv(path) -> dict:
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            e, m = rows.setdefault(row["algorithm"], ([], []))
            e.append(float(row["emse_db"]))
            m.append(float(row["msd_db"]))
    return {a: LearningCurve(a, np.array(e), np.array(m)) for a, (e, m) in rows.items()}


PLOT_SCRIPT = '''\
"""Plot the network EMSE learning curves in learning_curves.csv."""
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
curves = defaultdict(list)
with open(here / "learning_curves.csv", newline="") as fh:
    for row in csv.DictReader(fh):
        curves[row["algorithm"]].append(float(row["emse_db"]))

fig, ax = plt.subplots(figsize=(6, 4))
for name, values in curves.items():
    ax.plot(values, label=name.upper())
ax.set_xlabel("iteration")
ax.set_ylabel("EMSE (dB)")
ax.set_title({title!r})
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else here / "emse.png"
fig.savefig(out, dpi=150)
'''


def _write(path: Path, text: str):
    path.write_bytes(text.encode("utf-8"))


def write_outputs(result: ExperimentResult, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    written = {}

    written["curves"] = out / "learning_curves.csv"
    _write(written["curves"], curves_csv(result.curves))

    written["topology"] = out / "topology.txt"
    save_edge_list(result.topology, written["topology"])

    title = ("Network EMSE, static scenario" if cfg.scenario == "static"
             else "Network EMSE, time-varying scenario")
    written["plot"] = out / "plot_curves.py"
    _write(written["plot"], PLOT_SCRIPT.format(title=title))

    if cfg.trace and result.esls_trace:
        written["esls_trace"] = out / "esls_trace.csv"
        lines = ["iteration,node,subset_bitmask"]
        lines += [f"{i},{k},{m}" for i, k, m in result.esls_trace]
        _write(written["esls_trace"], "\n".join(lines) + "\n")
    if cfg.trace and result.sils_trace:
        written["sils_trace"] = out / "sils_trace.csv"
        lines = ["iteration,node,neighbor,coefficient"]
        lines += [f"{i},{k},{l},{c:.17g}" for i, k, l, c in result.sils_trace]
        _write(written["sils_trace"], "\n".join(lines) + "\n")

    manifest = {
        "config": cfg.to_dict(),
        "resolved": {"sils_rho": cfg.sils_rho},
        "topology": {"node_count": result.topology.node_count,
                     "edges": result.topology.edges()},
        "steady_state_emse_db": result.steady_state(),
        "sils_instrumentation": result.sils_stats,
        "versions": {"difflink": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
    }
    written["manifest"] = out / "manifest.json"
    _write(written["manifest"], json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return written


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    result = simulate(cfg)
    write_outputs(result, out_dir if out_dir is not None else cfg.output_dir)
    return result
