# src/chains/runner.py
"""
Chain driver: seed a plan, step the mixture kernel, log samples.

A chain is a pure function of (graph, config): chain ``i`` draws from the
stream ``SeedSequence([seed, i])`` and records carry no wall-clock data, so
reruns reproduce their logs byte for byte.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from contextlib import nullcontext
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from chains.observables import extract_observables
from core.files import NDJSONWriter
from core.rng import chain_rng
from forests.seeding import seed_random_state
from graphs.loaders import load_graph_file
from graphs.weights import county_weighted
from walks.kernels import CycleWalk
from walks.proposals import StepKind

logger = logging.getLogger("cyclewalk.chains")

PROGRESS_EVERY = 1000


@dataclass
class RunResult:
    chain_index: int
    log_path: Path
    proposals_path: Path | None
    records: int
    steps: int
    two_tree_steps: int
    two_tree_accepted: int
    checksum: str

    @property
    def two_tree_fraction(self):
        return self.two_tree_steps / self.steps if self.steps else 0.0


def load_run_graph(cfg):
    """Graph named by ``cfg`` with the configured keys and county weighting applied"""
    graph = load_graph_file(cfg.graph, cfg.graph_keys)
    if cfg.measure.county_weight is not None:
        graph = county_weighted(graph, cfg.measure.county_weight)
    return graph


def run(graph, cfg, on_progress=None):
    """Run one chain; returns a RunResult describing the log it wrote"""
    options = getattr(settings, "CYCLEWALK", {})
    rng = chain_rng(cfg.seed, cfg.chain_index)
    spec = cfg.measure
    state = seed_random_state(
        graph,
        cfg.districts,
        cfg.bounds(graph),
        rng,
        max_retries=options.get("MAX_SEED_RETRIES", 100),
        method=cfg.seeding,
        weighted=spec.weighted,
    )
    walk = CycleWalk(spec, cfg.p_two_tree)

    out_dir = Path(cfg.out)
    log_path = out_dir / cfg.log_name
    proposals_path = out_dir / cfg.proposals_name if cfg.record_proposals else None
    two_tree_steps = 0
    two_tree_accepted = 0

    logger.info(
        f"Chain {cfg.chain_index}: {cfg.steps} steps, p_two_tree={cfg.p_two_tree}, "
        f"gamma={spec.gamma}, logging to {log_path}"
    )
    sidecar_context = NDJSONWriter(proposals_path) if proposals_path else nullcontext()
    with NDJSONWriter(log_path) as log, sidecar_context as sidecar:
        initial = {"step": 0, "kind": "initial", "accepted": True, "config": cfg.as_dict()}
        initial.update(extract_observables(state, cfg.observables, spec, cfg.votes))
        log.write(initial)

        for step in range(1, cfg.steps + 1):
            outcome = walk.step(state, rng)
            if outcome.kind == StepKind.TWO_TREE:
                two_tree_steps += 1
                two_tree_accepted += outcome.accepted
                if sidecar is not None and outcome.proposed:
                    sidecar.write(outcome.as_record(step))

            if cfg.audit_every and step % cfg.audit_every == 0:
                state.audit()

            if step % cfg.cadence == 0:
                record = {"step": step, "kind": str(outcome.kind), "accepted": outcome.accepted}
                record.update(extract_observables(state, cfg.observables, spec, cfg.votes))
                log.write(record)

            if on_progress is not None and step % PROGRESS_EVERY == 0:
                on_progress(cfg.chain_index, step)

        records = log.count

    if on_progress is not None:
        on_progress(cfg.chain_index, cfg.steps)
    logger.info(
        f"Chain {cfg.chain_index} finished: {records} records, "
        f"{two_tree_accepted}/{two_tree_steps} 2-tree moves accepted"
    )
    return RunResult(
        chain_index=cfg.chain_index,
        log_path=log_path,
        proposals_path=proposals_path,
        records=records,
        steps=cfg.steps,
        two_tree_steps=two_tree_steps,
        two_tree_accepted=two_tree_accepted,
        checksum=state.checksum(),
    )


def run_many(graph, configs, workers=None, on_progress=None):
    """
    Run independent chains, in a process pool when more than one worker is
    available. Results come back in chain order.
    """
    options = getattr(settings, "CYCLEWALK", {})
    workers = workers or options.get("WORKERS", 1)
    workers = max(1, min(workers, len(configs)))

    if workers == 1:
        return [run(graph, cfg, on_progress) for cfg in configs]

    results = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(run, graph, cfg): cfg for cfg in configs}
        for future in as_completed(futures):
            result = future.result()
            if on_progress is not None:
                on_progress(result.chain_index, result.steps)
            results.append(result)
    return sorted(results, key=lambda result: result.chain_index)
