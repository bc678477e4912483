"""
Pipeline stages.

Each stage is a plain function over a RunContext so it can be used by the
full pipeline or on its own from the CLI. Segmentation and featurization
fan out over a process pool and merge results in encounter-id order.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TypeVar

import numpy as np
import pandas as pd

from ..clustering import (
    ClusterModel,
    SweepRow,
    detect_elbow,
    elbow_sweep,
    kmeans_fit,
    representative_members,
    write_cluster_model,
    write_sweep_csv,
)
from ..encounters import (
    LOCAL_COLUMNS,
    CoordinateFrame,
    DrivingEncounter,
    DrivingPrimitive,
    Qualification,
    list_encounter_files,
    load_encounter_csv,
    project_to_local_frame,
    qualify_encounter,
    save_encounter_csv,
)
from ..errors import EncprimError, PipelineStageError
from ..features import (
    FeatureVector,
    export_matrix_grid,
    featurize_primitive,
    unflatten_features,
    write_features_csv,
)
from ..segmentation import (
    HdpHmmConfig,
    StateSequence,
    extract_primitives,
    fit_segmentation,
    write_primitives_jsonl,
)
from ..utils import derive_seed, get_logger
from .config import PipelineConfig


logger = get_logger(__name__)

ENCOUNTERS_DIR = "encounters"
QUALIFICATION_FILE = "qualification.csv"
PRIMITIVES_FILE = "primitives.jsonl"
FEATURES_FILE = "features.csv"
SWEEP_FILE = "sweep.csv"
REPRESENTATIVES_DIR = "representatives"

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class RunContext:
    """Mutable state threaded through the pipeline stages."""

    config: PipelineConfig
    corpus_size: int = 0
    encounters: list[DrivingEncounter] = field(default_factory=list)
    qualifications: dict[str, Qualification] = field(default_factory=dict)
    skipped: dict[str, str] = field(default_factory=dict)
    sequences: dict[str, StateSequence] = field(default_factory=dict)
    primitives: list[DrivingPrimitive] = field(default_factory=list)
    vectors: list[FeatureVector] = field(default_factory=list)
    model: ClusterModel | None = None
    sweep_rows: list[SweepRow] = field(default_factory=list)
    elbow_k: int | None = None

    @property
    def output_dir(self) -> Path:
        return self.config.output_dir

    @property
    def encounters_by_id(self) -> dict[str, DrivingEncounter]:
        return {enc.id: enc for enc in self.encounters}


def _fan_out(
    stage: str,
    func: Callable[[T], R],
    items: list[T],
    keys: list[str],
    jobs: int,
) -> list[R]:
    """Apply func to every item, in a process pool when jobs > 1; results keep input order."""
    if jobs <= 1 or len(items) <= 1:
        results = []
        for key, item in zip(keys, items):
            try:
                results.append(func(item))
            except EncprimError as e:
                raise PipelineStageError(stage, str(e), key) from e
        return results

    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as executor:
        futures: list[Future[R]] = [executor.submit(func, item) for item in items]
        results = []
        for key, future in zip(keys, futures):
            try:
                results.append(future.result())
            except EncprimError as e:
                for pending in futures:
                    pending.cancel()
                raise PipelineStageError(stage, str(e), key) from e
        return results


# ingest


def ingest_encounter(path: Path, config: PipelineConfig) -> tuple[DrivingEncounter, Qualification]:
    enc = load_encounter_csv(path, resample=config.resample)
    if enc.frame == CoordinateFrame.GEOGRAPHIC_DEGREES:
        enc = project_to_local_frame(enc)
    qualification = qualify_encounter(enc, config.min_encounter_s, config.max_mutual_m)
    return enc, qualification


def ingest_stage(ctx: RunContext) -> None:
    config = ctx.config
    if config.input_dir is None:
        raise PipelineStageError("ingest", "no input_dir configured")
    files = list_encounter_files(config.input_dir)
    if not files:
        raise PipelineStageError("ingest", f"no encounter CSV files in {config.input_dir}")
    ctx.corpus_size = len(files)

    loaded: list[tuple[DrivingEncounter, Qualification]] = []
    for path in files:
        try:
            loaded.append(ingest_encounter(path, config))
        except EncprimError as e:
            raise PipelineStageError("ingest", str(e), path.stem) from e
    loaded.sort(key=lambda item: item[0].id)

    encounters_dir = ctx.output_dir / ENCOUNTERS_DIR
    rows = []
    for enc, q in loaded:
        ctx.qualifications[enc.id] = q
        rows.append((enc.id, q.qualified, q.reason or "", q.duration_s, q.min_distance_m))
        if q.qualified:
            ctx.encounters.append(enc)
            save_encounter_csv(enc, encounters_dir / f"{enc.id}.csv")
        else:
            ctx.skipped[enc.id] = q.reason or "unqualified"
            logger.info("Skipping encounter %s (%s)", enc.id, q.reason)

    write_qualification_csv(rows, ctx.output_dir / QUALIFICATION_FILE)
    logger.info(
        "Ingested %d encounters, %d qualify", ctx.corpus_size, len(ctx.encounters)
    )
    if not ctx.encounters:
        raise PipelineStageError("ingest", "no qualifying encounters")


def write_qualification_csv(
    rows: Iterable[tuple[str, bool, str, float, float]], path: Path
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        list(rows), columns=["encounter_id", "qualified", "reason", "duration_s", "min_distance_m"]
    )
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


# segment


def encounter_config(hdphmm: HdpHmmConfig, global_seed: int, encounter_id: str) -> HdpHmmConfig:
    """Sampler config for one encounter, seeded from (global seed, encounter id)."""
    return hdphmm.model_copy(update={"seed": derive_seed(global_seed, encounter_id)})


def segment_encounter(
    job: tuple[DrivingEncounter, HdpHmmConfig, float],
) -> tuple[StateSequence, list[DrivingPrimitive]]:
    enc, hdphmm, min_primitive_s = job
    _, sequence = fit_segmentation(enc, hdphmm)
    primitives = extract_primitives(sequence, enc, min_primitive_s, min_samples=2)
    return sequence, primitives


def segment_encounters(
    encounters: list[DrivingEncounter], config: PipelineConfig
) -> tuple[dict[str, StateSequence], list[DrivingPrimitive]]:
    encounters = sorted(encounters, key=lambda e: e.id)
    jobs = [
        (enc, encounter_config(config.hdphmm, config.global_seed, enc.id), config.min_primitive_s)
        for enc in encounters
    ]
    results = _fan_out("segment", segment_encounter, jobs, [e.id for e in encounters], config.jobs)
    sequences: dict[str, StateSequence] = {}
    primitives: list[DrivingPrimitive] = []
    for enc, (sequence, prims) in zip(encounters, results):
        sequences[enc.id] = sequence
        primitives.extend(prims)
        logger.debug("Encounter %s: %d primitives", enc.id, len(prims))
    return sequences, primitives


def segment_stage(ctx: RunContext) -> None:
    ctx.sequences, ctx.primitives = segment_encounters(ctx.encounters, ctx.config)
    write_primitives_jsonl(ctx.primitives, ctx.output_dir / PRIMITIVES_FILE)
    logger.info(
        "Segmented %d encounters into %d primitives", len(ctx.encounters), len(ctx.primitives)
    )
    if not ctx.primitives:
        raise PipelineStageError("segment", "no primitives survived the duration filter")


# featurize


def featurize_batch(job: tuple[list[DrivingPrimitive], int]) -> list[FeatureVector]:
    primitives, rescale_l = job
    return [featurize_primitive(p, rescale_l) for p in primitives]


def featurize_primitives(
    primitives: list[DrivingPrimitive], rescale_l: int, jobs: int = 1
) -> list[FeatureVector]:
    """Feature vectors in the order of `primitives`, batched per encounter."""
    batches: dict[str, list[DrivingPrimitive]] = {}
    for prim in primitives:
        batches.setdefault(prim.encounter_id, []).append(prim)
    keys = list(batches)
    results = _fan_out(
        "featurize", featurize_batch, [(batches[k], rescale_l) for k in keys], keys, jobs
    )
    by_identity = {v.source: v for batch in results for v in batch}
    return [by_identity[p.identity] for p in primitives]


def featurize_stage(ctx: RunContext) -> None:
    ctx.vectors = featurize_primitives(ctx.primitives, ctx.config.rescale_l, ctx.config.jobs)
    write_features_csv(ctx.vectors, ctx.output_dir / FEATURES_FILE)
    logger.info("Featurized %d primitives (l=%d)", len(ctx.vectors), ctx.config.rescale_l)


# cluster


def effective_k(requested: int, n_vectors: int) -> int:
    if requested > n_vectors:
        logger.warning(
            "cluster_k=%d exceeds %d primitives; using k=%d", requested, n_vectors, n_vectors
        )
        return n_vectors
    return requested


def cluster_vectors(vectors: list[FeatureVector], config: PipelineConfig) -> ClusterModel:
    k = effective_k(config.cluster_k, len(vectors))
    return kmeans_fit(vectors, k, config.global_seed, n_init=config.kmeans_n_init)


def cluster_stage(ctx: RunContext) -> None:
    model = cluster_vectors(ctx.vectors, ctx.config)
    ctx.model = model
    write_cluster_model(model, [v.source for v in ctx.vectors], ctx.output_dir)
    logger.info(
        "Clustered %d primitives into k=%d (objective %.6g)",
        model.n_points,
        model.k,
        model.objective,
    )
    if ctx.config.export_representatives:
        export_representatives(ctx)


def export_representatives(ctx: RunContext) -> None:
    """Per cluster: the member nearest the centroid as matrix grids and its raw trajectory."""
    assert ctx.model is not None
    directory = ctx.output_dir / REPRESENTATIVES_DIR
    directory.mkdir(parents=True, exist_ok=True)
    for cluster, index in representative_members(ctx.model, ctx.vectors).items():
        matrices = unflatten_features(ctx.vectors[index], ctx.config.rescale_l)
        stem = directory / f"cluster_{cluster:02d}"
        export_matrix_grid(matrices.M_p, stem.with_name(stem.name + "_position.txt"))
        export_matrix_grid(matrices.M_v, stem.with_name(stem.name + "_speed.txt"))
        prim = ctx.primitives[index]
        frame = pd.DataFrame(np.asarray(prim.data), columns=LOCAL_COLUMNS)
        frame.insert(0, "encounter_id", prim.encounter_id)
        frame.to_csv(
            stem.with_name(stem.name + "_trajectory.csv"), index=False, lineterminator="\n"
        )


# sweep


def sweep_range(k_min: int, k_max: int, n_vectors: int) -> tuple[int, int] | None:
    """Clip [k_min, k_max] to [2, N-1]; None when nothing is left."""
    lo, hi = max(k_min, 2), min(k_max, n_vectors - 1)
    if (lo, hi) != (k_min, k_max):
        logger.warning(
            "Sweep range %d..%d clipped to %d..%d for N=%d", k_min, k_max, lo, hi, n_vectors
        )
    if lo >= hi:
        logger.warning("Sweep skipped: %d primitives leave no k range", n_vectors)
        return None
    return lo, hi


def sweep_vectors(
    vectors: list[FeatureVector], config: PipelineConfig
) -> tuple[list[SweepRow], int | None]:
    bounds = sweep_range(config.sweep.k_min, config.sweep.k_max, len(vectors))
    if bounds is None:
        return [], None
    rows = elbow_sweep(
        vectors,
        bounds[0],
        bounds[1],
        config.sweep.seeds_per_k,
        seed=config.global_seed,
        n_init=config.kmeans_n_init,
        jobs=config.jobs,
    )
    return rows, detect_elbow(rows)


def sweep_stage(ctx: RunContext) -> None:
    ctx.sweep_rows, ctx.elbow_k = sweep_vectors(ctx.vectors, ctx.config)
    if ctx.sweep_rows:
        write_sweep_csv(ctx.sweep_rows, ctx.output_dir / SWEEP_FILE)
        logger.info("Sweep over %d values of k, elbow at %s", len(ctx.sweep_rows), ctx.elbow_k)
