"""
encprim CLI

Command-line interface for encounter segmentation and primitive clustering.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import typer
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from .clustering import (
    cluster_distribution,
    detect_elbow,
    write_cluster_model,
    write_sweep_csv,
)
from .encounters import DrivingEncounter, list_encounter_files, load_encounter_csv
from .errors import ConfigError, EncprimError
from .features import read_features_csv, write_features_csv
from .orchestrator import (
    PipelineConfig,
    RunReport,
    cluster_vectors,
    featurize_primitives,
    load_pipeline_config,
    load_report,
    run_pipeline,
    segment_encounters,
    sweep_vectors,
)
from .orchestrator.report import REPORT_JSON, REPORT_MD, render_markdown
from .orchestrator.stages import (
    FEATURES_FILE,
    PRIMITIVES_FILE,
    SWEEP_FILE,
    RunContext,
    ingest_stage,
)
from .segmentation import read_primitives_jsonl, write_primitives_jsonl
from .synthetic import (
    ScenarioFamily,
    generate_corpus,
    generate_planted_encounter,
    write_labeled_encounter,
)
from .utils import get_logger, load_settings, setup_logging

app = typer.Typer(
    name="encprim",
    help="Encounter Primitives - segment two-vehicle encounters and cluster driving primitives",
)
console = Console()

EXIT_STAGE_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def _init() -> None:
    """Configure logging from settings."""
    settings = load_settings()
    setup_logging(settings.log_level, settings.log_file)


def _config(config: Path | None, **overrides: object) -> PipelineConfig:
    """Load the run configuration (explicit file, else ENCPRIM_DEFAULT_CONFIG, else defaults)."""
    settings = load_settings()
    path = config or settings.default_config
    if overrides.get("jobs") is None and settings.jobs != 1:
        overrides["jobs"] = settings.jobs
    return load_pipeline_config(path, **overrides)


@contextmanager
def _handle_errors() -> Iterator[None]:
    logger = get_logger(__name__)
    try:
        yield
    except ConfigError as e:
        console.print(f"[red]✗ Configuration error:[/] {escape(str(e))}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from e
    except EncprimError as e:
        console.print(f"[red]✗[/] {escape(str(e))}")
        raise typer.Exit(EXIT_STAGE_FAILURE) from e
    except typer.Exit:
        raise
    except Exception as e:
        logger.exception("Unexpected failure")
        console.print(f"\n[red]✗ Error:[/] {escape(str(e))}")
        raise typer.Exit(EXIT_STAGE_FAILURE) from e


def _load_projected(directory: Path) -> dict[str, DrivingEncounter]:
    encounters = {}
    for path in list_encounter_files(directory):
        enc = load_encounter_csv(path)
        encounters[enc.id] = enc
    return encounters


def _show_report(report: RunReport) -> None:
    summary = Table(title="Run summary", show_header=False)
    summary.add_column("Metric", style="cyan")
    summary.add_column("Value")
    summary.add_row("Encounter files", str(report.corpus_size))
    summary.add_row("Qualifying", str(report.qualified_count))
    summary.add_row("Skipped", str(len(report.skipped)))
    summary.add_row("Primitives", str(report.primitive_count))
    summary.add_row("Median duration (s)", f"{report.duration_median_s:.2f}")
    summary.add_row("Primitives / encounter (mode)", str(report.primitives_per_encounter.mode))
    summary.add_row("Clusters", str(report.cluster_k))
    if report.lambda_w is not None:
        summary.add_row("λ_w", f"{report.lambda_w:.6g}")
    if report.lambda_b is not None:
        summary.add_row("λ_b", f"{report.lambda_b:.6g}")
    if report.elbow_k is not None:
        summary.add_row("Elbow k", str(report.elbow_k))
    console.print(summary)


@app.command()
def ingest(
    input_dir: Path = typer.Option(..., "--input", "-i", help="Directory of encounter CSV files"),
    output_dir: Path = typer.Option(Path("output"), "--output", "-o", help="Output directory"),
    config: Path = typer.Option(None, "--config", "-c", help="Pipeline config (JSON or YAML)"),
    resample: bool = typer.Option(
        None, "--resample/--no-resample", help="Resample non-uniform time"
    ),
) -> None:
    """Load, project and qualify encounters."""
    _init()
    with _handle_errors():
        cfg = _config(config, input_dir=input_dir, output_dir=output_dir, resample=resample)
        ctx = RunContext(config=cfg)
        ingest_stage(ctx)
        console.print(
            f"[green]✓[/] {len(ctx.encounters)} of {ctx.corpus_size} encounters qualify"
        )
        for encounter_id, reason in sorted(ctx.skipped.items()):
            console.print(f"[dim]skipped {encounter_id}: {reason}[/]")


@app.command()
def synth(
    output_dir: Path = typer.Option(
        ..., "--output", "-o", help="Directory for CSV and truth files"
    ),
    count: int = typer.Option(30, "--count", "-n", help="Number of encounters"),
    seed: int = typer.Option(0, "--seed", help="Corpus seed"),
    family: list[ScenarioFamily] = typer.Option(None, "--family", "-f", help="Scenario families"),
    noise_pos: float = typer.Option(0.5, "--noise-pos", help="Position noise std (m)"),
    noise_speed: float = typer.Option(0.2, "--noise-speed", help="Speed noise std (m/s)"),
    planted: bool = typer.Option(False, "--planted", help="Planted 3-state HMM encounters instead"),
) -> None:
    """Generate a labeled synthetic corpus."""
    _init()
    with _handle_errors():
        if planted:
            corpus = [
                generate_planted_encounter(seed=seed + i, encounter_id=f"planted_{i:04d}")
                for i in range(count)
            ]
        else:
            corpus = generate_corpus(
                count,
                seed,
                family or None,
                noise_std_pos=noise_pos,
                noise_std_speed=noise_speed,
            )
        for labeled in corpus:
            write_labeled_encounter(labeled, output_dir)
        console.print(f"[green]✓[/] Wrote {len(corpus)} encounters to {output_dir}")


@app.command()
def segment(
    encounters_dir: Path = typer.Option(..., "--encounters", "-e", help="Projected encounter CSVs"),
    output: Path = typer.Option(Path(PRIMITIVES_FILE), "--output", "-o", help="Primitives JSONL"),
    config: Path = typer.Option(None, "--config", "-c", help="Pipeline config (JSON or YAML)"),
    seed: int = typer.Option(None, "--seed", help="Global seed"),
    jobs: int = typer.Option(None, "--jobs", "-j", help="Worker processes"),
) -> None:
    """Segment encounters into driving primitives."""
    _init()
    with _handle_errors():
        cfg = _config(config, global_seed=seed, jobs=jobs)
        encounters = list(_load_projected(encounters_dir).values())
        with console.status("[bold cyan]Sampling...[/]", spinner="dots"):
            _, primitives = segment_encounters(encounters, cfg)
        write_primitives_jsonl(primitives, output)
        console.print(
            f"[green]✓[/] {len(primitives)} primitives from {len(encounters)} encounters"
            f" -> {output}"
        )


@app.command()
def featurize(
    encounters_dir: Path = typer.Option(..., "--encounters", "-e", help="Projected encounter CSVs"),
    primitives_file: Path = typer.Option(..., "--primitives", "-p", help="Primitives JSONL"),
    output: Path = typer.Option(Path(FEATURES_FILE), "--output", "-o", help="Features CSV"),
    config: Path = typer.Option(None, "--config", "-c", help="Pipeline config (JSON or YAML)"),
    length: int = typer.Option(None, "--length", "-l", help="Rescale length l"),
    jobs: int = typer.Option(None, "--jobs", "-j", help="Worker processes"),
) -> None:
    """Compute primitive feature vectors."""
    _init()
    with _handle_errors():
        cfg = _config(config, rescale_l=length, jobs=jobs)
        encounters = _load_projected(encounters_dir)
        records = read_primitives_jsonl(primitives_file)
        missing = sorted({r.encounter_id for r in records} - set(encounters))
        if missing:
            raise EncprimError(f"primitives reference unknown encounters: {', '.join(missing)}")
        primitives = [r.to_primitive(encounters[r.encounter_id]) for r in records]
        vectors = featurize_primitives(primitives, cfg.rescale_l, cfg.jobs)
        write_features_csv(vectors, output)
        console.print(
            f"[green]✓[/] {len(vectors)} feature vectors (l={cfg.rescale_l}) -> {output}"
        )


@app.command()
def cluster(
    features_file: Path = typer.Option(..., "--features", "-f", help="Features CSV"),
    output_dir: Path = typer.Option(Path("."), "--output", "-o", help="Directory for model CSVs"),
    config: Path = typer.Option(None, "--config", "-c", help="Pipeline config (JSON or YAML)"),
    k: int = typer.Option(None, "--k", "-k", help="Number of clusters"),
    seed: int = typer.Option(None, "--seed", help="Global seed"),
) -> None:
    """Cluster feature vectors with k-means."""
    _init()
    with _handle_errors():
        cfg = _config(config, cluster_k=k, global_seed=seed)
        vectors = read_features_csv(features_file)
        model = cluster_vectors(vectors, cfg)
        write_cluster_model(model, [v.source for v in vectors], output_dir)

        table = Table(title=f"k = {model.k}")
        table.add_column("Cluster", justify="right")
        table.add_column("Count", justify="right")
        table.add_column("Share", justify="right")
        for share in cluster_distribution(model):
            table.add_row(str(share.cluster), str(share.count), f"{100 * share.fraction:.2f}%")
        console.print(table)


@app.command()
def sweep(
    features_file: Path = typer.Option(..., "--features", "-f", help="Features CSV"),
    output: Path = typer.Option(Path(SWEEP_FILE), "--output", "-o", help="Sweep CSV"),
    config: Path = typer.Option(None, "--config", "-c", help="Pipeline config (JSON or YAML)"),
    k_min: int = typer.Option(None, "--k-min", help="Smallest k"),
    k_max: int = typer.Option(None, "--k-max", help="Largest k"),
    seeds_per_k: int = typer.Option(None, "--seeds-per-k", help="Seeds per k"),
    seed: int = typer.Option(None, "--seed", help="Global seed"),
    jobs: int = typer.Option(None, "--jobs", "-j", help="Worker processes"),
) -> None:
    """Sweep k and report within/between distances."""
    _init()
    with _handle_errors():
        cfg = _config(config, global_seed=seed, jobs=jobs)
        sweep_overrides = {
            key: value
            for key, value in {"k_min": k_min, "k_max": k_max, "seeds_per_k": seeds_per_k}.items()
            if value is not None
        }
        if sweep_overrides:
            cfg = cfg.with_overrides(sweep={**cfg.sweep.model_dump(), **sweep_overrides})
        rows, elbow = sweep_vectors(read_features_csv(features_file), cfg)
        if not rows:
            raise EncprimError("too few primitives for a k sweep")
        write_sweep_csv(rows, output)
        console.print(f"[green]✓[/] Sweep k={rows[0].k}..{rows[-1].k} -> {output}")
        if elbow is None:
            elbow = detect_elbow(rows)
        console.print(f"[dim]Elbow:[/] {elbow if elbow is not None else 'none'}")


@app.command()
def run(
    config: Path = typer.Option(None, "--config", "-c", help="Pipeline config (JSON or YAML)"),
    input_dir: Path = typer.Option(None, "--input", "-i", help="Directory of encounter CSV files"),
    output_dir: Path = typer.Option(None, "--output", "-o", help="Output directory"),
    seed: int = typer.Option(None, "--seed", help="Global seed"),
    jobs: int = typer.Option(None, "--jobs", "-j", help="Worker processes"),
) -> None:
    """Run the full pipeline."""
    _init()
    with _handle_errors():
        cfg = _config(
            config, input_dir=input_dir, output_dir=output_dir, global_seed=seed, jobs=jobs
        )
        console.print(
            Panel(
                f"[bold]Input:[/] {cfg.input_dir}\n[bold]Output:[/] {cfg.output_dir}\n"
                f"[bold]Seed:[/] {cfg.global_seed}  [bold]Jobs:[/] {cfg.jobs}",
                title="[bold cyan]encprim run[/]",
                border_style="cyan",
            )
        )
        report = run_pipeline(cfg)
        _show_report(report)
        console.print(f"[green]✓[/] Results in {cfg.output_dir}")


@app.command()
def report(
    output_dir: Path = typer.Option(
        Path("output"), "--output", "-o", help="Pipeline output directory"
    ),
) -> None:
    """Show a finished run's report and re-render report.md."""
    _init()
    with _handle_errors():
        path = output_dir / REPORT_JSON
        if not path.exists():
            raise EncprimError(f"no {REPORT_JSON} in {output_dir}; run the pipeline first")
        loaded = load_report(path)
        (output_dir / REPORT_MD).write_text(render_markdown(loaded), encoding="utf-8")
        _show_report(loaded)


def main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
