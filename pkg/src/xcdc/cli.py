"""Command-line interface.

Exit codes: 0 success, 2 validation error (bad arguments, malformed or
inconsistent inputs), 3 runtime error.
"""

from __future__ import annotations

import sys
import time

import click
import numpy as np

from .baselines import ccs_rank, csp_rank
from .classify import accuracy_curve as _accuracy_curve
from .classify import AccuracyCurve, minimal_subset as _minimal_subset
from .dataset import load_dataset, save_dataset
from .preprocess import BandpassSpec, preprocess_dataset
from .ranking import channel_discriminants, rank_channels, select_lambda_cv
from .reports import (
    read_curve_csv,
    read_ranking_json,
    write_curve_csv,
    write_ranking_json,
    write_subset_json,
    write_topomap_json,
)
from .synth import SynthConfig, generate_synthetic
from .topomap import normalize_scores, topomap_grid

VALIDATION_ERRORS = (ValueError, KeyError, FileNotFoundError, NotADirectoryError)


def _parse_pair(text: str, name: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"{name} must look like LOW:HIGH, got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like START:STOP:STEP, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    return [round(v, 12) for v in np.arange(start, stop + step / 2, step)]


def _parse_ks(text: str, n_channels: int) -> list[int]:
    text = text.replace("C", str(n_channels))
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",")]


@click.group()
def cli():
    """Channel ranking and minimal-subset selection for epoched datasets."""


@cli.command()
@click.option("--channels", type=int, default=16, show_default=True)
@click.option("--informative", default="2,7,11", show_default=True,
              help="Comma-separated informative channel indices.")
@click.option("--trials-per-class", type=int, default=150, show_default=True)
@click.option("--samples", type=int, default=400, show_default=True)
@click.option("--fs", type=float, default=100.0, show_default=True)
@click.option("--carrier", type=float, default=10.0, show_default=True)
@click.option("--depth", type=float, default=0.5, show_default=True)
@click.option("--noise", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def synth(channels, informative, trials_per_class, samples, fs, carrier,
          depth, noise, seed, out_dir):
    """Generate a synthetic dataset with planted informative channels."""
    config = SynthConfig(
        n_channels=channels,
        informative=tuple(int(p) for p in informative.split(",") if p != ""),
        n_trials_per_class=trials_per_class,
        t_samples=samples,
        fs=fs,
        carrier_hz=carrier,
        modulation_depth=depth,
        noise_sigma=noise,
        seed=seed,
    )
    save_dataset(generate_synthetic(config), out_dir)
    click.echo(f"wrote dataset to {out_dir}")


@cli.command()
@click.option("--in", "in_dir", required=True, type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--band", default="0.1:30", show_default=True)
@click.option("--order", type=int, default=2, show_default=True)
@click.option("--downsample-to", type=float, default=100.0, show_default=True)
@click.option("--window", default="0:4", show_default=True)
@click.option("--zero-phase", is_flag=True, default=False)
def preprocess(in_dir, out_dir, band, order, downsample_to, window, zero_phase):
    """Bandpass, downsample, crop, and z-score a dataset."""
    low, high = _parse_pair(band, "band")
    t0, t1 = _parse_pair(window, "window")
    dataset = load_dataset(in_dir)
    out = preprocess_dataset(
        dataset,
        band=BandpassSpec(low, high, order=order, zero_phase=zero_phase),
        downsample_to=downsample_to,
        window=(t0, t1),
    )
    save_dataset(out, out_dir)
    click.echo(f"wrote preprocessed dataset to {out_dir}")


@cli.command()
@click.option("--in", "in_dir", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["xcdc", "ccs", "csp-rank"]),
              default="xcdc", show_default=True)
@click.option("--lambda", "lam", default="0.5", show_default=True,
              help="Weight in [0,1], or 'auto' for cross-validated selection.")
@click.option("--folds", type=int, default=10, show_default=True)
@click.option("--grid", default="0:1:0.1", show_default=True)
@click.option("--cv-topk", type=int, default=3, show_default=True)
@click.option("--max-lag", type=int, default=None,
              help="Restrict the similarity search to |lag| <= L.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def rank(in_dir, method, lam, folds, grid, cv_topk, max_lag, threads, seed,
         out_path):
    """Rank channels of a dataset and write ranking.json."""
    dataset = load_dataset(in_dir)
    if method == "xcdc":
        if lam == "auto":
            lam_value = select_lambda_cv(
                dataset, folds=folds, grid=_parse_grid(grid), top_k=cv_topk,
                seed=seed, max_lag=max_lag, threads=threads,
            )
        else:
            lam_value = float(lam)
        ranking, result = rank_channels(
            dataset, lam_value, max_lag=max_lag, threads=threads
        )
        write_ranking_json(out_path, ranking, lam_value, result, seed=seed)
    elif method == "ccs":
        write_ranking_json(out_path, ccs_rank(dataset), seed=seed)
    else:
        write_ranking_json(out_path, csp_rank(dataset), seed=seed)
    click.echo(f"wrote ranking to {out_path}")


@cli.command("eval-curve")
@click.option("--in", "in_dir", required=True, type=click.Path())
@click.option("--ranking", "ranking_path", required=True, type=click.Path())
@click.option("--ks", default=None, help="e.g. '1:C' or '1,2,4,8'.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--fig", "fig_path", default=None, type=click.Path(),
              help="Optional PNG of the curve.")
def eval_curve(in_dir, ranking_path, ks, seed, out_path, fig_path):
    """Evaluate test accuracy for top-k channel setups; write curve.csv."""
    dataset = load_dataset(in_dir)
    ranking, _ = read_ranking_json(ranking_path)
    ks_list = _parse_ks(ks, dataset.n_channels) if ks else None
    curve = _accuracy_curve(dataset, ranking, ks=ks_list, seed=seed)
    write_curve_csv(out_path, curve)
    if fig_path:
        from .plotting import plot_accuracy_curves

        plot_accuracy_curves({ranking.method: curve}, fig_path)
    click.echo(f"wrote curve to {out_path} (reference {curve.reference:.4f})")


@cli.command("minimal-subset")
@click.option("--curve", "curve_path", required=True, type=click.Path())
@click.option("--reference", default="all", show_default=True,
              help="'all' (accuracy at the largest k) or a number.")
@click.option("--d", type=float, default=0.01, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def minimal_subset_cmd(curve_path, reference, d, out_path):
    """Pick the smallest channel count within the accuracy constraint."""
    ks, accs = read_curve_csv(curve_path)
    # with --reference all the largest evaluated k stands in for the
    # all-channel setup; evaluate k=C if you need the strict definition
    ref = accs[ks.index(max(ks))] if reference == "all" else float(reference)
    curve = AccuracyCurve(ks=ks, accuracies=accs, reference=ref)
    report = _minimal_subset(curve, ref, d)
    write_subset_json(out_path, report, ref)
    click.echo(f"k_m = {report.k_m} (reference {ref:.4f}, d={d})")


@cli.command()
@click.option("--in", "in_dir", required=True, type=click.Path())
@click.option("--ranking", "ranking_path", required=True, type=click.Path())
@click.option("--resolution", type=int, default=64, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--fig", "fig_path", default=None, type=click.Path(),
              help="Optional PNG of the map.")
def topomap(in_dir, ranking_path, resolution, out_path, fig_path):
    """Interpolate normalized ranking scores onto a scalp grid."""
    dataset = load_dataset(in_dir)
    ranking, _ = read_ranking_json(ranking_path)
    grid = topomap_grid(ranking.scores, dataset.layout, resolution)
    write_topomap_json(
        out_path, grid, dataset.layout.names, normalize_scores(ranking.scores)
    )
    if fig_path:
        from .plotting import plot_topomap

        plot_topomap(grid, dataset.layout, fig_path, title=ranking.method)
    click.echo(f"wrote topomap to {out_path}")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
def run(config_path, out_dir):
    """Execute the full pipeline from a JSON/TOML config; write a bundle."""
    from .pipeline import load_config, run_pipeline

    config = load_config(config_path)
    bundle = run_pipeline(config, out_dir)
    click.echo(f"bundle written to {bundle}")


@cli.command("xcorr-bench")
@click.option("--trials", type=int, default=600, show_default=True)
@click.option("--samples", type=int, default=400, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--naive", is_flag=True, default=False,
              help="Time the direct-definition baseline instead.")
@click.option("--seed", type=int, default=0, show_default=True)
def xcorr_bench(trials, samples, threads, naive, seed):
    """Time one channel's discriminant computation; emit a CSV line."""
    from .dataset import EpochedDataset, Trial
    from .synth import grid_layout

    rng = np.random.default_rng(seed)
    data = rng.normal(size=(trials, 1, samples))
    labels = rng.integers(0, 2, size=trials)
    ds = EpochedDataset(
        trials=tuple(
            Trial(data=data[i], label=int(labels[i]), split="train")
            for i in range(trials)
        ),
        fs=100.0,
        layout=grid_layout(1),
        class_names=("a", "b"),
    )
    start = time.perf_counter()
    channel_discriminants(ds, 0.5, threads=threads, naive=naive)
    elapsed = time.perf_counter() - start
    engine = "naive" if naive else "fft"
    click.echo("engine,threads,n_trials,t_samples,seconds")
    click.echo(f"{engine},{threads},{trials},{samples},{elapsed:.6f}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return 3
    except click.ClickException as exc:
        exc.show()
        return 2
    except VALIDATION_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except Exception as exc:  # pipeline and I/O failures
        click.echo(f"error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
