"""Run orchestration: preprocess, rank, evaluate, report, render figures.

A run is driven by a JSON or TOML config and produces a bundle directory:

* per method: ``ranking.<method>.json``, ``curve.<method>.csv``,
  ``subset.<method>.json``, ``topomap.<method>.json``
* ``figures/curves.png`` and ``figures/topomap.<method>.png``
* ``run.json`` with every resolved parameter, seeds, and package version

Given the same config and seeds the bundle is byte-identical across runs
and worker counts, except for the timestamp inside ``run.json``.
"""

from __future__ import annotations

import datetime
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import ccs_rank, csp_rank
from .classify import accuracy_curve, default_ks, minimal_subset
from .dataset import EpochedDataset, load_dataset, save_dataset
from .preprocess import BandpassSpec, preprocess_dataset
from .ranking import rank_channels, select_lambda_cv
from .reports import (
    write_curve_csv,
    write_ranking_json,
    write_subset_json,
    write_topomap_json,
)
from .topomap import normalize_scores, topomap_grid


class PipelineError(RuntimeError):
    """A pipeline stage failed; carries the stage name and the cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


DEFAULT_CONFIG = {
    "dataset": None,  # required: dataset directory
    "preprocess": None,  # or {"band": [lo, hi], "order": 2,
    #                         "downsample_to": hz, "window": [t0, t1],
    #                         "zero_phase": false}
    "methods": ["xcdc", "ccs", "csp-rank"],
    "lambda": 0.5,  # number or "auto"
    "folds": 10,
    "grid": [round(0.1 * i, 10) for i in range(11)],
    "cv_topk": 3,
    "ks": None,  # list of channel counts, default 1..C (log-spaced above 20)
    "d": 0.01,
    "seed": 0,
    "max_lag": None,
    "workers": 1,
    "topomap_resolution": 64,
    "figures": True,
    "save_preprocessed": False,
}


def load_config(path) -> dict:
    path = Path(path)
    if path.suffix == ".toml":
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    else:
        with open(path) as f:
            raw = json.load(f)
    unknown = set(raw) - set(DEFAULT_CONFIG)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    config = dict(DEFAULT_CONFIG)
    config.update(raw)
    if config["dataset"] is None:
        raise ValueError("config must set 'dataset'")
    return config


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def _rank_one(method: str, dataset: EpochedDataset, config: dict):
    """Returns (ranking, lambda-or-None, discriminant-result-or-None)."""
    if method == "xcdc":
        lam = config["lambda"]
        if lam == "auto":
            lam = select_lambda_cv(
                dataset,
                folds=config["folds"],
                grid=config["grid"],
                top_k=config["cv_topk"],
                seed=config["seed"],
                max_lag=config["max_lag"],
                threads=config["workers"],
            )
        ranking, result = rank_channels(
            dataset, float(lam), max_lag=config["max_lag"],
            threads=config["workers"],
        )
        return ranking, float(lam), result
    if method == "ccs":
        return ccs_rank(dataset), None, None
    if method == "csp-rank":
        return csp_rank(dataset), None, None
    raise ValueError(f"unknown ranking method {method!r}")


def run_pipeline(config: dict, out_dir) -> Path:
    """Execute every stage and write the report bundle. Returns the bundle path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    dataset = _stage("load", load_dataset, config["dataset"])

    if config["preprocess"]:
        pp = config["preprocess"]
        spec = BandpassSpec(
            low_hz=pp["band"][0],
            high_hz=pp["band"][1],
            order=pp.get("order", 2),
            zero_phase=pp.get("zero_phase", False),
        )
        dataset = _stage(
            "preprocess",
            preprocess_dataset,
            dataset,
            band=spec,
            downsample_to=pp.get("downsample_to", dataset.fs),
            window=tuple(pp.get("window", (0.0, dataset.n_samples / dataset.fs))),
        )
        if config["save_preprocessed"]:
            _stage("preprocess", save_dataset, dataset, out / "preprocessed")

    ks = config["ks"] or default_ks(dataset.n_channels)
    resolved_lambda = {}
    curves = {}
    subsets = {}
    for method in config["methods"]:
        ranking, lam, result = _stage("rank", _rank_one, method, dataset, config)
        resolved_lambda[method] = lam
        write_ranking_json(
            out / f"ranking.{method}.json", ranking, lam, result,
            seed=config["seed"],
        )

        curve = _stage(
            "eval-curve", accuracy_curve, dataset, ranking, ks=ks,
            seed=config["seed"],
        )
        curves[method] = curve
        write_curve_csv(out / f"curve.{method}.csv", curve)

        subset = _stage(
            "minimal-subset", minimal_subset, curve, curve.reference,
            config["d"], ranking,
        )
        subsets[method] = subset
        write_subset_json(out / f"subset.{method}.json", subset, curve.reference)

        scores = ranking.scores
        finite = np.isfinite(scores)
        safe = np.where(finite, scores, scores[finite].min() if finite.any() else 0.0)
        grid = _stage(
            "topomap", topomap_grid, safe, dataset.layout,
            config["topomap_resolution"],
        )
        write_topomap_json(
            out / f"topomap.{method}.json", grid, dataset.layout.names,
            normalize_scores(safe),
        )

        if config["figures"]:
            from .plotting import plot_topomap

            figdir = out / "figures"
            figdir.mkdir(exist_ok=True)
            _stage(
                "figures", plot_topomap, grid, dataset.layout,
                figdir / f"topomap.{method}.png",
                marked_channels=subset.channels, title=method,
            )

    if config["figures"]:
        from .plotting import plot_accuracy_curves

        figdir = out / "figures"
        figdir.mkdir(exist_ok=True)
        _stage("figures", plot_accuracy_curves, curves, figdir / "curves.png")

    run_info = {
        "version": __version__,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": {k: v for k, v in config.items()},
        "resolved": {
            "lambda": resolved_lambda,
            "ks": [int(k) for k in ks],
            "n_trials": dataset.n_trials,
            "n_channels": dataset.n_channels,
            "n_samples": dataset.n_samples,
            "fs_hz": dataset.fs,
            "k_m": {m: s.k_m for m, s in subsets.items()},
        },
    }
    with open(out / "run.json", "w") as f:
        json.dump(run_info, f, indent=2)
        f.write("\n")
    return out
