"""Readers/writers for the delimited and JSON report files."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .classify import AccuracyCurve, MinimalSubsetReport
from .dataset import ChannelRanking
from .ranking import DiscriminantResult
from .topomap import TopomapGrid


def _dump_json(obj, path) -> None:
    with open(path, "w") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


def write_ranking_json(
    path,
    ranking: ChannelRanking,
    lam: float | None = None,
    result: DiscriminantResult | None = None,
    seed: int = 0,
) -> None:
    obj = {
        "method": ranking.method,
        "lambda": lam,
        "order": [int(i) for i in ranking.order],
        "scores": [float(s) for s in ranking.scores],
        "r_w": [rec.r_w for rec in result.per_channel] if result else None,
        "r_b": [rec.r_b for rec in result.per_channel] if result else None,
        "seed": seed,
    }
    _dump_json(obj, path)


def read_ranking_json(path) -> tuple[ChannelRanking, dict]:
    with open(path) as f:
        obj = json.load(f)
    ranking = ChannelRanking(
        order=np.array(obj["order"], dtype=int),
        scores=np.array(obj["scores"], dtype=float),
        method=obj["method"],
    )
    return ranking, obj


def write_curve_csv(path, curve: AccuracyCurve) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["k", "accuracy"])
        for k, a in zip(curve.ks, curve.accuracies):
            w.writerow([k, repr(float(a))])


def read_curve_csv(path) -> tuple[tuple[int, ...], tuple[float, ...]]:
    ks, accs = [], []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ["k", "accuracy"]:
            raise ValueError("curve file must have header k,accuracy")
        for row in reader:
            ks.append(int(row["k"]))
            accs.append(float(row["accuracy"]))
    if not ks:
        raise ValueError("curve file is empty")
    return tuple(ks), tuple(accs)


def write_subset_json(path, report: MinimalSubsetReport, reference: float) -> None:
    _dump_json(
        {
            "k_m": report.k_m,
            "constraint_d": report.constraint_d,
            "reference": reference,
            "admissible": list(report.admissible),
            "channels": list(report.channels),
        },
        path,
    )


def write_topomap_json(path, grid: TopomapGrid, layout_names, scores) -> None:
    values = [
        [None if np.isnan(v) else float(v) for v in row] for row in grid.values
    ]
    _dump_json(
        {
            "resolution": grid.resolution,
            "extent": list(grid.extent),
            "values": values,
            "channels": list(layout_names),
            "normalized_scores": [float(s) for s in scores],
        },
        path,
    )
