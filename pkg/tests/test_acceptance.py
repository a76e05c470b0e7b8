"""End-to-end acceptance suite.

Each test prints one ``[acceptance] criterion N (...): PASS|FAIL`` line
(run pytest with ``-s`` to see them live). The suite is slower than the
unit tests; the full module takes a few minutes, dominated by the timing
comparison against the direct-definition similarity engine.
"""

import json
import time

import numpy as np
import pytest

from xcdc import (
    SynthConfig,
    accuracy_curve,
    ccs_rank,
    generate_synthetic,
    minimal_subset,
    rank_channels,
    save_dataset,
)
from xcdc.baselines import csp_from_covariances
from xcdc.classify import AccuracyCurve
from xcdc.dataset import EpochedDataset, Trial, rank_by_scores
from xcdc.pipeline import load_config, run_pipeline
from xcdc.preprocess import zscore
from xcdc.ranking import (
    channel_discriminants,
    discriminant_score,
    trial_zscore,
)
from xcdc.xcorr import pairwise_similarity, pairwise_similarity_naive, similarity

N_SEEDS = 20
INFORMATIVE = (2, 7, 11)
DUPLICATED = (0, 5)  # two uninformative channels made identical for criterion 7


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    print(f"[acceptance] criterion {num} ({name}): {status}{suffix}")
    assert ok, f"criterion {num} ({name}) failed{suffix}"


def synth_family_config(seed: int) -> SynthConfig:
    return SynthConfig(
        n_channels=16,
        informative=INFORMATIVE,
        n_trials_per_class=150,
        t_samples=400,
        modulation_depth=0.5,
        seed=seed,
    )


def with_duplicated_channel(ds: EpochedDataset) -> EpochedDataset:
    """Copy of the dataset where channel 5 repeats channel 0 exactly."""
    src, dst = DUPLICATED
    trials = []
    for tr in ds.trials:
        data = tr.data.copy()
        data[dst] = data[src]
        trials.append(Trial(data=data, label=tr.label, split=tr.split))
    return EpochedDataset(tuple(trials), ds.fs, ds.layout, ds.class_names)


@pytest.fixture(scope="module")
def seed_family_results():
    """Per-seed rankings and subset sizes shared by criteria 3, 4 and 7."""
    out = []
    for seed in range(N_SEEDS):
        ds = generate_synthetic(synth_family_config(seed))
        xcdc_ranking, _ = rank_channels(ds, 0.5)

        ks = list(range(1, ds.n_channels + 1))
        curve = accuracy_curve(ds, xcdc_ranking, ks=ks, seed=seed)
        k_m_xcdc = minimal_subset(curve, curve.reference, 0.01).k_m

        rng = np.random.default_rng(10_000 + seed)
        random_ranking = rank_by_scores(rng.normal(size=ds.n_channels),
                                        method="random")
        random_curve = accuracy_curve(ds, random_ranking, ks=ks, seed=seed)
        k_m_random = minimal_subset(
            random_curve, random_curve.reference, 0.01
        ).k_m

        dup = with_duplicated_channel(ds)
        ccs_order = ccs_rank(dup).order.tolist()
        xcdc_dup_order = rank_channels(dup, 0.5)[0].order.tolist()

        out.append({
            "xcdc_top3": set(xcdc_ranking.order[:3].tolist()),
            "k_m_xcdc": k_m_xcdc,
            "k_m_random": k_m_random,
            "ccs_dup_order": ccs_order,
            "xcdc_dup_order": xcdc_dup_order,
        })
    return out


def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(0)
    start = time.perf_counter()
    for _ in range(1000):
        n = int(rng.integers(2, 17))
        t = int(np.exp(rng.uniform(0.0, np.log(512))))  # log-uniform in 1..512
        data = rng.normal(size=(n, t))
        fast = pairwise_similarity(data).values
        naive = pairwise_similarity_naive(data).values
        np.testing.assert_allclose(fast, naive, rtol=1e-9, atol=1e-12)
    elapsed = time.perf_counter() - start
    report(1, "oracle equivalence", elapsed < 60.0,
           f"1000 cases in {elapsed:.1f}s")


def _one_channel_dataset(n_trials: int, t_samples: int) -> EpochedDataset:
    from xcdc.synth import grid_layout

    rng = np.random.default_rng(123)
    trials = tuple(
        Trial(
            data=rng.normal(size=(1, t_samples)),
            label=i % 2,
            split="train",
        )
        for i in range(n_trials)
    )
    return EpochedDataset(trials, 100.0, grid_layout(1), ("a", "b"))


def test_criterion_2_engine_speedup():
    ds = _one_channel_dataset(600, 400)

    start = time.perf_counter()
    fast_result = channel_discriminants(ds, 0.5, threads=1)
    fast_s = time.perf_counter() - start

    start = time.perf_counter()
    naive_result = channel_discriminants(ds, 0.5, naive=True)
    naive_s = time.perf_counter() - start

    assert fast_result.per_channel[0].d == pytest.approx(
        naive_result.per_channel[0].d, rel=1e-9
    )
    speedup = naive_s / fast_s
    report(2, "engine speedup", fast_s <= 4.0 and speedup >= 20.0,
           f"fft {fast_s:.2f}s, naive {naive_s:.1f}s, {speedup:.0f}x")


def test_criterion_3_planted_channel_ranking(seed_family_results):
    hits = sum(r["xcdc_top3"] == set(INFORMATIVE) for r in seed_family_results)
    report(3, "planted-channel ranking", hits >= 18,
           f"{hits}/{N_SEEDS} seeds with all informative channels in top 3")


def test_criterion_4_minimal_subset(seed_family_results):
    k_xcdc = [r["k_m_xcdc"] for r in seed_family_results]
    k_random = [r["k_m_random"] for r in seed_family_results]
    small = sum(k <= 6 for k in k_xcdc)
    gap = float(np.mean(k_random) - np.mean(k_xcdc))
    report(4, "minimal-subset protocol", small >= 18 and gap >= 4.0,
           f"k_m<=6 on {small}/{N_SEEDS} seeds; "
           f"mean k_m {np.mean(k_xcdc):.2f} vs random {np.mean(k_random):.2f}")


def test_criterion_5_property_summary(rng):
    ok = True

    # similarity symmetry and S(z, z) = T for z-scored trials
    for _ in range(50):
        t = int(rng.integers(2, 65))
        x, y = rng.normal(size=(2, t))
        ok &= similarity(x, y) == pytest.approx(similarity(y, x), rel=1e-12)
        z = trial_zscore(x[None, :])[0]
        ok &= similarity(z, z) == pytest.approx(float(t), rel=1e-9)

    # D affine in lambda
    for _ in range(200):
        r_w, r_b, lam = rng.normal(size=3)
        lam = abs(lam) % 1
        mix = lam * discriminant_score(r_w, r_b, 1.0) + (1 - lam) * (
            discriminant_score(r_w, r_b, 0.0)
        )
        ok &= discriminant_score(r_w, r_b, lam) == pytest.approx(mix, abs=1e-12)

    # rank invariance under per-trial amplitude scaling
    ds = generate_synthetic(SynthConfig(
        n_channels=6, informative=(1, 4), n_trials_per_class=30,
        t_samples=128, seed=5,
    ))
    scaled = EpochedDataset(
        tuple(
            Trial(data=tr.data * float(rng.uniform(0.5, 3.0)),
                  label=tr.label, split=tr.split)
            for tr in ds.trials
        ),
        ds.fs, ds.layout, ds.class_names,
    )
    ok &= (rank_channels(ds, 0.5)[0].order.tolist()
           == rank_channels(scaled, 0.5)[0].order.tolist())

    # minimal_subset equals a brute-force scan on 1000 random curves
    for _ in range(1000):
        n = int(rng.integers(1, 12))
        ks = tuple(sorted(rng.choice(np.arange(1, 40), size=n, replace=False)))
        accs = tuple(rng.uniform(0, 1, size=n))
        ref = float(rng.uniform(0, 1))
        d = float(rng.uniform(0, 1))
        admissible = [k for k, a in zip(ks, accs) if a >= ref * (1 - d)]
        curve = AccuracyCurve(ks=ks, accuracies=accs, reference=ref)
        if admissible:
            ok &= minimal_subset(curve, ref, d).k_m == min(admissible)
        else:
            with pytest.raises(ValueError):
                minimal_subset(curve, ref, d)

    # CSP identities
    for _ in range(50):
        dim = int(rng.integers(2, 7))
        a = rng.normal(size=(dim, dim + 4))
        b = rng.normal(size=(dim, dim + 4))
        cov_a, cov_b = a @ a.T, b @ b.T
        model = csp_from_covariances(cov_a, cov_b)
        gram = model.filters @ (cov_a + cov_b) @ model.filters.T
        ok &= np.allclose(gram, np.eye(dim), atol=1e-8)
        ok &= bool(np.all((model.eigenvalues >= -1e-10)
                          & (model.eigenvalues <= 1 + 1e-10)))

    # zscore mean/std within 1e-12
    for _ in range(100):
        x = rng.normal(loc=float(rng.uniform(-50, 50)),
                       scale=float(rng.uniform(0.1, 10)),
                       size=int(rng.integers(2, 200)))
        z = zscore(x)
        ok &= abs(z.mean()) < 1e-12 and abs(z.std() - 1.0) < 1e-12

    report(5, "property summary", bool(ok))


def test_criterion_6_bundle_determinism(tmp_path):
    ds_dir = tmp_path / "ds"
    save_dataset(
        generate_synthetic(SynthConfig(
            n_channels=6, informative=(1, 4), n_trials_per_class=40,
            t_samples=128, seed=11,
        )),
        ds_dir,
    )
    cfg_path = tmp_path / "cfg.json"

    def bundle(out, workers):
        cfg_path.write_text(json.dumps({
            "dataset": str(ds_dir), "lambda": 0.5, "ks": [1, 2, 3, 6],
            "seed": 3, "topomap_resolution": 16, "workers": workers,
        }))
        run_pipeline(load_config(cfg_path), out)
        files = {}
        for p in sorted(out.rglob("*")):
            if p.is_file():
                files[str(p.relative_to(out))] = p.read_bytes()
        run = json.loads(files.pop("run.json"))
        run.pop("created_utc")
        run["config"].pop("workers")
        return files, run

    a = bundle(tmp_path / "a", workers=1)
    b = bundle(tmp_path / "b", workers=1)
    c = bundle(tmp_path / "c", workers=4)
    ok = a == b and a[0] == c[0] and a[1] == c[1]
    report(6, "bundle determinism", ok,
           "byte-identical across reruns and worker counts")


def test_criterion_7_baseline_differentiation(seed_family_results):
    def dup_above_informative(order):
        worst_dup = max(order.index(c) for c in DUPLICATED)
        best_informative = min(order.index(c) for c in INFORMATIVE)
        return worst_dup < best_informative

    hits = 0
    for r in seed_family_results:
        ccs_fooled = dup_above_informative(r["ccs_dup_order"])
        xcdc_fooled = dup_above_informative(r["xcdc_dup_order"])
        hits += ccs_fooled and not xcdc_fooled
    report(7, "baseline differentiation", hits >= 18,
           f"CCS fooled by the duplicated pair (and XCDC not) on "
           f"{hits}/{N_SEEDS} seeds")
