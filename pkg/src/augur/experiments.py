"""Experiment runners behind the CLI subcommands; each returns a ResultTable."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import bloom, caching, hinted_search, ski_rental, sketch
from .distributions import joint_density, service_distribution
from .predictions import NoiseModel, derive_seed, make_rng
from .queue_sim import Policy, QueueConfig, fcfs_response, simulate
from .results import ResultTable
from .sched_static import continuous_wait, price_of_misprediction_static


def search_bench(n: int = 1024, queries: int = 1000, noise: str = "additive-uniform:16",
                 seed: int = 0) -> ResultTable:
    """Hinted vs plain binary search on a random sorted array.

    Hints are the true position ``t(q)`` passed through the noise model and
    rounded; half the queries are present keys, half are absent.
    """
    if n < 1 or queries < 1:
        raise ValueError("n and queries must be positive")
    rng = make_rng(derive_seed(seed, 0))
    values = np.sort(rng.integers(0, 4 * n, size=n)).tolist()
    present = rng.integers(0, n, size=queries)
    absent = rng.integers(0, 4 * n, size=queries) + 0.5
    qs = [values[i] if j % 2 == 0 else float(absent[j]) for j, i in enumerate(present)]
    model = NoiseModel.parse(noise, derive_seed(seed, 1))
    table = ResultTable(["eta", "probes_hinted", "probes_binary"],
                        config=dict(experiment="search-bench", n=n, queries=queries,
                                    noise=noise, seed=seed))
    for q in qs:
        t = hinted_search.true_position(values, q)
        hint = min(max(int(round(model.sample([t])[0])), 0), n - 1)
        a = hinted_search.hinted_find(values, q, hint)
        b = hinted_search.binary_find(values, q)
        if (a.found, a.index) != (b.found, b.index):
            raise AssertionError(f"hinted and binary search disagree on {q}")
        table.add(abs(hint - t), a.probes, b.probes)
    probes = np.array(table.column("probes_hinted"))
    table.summary = {"mean_probes_hinted": float(probes.mean()),
                     "mean_probes_binary": float(np.mean(table.column("probes_binary")))}
    return table


DEFAULT_LAMBDAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def ski_grid(b_max: int = 50, d_max: int = 200, h_max: int | None = None,
             lambdas: Sequence[float] = DEFAULT_LAMBDAS, tol: float = 1e-9) -> ResultTable:
    h_max = d_max if h_max is None else h_max
    if min(b_max, d_max, h_max) < 1:
        raise ValueError("grid bounds must be positive")
    table = ResultTable(["b", "d_star", "h", "lambda", "cost", "opt", "ratio", "bound"],
                        config=dict(experiment="ski-grid", b_max=b_max, d_max=d_max,
                                    h_max=h_max, lambdas=list(lambdas)))
    b = np.arange(1, b_max + 1)[:, None, None]
    d = np.arange(1, d_max + 1)[None, :, None]
    h = np.arange(1, h_max + 1)[None, None, :]
    violations = 0
    worst = -math.inf
    for lam in lambdas:
        cost, opt, bound = ski_rental.lambda_robust_grid(b, d, h, lam)
        ratio = cost / opt
        slack = ratio - bound
        violations += int(np.count_nonzero(slack > tol))
        worst = max(worst, float(slack.max()))
        bb, dd, hh = np.broadcast_arrays(b, d, h)
        for row in zip(bb.ravel().tolist(), dd.ravel().tolist(), hh.ravel().tolist(),
                       cost.ravel().tolist(), opt.ravel().tolist(), ratio.ravel().tolist(),
                       bound.ravel().tolist()):
            table.rows.append([row[0], row[1], row[2], lam, row[3], row[4], row[5], row[6]])
    table.summary = {"violations": violations, "max_slack": worst}
    return table


def sketch_bench(universe: int = 1000, exponent: float = 1.1, length: int = 100_000,
                 rows: int = 4, cols: int = 64, heavy: int = 50, fn_rate: float = 0.0,
                 seed: int = 0) -> ResultTable:
    if not 0 <= fn_rate <= 1:
        raise ValueError("fn_rate must lie in [0, 1]")
    if heavy < 0 or heavy > universe:
        raise ValueError("heavy must lie in [0, universe]")
    cmp = sketch.compare_on_zipf(universe, exponent, length, rows, cols, heavy, fn_rate, seed)
    table = ResultTable(["item_rank", "true_count", "est_plain", "est_learned"],
                        config=dict(experiment="sketch-bench", universe=universe,
                                    exponent=exponent, length=length, rows=rows, cols=cols,
                                    heavy=heavy, fn_rate=fn_rate, seed=seed))
    for rank, row in enumerate(zip(cmp.true_counts.tolist(), cmp.est_plain.tolist(),
                                   cmp.est_learned.tolist()), 1):
        table.add(rank, *row)
    table.summary = {"mae_plain": cmp.mae_plain, "mae_learned": cmp.mae_learned,
                     "space_plain": cmp.plain_size, "space_learned": cmp.learned_size}
    return table


def bloom_bench(members: int = 1000, queries: int = 100_000,
                member_beta: tuple[float, float] = (5.0, 1.0),
                nonmember_beta: tuple[float, float] = (1.0, 5.0),
                tau: float | None = 0.5, coverage: float | None = None,
                bits_per_key: float = 8.0, backup_bits_per_key: float = 8.0,
                initial_bits_per_key: float = 4.0, sandwich_backup_bits_per_key: float = 4.0,
                score_bits: int = 0, seed: int = 0) -> ResultTable:
    if members < 1 or queries < 1:
        raise ValueError("members and queries must be positive")
    rng = make_rng(derive_seed(seed, 0))
    keys = rng.choice(2**62, size=members + queries, replace=False)
    S, negatives = keys[:members].tolist(), keys[members:].tolist()
    scorer = bloom.BetaScorer(frozenset(S), tuple(member_beta), tuple(nonmember_beta),
                              derive_seed(seed, 1), score_bits)
    if coverage is not None:
        tau = bloom.threshold_for_coverage(S, scorer, coverage)
    if tau is None or not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    pass_rate = scorer.nonmember_pass_rate(tau)
    table = ResultTable(["variant", "bits_total", "fpr_measured", "fpr_theoretical"],
                        config=dict(experiment="bloom-bench", members=members, queries=queries,
                                    member_beta=list(member_beta),
                                    nonmember_beta=list(nonmember_beta), tau=tau,
                                    coverage=coverage, bits_per_key=bits_per_key,
                                    backup_bits_per_key=backup_bits_per_key,
                                    initial_bits_per_key=initial_bits_per_key,
                                    sandwich_backup_bits_per_key=sandwich_backup_bits_per_key,
                                    score_bits=score_bits, seed=seed))
    std = bloom.BloomFilter.for_keys(members, bits_per_key, derive_seed(seed, 2))
    std.add_many(S)
    lb = bloom.LearnedBloom(S, scorer, tau, backup_bits_per_key, derive_seed(seed, 3))
    sb = bloom.SandwichedBloom(S, scorer, tau, initial_bits_per_key,
                               sandwich_backup_bits_per_key, derive_seed(seed, 4))
    false_negatives = 0
    for name, filt, bits, theory in (
            ("standard", std, std.m, std.fpr_expected()),
            ("learned", lb, lb.bits_total, bloom.learned_fpr_expected(lb, pass_rate)),
            ("sandwiched", sb, sb.bits_total, bloom.sandwiched_fpr_expected(sb, pass_rate))):
        false_negatives += int((~filt.query_many(S)).sum())
        table.add(name, bits, float(filt.query_many(negatives).mean()), theory)
    table.summary = {"tau": tau, "false_negatives": false_negatives}
    return table


CACHE_POLICIES = ("belady", "lru", "pfif", "marker", "predictive-marker", "combined")


def _cache_policy(name: str, k: int, reqs, preds, seed: int):
    if name == "belady":
        return caching.belady(k, reqs)
    if name == "lru":
        return caching.LRU(k)
    if name == "pfif":
        return caching.pfif(k, preds)
    if name == "marker":
        return caching.Marker(k, "random", seed=seed)
    if name == "predictive-marker":
        return caching.Marker(k, "predictive", preds, seed=seed)
    raise ValueError(f"unknown cache policy {name!r}; choose from {CACHE_POLICIES}")


def cache_bench(k: int = 8, policies: Sequence[str] = CACHE_POLICIES, trace_file: str | None = None,
                generator: str = "zipf", universe: int = 64, length: int = 10_000,
                exponent: float = 1.0, pairs: int = 100, noise: str = "exact",
                seed: int = 0) -> ResultTable:
    """Miss counts against Belady.  ``combined`` follows PFIF and random Marker."""
    if k < 1:
        raise ValueError("k must be positive")
    preds = None
    if trace_file:
        trace, preds = caching.read_trace(trace_file)
        source = trace_file
    elif generator == "random":
        trace = caching.random_trace(universe, length, derive_seed(seed, 0))
    elif generator == "zipf":
        trace = caching.zipf_trace(universe, length, exponent, derive_seed(seed, 0))
    elif generator == "adversarial-pfif":
        trace, preds = caching.pfif_adversarial(pairs)
    elif generator == "cyclic":
        trace = caching.cyclic_trace(k, max(1, length // k))
    else:
        raise ValueError(f"unknown generator {generator!r}")
    if not trace_file:
        source = generator
    reqs = trace.requests
    if preds is None:
        preds = caching.noisy_predictions(reqs, NoiseModel.parse(noise, derive_seed(seed, 1)))
    opt = caching.run_belady(reqs, k).misses
    err = caching.eta(reqs, preds)
    table = ResultTable(["policy", "misses", "opt_misses", "eta", "eta_over_opt", "ratio"],
                        config=dict(experiment="cache-bench", k=k, policies=list(policies),
                                    source=source, universe=universe, length=len(reqs),
                                    exponent=exponent, pairs=pairs, noise=noise, seed=seed))
    for name in policies:
        pol_seed = derive_seed(seed, 2)
        if name == "combined":
            misses = caching.run_combined(reqs, k, caching.pfif(k, preds),
                                          caching.Marker(k, "random", seed=pol_seed)).misses
        else:
            misses = caching.simulate(_cache_policy(name, k, reqs, preds, pol_seed), reqs).misses
        ratio = misses / opt if opt else (1.0 if misses == 0 else math.inf)
        table.add(name, misses, opt, err, err / opt if opt else 0.0, ratio)
    return table


def pom_static(preset: str = "exp-exp", alpha: float = 0.5, service: str = "exponential",
               n: int = 2, tol: float = 1e-4) -> ResultTable:
    density = joint_density(preset, alpha, service)
    full = continuous_wait(density, "full", n, tol)
    pred = continuous_wait(density, "predicted", n, tol)
    config = dict(experiment="pom-static", preset=preset, n=n, tol=tol)
    if preset != "exp-exp":
        config.update(alpha=alpha, service=service)
    table = ResultTable(["full_info_wait", "predicted_wait", "ratio"], config=config)
    ratio = price_of_misprediction_static(density, n, tol) if full > 0 else math.nan
    table.add(full, pred, ratio)
    return table


DEFAULT_ALPHAS = tuple(j / 10 for j in range(10))


def queue_bench(lam: float = 0.95, dists: Sequence[str] = ("exponential",),
                policies: Sequence[str] = ("fcfs", "spjf"), alphas: Sequence[float] = DEFAULT_ALPHAS,
                trials: int = 50, horizon: float = 2e5, warmup: float = 2e4,
                seed: int = 0) -> ResultTable:
    """Mean time in system per (distribution, policy, alpha).

    Policies that ignore predictions are run once and get an empty alpha cell.
    """
    pols = [Policy(p) for p in policies]
    table = ResultTable(["dist", "policy", "alpha", "mean_T", "stderr", "mean_W", "analytic_T"],
                        config=dict(experiment="queue-bench", lam=lam, dists=list(dists),
                                    policies=[p.value for p in pols], alphas=list(alphas),
                                    trials=trials, horizon=horizon, warmup=warmup, seed=seed))
    for dist in dists:
        service = service_distribution(dist)
        for pol in pols:
            config = QueueConfig(lam, pol, horizon, warmup, trials, seed)
            analytic = fcfs_response(service, lam) if pol is Policy.FCFS else None
            for alpha in (alphas if pol.uses_prediction else (None,)):
                noise = NoiseModel("uniform-multiplicative", alpha or 0.0)
                rep = simulate(config, service, noise)
                table.add(service.name, pol.value, alpha, rep.mean_T, rep.stderr_T, rep.mean_W,
                          analytic)
    return table
