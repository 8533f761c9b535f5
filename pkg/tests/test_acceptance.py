"""Acceptance suite.

One test per criterion; each prints a single PASS/FAIL line (run with
``pytest tests/test_acceptance.py -v -s`` to see them live). Tolerances
are fixed here, not tuned.
"""

import itertools
import math
import random
import time

import pytest

from rainbowfree import (
    Hypergraph,
    RandomModelParams,
    SweepConfig,
    decide_oracle,
    decide_peel,
    decide_type1,
    estimate_crossing,
    induced_subhypergraph,
    recover_colouring,
    run_sweep,
    sample,
    threshold_p_star,
    validate_expectation,
)
from rainbowfree.cli import main

from reference import (
    full_rainbow_free_edges,
    random_edge_set,
    random_partition,
    set_partitions,
)


def _report(number: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")


def test_criterion_1_oracle_peel_equivalence():
    started = time.perf_counter()
    disagreements = 0

    # (a) every 3-uniform hypergraph on 5 vertices
    all_edges = list(itertools.combinations(range(5), 3))
    for bits in range(1 << len(all_edges)):
        h = Hypergraph(5, 3, [e for i, e in enumerate(all_edges) if bits >> i & 1])
        if decide_oracle(h).colourable != decide_peel(h).colourable:
            disagreements += 1

    # (b) 1000 random instances, n in 6..10, k in {3,4}, p in {0.1,0.3,0.6}
    rng = random.Random(20_240_809)
    for _ in range(1000):
        n = rng.randint(6, 10)
        k = rng.choice([3, 4])
        p = rng.choice([0.1, 0.3, 0.6])
        h = Hypergraph(n, k, random_edge_set(rng, n, k, p))
        if decide_oracle(h).colourable != decide_peel(h).colourable:
            disagreements += 1

    elapsed = time.perf_counter() - started
    ok = disagreements == 0 and elapsed < 300
    _report(
        1,
        ok,
        f"oracle vs peel: {disagreements} disagreements over 1024 exhaustive "
        f"+ 1000 random instances in {elapsed:.1f}s (target < 300s)",
    )
    assert ok


def test_criterion_2_reduction_biconditional_exhaustive():
    violations = 0
    checked = 0
    for n in (3, 4, 5):
        all_edges = list(itertools.combinations(range(n), 3))
        subsets = [
            set(s)
            for size in range(1, n)
            for s in itertools.combinations(range(n), size)
        ]
        for bits in range(1 << len(all_edges)):
            h = Hypergraph(n, 3, [e for i, e in enumerate(all_edges) if bits >> i & 1])
            direct = decide_oracle(h).colourable
            peelable = any(
                decide_oracle(induced_subhypergraph(h, s)).colourable
                for s in subsets
            )
            checked += 1
            if direct != peelable:
                violations += 1
    ok = violations == 0
    _report(
        2,
        ok,
        f"colourable iff some subset peels to a 2-colourable graph: "
        f"{violations} violations over {checked} hypergraphs (n <= 5)",
    )
    assert ok


def test_criterion_3_recovery_round_trip():
    failures = 0
    checked = 0

    # exhaustive: every 3-class partition on up to 8 vertices
    for n in range(3, 9):
        for blocks in set_partitions(range(n), 3):
            classes = [frozenset(b) for b in blocks]
            h = Hypergraph(n, 3, full_rainbow_free_edges(classes))
            result = recover_colouring(h, 3)
            checked += 1
            if result.partition != frozenset(classes):
                failures += 1

    # random: 500 partitions into 4 classes on up to 12 vertices
    rng = random.Random(3_141_592)
    for _ in range(500):
        n = rng.randint(4, 12)
        classes = random_partition(rng, range(n), 4)
        h = Hypergraph(n, 4, full_rainbow_free_edges(classes))
        result = recover_colouring(h, 4)
        checked += 1
        if result.partition != frozenset(classes):
            failures += 1

    ok = failures == 0
    _report(
        3,
        ok,
        f"edge-set round trip: {failures} failures over {checked} partitions",
    )
    assert ok


def test_criterion_4_first_moment_formula():
    report_a = validate_expectation(10, 3, 0.1, trials=2000, seed=271_828)
    dev_a = abs(report_a.sample_mean - 19.3710)
    ok_a = dev_a <= 3 * report_a.std_error

    report_b = validate_expectation(12, 4, 0.05, trials=2000, seed=271_828)
    dev_b = abs(report_b.sample_mean - 138.66)
    ok_b = dev_b <= 3 * report_b.std_error

    ok = ok_a and ok_b
    _report(
        4,
        ok,
        f"first moment: mean {report_a.sample_mean:.4f} vs 19.3710 "
        f"(dev {dev_a:.4f} <= {3 * report_a.std_error:.4f}); "
        f"mean {report_b.sample_mean:.3f} vs 138.66 "
        f"(dev {dev_b:.3f} <= {3 * report_b.std_error:.3f})",
    )
    assert ok


def test_criterion_5_phase_transition_desk_scale():
    started = time.perf_counter()
    config = SweepConfig(
        k=3,
        n_list=(16,),
        trials=200,
        seed=1_618_033,
        alphas=(0.25, 2.0),
        method="type1-then-peel",
    )
    low, high = run_sweep(config)
    elapsed = time.perf_counter() - started
    assert low.alpha == pytest.approx(0.25)
    assert high.alpha == pytest.approx(2.0)
    ok = low.fraction >= 0.9 and high.fraction <= 0.1 and elapsed < 600
    _report(
        5,
        ok,
        f"n=16: fraction {low.fraction:.3f} at 0.25*p_star (need >= 0.9), "
        f"{high.fraction:.3f} at 2*p_star (need <= 0.1), "
        f"{elapsed:.0f}s (target < 600s)",
    )
    assert ok


def test_criterion_6_crossing_trend():
    trials_by_n = {10: 200, 14: 100, 18: 40}
    ratios = {}
    for n, trials in trials_by_n.items():
        config = SweepConfig(
            k=3,
            n_list=(n,),
            trials=trials,
            seed=12_345,
            alphas=(0.5, 0.75, 1.0, 1.25),
            method="type1-then-peel",
        )
        records = run_sweep(config)
        estimate = estimate_crossing(records)
        ratios[n] = estimate.ratio
    ok = all(math.isfinite(r) and r > 0 for r in ratios.values())
    detail = ", ".join(f"n={n}: p_half/p_star={r:.3f}" for n, r in ratios.items())
    _report(6, ok, f"crossing trend ({detail})")
    assert ok


def test_criterion_7_type1_soundness():
    rng = random.Random(999_331)
    alphas = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0)
    violations = 0
    type1_hits = 0
    for trial in range(1000):
        n = rng.randint(6, 12)
        alpha = rng.choice(alphas)
        p = min(1.0, alpha * threshold_p_star(n, 3))
        h = sample(RandomModelParams(n=n, k=3, p=p, seed=rng.getrandbits(63)))
        if decide_type1(h).colourable is True:
            type1_hits += 1
            if decide_oracle(h).colourable is not True:
                violations += 1
    ok = violations == 0
    _report(
        7,
        ok,
        f"type-1 soundness: {violations} violations among {type1_hits} "
        f"type-1 hits over 1000 instances",
    )
    assert ok


def test_criterion_8_sweep_determinism_across_threads(tmp_path, capsys):
    argv = [
        "sweep",
        "--k", "3",
        "--n", "10", "11",
        "--alphas", "0.5", "1.0", "1.5",
        "--trials", "50",
        "--seed", "20240809",
        "--method", "type1-then-peel",
    ]
    outputs = []
    for threads, name in (("1", "a"), ("1", "b"), ("8", "c")):
        path = tmp_path / f"{name}.csv"
        code = main(argv + ["--threads", threads, "--out", str(path)])
        capsys.readouterr()
        assert code == 0
        stripped = [
            line if line.startswith("#") else line.rsplit(",", 1)[0]
            for line in path.read_text().splitlines()
        ]
        outputs.append("\n".join(stripped).encode())
    ok = outputs[0] == outputs[1] == outputs[2]
    _report(
        8,
        ok,
        "sweep CSV byte-identical (timing column excluded) across reruns "
        "and at --threads 1 vs --threads 8",
    )
    assert ok
