"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.  Tolerances and time budgets are asserted, not just reported.
"""

import math
import time

import numpy as np
import pytest

from scenesplat.eval_harness import (
    ambiguity_suite,
    conflict_suite,
    default_acceptance_spec,
    default_test_spec,
    generate_corpus,
    run_motion_benchmark,
    run_query_benchmark,
    run_task_benchmark,
    task_command_suite,
    training_examples,
)
from scenesplat.eval_harness.benchmarks import BenchmarkReport, TaskCase
from scenesplat.object_query.query import QueryModels, QueryWeights
from scenesplat.path_refinement import RefinementConfig, refine
from scenesplat.path_refinement.conflicts import Resolution, actual_overlaps
from scenesplat.scene_model import Pose2, boxes_collide
from scenesplat.scene_model.serialize import load_scenario, scenario_to_text
from scenesplat.temporal_alignment import (
    EMBED_DIM,
    TrainingConfig,
    default_location_codebook,
    default_pedestrian_motion_codebook,
    default_vehicle_motion_codebook,
    embed_trajectory,
    temporal_loss,
    train_projectors,
)

from test_geometry import rasterize_overlap


def report(name: str, detail: str = ""):
    print(f"ACCEPTANCE {name}: PASS {detail}".rstrip())


@pytest.fixture(scope="module")
def books():
    return {
        "vehicle": default_vehicle_motion_codebook(),
        "pedestrian": default_pedestrian_motion_codebook(),
    }, default_location_codebook()


@pytest.fixture(scope="module")
def corpora():
    return (
        generate_corpus(default_acceptance_spec(seed=7)),
        generate_corpus(default_test_spec(seed=1007)),
    )


@pytest.fixture(scope="module")
def trained(books, corpora):
    motion_books, location_book = books
    train_corpus, _ = corpora
    start = time.monotonic()
    result = train_projectors(
        training_examples(train_corpus),
        motion_books,
        location_book,
        TrainingConfig(learning_rate=0.05, epochs=300, batch_size=16, seed=7),
    )
    elapsed = time.monotonic() - start
    return result, elapsed


def test_geometry_oracle_equivalence():
    """SAT agrees with the 1 cm rasterization oracle on 1,000 seeded pairs."""
    from scenesplat.scene_model.geometry import separation_margin

    rng = np.random.default_rng(2024)
    start = time.monotonic()
    checked = 0
    while checked < 1000:
        a_dims = tuple(rng.uniform(0.5, 6.0, 2))
        b_dims = tuple(rng.uniform(0.5, 6.0, 2))
        a = Pose2(*rng.uniform(-5, 5, 2), rng.uniform(-math.pi, math.pi))
        b = Pose2(*rng.uniform(-5, 5, 2), rng.uniform(-math.pi, math.pi))
        if abs(separation_margin(a_dims, a, b_dims, b)) < 0.02:
            continue  # below the 1 cm grid's resolving power
        assert boxes_collide(a_dims, a, b_dims, b) == rasterize_overlap(
            a_dims, a, b_dims, b
        ), (a_dims, a, b_dims, b)
        checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    report("geometry-oracle", f"(1000 pairs, {elapsed:.1f}s)")


def test_gradient_correctness(books):
    """Analytic vs central finite differences on 100 random instances."""
    motion_books, location_book = books
    vm = motion_books["vehicle"]
    rng = np.random.default_rng(99)
    eps = 1e-5
    worst = 0.0
    start = time.monotonic()
    for _ in range(100):
        z_m = rng.normal(size=EMBED_DIM)
        z_l = rng.normal(size=EMBED_DIM)
        labels = (
            vm.names[rng.integers(len(vm.names))],
            location_book.names[rng.integers(len(location_book.names))],
        )
        lam_a = float(rng.uniform(0.2, 2.0))
        lam_c = float(rng.uniform(0.0, 0.5))
        _, grad_m, grad_l = temporal_loss(
            z_m, z_l, labels, vm, location_book, lam_a, lam_c
        )
        for target, grad in (("m", grad_m), ("l", grad_l)):
            numeric = np.zeros(EMBED_DIM)
            for i in range(EMBED_DIM):
                zp = (z_m if target == "m" else z_l).copy()
                zm = zp.copy()
                zp[i] += eps
                zm[i] -= eps
                if target == "m":
                    lp, *_ = temporal_loss(zp, z_l, labels, vm, location_book,
                                           lam_a, lam_c)
                    lm, *_ = temporal_loss(zm, z_l, labels, vm, location_book,
                                           lam_a, lam_c)
                else:
                    lp, *_ = temporal_loss(z_m, zp, labels, vm, location_book,
                                           lam_a, lam_c)
                    lm, *_ = temporal_loss(z_m, zm, labels, vm, location_book,
                                           lam_a, lam_c)
                numeric[i] = (lp - lm) / (2 * eps)
            denom = max(np.linalg.norm(numeric), np.linalg.norm(grad), 1e-12)
            rel = float(np.linalg.norm(numeric - grad) / denom)
            worst = max(worst, rel)
    elapsed = time.monotonic() - start
    assert worst < 1e-4
    assert elapsed < 5.0
    report("gradient-correctness",
           f"(100 instances, max rel err {worst:.2e}, {elapsed:.1f}s)")


def test_alignment_training(books, corpora, trained):
    """>= 95% motion and location agreement on the held-out 50 scenarios."""
    motion_books, location_book = books
    _, test_corpus = corpora
    result, elapsed = trained
    ok_m = ok_l = 0
    examples = training_examples(test_corpus)
    for ex in examples:
        book = motion_books[ex.family]
        pair = result.projectors[ex.family]
        z_m = embed_trajectory(ex.features, pair.motion)
        z_l = embed_trajectory(ex.features, pair.location)
        ok_m += book.names[int(np.argmax(book.matrix() @ z_m))] == ex.motion_label
        ok_l += (
            location_book.names[int(np.argmax(location_book.matrix() @ z_l))]
            == ex.location_label
        )
    motion_acc = ok_m / len(examples)
    location_acc = ok_l / len(examples)
    assert motion_acc >= 0.95
    assert location_acc >= 0.95
    assert elapsed < 60.0
    # Training reduced the mean loss.
    for curve in result.loss_curves.values():
        assert curve[-1] <= curve[0]
    report(
        "alignment-training",
        f"(motion {motion_acc:.2f}, location {location_acc:.2f}, "
        f"{elapsed:.1f}s)",
    )


@pytest.fixture(scope="module")
def query_models(books, trained):
    motion_books, location_book = books
    result, _ = trained
    return QueryModels(
        projectors=result.projectors,
        motion_books=motion_books,
        location_book=location_book,
    )


def test_querying_disambiguation(query_models):
    """Temporal cues resolve appearance ties; the ablation cannot."""
    cases = ambiguity_suite()
    assert len(cases) >= 30
    full = run_query_benchmark(cases, query_models)
    ablated = run_query_benchmark(
        cases, query_models, QueryWeights(w_motion=0.0, w_location=0.0)
    )
    full_acc = full.as_dict()["total"]["accuracy"]
    ablated_acc = ablated.as_dict()["total"]["accuracy"]
    assert full_acc >= 0.90
    assert ablated_acc <= 0.60
    report(
        "querying-disambiguation",
        f"({len(cases)} cases, full {full_acc:.2f}, ablated {ablated_acc:.2f})",
    )


def test_task_completion(query_models, models):
    """All 38 grammar-valid commands complete; malformed ones fail cleanly."""
    suite = task_command_suite()
    assert len(suite) == 38
    table = run_task_benchmark(suite, query_models, models.asset_bank)
    doc = table.as_dict()
    assert doc["total"]["rate"] == 1.0, doc.get("failures")
    malformed = [
        TaskCase("remove", suite[0].scenario, "remove bogus=="),
        TaskCase("add_obj", suite[0].scenario, 'add asset="cone" speed=NaN'),
    ]
    bad = run_task_benchmark(malformed, query_models, models.asset_bank)
    assert bad.as_dict()["total"]["completed"] == 0
    report("task-completion", "(38/38 completed, malformed contained)")


@pytest.fixture(scope="module")
def motion_table():
    start = time.monotonic()
    table = run_motion_benchmark(conflict_suite())
    elapsed = time.monotonic() - start
    return table, elapsed


def test_refinement_efficacy(motion_table):
    """Refined failure <= 10%; bypass never beats refined on any scenario."""
    table, elapsed = motion_table
    refined = table.rates("refined")
    bypass = table.rates("bypass")
    assert refined["failure"] <= 0.10
    assert bypass["failure"] >= refined["failure"]
    for name, metrics in table.per_scenario["refined"].items():
        assert (
            metrics.failure <= table.per_scenario["bypass"][name].failure
        ), name
    assert elapsed < 30.0
    report(
        "refinement-efficacy",
        f"(refined {refined['failure']:.2f} vs bypass "
        f"{bypass['failure']:.2f}, {elapsed:.1f}s)",
    )


def test_refinement_safety_invariants():
    """No post-refinement overlaps when resolved; kinematics stay bounded."""
    config = RefinementConfig()
    checked = 0
    for case in conflict_suite():
        result = refine(case.scenario, case.edited, config)
        if result.valid:
            assert actual_overlaps(case.scenario, result.refined) == []
        else:
            assert any(
                c.resolution is Resolution.UNRESOLVED for c in result.conflicts
            )
        for track in result.refined.values():
            speeds = [p.speed for p in track.points]
            assert all(s >= 0.0 for s in speeds)
            for s0, s1 in zip(speeds, speeds[1:]):
                assert abs(s1 - s0) <= config.max_decel * config.timestep + 1e-9
        checked += 1
    report("refinement-safety", f"({checked} scenarios)")


def test_determinism_and_round_trip(tmp_path):
    """load -> serialize is byte-identical; seeded reports reproduce."""
    corpus = generate_corpus(default_acceptance_spec(seed=7))[:5]
    for i, item in enumerate(corpus):
        path = tmp_path / f"s{i}.json"
        path.write_text(scenario_to_text(item.scenario), encoding="utf-8")
        loaded = load_scenario(path)
        assert scenario_to_text(loaded) == path.read_text(encoding="utf-8")

    def one_run() -> str:
        report_doc = BenchmarkReport(
            motion=run_motion_benchmark(conflict_suite()[:6])
        )
        return report_doc.serialize()

    first = one_run()
    second = one_run()
    assert first == second
    report("determinism-round-trip", "(byte-identical files and reports)")
