"""Exit criteria. Each test appends one PASS/FAIL line to the run summary."""
import itertools
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from pdsm import GenSpec, Matching, count_elemental, enumerate_trees, generate, gs, is_stable_2party, run_compound, run_elemental, verify
from pdsm.bench import run_bench, summarize
from pdsm.compound import CompoundRecipe, Level, default_recipe
from pdsm.elemental import DirectedTree, path_tree
from pdsm.gale_shapley import round_bound
from pdsm.io import read_instance, read_matching, write_instance, write_matching
from pdsm.reduction import problem_partitions
from pdsm.stability import enumerate_stable

SEEDS = range(50)


@pytest.fixture
def report():
    def record(number, ok, detail):
        ACCEPTANCE_LINES.append(f"[{number}] {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


@pytest.fixture(scope="module")
def elemental_sweep():
    """Every plan on 50 seeds at (3, 2..4) and (4, 2..3); shared by criteria 2 and 4."""
    unstable, rounds_over, runs = [], [], 0
    for p, ns in ((3, (2, 3, 4)), (4, (2, 3))):
        trees = list(enumerate_trees(p))
        for n in ns:
            bound = (p - 1) * round_bound(n)
            for seed in SEEDS:
                inst = generate(GenSpec(p, n, seed))
                for t in trees:
                    res = run_elemental(inst, t)
                    runs += 1
                    if res.total_rounds > bound:
                        rounds_over.append((p, n, seed, t.edges))
                    if not verify(inst, res.matching).stable:
                        unstable.append((p, n, seed, t.edges))
    return runs, unstable, rounds_over


def test_1_counting(report):
    expected = {2: 2, 3: 12, 4: 128, 5: 2000}
    counts_ok = all(count_elemental(p) == v for p, v in expected.items())
    sizes = {}
    t0 = time.perf_counter()
    for p in range(2, 7):
        sizes[p] = len({t.edges for t in enumerate_trees(p)})
    elapsed = time.perf_counter() - t0
    enum_ok = all(sizes[p] == count_elemental(p) for p in sizes)
    ok = counts_ok and enum_ok and sizes[6] == 41472 and elapsed < 5
    report(1, ok, f"counts {[count_elemental(p) for p in (2, 3, 4, 5)]}, enumeration sizes {sizes}, {elapsed:.2f}s")
    assert ok


def test_2_elemental_stability(report, elemental_sweep):
    runs, unstable, _ = elemental_sweep
    ok = runs == 50 * (3 * 12 + 2 * 128) and not unstable
    report(2, ok, f"{runs} elemental runs, {len(unstable)} unstable")
    assert ok, unstable[:5]


def test_3_compound_stability(report):
    recipes = []
    for part in problem_partitions(4):
        plans = tuple(path_tree(len(b)) for b in part.blocks if len(b) > 1)
        for final in enumerate_trees(len(part)):
            recipes.append(CompoundRecipe((Level(part, plans),), final))
    clean_runs = clean_fail = tie_runs = tie_stable = 0
    failures = []
    for n in (2, 3):
        for seed in SEEDS:
            inst = generate(GenSpec(4, n, seed))
            for recipe in recipes:
                res = run_compound(inst, recipe)
                stable = verify(inst, res.matching).stable
                if res.ties:
                    tie_runs += 1
                    tie_stable += stable
                else:
                    clean_runs += 1
                    if not stable:
                        clean_fail += 1
                        failures.append((n, seed, recipe))
    ok = clean_fail == 0 and clean_runs > 0
    report(3, ok, f"{len(recipes)} recipes; tie-free runs {clean_runs} with {clean_fail} unstable; "
                  f"runs with L' ties {tie_runs}, of which stable {tie_stable}")
    assert ok, failures[:3]


def test_4_round_bounds(report, elemental_sweep):
    rng = np.random.default_rng(2024)
    violations = 0
    for k in range(1000):
        n = int(rng.integers(1, 31))
        inst = generate(GenSpec(2, n, k))
        if gs(inst, 0, 1).rounds_used > round_bound(n):
            violations += 1
    runs, _, over = elemental_sweep
    ok = violations == 0 and not over
    report(4, ok, f"1000 GS runs n<=30: {violations} violations; {runs} elemental runs: {len(over)} over (p-1)(n^2-2n+2)")
    assert ok


def test_5_proposer_optimal_responder_pessimal(report):
    bad = []
    for seed in range(100):
        n = 1 + seed % 5
        inst = generate(GenSpec(2, n, 1000 + seed))
        b = gs(inst, 0, 1)
        inv = b.inverse
        stable = enumerate_stable(inst)
        r_men = inst.ranks[0, :, 1]
        r_women = inst.ranks[1, :, 0]
        for m in stable:
            partner = m.families[:, 1]
            back = np.empty(n, np.int64)
            back[partner] = np.arange(n)
            if np.any(r_men[np.arange(n), b.pairs] > r_men[np.arange(n), partner]):
                bad.append((seed, "proposer"))
            if np.any(r_women[np.arange(n), inv] < r_women[np.arange(n), back]):
                bad.append((seed, "responder"))
    ok = not bad
    report(5, ok, f"100 instances n<=5: {len(bad)} optimality/pessimality failures")
    assert ok, bad[:5]


def planted(n, seed):
    """Instance plus a matching with a guaranteed blocking pair (0, 0)."""
    inst = generate(GenSpec(2, n, seed))
    prefs = inst.prefs.copy()
    for a, b in ((0, 1), (1, 0)):
        row = list(prefs[a, 0, b])
        row.remove(0)
        prefs[a, 0, b] = [0] + row
    inst = type(inst).from_prefs(prefs)
    partner = np.roll(np.arange(n), 1)
    return inst, Matching(np.column_stack([np.arange(n), partner]))


def test_6_oracle_agreement(report):
    rng = np.random.default_rng(6)
    disagree, kinds = 0, {"planted": 0, "gs": 0, "random": 0}
    for k in range(500):
        n = int(rng.integers(1, 7))
        if k % 5 == 0 and n >= 2:
            inst, m = planted(n, k)
            kind = "planted"
        elif k % 5 == 1:
            inst = generate(GenSpec(2, n, k))
            m = gs(inst, int(k % 2), int(1 - k % 2)).as_matching()
            kind = "gs"
        else:
            inst = generate(GenSpec(2, n, k))
            m = Matching(np.column_stack([np.arange(n), rng.permutation(n)]))
            kind = "random"
        kinds[kind] += 1
        a = verify(inst, m).stable
        b = is_stable_2party(inst, 0, 1, m.families[:, 1])
        if kind == "planted":
            assert not a and not b
        disagree += a != b
    ok = disagree == 0
    report(6, ok, f"500 pairs {kinds}: {disagree} disagreements")
    assert ok


def test_7_degenerate_equivalences(report):
    mismatched = 0
    for seed in range(50):
        inst = generate(GenSpec(2, 1 + seed % 12, seed))
        texts = {
            write_matching(gs(inst, 0, 1).as_matching(), inst),
            write_matching(run_elemental(inst, DirectedTree(2, [(0, 1)])).matching, inst),
            write_matching(run_compound(inst, default_recipe(2, "path")).matching, inst),
            write_matching(run_compound(inst, default_recipe(2, "balanced-bisection")).matching, inst),
        }
        mismatched += len(texts) != 1
    not_diag = 0
    plans = 0
    for p, n in ((2, 5), (3, 4), (4, 3), (5, 3)):
        inst = generate(GenSpec(p, n, 0, "aligned"))
        diag = np.tile(np.arange(n)[:, None], (1, p))
        for t in enumerate_trees(p):
            plans += 1
            not_diag += not np.array_equal(run_elemental(inst, t).matching.families, diag)
    ok = mismatched == 0 and not_diag == 0
    report(7, ok, f"p=2 gs/elemental/compound byte mismatches {mismatched}/50; aligned non-diagonal {not_diag}/{plans} plans")
    assert ok


def test_8_empirical_scaling(report):
    t0 = time.perf_counter()
    recs = run_bench(range(3, 8), [4, 8, 16], 50, "path")
    elapsed = time.perf_counter() - t0
    s = summarize(recs)
    r2 = {n: fit[2] for n, fit in s["vs_p"].items()}
    ratios = s["doubling"]
    ok = (
        set(r2) == {4, 8, 16}
        and all(v >= 0.9 for v in r2.values())
        and len(ratios) == 10
        and all(2 <= v <= 6 for v in ratios.values())
        and elapsed < 120
    )
    report(8, ok, "R^2 vs (p-1): " + ", ".join(f"n={n}:{v:.4f}" for n, v in sorted(r2.items()))
           + f"; doubling-n ratios {min(ratios.values()):.3f}..{max(ratios.values()):.3f}; {elapsed:.1f}s")
    assert ok


def test_9_round_trip(report):
    broken = 0
    rng = np.random.default_rng(9)
    for seed in range(200):
        p, n = int(rng.integers(2, 6)), int(rng.integers(1, 7))
        inst = generate(GenSpec(p, n, seed))
        m = run_elemental(inst, path_tree(p)).matching
        text = write_instance(inst)
        back = read_instance(text)
        mtext = write_matching(m, inst)
        broken += write_instance(back) != text or write_matching(read_matching(mtext, back), back) != mtext
    ok = broken == 0
    report(9, ok, f"200 instances + matchings: {broken} round-trip mismatches")
    assert ok
