"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines;
every check is exact (integer/rational arithmetic, tolerance zero) and each
criterion enforces its own wall-clock budget.
"""

import math
import random
import time
from fractions import Fraction

from polycode import dss_sim as ds
from polycode.adversary import (apply_attack, apply_layered_attack,
                                exhaustive_single_packet_plans,
                                random_layered_attack,
                                random_single_layer_attack, scale_witness,
                                undecodable_witness, verify_witness)
from polycode.genmatrix import build_v_matrix
from polycode.linalg import all_submatrices_nonsingular, det, integer_null_vector, rank
from polycode.polytope_codec import (SyndromeGraph, build_syndrome_graph,
                                     encode, recover_gram, trusted_candidates)
from polycode.source_packets import pack_source, symbol_budget
from polycode.vpec import (erasure_distortion, honest_layered, make_params,
                           max_uncertified, rd_tables, vpec_decode,
                           vpec_encode)


class Criterion:
    """Context manager enforcing a wall-clock budget and printing the
    one-line verdict the acceptance checklist asks for."""

    def __init__(self, number: int, label: str, budget_s: float):
        self.number = number
        self.label = label
        self.budget = budget_s

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        verdict = "PASS" if exc_type is None and elapsed <= self.budget else "FAIL"
        print(f"[{verdict}] criterion {self.number}: {self.label} "
              f"({elapsed:.2f}s / budget {self.budget:.0f}s)")
        if exc_type is None:
            assert elapsed <= self.budget, (
                f"criterion {self.number} exceeded its {self.budget}s budget")
        return False


def test_criterion_1_rate_distortion_formula():
    with Criterion(1, "rate-distortion formula points", 1.0):
        rows = rd_tables(3, 1, [Fraction(1, 2)])
        assert rows[0]["polytope"].distortion == Fraction(2, 3)
        rows = rd_tables(5, 2, [Fraction(1, 3)])
        assert rows[0]["polytope"].distortion == Fraction(4, 5)
        for n, t in [(3, 1), (5, 2), (8, 3)]:
            rows = rd_tables(n, t, [Fraction(1, n - 2 * t)])
            assert rows[0]["polytope"].distortion == 0


def test_criterion_2_partial_decodability():
    configs = [(3, 1), (5, 2), (8, 3)]
    trials_each = -(-10_000 // len(configs))  # >= 10^4 total
    with Criterion(2, "trusted set sound, |V*| >= N-F(T), 10^4 attacks", 60.0):
        for n, t in configs:
            a = build_v_matrix(n, t)
            rng = random.Random(f"accept2|{n}|{t}")
            symbols = [rng.randrange(2) for _ in range((n - t) * 2)]
            bundle = encode(pack_source(symbols, 2, 1, 2, n, t), a)
            floor = n - max_uncertified(t)
            for _ in range(trials_each):
                plan = random_single_layer_attack(bundle, rng, box=3, t=t)
                received = apply_attack(bundle, plan)
                full = recover_gram(received, a)
                g = build_syndrome_graph(received, full)
                _, vstar = trusted_candidates(g, n, t)
                assert len(vstar) >= floor
                for i in vstar:
                    assert received.codewords[i] == bundle.codewords[i]


def test_criterion_3_vpec_end_to_end():
    with Criterion(3, "VPEC N=3,T=1: exhaustive + 10^4 random attacks", 120.0):
        params = make_params(3, 1, 2, 1, 1)
        rng = random.Random("accept3")
        symbols = [rng.randrange(2) for _ in range(params.source_symbols)]
        bundle = vpec_encode(symbols, params)
        assert erasure_distortion(
            symbols, vpec_decode(honest_layered(bundle), params)) == 0
        cap = Fraction(2, 3)

        def check(plan):
            out = vpec_decode(apply_layered_attack(bundle, plan), params)
            d = erasure_distortion(symbols, out)
            assert d is not math.inf
            assert d <= cap

        for plan in exhaustive_single_packet_plans(bundle, box=2):
            check(plan)
        for i in range(10_000):
            check(random_layered_attack(bundle, random.Random(f"a3|{i}"),
                                        box=3))


def test_criterion_4_rate_convergence():
    with Criterion(4, "packet rate <= 0.51 and monotone in block size", 1.0):
        rates = [symbol_budget(3, 1, 2, 2 ** e, 2 ** e, 1).rate
                 for e in (6, 8, 10, 12)]
        assert rates[-1] <= Fraction(51, 100)
        assert all(a > b for a, b in zip(rates, rates[1:]))


def test_criterion_5_undecodable_witnesses():
    with Criterion(5, "totally undecodable witnesses T=2, T=3 (+scaling)", 10.0):
        for t in (2, 3):
            w = undecodable_witness(t)
            assert w.n == max_uncertified(t)
            report = verify_witness(w)
            assert report["ok"], report
            assert report["checks"]["trusted_set_empty"]
            assert report["checks"]["gram_invariance"]
        w = scale_witness(undecodable_witness(2), 2, 2)
        assert verify_witness(w)["ok"]


def test_criterion_6_dss_correctness():
    with Criterion(6, "DSS N=8,k=d=7,T=1,r=5: 100 seeds, 10 repairs each",
                   120.0):
        params = ds.DssParams(alpha=1, beta=1, n_initial=8, k=7, d=7, t=1,
                              node_cap=40, q=65536, r=5)
        for seed in range(100):
            rng = random.Random(f"accept6|{seed}")
            file_rows = [[rng.randint(1, 16) for _ in range(params.n0)]
                         for _ in range(params.r)]
            events = ds.roaming_adversary_scenario(params, 10, seed)
            log = ds.run_scenario(file_rows, params, events, seed)
            assert log["ok"], (seed, log)
            assert all(e.get("decoded_exactly", True)
                       for e in log["events"])
            assert log["flow"]["ok"]


def test_criterion_7_capacity_formulas():
    with Criterion(7, "MBR 15b / MSR 5a and lower=upper at MSR sweep", 1.0):
        assert ds.dss_capacity_bounds(5, 1, 7, 7, 1)["mbr"] == 15
        assert ds.dss_capacity_bounds(5, 1, 7, 7, 1)["upper"] == 15
        msr = ds.dss_capacity_bounds(1, 1, 7, 7, 1)
        assert msr["msr"] == 5 and msr["msr_alpha"] == 1
        for t in (0, 1, 2, 3):
            for kd in (5, 6, 7):
                if kd < 2 * t + 1:
                    continue
                b = ds.dss_capacity_bounds(1, 1, kd, kd, t)
                assert b["lower"] == b["upper"] == b["msr"], (t, kd)


def test_criterion_8_property_suites():
    with Criterion(8, "matrix/null-vector/graph property suites", 60.0):
        # every square row-submatrix of the generator is nonsingular
        for n in range(3, 9):
            for t in range(1, n - 1):
                if n - 2 * t < 1:
                    continue
                a = build_v_matrix(n, t)
                assert all_submatrices_nonsingular(a.row_list(), n - t)
        # Vandermonde power lemma, m <= 5, k <= 3
        bases = (1, 2, 3, 4, 5)
        for m in range(1, 6):
            for k in range(4):
                mat = [[bases[i] ** (k + j) for j in range(m + 1)]
                       for i in range(m)]
                for drop in range(m + 1):
                    sub = [[r[c] for c in range(m + 1) if c != drop]
                           for r in mat]
                    assert det(sub) != 0
        # integer null vectors: correctness and the no-zero-entry property
        rng = random.Random("accept8")
        done = 0
        while done < 200:
            m = rng.randint(2, 5)
            mat = [[rng.randint(-5, 5) for _ in range(m)]
                   for _ in range(m - 1)]
            if rank(mat) < m - 1:
                continue
            done += 1
            x = integer_null_vector(mat)
            assert any(x)
            assert all(sum(r[j] * x[j] for j in range(m)) == 0 for r in mat)
            minors_full = all(
                det([[row[c] for c in range(m) if c != i] for row in mat]) != 0
                for i in range(m))
            if minors_full:
                assert all(v != 0 for v in x)
        # graph-size lemma on 10^3 planted-clique graphs
        for trial in range(1000):
            g_rng = random.Random(f"accept8|graph|{trial}")
            n, t = g_rng.choice([(3, 1), (4, 1), (5, 2), (6, 2),
                                 (7, 3), (8, 3)])
            honest = set(g_rng.sample(range(n), n - t))
            edges = {frozenset((i, j)) for i in honest for j in honest if i < j}
            for i in range(n):
                for j in range(i + 1, n):
                    if g_rng.random() < 0.5:
                        edges.add(frozenset((i, j)))
            loops = {i for i in range(n)
                     if i in honest or g_rng.random() < 0.6}
            graph = SyndromeGraph(n, frozenset(edges), frozenset(loops))
            _, vstar = trusted_candidates(graph, n, t)
            assert len(vstar) >= n - max_uncertified(t), (n, t, trial)
