import random

import pytest

from polycode.adversary import AttackPlan, apply_attack
from polycode.errors import AdversaryBudgetError
from polycode.genmatrix import build_v_matrix
from polycode.polytope_codec import (SyndromeGraph, build_syndrome_graph,
                                     decode_report, encode, extend_gram,
                                     honest_channel, intersect_graphs,
                                     majority_table, recover_gram, source_gram,
                                     trusted_candidates, trusted_set)
from polycode.source_packets import pack_source


def make_bundle(n=3, t=1, seed=0, n0=2, k0=2, k=2):
    rng = random.Random(seed)
    a = build_v_matrix(n, t)
    symbols = [rng.randrange(k) for _ in range((n - t) * n0 * k0)]
    block = pack_source(symbols, k, k0, n0, n, t)
    return encode(block, a), a, block


def test_source_gram_symmetry_and_values():
    g = source_gram([(1, 2), (3, 4)])
    assert g == [[5, 11], [11, 25]]


def test_extended_gram_matches_codeword_inner_products():
    bundle, a, _ = make_bundle(5, 2, seed=3)
    full = extend_gram(bundle.gram, a)
    for i in range(5):
        for j in range(5):
            want = sum(x * y for x, y in zip(bundle.codewords[i],
                                             bundle.codewords[j]))
            assert full[i][j] == want


def test_codewords_are_generator_image():
    bundle, a, block = make_bundle(3, 1, seed=5)
    for i, row in enumerate(a.rows):
        want = tuple(sum(row[r] * block.rows[r][c] for r in range(len(row)))
                     for c in range(block.n0))
        assert bundle.codewords[i] == want


def test_honest_channel_full_clique():
    bundle, a, _ = make_bundle(3, 1)
    received = honest_channel(bundle)
    full = recover_gram(received, a)
    g = build_syndrome_graph(received, full)
    assert g.loops == frozenset(range(3))
    assert len(g.edges) == 3
    assert trusted_set(g, 3, 1) == frozenset(range(3))


def test_majority_table_rejects_tie():
    with pytest.raises(AdversaryBudgetError):
        majority_table([[[1]], [[2]]])


def test_majority_table_outvotes_minority():
    honest = [[2, 1], [1, 3]]
    lie = [[9, 9], [9, 9]]
    assert majority_table([honest, honest, lie]) == honest


def test_garbage_packet_loses_self_loop():
    bundle, a, _ = make_bundle(3, 1, seed=7)
    cw = list(bundle.codewords[1])
    cw[0] += 1
    received = apply_attack(bundle, AttackPlan(
        t=1, replacements={1: (tuple(cw), bundle.gram)}))
    full = recover_gram(received, a)
    g = build_syndrome_graph(received, full)
    assert 1 not in g.loops or not any(1 in e for e in g.edges)
    vstar = trusted_set(g, 3, 1)
    assert 1 not in vstar
    assert len(vstar) >= 1  # N - F(1)


def test_trusted_set_soundness_random_attacks():
    for n, t in [(3, 1), (5, 2)]:
        bundle, a, _ = make_bundle(n, t, seed=11, n0=2)
        rng = random.Random(n * 100 + t)
        for _ in range(200):
            targets = rng.sample(range(n), rng.randint(0, t))
            reps = {}
            for i in targets:
                cw = tuple(v + rng.randint(-3, 3) for v in bundle.codewords[i])
                reps[i] = (cw, bundle.gram)
            received = apply_attack(bundle, AttackPlan(t=t, replacements=reps))
            report = decode_report(received, a)
            for i in report["v_star"]:
                assert received.codewords[i] == bundle.codewords[i]


def test_intersect_graphs():
    g1 = SyndromeGraph(3, frozenset({frozenset((0, 1)), frozenset((1, 2))}),
                       frozenset({0, 1, 2}))
    g2 = SyndromeGraph(3, frozenset({frozenset((0, 1))}), frozenset({0, 1}))
    g = intersect_graphs([g1, g2])
    assert g.edges == frozenset({frozenset((0, 1))})
    assert g.loops == frozenset({0, 1})


def test_planted_clique_size_bound():
    """Graph-theoretic guarantee: any self-looped graph containing an
    (n-t)-clique yields |V*| >= n - F(t)."""
    rng = random.Random(42)
    from polycode.vpec import max_uncertified
    for _ in range(150):
        n, t = rng.choice([(3, 1), (4, 1), (5, 2), (6, 2), (8, 3)])
        honest = set(rng.sample(range(n), n - t))
        edges = set()
        for i in honest:
            for j in honest:
                if i < j:
                    edges.add(frozenset((i, j)))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    edges.add(frozenset((i, j)))
        loops = {i for i in range(n)
                 if i in honest or rng.random() < 0.7}
        g = SyndromeGraph(n, frozenset(edges), frozenset(loops))
        v_prime, v_star = trusted_candidates(g, n, t)
        assert len(v_star) >= n - max_uncertified(t)
        assert v_star <= v_prime


def test_decode_report_structure():
    bundle, a, _ = make_bundle(3, 1)
    report = decode_report(honest_channel(bundle), a)
    assert set(report) >= {"loops", "edges", "v_prime", "v_star"}
    assert report["v_star"] == [0, 1, 2]
