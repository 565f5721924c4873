import math
import random
from fractions import Fraction

import pytest

from polycode.adversary import (AttackPlan, apply_layered_attack,
                                random_layered_attack)
from polycode.errors import ParameterError
from polycode.vpec import (ERASURE, erasure_distortion, honest_layered,
                           make_params, max_uncertified, mds_line_rd,
                           polytope_rd, rd_tables, three_packet_decode,
                           three_packet_encode, vpec_decode, vpec_encode)


def random_source(params, seed):
    rng = random.Random(seed)
    return [rng.randrange(params.k) for _ in range(params.source_symbols)]


def test_max_uncertified_values():
    assert [max_uncertified(t) for t in (1, 2, 3, 4)] == [2, 4, 6, 9]


def test_params_reject_too_few_packets():
    with pytest.raises(ParameterError):
        make_params(4, 2, 2, 2, 2)  # N = F(2) is totally undecodable


def test_honest_roundtrip_zero_distortion():
    params = make_params(3, 1, 2, 2, 2)
    symbols = random_source(params, 1)
    out = vpec_decode(honest_layered(vpec_encode(symbols, params)), params)
    assert out == symbols
    assert erasure_distortion(symbols, out) == 0


def test_single_altered_packet_bounded_distortion():
    params = make_params(3, 1, 2, 2, 2)
    symbols = random_source(params, 2)
    bundle = vpec_encode(symbols, params)
    for trial in range(100):
        plan = random_layered_attack(bundle, random.Random(trial), box=2,
                                     force_size=1)
        out = vpec_decode(apply_layered_attack(bundle, plan), params)
        d = erasure_distortion(symbols, out)
        assert d is not math.inf
        assert d <= Fraction(max_uncertified(1), 3)


def test_erasure_distortion_values():
    assert erasure_distortion([0, 1], [0, 1]) == 0
    assert erasure_distortion([0, 1], [ERASURE, 1]) == Fraction(1, 2)
    assert erasure_distortion([0, 1], [1, 1]) == math.inf
    with pytest.raises(ParameterError):
        erasure_distortion([0], [0, 1])


def test_rd_acceptance_points():
    rows = rd_tables(3, 1, [Fraction(1, 2)])
    assert rows[0]["polytope"].distortion == Fraction(2, 3)
    rows = rd_tables(5, 2, [Fraction(1, 3)])
    assert rows[0]["polytope"].distortion == Fraction(4, 5)
    # zero distortion at the exact-recovery rate 1/(N-2T)
    for n, t in [(3, 1), (5, 2), (8, 3)]:
        assert polytope_rd(n, t, Fraction(1, n - 2 * t)) == 0


def test_rd_infeasible_below_threshold():
    assert polytope_rd(3, 1, Fraction(1, 3)) is math.inf
    assert mds_line_rd(3, 1, Fraction(49, 100)) is math.inf


def test_polytope_beats_mds_line_strictly_inside():
    for n, t in [(3, 1), (5, 2)]:
        lo, hi = Fraction(1, n - t), Fraction(1, n - 2 * t)
        for i in range(1, 8):
            r = lo + (hi - lo) * i / 8
            assert polytope_rd(n, t, r) < mds_line_rd(n, t, r)


def test_mds_raw_value_at_one_third():
    # time-sharing line evaluated at R=1/3 for (5,2); capped copy is the same
    rows = rd_tables(5, 2, [Fraction(1, 3)])
    assert rows[0]["mds_raw"].distortion == 1
    assert rows[0]["mds"].distortion == 1


def test_three_packet_scheme_no_attack():
    pkts = three_packet_encode((3, 5, 9))
    assert pkts == ((3, 5), (5, 9), (9, 3))
    assert three_packet_decode(pkts) == [3, 5, 9]


def test_three_packet_scheme_two_disagreements_full_recovery():
    pkts = [list(p) for p in three_packet_encode((3, 5, 9))]
    pkts[1] = [50, 90]  # packet 1 lies about both components
    assert three_packet_decode(pkts) == [3, 5, 9]


def test_three_packet_scheme_single_disagreement_erases():
    pkts = [list(p) for p in three_packet_encode((3, 5, 9))]
    pkts[1][0] = 50  # only x2 disagrees now
    out = three_packet_decode(pkts)
    assert out == [3, ERASURE, 9]


def test_trusted_packets_fill_systematic_layers():
    params = make_params(3, 1, 2, 1, 1)
    symbols = random_source(params, 9)
    bundle = vpec_encode(symbols, params)
    # replace packet 2 with garbage in every layer, gram untouched
    reps = {2: ([tuple(v + 1 for v in bundle.layer_codewords[s][2])
                 for s in range(3)], list(bundle.layer_grams))}
    out = vpec_decode(apply_layered_attack(
        bundle, AttackPlan(t=1, replacements=reps)), params)
    d = erasure_distortion(symbols, out)
    assert d is not math.inf
    assert d <= Fraction(2, 3)
    # systematic positions of the surviving packets decode exactly
    assert any(v is not ERASURE for v in out)
