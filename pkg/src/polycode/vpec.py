"""Layered variable packet-error coding (VPEC).

The source is split into N equal parts; part s is encoded with the s-th
downward row rotation of the base generator matrix, so every (layer,
source-row) pair appears systematically in exactly one packet.  The decoder
intersects the per-layer syndrome graphs, extracts the trusted set, and
outputs the systematic symbols of trusted packets, erasing everything else.
It never outputs a wrong symbol when at most T packets were altered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AdversaryBudgetError, ParameterError
from .genmatrix import GeneratorMatrix, build_v_matrix, rotate_generator
from .polytope_codec import (ReceivedBundle, build_syndrome_graph, encode,
                             extend_gram, intersect_graphs, majority_table,
                             trusted_set)
from .source_packets import pack_source, unpack_block

ERASURE = None  # erasure marker in reconstructions


def max_uncertified(t: int) -> int:
    """F(T) = T + floor(T^2/4) + 1: the most packets that can evade
    certification when at most T are altered."""
    if t < 0:
        raise ParameterError("t must be nonnegative")
    return t + t * t // 4 + 1


@dataclass(frozen=True)
class VpecCodeParams:
    n: int
    t: int
    k: int
    k0: int
    n0: int
    base: GeneratorMatrix
    layers: tuple  # n rotated generator matrices

    @property
    def part_symbols(self) -> int:
        return (self.n - self.t) * self.n0 * self.k0

    @property
    def source_symbols(self) -> int:
        return self.n * self.part_symbols


def make_params(n: int, t: int, k: int, k0: int, n0: int) -> VpecCodeParams:
    if t < 1:
        raise ParameterError("layered code requires t >= 1")
    if n < max_uncertified(t) + 1:
        raise ParameterError(
            f"decoder guarantee requires n >= F(t)+1 = {max_uncertified(t) + 1}")
    base = build_v_matrix(n, t)
    layers = tuple(rotate_generator(base, s) for s in range(n))
    return VpecCodeParams(n=n, t=t, k=k, k0=k0, n0=n0, base=base, layers=layers)


@dataclass(frozen=True)
class LayeredBundle:
    params: VpecCodeParams
    layer_codewords: tuple  # [layer][packet] -> codeword vector
    layer_grams: tuple      # [layer] -> source Gram table


@dataclass(frozen=True)
class LayeredReceived:
    layer_codewords: tuple  # [layer][packet] -> possibly-altered vector
    gram_copies: tuple      # [packet][layer] -> possibly-altered Gram copy

    @property
    def n(self) -> int:
        return len(self.gram_copies)


def vpec_encode(symbols, params: VpecCodeParams) -> LayeredBundle:
    """Encode a source string of n*(n-t)*n0*k0 symbols into N layered packets."""
    symbols = tuple(symbols)
    if len(symbols) != params.source_symbols:
        raise ParameterError(
            f"expected {params.source_symbols} symbols, got {len(symbols)}")
    part = params.part_symbols
    layer_codewords = []
    layer_grams = []
    for s in range(params.n):
        block = pack_source(symbols[s * part:(s + 1) * part],
                            params.k, params.k0, params.n0, params.n, params.t)
        bundle = encode(block, params.layers[s])
        layer_codewords.append(bundle.codewords)
        layer_grams.append(bundle.gram)
    return LayeredBundle(params=params,
                         layer_codewords=tuple(layer_codewords),
                         layer_grams=tuple(layer_grams))


def honest_layered(bundle: LayeredBundle) -> LayeredReceived:
    n = bundle.params.n
    return LayeredReceived(
        layer_codewords=bundle.layer_codewords,
        gram_copies=tuple(tuple(bundle.layer_grams) for _ in range(n)))


def _all_erasures(params: VpecCodeParams) -> list:
    return [ERASURE] * params.source_symbols


def vpec_decode(received: LayeredReceived, params: VpecCodeParams) -> list:
    """Reconstruction laid out layer-major, row-minor; trusted packets
    contribute their systematic layers, everything else is erased."""
    n, t = params.n, params.t
    graphs = []
    try:
        for s in range(n):
            copies = [received.gram_copies[i][s] for i in range(n)]
            f = majority_table(copies)
            full = extend_gram(f, params.layers[s])
            layer_received = ReceivedBundle(
                codewords=received.layer_codewords[s],
                gram_copies=tuple(copies))
            graphs.append(build_syndrome_graph(layer_received, full))
    except AdversaryBudgetError:
        # Only reachable outside the <= T budget; fail safe with erasures.
        return _all_erasures(params)
    combined = intersect_graphs(graphs)
    vstar = trusted_set(combined, n, t)
    out = _all_erasures(params)
    block = params.n0 * params.k0
    dim = n - t
    for i in vstar:
        for s in range(n):
            j = (i - s) % n
            if j >= dim:
                continue  # parity layer for this packet
            vec = received.layer_codewords[s][i]
            start = (s * dim + j) * block
            for e, v in enumerate(vec):
                digits = unpack_block(v, params.k, params.k0)
                pos = start + e * params.k0
                out[pos:pos + params.k0] = digits
    return out


def erasure_distortion(source, reconstruction):
    """Fraction of erasures when nothing is wrong; +inf on any mismatch."""
    source = list(source)
    reconstruction = list(reconstruction)
    if len(source) != len(reconstruction):
        raise ParameterError("length mismatch")
    erased = 0
    for x, xh in zip(source, reconstruction):
        if xh is ERASURE:
            erased += 1
        elif xh != x:
            return math.inf
    return Fraction(erased, len(source)) if source else Fraction(0)


@dataclass(frozen=True)
class RdPoint:
    rate: Fraction
    distortion: object  # Fraction, or math.inf when infeasible


def polytope_rd(n: int, t: int, rate: Fraction):
    """Achievable distortion of the layered construction at `rate`; +inf
    below the feasibility threshold 1/(n-t); clamped to 0 past 1/(n-2t)."""
    rate = Fraction(rate)
    if rate < Fraction(1, n - t):
        return math.inf
    rate = min(rate, Fraction(1, n - 2 * t))
    f = max_uncertified(t)
    return Fraction(f * (n - t), n * t) * (1 - (n - 2 * t) * rate)


def mds_line_rd(n: int, t: int, rate: Fraction):
    """Time-sharing line between the (n, n-2t) exact-recovery code and the
    (n, n-t) detect-and-erase code; +inf below 1/(n-t)."""
    rate = Fraction(rate)
    if rate < Fraction(1, n - t):
        return math.inf
    rate = min(rate, Fraction(1, n - 2 * t))
    return Fraction(n - t, t) - Fraction((n - t) * (n - 2 * t), t) * rate


def rd_tables(n: int, t: int, rates) -> list:
    """Rows of (rate, polytope point, raw MDS line point, validity info)."""
    if t < 1 or n < max_uncertified(t) + 1 or n <= 2 * t:
        raise ParameterError("require t >= 1 and n >= F(t)+1")
    rows = []
    for r in rates:
        r = Fraction(r)
        feasible = r >= Fraction(1, n - t)
        poly = polytope_rd(n, t, r)
        mds_raw = mds_line_rd(n, t, r)
        mds = mds_raw if mds_raw is math.inf else min(mds_raw, Fraction(1))
        rows.append({
            "rate": r,
            "feasible": feasible,
            "polytope": RdPoint(r, poly),
            # The raw time-sharing value can exceed 1; all-erasure output
            # always achieves 1, so the capped value is also reported.
            "mds_raw": RdPoint(r, mds_raw),
            "mds": RdPoint(r, mds),
        })
    return rows


# --- the simple 3-packet scheme at rate 2/3 (N = 3, T = 1) ---------------

_COMPONENT_SLOTS = {0: ((0, 0), (2, 1)), 1: ((0, 1), (1, 0)), 2: ((1, 1), (2, 0))}
_PAIR_TO_PACKET = {frozenset((0, 1)): 0, frozenset((1, 2)): 1, frozenset((0, 2)): 2}


def three_packet_encode(source) -> tuple:
    x1, x2, x3 = source
    return ((x1, x2), (x2, x3), (x3, x1))


def three_packet_decode(packets) -> list:
    """Per-component agreement check; two disagreements identify the altered
    packet and allow full recovery, one disagreement erases that component."""
    packets = tuple(tuple(p) for p in packets)
    if len(packets) != 3 or any(len(p) != 2 for p in packets):
        raise ParameterError("expected three 2-component packets")
    copies = {c: [packets[p][s] for p, s in _COMPONENT_SLOTS[c]] for c in range(3)}
    disagree = {c for c in range(3) if copies[c][0] != copies[c][1]}
    if len(disagree) == 2:
        bad = _PAIR_TO_PACKET[frozenset(disagree)]
        out = []
        for c in range(3):
            slots = [(p, s) for p, s in _COMPONENT_SLOTS[c] if p != bad]
            out.append(packets[slots[0][0]][slots[0][1]])
        return out
    if len(disagree) == 3:
        return [ERASURE, ERASURE, ERASURE]  # outside the 1-packet budget
    return [ERASURE if c in disagree else copies[c][0] for c in range(3)]
