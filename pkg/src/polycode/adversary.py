"""Attack plans against polytope bundles and the totally-undecodable witness.

The witness construction produces, for T > 1 and N = F(T), a received matrix
whose every packet index is ambiguous across a family of mutually consistent
possible transmitted codewords, so the trusted set is forced empty.  All
arithmetic is over the integers: the Hadamard sign pattern selects between
the two orderings of each (base, base+shift) column pair directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .errors import ConstructionError, ParameterError
from .genmatrix import GeneratorMatrix, build_v_matrix
from .linalg import dot, mat_mul
from .polytope_codec import (ReceivedBundle, TransmittedBundle,
                             build_syndrome_graph, extend_gram, source_gram,
                             trusted_set)
from .vpec import (LayeredBundle, LayeredReceived, VpecCodeParams,
                   erasure_distortion, honest_layered, max_uncertified,
                   vpec_decode, vpec_encode)


# --- attack plans ---------------------------------------------------------

@dataclass(frozen=True)
class AttackPlan:
    """Replacement payloads for an altered set of at most T packets.

    For single-layer bundles a replacement is (codeword, gram_copy); for
    layered bundles it is (per-layer codewords, per-layer gram copies).
    """
    t: int
    replacements: dict = field(default_factory=dict)

    @property
    def altered(self) -> frozenset:
        return frozenset(self.replacements)

    def check_budget(self) -> None:
        if len(self.replacements) > self.t:
            raise ParameterError(
                f"attack alters {len(self.replacements)} packets, budget is {self.t}")


def apply_attack(bundle: TransmittedBundle, plan: AttackPlan) -> ReceivedBundle:
    """Packets in the altered set are replaced verbatim; honest packets carry
    the true codeword and the true gram table."""
    plan.check_budget()
    codewords = list(bundle.codewords)
    grams = [bundle.gram] * bundle.n
    for i, (cw, gram) in plan.replacements.items():
        if not 0 <= i < bundle.n:
            raise ParameterError(f"packet index {i} out of range")
        codewords[i] = tuple(cw)
        grams[i] = tuple(tuple(r) for r in gram)
    return ReceivedBundle(codewords=tuple(codewords), gram_copies=tuple(grams))


def apply_layered_attack(bundle: LayeredBundle, plan: AttackPlan) -> LayeredReceived:
    plan.check_budget()
    n = bundle.params.n
    layer_codewords = [list(layer) for layer in bundle.layer_codewords]
    gram_copies = [list(bundle.layer_grams) for _ in range(n)]
    for i, (cw_per_layer, gram_per_layer) in plan.replacements.items():
        if not 0 <= i < n:
            raise ParameterError(f"packet index {i} out of range")
        for s in range(n):
            layer_codewords[s][i] = tuple(cw_per_layer[s])
            gram_copies[i][s] = tuple(tuple(r) for r in gram_per_layer[s])
    return LayeredReceived(
        layer_codewords=tuple(tuple(layer) for layer in layer_codewords),
        gram_copies=tuple(tuple(g) for g in gram_copies))


def random_single_layer_attack(bundle: TransmittedBundle, rng: random.Random,
                               box: int, t: int) -> AttackPlan:
    """Random <= T-packet attack: boxed perturbations of the true codewords,
    occasional entry permutations (norm-preserving), occasional gram lies."""
    size = rng.randint(0, t)
    targets = rng.sample(range(bundle.n), size)
    replacements = {}
    for i in targets:
        replacements[i] = (_perturb_vector(list(bundle.codewords[i]), rng, box),
                           _maybe_corrupt_gram(bundle.gram, rng, box))
    return AttackPlan(t=t, replacements=replacements)


def random_layered_attack(bundle: LayeredBundle, rng: random.Random,
                          box: int, t: int | None = None,
                          force_size: int | None = None) -> AttackPlan:
    params = bundle.params
    t = params.t if t is None else t
    size = rng.randint(0, t) if force_size is None else force_size
    targets = rng.sample(range(params.n), size)
    replacements = {}
    for i in targets:
        cw = [_perturb_vector(list(bundle.layer_codewords[s][i]), rng, box)
              for s in range(params.n)]
        grams = [_maybe_corrupt_gram(bundle.layer_grams[s], rng, box)
                 for s in range(params.n)]
        replacements[i] = (cw, grams)
    return AttackPlan(t=t, replacements=replacements)


def _perturb_vector(vec, rng: random.Random, box: int):
    mode = rng.random()
    if mode < 0.15:
        return tuple(vec)  # replay the true packet (harmless inclusion)
    if mode < 0.3 and len(vec) > 1:
        perm = list(vec)  # norm-preserving shuffle
        rng.shuffle(perm)
        return tuple(perm)
    return tuple(v + rng.randint(-box, box) for v in vec)


def _maybe_corrupt_gram(gram, rng: random.Random, box: int):
    if rng.random() < 0.6:
        return gram
    g = [list(r) for r in gram]
    i = rng.randrange(len(g))
    j = rng.randrange(len(g))
    g[i][j] = g[j][i] = g[i][j] + rng.randint(1, box)
    return tuple(tuple(r) for r in g)


def search_worst_attack(params: VpecCodeParams, symbols, box: int,
                        budget: int, seed: int) -> tuple:
    """Empirical maximum of the decode distortion over sampled (and, for
    small instances, exhaustively boxed) attack plans.  Deterministic
    given the seed.  Returns (plan, distortion)."""
    bundle = vpec_encode(symbols, params)
    rng = random.Random(seed)
    best_plan = AttackPlan(t=params.t, replacements={})
    best = erasure_distortion(symbols, vpec_decode(honest_layered(bundle), params))
    trials = exhaustive_single_packet_plans(bundle, box) if params.t >= 1 else []
    for plan in trials:
        d = _plan_distortion(bundle, plan, params, symbols)
        if d > best:
            best, best_plan = d, plan
    for _ in range(budget):
        plan = random_layered_attack(bundle, rng, box)
        d = _plan_distortion(bundle, plan, params, symbols)
        if d > best:
            best, best_plan = d, plan
    return best_plan, best


def _plan_distortion(bundle, plan, params, symbols):
    received = apply_layered_attack(bundle, plan)
    return erasure_distortion(symbols, vpec_decode(received, params))


def exhaustive_single_packet_plans(bundle: LayeredBundle, box: int):
    """Every single-packet codeword perturbation within the +-box grid
    (all layers jointly).  Only sensible for tiny n0 and box."""
    params = bundle.params
    width = params.n * params.n0
    for i in range(params.n):
        flat_true = [v for s in range(params.n)
                     for v in bundle.layer_codewords[s][i]]
        for delta in product(range(-box, box + 1), repeat=width):
            flat = [v + d for v, d in zip(flat_true, delta)]
            cw = [tuple(flat[s * params.n0:(s + 1) * params.n0])
                  for s in range(params.n)]
            yield AttackPlan(t=params.t, replacements={
                i: (cw, list(bundle.layer_grams))})


# --- totally-undecodable witness ------------------------------------------

def sylvester_hadamard(order: int) -> list:
    """Sylvester Hadamard matrix; order must be a power of two."""
    if order < 1 or order & (order - 1):
        raise ParameterError("order must be a power of two")
    h = [[1]]
    while len(h) < order:
        h = [row + row for row in h] + [row + [-v for v in row] for row in h]
    return h


@dataclass(frozen=True)
class UndecodableWitness:
    t: int
    n: int
    generator: GeneratorMatrix
    hadamard_order: int
    n0: int
    k: int
    k0: int
    null_vectors: tuple     # one per row block (length floor(t/2) each)
    shifts: tuple           # positive base offsets per block
    last_shift_magnitude: int
    excluded_values: tuple  # rejected candidates for the last block shift
    source: tuple           # the matrix X, (n-t) x n0
    source_variants: tuple  # X_0 ... X_ceil, block-flipped versions
    codewords: tuple        # A X
    codeword_variants: tuple
    received: tuple         # the received matrix, one packet per row
    gram: tuple             # shared source Gram table of X's rows


def _pair_rows(base, shift, signs):
    """Rows of one block: column pair j is (base, base+shift) under sign +1
    and swapped under sign -1, componentwise."""
    rows = []
    for b, s in zip(base, shift):
        row = []
        for sg in signs:
            row.extend((b, b + s) if sg == 1 else ((b + s), b))
        rows.append(row)
    return rows


def _null_block_matrix(a: GeneratorMatrix, block: int, width: int) -> list:
    """The (width-1)-by-width slice of parity coefficients whose null vector
    drives one row block."""
    cols = range(block * width, (block + 1) * width)
    return [[a.rows[a.dimension + t_][c] for c in cols] for t_ in range(width - 1)]


def _build_family(a: GeneratorMatrix, t: int, mus, nus, last_mag: int,
                  hadamard) -> tuple:
    """Returns (X, [X_0..X_ceil]) given all block parameters."""
    floor_t = t // 2
    ceil_t = (t + 1) // 2
    blocks = []
    for i in range(ceil_t):
        blocks.append((nus[i], [n + m for n, m in zip(nus[i], mus[i])]))
    blocks.append(([1], [1 + last_mag]))
    signs_per_block = [hadamard[i] for i in range(ceil_t + 1)]

    def assemble(flip: int | None) -> list:
        rows = []
        for b, (lo, hi) in enumerate(blocks):
            signs = signs_per_block[b]
            if b == flip:
                signs = [-s for s in signs]
            shift = [h - l for l, h in zip(lo, hi)]
            rows.extend(_pair_rows(lo, shift, signs))
        return rows

    x = assemble(None)
    variants = [assemble(i) for i in range(ceil_t + 1)]
    return x, variants


def _assemble_received(a: GeneratorMatrix, t: int, codewords, variants) -> list:
    n, dim = a.n_packets, a.dimension
    floor_t = t // 2
    received = [list(codewords[r]) for r in range(dim + floor_t - 1)]
    for u in range(len(variants)):
        received.append(list(variants[u][dim + floor_t - 1 + u]))
    assert len(received) == n
    return received


def _rows_disagree_everywhere(received_family) -> bool:
    n = len(received_family[0])
    for r in range(n):
        values = {tuple(fam[r]) for fam in received_family}
        if len(values) < 2:
            return False
    return True


def undecodable_witness(t: int, a: GeneratorMatrix | None = None,
                        k: int = 2) -> UndecodableWitness:
    """Construct the totally-undecodable received bundle for N = F(T).

    Block i of the source matrix is driven by an integer null vector of a
    parity-coefficient slice, shifted into the positives; the final
    single-row block gets the smallest positive magnitude avoiding every
    accidental agreement between codeword variants.
    """
    if t <= 1:
        raise ParameterError("witness construction requires t > 1")
    n = max_uncertified(t)
    if a is None:
        a = build_v_matrix(n, t)
    if a.n_packets != n or a.t != t or a.rotation != 0:
        raise ParameterError(f"generator must be an unrotated ({n},{n - t}) matrix")
    floor_t, ceil_t = t // 2, (t + 1) // 2
    assert floor_t * ceil_t == n - t - 1

    mus = []
    for i in range(ceil_t):
        if floor_t == 1:
            mus.append([1])
        else:
            mus.append(integer_null_vector_of_block(a, i, floor_t))
    nus = [[max(1, 1 - m) for m in mu] for mu in mus]

    order = 1
    while order < ceil_t + 1:
        order *= 2
    hadamard = sylvester_hadamard(order)
    n0 = 2 * order

    a_rows = a.row_list()
    excluded = []
    chosen = None
    for cand in range(1, t + 2):
        x, variants = _build_family(a, t, mus, nus, cand, hadamard)
        cws = mat_mul(a_rows, x)
        cw_variants = [mat_mul(a_rows, v) for v in variants]
        if _rows_disagree_everywhere(cw_variants):
            chosen = (cand, x, variants, cws, cw_variants)
            break
        excluded.append(cand)
    if chosen is None:
        raise ConstructionError("no admissible last-block shift found")

    last_mag, x, variants, cws, cw_variants = chosen
    received = _assemble_received(a, t, cws, cw_variants)
    gram = source_gram(x)
    max_entry = max(max(row) for row in x)
    k0 = k ** max_entry

    return UndecodableWitness(
        t=t, n=n, generator=a, hadamard_order=order, n0=n0, k=k, k0=k0,
        null_vectors=tuple(tuple(m) for m in mus),
        shifts=tuple(tuple(v) for v in nus),
        last_shift_magnitude=last_mag,
        excluded_values=tuple(excluded),
        source=tuple(tuple(r) for r in x),
        source_variants=tuple(tuple(tuple(r) for r in v) for v in variants),
        codewords=tuple(tuple(r) for r in cws),
        codeword_variants=tuple(tuple(tuple(r) for r in v) for v in cw_variants),
        received=tuple(tuple(r) for r in received),
        gram=tuple(tuple(r) for r in gram))


def integer_null_vector_of_block(a: GeneratorMatrix, block: int, width: int):
    from .linalg import integer_null_vector
    return integer_null_vector(_null_block_matrix(a, block, width), width)


def scale_witness(w: UndecodableWitness, m1: int, m2: int,
                  pad_ones: int = 0) -> UndecodableWitness:
    """Concatenate m1 copies, repeat each entry m2 times, optionally pad
    columns of ones; all consistency checks are preserved."""
    if m1 < 1 or m2 < 1 or pad_ones < 0:
        raise ParameterError("m1, m2 >= 1 and pad_ones >= 0 required")

    def stretch(row):
        repeated = [v for v in row for _ in range(m2)]
        return tuple(repeated * m1 + [1] * pad_ones)

    def stretch_matrix(mat):
        return tuple(stretch(r) for r in mat)

    source = stretch_matrix(w.source)
    variants = tuple(stretch_matrix(v) for v in w.source_variants)
    a_rows = w.generator.row_list()
    cws = mat_mul(a_rows, [list(r) for r in source])
    cw_variants = [mat_mul(a_rows, [list(r) for r in v]) for v in variants]
    received = _assemble_received(w.generator, w.t, cws, cw_variants)
    return UndecodableWitness(
        t=w.t, n=w.n, generator=w.generator, hadamard_order=w.hadamard_order,
        n0=len(source[0]), k=w.k, k0=w.k0,
        null_vectors=w.null_vectors, shifts=w.shifts,
        last_shift_magnitude=w.last_shift_magnitude,
        excluded_values=w.excluded_values,
        source=source, source_variants=variants,
        codewords=tuple(tuple(r) for r in cws),
        codeword_variants=tuple(tuple(tuple(r) for r in v) for v in cw_variants),
        received=tuple(tuple(r) for r in received),
        gram=tuple(tuple(r) for r in source_gram(source)))


def verify_witness(w: UndecodableWitness) -> dict:
    """Exact verification of every witness property; returns a report with
    per-check pass/fail and failure details."""
    report: dict = {"checks": {}, "details": [], "ok": False}
    checks = report["checks"]
    a_rows = w.generator.row_list()
    n, t, dim = w.n, w.t, w.generator.dimension

    # (a) shared Gram table across every source variant
    gram_ok = all(source_gram([list(r) for r in v]) == [list(r) for r in w.gram]
                  for v in w.source_variants)
    checks["gram_invariance"] = gram_ok
    if not gram_ok:
        report["details"].append("some variant has a different Gram table")

    full_gram = extend_gram([list(r) for r in w.gram], w.generator)
    received = [list(r) for r in w.received]

    # (b) each codeword variant is a possible transmitted codeword
    ptc_ok = True
    for idx, cv in enumerate(w.codeword_variants):
        cv = [list(r) for r in cv]
        cond1 = all(dot(cv[i], cv[j]) == full_gram[i][j]
                    for i in range(n) for j in range(i, n))
        agree = sum(1 for i in range(n) if cv[i] == received[i])
        cond2 = agree >= n - t
        parity = mat_mul(a_rows[dim:], cv[:dim])
        cond3 = parity == cv[dim:]
        if not (cond1 and cond2 and cond3):
            ptc_ok = False
            report["details"].append(
                f"variant {idx}: gram={cond1}, agree={agree} (need >= {n - t}), "
                f"linear={cond3}")
    checks["possible_transmitted_codewords"] = ptc_ok

    # (c) every packet index is ambiguous across the family
    ambiguous = _rows_disagree_everywhere(
        [[list(r) for r in cv] for cv in w.codeword_variants])
    checks["all_indices_ambiguous"] = ambiguous
    if not ambiguous:
        report["details"].append("some packet index agrees across all variants")

    # (d) the decoder certifies nothing
    bundle = ReceivedBundle(
        codewords=tuple(tuple(r) for r in received),
        gram_copies=tuple(w.gram for _ in range(n)))
    graph = build_syndrome_graph(bundle, full_gram)
    vstar = trusted_set(graph, n, t)
    checks["trusted_set_empty"] = not vstar
    if vstar:
        report["details"].append(f"trusted set is {sorted(vstar)}, expected empty")

    report["ok"] = all(checks.values())
    return report
