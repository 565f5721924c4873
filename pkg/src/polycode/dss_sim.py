"""Byzantine-resilient distributed storage simulator.

Nodes store (data matrix, norm/inner-product vector, coefficient matrix)
packets; repair and data-collector reads run the syndrome-graph procedure on
matrix packets, where edge (u, v) holds iff Z_u Z_v^T equals the predicted
cross-Gram M_u F M_v^T as full blocks.  The information flow graph over the
event history is checked by exact max-flow against the storage bound.

Capacities, storage alpha, and link bandwidth beta are integers (pre-scale
rational parameters before constructing DssParams).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import networkx as nx

from .errors import (ConstructionError, ParameterError,
                     ProtocolViolationError)
from .linalg import all_submatrices_nonsingular, mat_mul, rank, solve_exact, transpose
from .polytope_codec import majority_table, source_gram, SyndromeGraph, trusted_candidates
from .vpec import max_uncertified


# --- capacity formulas ----------------------------------------------------

def _uncertified(t: int) -> int:
    return max_uncertified(t) if t >= 1 else 0


def dss_capacity_bounds(alpha, beta: int = None, k: int = None,
                        d: int = None, t: int = None) -> dict:
    """Exact cut-set upper bound, achievable lower bound, and the MSR/MBR
    operating-point capacities (all Fractions, in units of symbols/blocklength).

    Accepts either a DssParams or the five scalars (alpha, beta, k, d, t).
    """
    if beta is None:
        p = alpha
        alpha, beta, k, d, t = p.alpha, p.beta, p.k, p.d, p.t
    if beta > alpha or k > d or t < 0:
        raise ParameterError("require beta <= alpha, k <= d, t >= 0")
    alpha, beta = Fraction(alpha), Fraction(beta)
    upper = sum((min((d - 2 * t - i) * beta, alpha)
                 for i in range(max(0, k - 2 * t))), Fraction(0))
    if t == 0:
        lower = upper
    else:
        f = max_uncertified(t)
        pruned = sum((min((d - f - i) * beta, alpha)
                      for i in range(max(0, k - f))), Fraction(0))
        lower = min(pruned, (d - t) * beta)
    m = max(0, k - 2 * t)
    msr_alpha = (d - k + 1) * beta
    mbr_alpha = (d - 2 * t) * beta
    msr = m * msr_alpha
    mbr = (m * (d - 2 * t) - comb(m, 2)) * beta
    return {
        "upper": upper,
        "lower": lower,
        "msr": msr,
        "mbr": mbr,
        "msr_alpha": msr_alpha,
        "msr_capacity": msr,
        "mbr_alpha": mbr_alpha,
        "mbr_capacity": mbr,
    }


def theorem_lower_bound(alpha: int, beta: int, k: int, d: int, t: int) -> Fraction:
    return dss_capacity_bounds(alpha, beta, k, d, t)["lower"]


def min_alpha_for_unit_capacity(beta, k: int, d: int, t: int,
                                achievable: bool):
    """Smallest per-node storage alpha giving capacity >= 1 at bandwidth beta,
    for the cut-set outer bound (achievable=False) or the syndrome-decoding
    achievable bound (achievable=True).  Returns None when no alpha suffices.

    Both bounds are nondecreasing piecewise-linear in alpha with breakpoints
    at the c_i*beta, so the inversion is exact.
    """
    beta = Fraction(beta)
    if achievable:
        f = _uncertified(t)
        if t >= 1 and (d - t) * beta < 1:
            return None
        coeffs = [d - f - i for i in range(max(0, k - f))]
    else:
        coeffs = [d - 2 * t - i for i in range(max(0, k - 2 * t))]
    coeffs = [c for c in coeffs if c > 0]
    if sum(coeffs) * beta < 1:
        return None
    prev = Fraction(0)
    for b in sorted(set(c * beta for c in coeffs)):
        m = sum(1 for c in coeffs if c * beta >= b)
        const = beta * sum(c for c in coeffs if c * beta <= prev)
        if m * b + const >= 1:
            return max((1 - const) / m, beta)
        prev = b
    return None


# --- parameters and state -------------------------------------------------

@dataclass(frozen=True)
class DssParams:
    alpha: int            # storage per node (rows of the data matrix)
    beta: int             # link bandwidth (rows per transmission)
    n_initial: int
    k: int                # data-collector degree
    d: int                # repair degree
    t: int                # adversary budget
    node_cap: int         # lifetime bound on node ids
    q: int                # coefficient range {1..q}
    r: int                # file rows; must not exceed the achievable bound
    k_alphabet: int = 2
    k0: int = 4
    n0: int = 4
    corruption_box: int = 5

    def __post_init__(self):
        if self.beta > self.alpha:
            raise ParameterError("beta must be <= alpha")
        if self.k > self.d:
            raise ParameterError("k must be <= d")
        if self.d < 2 * self.t + 1 or self.k < 2 * self.t + 1:
            raise ParameterError("majority recovery needs d, k >= 2T+1")
        if self.t >= 1 and self.k - max_uncertified(self.t) < 1:
            raise ParameterError("need k - F(T) >= 1 trusted packets at the DC")
        if self.d >= self.n_initial:
            raise ParameterError("repair degree must be below the node count")
        if self.node_cap < self.n_initial:
            raise ParameterError("node cap below initial node count")
        bound = theorem_lower_bound(self.alpha, self.beta, self.k, self.d, self.t)
        if self.r > bound:
            raise ParameterError(f"r={self.r} exceeds the achievable bound {bound}")
        if self.r < 1:
            raise ParameterError("r must be >= 1")


@dataclass
class NodePacket:
    data: list    # gamma x n0
    gram: list    # r x r symmetric table of file-row inner products
    coeffs: list  # gamma x r


@dataclass
class DssSystemState:
    params: DssParams
    seed: int
    file: list                  # r x n0
    nodes: dict = field(default_factory=dict)   # id -> NodePacket
    active: set = field(default_factory=set)
    adversary: frozenset = frozenset()
    next_id: int = 0
    event_index: int = 0
    repair_log: list = field(default_factory=list)
    dc_log: list = field(default_factory=list)


def _stream(seed: int, tag: str, *key) -> random.Random:
    return random.Random(f"{seed}|{tag}|{'|'.join(map(str, key))}")


def _draw_matrix(rng: random.Random, rows: int, cols: int, q: int) -> list:
    return [[rng.randint(1, q) for _ in range(cols)] for _ in range(rows)]


def build_spread_matrix(rows: int, width: int, q: int) -> list:
    """Identity top block followed by Vandermonde rows (1, g, ..., g^{width-1})
    for g = 1, 2, ...; every width x width submatrix is a minor of a totally
    positive generalized Vandermonde, hence nonsingular."""
    if rows < width:
        raise ParameterError("need at least r=width rows")
    extra = rows - width
    top = max(1, extra) ** (width - 1)
    if top > q:
        raise ConstructionError(f"q={q} too small: entries reach {top}")
    mat = [[1 if i == j else 0 for j in range(width)] for i in range(width)]
    mat += [[g ** j for j in range(width)] for g in range(1, extra + 1)]
    return mat


def init_dss(file_rows, params: DssParams, seed: int) -> DssSystemState:
    """Populate the initial nodes; every coefficient matrix is drawn from a
    stream keyed by (seed, role, endpoints), so replay is exact."""
    file_rows = [list(r) for r in file_rows]
    if len(file_rows) != params.r or any(len(r) != params.n0 for r in file_rows):
        raise ParameterError(f"file must be {params.r}x{params.n0}")
    top = params.k_alphabet ** params.k0
    if any(not 1 <= v <= top for row in file_rows for v in row):
        raise ParameterError(f"file entries must lie in 1..{top}")
    spread = build_spread_matrix(params.alpha * params.n_initial, params.r, params.q)
    if comb(len(spread), params.r) <= 1000:
        assert all_submatrices_nonsingular(spread, params.r)
    gram = source_gram(file_rows)
    state = DssSystemState(params=params, seed=seed, file=file_rows)
    for i in range(params.n_initial):
        coeffs = spread[i * params.alpha:(i + 1) * params.alpha]
        state.nodes[i] = NodePacket(
            data=mat_mul(coeffs, file_rows),
            gram=[list(r) for r in gram],
            coeffs=[list(r) for r in coeffs])
        state.active.add(i)
    state.next_id = params.n_initial
    return state


def check_honest_invariant(state: DssSystemState) -> bool:
    """Every stored packet satisfies data = coeffs @ file exactly."""
    return all(mat_mul(p.coeffs, state.file) == p.data
               for i, p in state.nodes.items() if i in state.active)


# --- transmissions --------------------------------------------------------

def _corrupt(packet: tuple, rng: random.Random, box: int) -> tuple:
    """Adversarial substitution of an outgoing transmission."""
    data, gram, coeffs = packet
    mode = rng.random()
    if mode < 0.15:
        return packet  # replay the truthful packet
    data = [[v + rng.randint(-box, box) for v in row] for row in data]
    gram = [list(r) for r in gram]
    if mode < 0.5:
        i = rng.randrange(len(gram))
        j = rng.randrange(len(gram))
        gram[i][j] = gram[j][i] = gram[i][j] + rng.randint(1, box)
    coeffs = [list(r) for r in coeffs]
    if mode > 0.8:
        coeffs[rng.randrange(len(coeffs))][rng.randrange(len(coeffs[0]))] += 1
    return data, gram, coeffs


def _transmission(state: DssSystemState, sender: int, packet: tuple) -> tuple:
    if sender in state.adversary:
        rng = _stream(state.seed, "adv", state.event_index, sender)
        return _corrupt(packet, rng, state.params.corruption_box)
    return packet


def _matrix_syndrome_graph(datas, grams_claimed, coeffs, f_mat) -> SyndromeGraph:
    """Cross-Gram consistency for matrix packets: edge (u, v) iff
    Z_u Z_v^T = M_u F M_v^T as full blocks; self-loops analogously."""
    n = len(datas)
    preds = [mat_mul(m, f_mat) for m in coeffs]  # M_u F, gamma x r
    edges = set()
    loops = set()
    for u in range(n):
        du_t = transpose(datas[u])
        for v in range(u, n):
            observed = mat_mul(datas[v], du_t)
            predicted = mat_mul(preds[v], transpose(coeffs[u]))
            if observed == predicted:
                if u == v:
                    loops.add(u)
                else:
                    edges.add(frozenset((u, v)))
    return SyndromeGraph(n=n, edges=frozenset(edges), loops=frozenset(loops))


def set_adversary(state: DssSystemState, nodes) -> None:
    nodes = frozenset(nodes)
    if len(nodes) > state.params.t:
        raise ParameterError(f"adversary set {sorted(nodes)} exceeds budget {state.params.t}")
    state.adversary = nodes
    state.event_index += 1


def fail_node(state: DssSystemState, node: int) -> None:
    if node not in state.active:
        raise ParameterError(f"node {node} is not active")
    state.active.remove(node)
    del state.nodes[node]
    state.event_index += 1


def repair_node(state: DssSystemState, new_node: int, helpers) -> None:
    """Form a new node from d helper transmissions via the syndrome procedure."""
    p = state.params
    helpers = sorted(helpers)
    if len(helpers) != p.d:
        raise ParameterError(f"repair needs exactly d={p.d} helpers")
    if any(h not in state.active for h in helpers):
        raise ParameterError("all helpers must be active")
    if new_node != state.next_id:
        raise ParameterError(f"next node id is {state.next_id}")
    if state.next_id >= p.node_cap:
        raise ProtocolViolationError("lifetime node cap reached")
    state.event_index += 1

    incoming = []
    for h in helpers:
        pkt = state.nodes[h]
        b = _draw_matrix(_stream(state.seed, "B", h, new_node), p.beta, p.alpha, p.q)
        honest = (mat_mul(b, pkt.data), [list(r) for r in pkt.gram],
                  mat_mul(b, pkt.coeffs))
        incoming.append(_transmission(state, h, honest))

    f_mat = majority_table([pkt[1] for pkt in incoming])
    graph = _matrix_syndrome_graph([pkt[0] for pkt in incoming],
                                   [pkt[1] for pkt in incoming],
                                   [pkt[2] for pkt in incoming], f_mat)
    _, vstar = trusted_candidates(graph, p.d, p.t)
    vstar_ids = sorted(helpers[i] for i in vstar)
    if len(vstar_ids) < p.d - _uncertified(p.t):
        raise ProtocolViolationError(
            f"only {len(vstar_ids)} trusted helpers, need {p.d - _uncertified(p.t)}")

    trusted = sorted(vstar)
    z = [row for i in trusted for row in incoming[i][0]]
    a_to = [row for i in trusted for row in incoming[i][2]]
    honest_rows = [row for i in trusted if helpers[i] not in state.adversary
                   for row in incoming[i][2]]
    if rank(honest_rows) < p.r:
        raise ProtocolViolationError(
            "honest trusted coefficients are rank deficient (bad draw or budget breach)")

    c = _draw_matrix(_stream(state.seed, "C", tuple(vstar_ids), new_node),
                     p.alpha, len(trusted) * p.beta, p.q)
    state.nodes[new_node] = NodePacket(
        data=mat_mul(c, z), gram=f_mat, coeffs=mat_mul(c, a_to))
    state.active.add(new_node)
    state.next_id += 1
    state.repair_log.append({
        "node": new_node,
        "helpers": helpers,
        "v_star": vstar_ids,
        "honest_helpers": sorted(h for h in helpers if h not in state.adversary),
    })


def dc_decode(state: DssSystemState, nodes) -> list:
    """Exact file recovery from k downloaded packets."""
    p = state.params
    nodes = sorted(nodes)
    if len(nodes) != p.k:
        raise ParameterError(f"data collector reads exactly k={p.k} nodes")
    if any(i not in state.active for i in nodes):
        raise ParameterError("all read nodes must be active")
    state.event_index += 1

    incoming = []
    for i in nodes:
        pkt = state.nodes[i]
        honest = ([list(r) for r in pkt.data], [list(r) for r in pkt.gram],
                  [list(r) for r in pkt.coeffs])
        incoming.append(_transmission(state, i, honest))

    f_mat = majority_table([pkt[1] for pkt in incoming])
    graph = _matrix_syndrome_graph([pkt[0] for pkt in incoming],
                                   [pkt[1] for pkt in incoming],
                                   [pkt[2] for pkt in incoming], f_mat)
    _, vstar = trusted_candidates(graph, p.k, p.t)
    vstar_ids = sorted(nodes[i] for i in vstar)
    if len(vstar_ids) < p.k - _uncertified(p.t):
        raise ProtocolViolationError(
            f"only {len(vstar_ids)} trusted packets, need {p.k - _uncertified(p.t)}")

    trusted = sorted(vstar)
    z = [row for i in trusted for row in incoming[i][0]]
    a_hat = [row for i in trusted for row in incoming[i][2]]
    estimate = solve_exact(a_hat, z)  # raises DecodeError on rank/consistency
    state.dc_log.append({"nodes": nodes, "v_star": vstar_ids})
    return estimate


# --- information flow graph -----------------------------------------------

def _flow_graph(state: DssSystemState, pruned: bool,
                retain_honest_for: int | None = None) -> nx.DiGraph:
    p = state.params
    g = nx.DiGraph()
    finite_total = 0
    ids = list(range(state.next_id))
    for i in ids:
        g.add_edge(f"in_{i}", f"out_{i}", capacity=p.alpha)
        finite_total += p.alpha
    for rec in state.repair_log:
        j = rec["node"]
        sources = rec["v_star"] if pruned else rec["helpers"]
        if retain_honest_for == j:
            sources = sorted(set(rec["v_star"]) | set(rec["honest_helpers"]))
        for i in sources:
            g.add_edge(f"out_{i}", f"in_{j}", capacity=p.beta)
            finite_total += p.beta
    inf = finite_total + 1
    for i in range(p.n_initial):
        g.add_edge("S", f"in_{i}", capacity=inf)
    for m, rec in enumerate(state.dc_log):
        sources = rec["v_star"] if pruned else rec["nodes"]
        for i in sources:
            g.add_edge(f"out_{i}", f"dc_{m}", capacity=inf)
    return g


def repair_cut_bound(alpha: int, beta: int, d: int, t: int) -> Fraction:
    """Closed-form lower bound on the min-cut into a repaired node: minimize
    over z (output nodes on the sink side) the accumulated helper-edge and
    direct-edge capacities."""
    f = max_uncertified(t) if t >= 1 else 0
    best = None
    for z in range(0, d + 2):
        total = sum(min((d - f - i) * beta, alpha)
                    for i in range(min(z, d - f)))
        total += max(d - t - z, 0) * beta
        best = total if best is None else min(best, total)
    return Fraction(best)


def verify_flow_conditions(state: DssSystemState) -> dict:
    """Exact max-flow verification on the pruned information flow graphs:
    every data collector and every repaired node must draw min-cut >= r."""
    p = state.params
    report = {"dc": [], "repairs": [], "ok": True}
    pruned = _flow_graph(state, pruned=True)
    for m, rec in enumerate(state.dc_log):
        value = nx.maximum_flow_value(pruned, "S", f"dc_{m}")
        ok = value >= p.r
        report["dc"].append({"event": m, "nodes": rec["nodes"],
                             "min_cut": value, "required": p.r, "ok": ok})
        report["ok"] &= ok
    bound = repair_cut_bound(p.alpha, p.beta, p.d, p.t)
    for rec in state.repair_log:
        j = rec["node"]
        g = _flow_graph(state, pruned=True, retain_honest_for=j)
        value = nx.maximum_flow_value(g, "S", f"in_{j}")
        ok = value >= p.r and value >= bound
        report["repairs"].append({"node": j, "min_cut": value,
                                  "closed_form_bound": bound,
                                  "required": p.r, "ok": ok})
        report["ok"] &= ok
    return report


# --- scenario scripts -----------------------------------------------------

def run_scenario(file_rows, params: DssParams, events, seed: int) -> dict:
    """Execute a JSON-style event list and return a machine-readable log."""
    state = init_dss(file_rows, params, seed)
    log = {"seed": seed, "events": [], "ok": True}
    for ev in events:
        kind = ev["type"]
        entry = {"type": kind}
        if kind == "adversary":
            set_adversary(state, ev["nodes"])
            entry["nodes"] = sorted(state.adversary)
        elif kind == "fail":
            fail_node(state, ev["node"])
            entry["node"] = ev["node"]
        elif kind == "repair":
            repair_node(state, ev["node"], ev["helpers"])
            entry.update(state.repair_log[-1])
        elif kind == "dc_read":
            estimate = dc_decode(state, ev["nodes"])
            entry.update(state.dc_log[-1])
            entry["decoded_exactly"] = estimate == state.file
            log["ok"] &= entry["decoded_exactly"]
        else:
            raise ParameterError(f"unknown event type {kind!r}")
        entry["honest_invariant"] = check_honest_invariant(state)
        log["ok"] &= entry["honest_invariant"]
        log["events"].append(entry)
    log["flow"] = verify_flow_conditions(state)
    log["ok"] &= log["flow"]["ok"]
    return log


def roaming_adversary_scenario(params: DssParams, repairs: int,
                               seed: int) -> list:
    """Scripted scenario: before each failure/repair the adversary moves to a
    random active node; every repair is followed by a data-collector read."""
    rng = _stream(seed, "scenario")
    active = list(range(params.n_initial))
    next_id = params.n_initial
    events = []
    for _ in range(repairs):
        if params.t >= 1:
            events.append({"type": "adversary",
                           "nodes": rng.sample(active, params.t)})
        victim = rng.choice(active)
        events.append({"type": "fail", "node": victim})
        active.remove(victim)
        # a controlled node that failed is no longer worth controlling;
        # the budget constraint is enforced at application time anyway
        helpers = rng.sample(active, params.d)
        events.append({"type": "repair", "node": next_id, "helpers": helpers})
        active.append(next_id)
        next_id += 1
        events.append({"type": "dc_read", "nodes": rng.sample(active, params.k)})
    return events
