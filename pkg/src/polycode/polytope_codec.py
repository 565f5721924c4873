"""Single-layer polytope encode/decode.

The encoder sends y = A x over the integers along with the table F of
norms and pairwise inner products of the source rows.  The decoder recovers
F by per-entry majority, extends it to all packet pairs via A F A^T, builds
the syndrome graph of exact Gram-consistency checks, and extracts the
trusted set V* whose packets are provably unaltered.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AdversaryBudgetError, ParameterError
from .genmatrix import GeneratorMatrix
from .linalg import dot, mat_mul, transpose
from .source_packets import SourceBlock


def source_gram(rows) -> list:
    """Symmetric table of inner products between source rows."""
    m = len(rows)
    g = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            g[i][j] = g[j][i] = dot(list(rows[i]), list(rows[j]))
    return g


def extend_gram(gram, a: GeneratorMatrix) -> list:
    """Extend a source-row Gram table to all N packets: A F A^T."""
    rows = a.row_list()
    return mat_mul(mat_mul(rows, [list(r) for r in gram]), transpose(rows))


@dataclass(frozen=True)
class TransmittedBundle:
    codewords: tuple      # N vectors of length n0
    gram: tuple           # (n-t)x(n-t) symmetric source Gram table
    generator: GeneratorMatrix

    @property
    def n(self) -> int:
        return self.generator.n_packets


@dataclass(frozen=True)
class ReceivedBundle:
    codewords: tuple      # N possibly-altered vectors
    gram_copies: tuple    # N possibly-altered copies of the source Gram table

    @property
    def n(self) -> int:
        return len(self.codewords)


@dataclass(frozen=True)
class SyndromeGraph:
    n: int
    edges: frozenset      # frozenset of frozenset({i, j}), i != j
    loops: frozenset      # vertex indices with a self-loop

    def has_edge(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self.edges


def encode(block: SourceBlock, a: GeneratorMatrix) -> TransmittedBundle:
    """y_i = sum_j A_ij x_j over the integers; systematic rows carry the
    source verbatim when rotation = 0."""
    if a.dimension != block.n_rows:
        raise ParameterError(
            f"generator dimension {a.dimension} != source rows {block.n_rows}")
    x = [list(r) for r in block.rows]
    y = mat_mul(a.row_list(), x)
    gram = source_gram(block.rows)
    return TransmittedBundle(
        codewords=tuple(tuple(v) for v in y),
        gram=tuple(tuple(r) for r in gram),
        generator=a)


def honest_channel(bundle: TransmittedBundle) -> ReceivedBundle:
    return ReceivedBundle(
        codewords=bundle.codewords,
        gram_copies=tuple(bundle.gram for _ in range(bundle.n)))


def majority_table(copies) -> list:
    """Per-entry strict majority over equally-shaped tables.

    Raises AdversaryBudgetError when some entry has no strict majority,
    which is only possible if more than T of 2T+1 copies were altered.
    """
    n = len(copies)
    rows = len(copies[0])
    out = []
    for i in range(rows):
        line = []
        for j in range(len(copies[0][i])):
            counts: dict = {}
            for c in copies:
                v = c[i][j]
                counts[v] = counts.get(v, 0) + 1
            value, hits = max(counts.items(), key=lambda kv: kv[1])
            if 2 * hits <= n:
                raise AdversaryBudgetError(
                    f"no strict majority for gram entry ({i},{j})")
            line.append(value)
        out.append(line)
    return out


def recover_gram(received: ReceivedBundle, a: GeneratorMatrix) -> list:
    """Majority-recover the source Gram table and extend it to all packets."""
    n = received.n
    if n < 2 * a.t + 1:
        raise ParameterError("majority recovery requires N >= 2T+1")
    f = majority_table(received.gram_copies)
    return extend_gram(f, a)


def build_syndrome_graph(received: ReceivedBundle, full_gram) -> SyndromeGraph:
    """Edge (i, j) iff <y_i, y_j> matches the recovered table exactly;
    self-loop on i iff the norm matches."""
    n = received.n
    cw = [list(v) for v in received.codewords]
    edges = set()
    loops = set()
    for i in range(n):
        if dot(cw[i], cw[i]) == full_gram[i][i]:
            loops.add(i)
        for j in range(i + 1, n):
            if dot(cw[i], cw[j]) == full_gram[i][j]:
                edges.add(frozenset((i, j)))
    return SyndromeGraph(n=n, edges=frozenset(edges), loops=frozenset(loops))


def _maximal_cliques(vertices: set, adj: dict) -> list:
    """Bron-Kerbosch with pivoting.  Exponential worst case, fine for the
    small vertex counts (network paths / helper nodes) this code targets."""
    cliques = []

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            cliques.append(r)
            return
        pivot = max(p | x, key=lambda v: len(adj[v] & p))
        for v in list(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    if vertices:
        expand(set(), set(vertices), set())
    return cliques


def intersect_graphs(graphs) -> SyndromeGraph:
    """Edge/loop present iff present in every layer's syndrome graph."""
    graphs = list(graphs)
    n = graphs[0].n
    edges = frozenset.intersection(*(g.edges for g in graphs))
    loops = frozenset.intersection(*(g.loops for g in graphs))
    return SyndromeGraph(n=n, edges=edges, loops=loops)


def trusted_candidates(g: SyndromeGraph, n: int, t: int) -> tuple:
    """Decoder steps 1-3: returns (V', V*).

    Step 1 deletes loopless vertices; V' is every survivor inside a clique
    of size >= n-t; V* is the members of V' adjacent to all of V'.
    """
    kept = set(g.loops)
    adj = {v: set() for v in kept}
    for e in g.edges:
        i, j = tuple(e)
        if i in kept and j in kept:
            adj[i].add(j)
            adj[j].add(i)
    need = n - t
    vprime: set = set()
    for clique in _maximal_cliques(kept, adj):
        if len(clique) >= need:
            vprime |= clique
    vstar = frozenset(v for v in vprime
                      if all(u == v or u in adj[v] for u in vprime))
    return frozenset(vprime), vstar


def trusted_set(g: SyndromeGraph, n: int, t: int) -> frozenset:
    """Decoder step 4 output: the set of provably-unaltered packet indices.
    May be empty (flagged by the caller) for inputs outside the <= T budget."""
    return trusted_candidates(g, n, t)[1]


def decode_report(received: ReceivedBundle, a: GeneratorMatrix) -> dict:
    """Full decode diagnostics for one received bundle."""
    full = recover_gram(received, a)
    g = build_syndrome_graph(received, full)
    vprime, vstar = trusted_candidates(g, received.n, a.t)
    return {
        "n": received.n,
        "t": a.t,
        "loops": sorted(g.loops),
        "edges": sorted(sorted(e) for e in g.edges),
        "v_prime": sorted(vprime),
        "v_star": sorted(vstar),
        "v_prime_empty": not vprime,
        "per_vertex": [
            {
                "vertex": i,
                "loop": i in g.loops,
                "edges_to": sorted(j for j in range(received.n)
                                   if j != i and g.has_edge(i, j)),
                "trusted": i in vstar,
            }
            for i in range(received.n)
        ],
    }
