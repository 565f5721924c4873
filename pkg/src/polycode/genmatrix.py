"""Eligible generator matrices (V-matrices) and their row rotations.

An eligible (N, N-T) generator matrix has an identity top block, nonnegative
integer entries, and every (N-T)x(N-T) row-submatrix nonsingular.  The
V-matrix form gives the T parity rows a Vandermonde structure
(alpha_t, alpha_t^2, ..., alpha_t^(N-T)) with distinct positive alphas.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import ParameterError
from .linalg import det


@dataclass(frozen=True)
class GeneratorMatrix:
    n_packets: int
    dimension: int
    rows: tuple  # tuple[tuple[int, ...], ...], n_packets x dimension
    alphas: tuple = ()  # nonempty iff of V-matrix form
    rotation: int = 0

    @property
    def t(self) -> int:
        return self.n_packets - self.dimension

    def row_list(self) -> list:
        return [list(r) for r in self.rows]

    def to_json(self) -> dict:
        return {
            "n": self.n_packets,
            "t": self.t,
            "rotation": self.rotation,
            "rows": self.row_list(),
        }

    @staticmethod
    def from_json(obj: dict) -> "GeneratorMatrix":
        rows = tuple(tuple(int(v) for v in r) for r in obj["rows"])
        n, t = int(obj["n"]), int(obj["t"])
        if len(rows) != n or any(len(r) != n - t for r in rows):
            raise ParameterError("rows do not match declared (n, t)")
        gm = GeneratorMatrix(n, n - t, rows,
                             alphas=_infer_alphas(rows, n, t, int(obj.get("rotation", 0))),
                             rotation=int(obj.get("rotation", 0)))
        return gm


def _vandermonde_row(alpha: int, width: int) -> tuple:
    return tuple(alpha ** j for j in range(1, width + 1))


def _infer_alphas(rows: tuple, n: int, t: int, rotation: int) -> tuple:
    base = [rows[(i + rotation) % n] for i in range(n)]
    dim = n - t
    if base[:dim] != [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]:
        return ()
    alphas = []
    for r in base[dim:]:
        a = r[0]
        if a <= 0 or r != _vandermonde_row(a, dim):
            return ()
        alphas.append(a)
    return tuple(alphas) if len(set(alphas)) == len(alphas) else ()


def _new_row_submatrices_ok(existing: list, new_row: tuple, dim: int) -> bool:
    if dim == 0:
        return True
    if dim == 1:
        return new_row[0] != 0
    for sel in combinations(range(len(existing)), dim - 1):
        sub = [existing[i] for i in sel] + [list(new_row)]
        if det(sub) == 0:
            return False
    return True


def build_v_matrix(n: int, t: int) -> GeneratorMatrix:
    """Deterministic V-matrix with the lexicographically smallest alphas.

    Each alpha_t is the smallest positive integer, distinct from earlier
    choices, keeping every maximal square row-submatrix nonsingular.
    """
    if not isinstance(n, int) or not isinstance(t, int):
        raise ParameterError("n and t must be integers")
    if t < 0 or t > n:
        raise ParameterError(f"require 0 <= t <= n, got n={n}, t={t}")
    dim = n - t
    rows = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    alphas: list[int] = []
    for _ in range(t):
        alpha = 1
        while True:
            cand = _vandermonde_row(alpha, dim)
            if alpha not in alphas and _new_row_submatrices_ok(rows, cand, dim):
                break
            alpha += 1
        alphas.append(alpha)
        rows.append(list(cand))
    return GeneratorMatrix(n, dim, tuple(tuple(r) for r in rows),
                           alphas=tuple(alphas), rotation=0)


def rotate_generator(a: GeneratorMatrix, s: int) -> GeneratorMatrix:
    """Cyclic downward row rotation by s; submatrix nonsingularity is
    preserved because rotation only permutes rows."""
    n = a.n_packets
    if s < 0:
        raise ParameterError("rotation offset must be nonnegative")
    s %= n
    if s == 0 and a.rotation == 0:
        return a
    rows = tuple(a.rows[(i - s) % n] for i in range(n))
    return GeneratorMatrix(n, a.dimension, rows, alphas=a.alphas,
                           rotation=(a.rotation + s) % n)


def systematic_source_row(a: GeneratorMatrix, packet: int) -> int | None:
    """Index of the source row carried verbatim by `packet`, or None when
    the packet holds a parity row."""
    j = (packet - a.rotation) % a.n_packets
    return j if j < a.dimension else None


def generator_to_json_str(a: GeneratorMatrix) -> str:
    return json.dumps(a.to_json())


# Re-exported integer linear-algebra utilities used throughout.
__all__ = [
    "GeneratorMatrix",
    "build_v_matrix",
    "rotate_generator",
    "systematic_source_row",
]
