"""Source packing and the fixed-width packet wire format.

A K-ary source string is grouped K_0 symbols at a time; each group maps
bijectively to an integer in {1, ..., K^K_0} (the all-zero group stands for
K^K_0 itself, so every packed entry is strictly positive).  Symbols are
0-based digits {0, ..., K-1} internally; see the README for the offset
convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ParameterError, SerializationError


def ceil_log(base: int, x: int) -> int:
    """Smallest w >= 0 with base**w >= x (x >= 1)."""
    if base < 2 or x < 1:
        raise ParameterError("ceil_log requires base >= 2 and x >= 1")
    w, p = 0, 1
    while p < x:
        p *= base
        w += 1
    return w


def pack_group(digits, k: int) -> int:
    """Map a K_0-digit group to {1, ..., K^K_0}; all-zero maps to K^K_0."""
    value = 0
    power = 1
    for d in digits:
        if not 0 <= d < k:
            raise ParameterError(f"symbol {d} outside 0..{k - 1}")
        value += d * power
        power *= k
    return value if value != 0 else power


def unpack_block(value: int, k: int, k0: int) -> tuple:
    """Inverse of pack_group."""
    top = k ** k0
    if not 1 <= value <= top:
        raise ParameterError(f"packed value {value} outside 1..{top}")
    if value == top:
        return (0,) * k0
    digits = []
    for _ in range(k0):
        digits.append(value % k)
        value //= k
    return tuple(digits)


@dataclass(frozen=True)
class SourceBlock:
    k: int          # alphabet size
    k0: int         # symbols per packed entry
    n0: int         # entries per row
    rows: tuple     # (n_rows)x(n0) positive integers in {1..k^k0}
    symbols: tuple  # original symbol string

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def pack_source(symbols, k: int, k0: int, n0: int, n: int, t: int) -> SourceBlock:
    """Pack a K-ary string of length (n-t)*n0*k0 into an (n-t)-by-n0 block."""
    rows_needed = n - t
    expected = rows_needed * n0 * k0
    symbols = tuple(symbols)
    if len(symbols) != expected:
        raise ParameterError(f"expected {expected} symbols, got {len(symbols)}")
    entries = [pack_group(symbols[i:i + k0], k)
               for i in range(0, expected, k0)]
    rows = tuple(tuple(entries[r * n0:(r + 1) * n0]) for r in range(rows_needed))
    return SourceBlock(k, k0, n0, rows, symbols)


def unpack_rows(rows, k: int, k0: int) -> tuple:
    """Flatten packed rows back into the original symbol string."""
    out = []
    for row in rows:
        for v in row:
            out.extend(unpack_block(v, k, k0))
    return tuple(out)


@dataclass(frozen=True)
class PacketBudget:
    n: int
    t: int
    k: int
    k0: int
    n0: int
    alpha_max: int
    entry_width: int      # symbols per codeword entry
    gram_width: int       # symbols per norm/inner-product entry
    gram_count: int
    codeword_symbols: int
    gram_symbols: int
    total_symbols: int
    rate: Fraction


def symbol_budget(n: int, t: int, k: int, k0: int, n0: int,
                  alpha_max: int) -> PacketBudget:
    """Exact per-packet symbol accounting and rate.

    A codeword entry needs k0 + ceil(log_K(alpha_max*(n-t))) symbols; a
    norm/inner-product entry needs 2*k0 + ceil(log_K n0); there are
    (n-t) + C(n-t, 2) of the latter.  The rate is the exact ratio of total
    packet symbols to the k0*n0*(n-t) source symbols a packet accounts for.
    """
    if k < 2 or min(n, k0, n0, alpha_max) < 1 or t < 0 or t >= n:
        raise ParameterError("invalid budget parameters")
    dim = n - t
    entry_width = k0 + ceil_log(k, alpha_max * dim)
    gram_width = 2 * k0 + ceil_log(k, n0)
    gram_count = dim + comb(dim, 2)
    codeword_symbols = entry_width * n0
    gram_symbols = gram_width * gram_count
    total = codeword_symbols + gram_symbols
    return PacketBudget(
        n=n, t=t, k=k, k0=k0, n0=n0, alpha_max=alpha_max,
        entry_width=entry_width, gram_width=gram_width, gram_count=gram_count,
        codeword_symbols=codeword_symbols, gram_symbols=gram_symbols,
        total_symbols=total, rate=Fraction(total, k0 * n0 * dim))


def _encode_fixed(value: int, width: int, k: int) -> list:
    """Big-endian base-K expansion at fixed width."""
    if value < 0:
        raise SerializationError("negative value in wire format")
    if value >= k ** width:
        raise SerializationError(
            f"value {value} does not fit {width} base-{k} symbols")
    out = [0] * width
    for i in range(width - 1, -1, -1):
        out[i] = value % k
        value //= k
    return out


def _decode_fixed(symbols, k: int) -> int:
    value = 0
    for d in symbols:
        if not 0 <= d < k:
            raise SerializationError(f"symbol {d} outside 0..{k - 1}")
        value = value * k + d
    return value


def serialize_packet(codeword, gram_entries, budget: PacketBudget) -> tuple:
    """Fixed-width K-ary layout: codeword entries first, then the gram
    entries in row-major (i <= j) order.  Length depends only on the budget."""
    if len(codeword) != budget.n0:
        raise ParameterError(f"expected {budget.n0} codeword entries")
    if len(gram_entries) != budget.gram_count:
        raise ParameterError(f"expected {budget.gram_count} gram entries")
    out = []
    for v in codeword:
        out.extend(_encode_fixed(v, budget.entry_width, budget.k))
    for v in gram_entries:
        if v < 0:
            raise SerializationError("gram entries must be nonnegative")
        out.extend(_encode_fixed(v, budget.gram_width, budget.k))
    return tuple(out)


def deserialize_packet(symbols, budget: PacketBudget) -> tuple:
    """Inverse of serialize_packet -> (codeword, gram_entries)."""
    if len(symbols) != budget.total_symbols:
        raise ParameterError(
            f"expected {budget.total_symbols} symbols, got {len(symbols)}")
    w = budget.entry_width
    codeword = tuple(_decode_fixed(symbols[i * w:(i + 1) * w], budget.k)
                     for i in range(budget.n0))
    off = budget.codeword_symbols
    g = budget.gram_width
    gram = tuple(_decode_fixed(symbols[off + i * g:off + (i + 1) * g], budget.k)
                 for i in range(budget.gram_count))
    return codeword, gram


def symbols_to_hex(symbols) -> str:
    """Hex encoding used by the CLI; one hex digit per symbol (K <= 16)."""
    if any(not 0 <= s < 16 for s in symbols):
        raise ParameterError("hex encoding supports symbols 0..15 only")
    return "".join(format(s, "x") for s in symbols)


def hex_to_symbols(text: str) -> tuple:
    return tuple(int(ch, 16) for ch in text)
