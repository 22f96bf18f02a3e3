"""Exact big-integer tables of lattice-walk counts.

All walks start at (1, 0).  Partition-flavor walks remove at odd steps
({-e1, -e2, 0}) and add at even steps ({+e1, +e2, 0}); braid-flavor walks
do the opposite.  Table kinds:

    a           quarter-plane (i, j >= 0) partition-walk counts by step
    omega       chamber (i > j >= 0) counts via reflection: a(i,j) - a(j,i)
    f           odd-step quarter-plane counts, f(l, i, j) = a(2l+1, i, j)
    sigma_star  chamber counts of braid walks with no (+e1, -e1) vertex pair

Counts grow roughly geometrically, so everything is exact Python integers;
a full table is O(n^3) of them and builders refuse n beyond a safety cap
unless overridden.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import IO, Iterator

DEFAULT_MAX_N = 256

TABLE_KINDS = ("a", "omega", "f", "sigma_star")

FORMAT_VERSION = "v1"


class ResourceCapError(RuntimeError):
    """Requested table size exceeds the configured safety cap."""


class ConsistencyError(RuntimeError):
    """Two routes that must agree exactly disagreed, or an exact identity
    failed; always a bug, never recoverable."""


class TableFormatError(ValueError):
    """Cache file is malformed, has the wrong version, or fails its
    recurrence spot checks."""


def _check_cap(n: int, allow_large: bool) -> None:
    if n > DEFAULT_MAX_N and not allow_large:
        raise ResourceCapError(
            f"n={n} exceeds the size cap {DEFAULT_MAX_N} (tables hold O(n^3) "
            f"big integers); pass allow_large=True / --allow-large to override"
        )


@dataclass
class CountTable:
    """Dense per-step grids of exact counts, indexed (step, i, j).

    ``n`` is the vertex budget: a and omega tables hold steps 0..2n,
    f tables hold levels 0..n-1, sigma_star tables (built over n braid
    vertices) hold steps 0..2n.  Out-of-range lookups return 0.
    """

    kind: str
    n: int
    layers: list[list[list[int]]]

    def get(self, s: int, i: int, j: int) -> int:
        if 0 <= s < len(self.layers) and i >= 0 and j >= 0:
            layer = self.layers[s]
            if i < len(layer) and j < len(layer[i]):
                return layer[i][j]
        return 0

    @property
    def max_step(self) -> int:
        return len(self.layers) - 1

    def iter_entries(self) -> Iterator[tuple[int, int, int, int]]:
        """Nonzero entries in lexicographic (s, i, j) order."""
        for s, layer in enumerate(self.layers):
            for i, row in enumerate(layer):
                for j, value in enumerate(row):
                    if value:
                        yield s, i, j, value

    def entry_count(self) -> int:
        return sum(1 for _ in self.iter_entries())


def assert_tables_equal(x: CountTable, y: CountTable) -> None:
    """Exact equality of two tables; raises ConsistencyError naming the
    first differing (s, i, j)."""
    steps = max(x.max_step, y.max_step)
    width = max(len(x.layers[0]), len(y.layers[0]))
    for s in range(steps + 1):
        for i in range(width):
            for j in range(width):
                if x.get(s, i, j) != y.get(s, i, j):
                    raise ConsistencyError(
                        f"{x.kind}/{y.kind} tables differ at (s={s}, i={i}, j={j}): "
                        f"{x.get(s, i, j)} != {y.get(s, i, j)}"
                    )


def _empty_layer(width: int) -> list[list[int]]:
    return [[0] * width for _ in range(width)]


def build_q2_table(n: int, *, allow_large: bool = False) -> CountTable:
    """Quarter-plane partition-walk counts a(s, i, j) for s = 0..2n.

    a(0, 1, 0) = 1; odd steps pull from (i+1, j), (i, j+1), (i, j) and
    even steps from (i-1, j), (i, j-1), (i, j), out-of-range terms zero.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    _check_cap(n, allow_large)
    width = n + 2
    first = _empty_layer(width)
    first[1][0] = 1
    layers = [first]
    for s in range(1, 2 * n + 1):
        prev = layers[-1]
        cur = _empty_layer(width)
        if s % 2 == 1:
            for i in range(width):
                row, src = cur[i], prev[i]
                up = prev[i + 1] if i + 1 < width else None
                for j in range(width):
                    v = src[j]
                    if j + 1 < width:
                        v += src[j + 1]
                    if up is not None:
                        v += up[j]
                    row[j] = v
        else:
            for i in range(width):
                row, src = cur[i], prev[i]
                down = prev[i - 1] if i > 0 else None
                for j in range(width):
                    v = src[j]
                    if j > 0:
                        v += src[j - 1]
                    if down is not None:
                        v += down[j]
                    row[j] = v
        layers.append(cur)
    return CountTable("a", n, layers)


def build_omega_table(a: CountTable) -> CountTable:
    """Chamber counts by reflection: omega(s, i, j) = a(s, i, j) - a(s, j, i)
    for i > j >= 0.  omega(2n, 1, 0) is the number of 3-noncrossing
    partitions of [n]."""
    if a.kind != "a":
        raise ValueError(f"expected an a-kind table, got {a.kind!r}")
    width = len(a.layers[0])
    layers = []
    for s, src in enumerate(a.layers):
        cur = _empty_layer(width)
        for i in range(width):
            for j in range(i):
                w = src[i][j] - src[j][i]
                if w < 0:
                    raise ConsistencyError(
                        f"reflection produced a negative count at (s={s}, i={i}, j={j})"
                    )
                cur[i][j] = w
        layers.append(cur)
    return CountTable("omega", a.n, layers)


def build_f_table(n: int, method: str = "direct", *,
                  a: CountTable | None = None,
                  allow_large: bool = False) -> CountTable:
    """Odd-step quarter-plane counts f(l, i, j) for l = 0..n-1.

    "direct" copies a(2l+1, ., .) out of the a table.  "kernel_recursion"
    starts from f(0, ., .) = a(1, ., .) (1 at (1,0) and (0,0)) and applies
    the all-positive seven-neighbor recursion obtained by composing one
    removal step with one addition step:

        f(l,i,j) = f(l-1,i,j+1) + f(l-1,i+1,j) + 3 f(l-1,i,j)
                 + f(l-1,i-1,j+1) + f(l-1,i+1,j-1)
                 + f(l-1,i-1,j) + f(l-1,i,j-1)

    with negative indices contributing zero.  The two routes must agree
    exactly (see assert_tables_equal).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    _check_cap(n, allow_large)
    width = n + 2
    if method == "direct":
        if a is None:
            a = build_q2_table(n, allow_large=allow_large)
        if a.kind != "a" or a.max_step < 2 * n - 1:
            raise ValueError("direct method needs an a table covering step 2n-1")
        layers = [
            [row[:width] for row in a.layers[2 * level + 1][:width]]
            for level in range(n)
        ]
        return CountTable("f", n, layers)
    if method != "kernel_recursion":
        raise ValueError(f"unknown method {method!r}")
    first = _empty_layer(width)
    first[1][0] = 1
    first[0][0] = 1
    layers = [first]
    for _level in range(1, n):
        prev = layers[-1]

        def get(i: int, j: int) -> int:
            if 0 <= i < width and 0 <= j < width:
                return prev[i][j]
            return 0

        cur = _empty_layer(width)
        for i in range(width):
            for j in range(width):
                cur[i][j] = (
                    get(i, j + 1) + get(i + 1, j) + 3 * get(i, j)
                    + get(i - 1, j + 1) + get(i + 1, j - 1)
                    + get(i - 1, j) + get(i, j - 1)
                )
        layers.append(cur)
    return CountTable("f", n, layers)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def lagrange_coeff(ell: int, m: int, s: int) -> int:
    """[x^0 t^s] x^ell Y0^m for the kernel root Y0, via Lagrange inversion:

        sum_j (m/s) C(s, j) C(s, j+m) C(2j+m, j-ell)

    Exact rational arithmetic for the m/s factor; the total must be an
    integer or the computation is wrong.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    inner = 0
    for j in range(s + 1):
        inner += _binom(s, j) * _binom(s, j + m) * _binom(2 * j + m, j - ell)
    total = Fraction(m * inner, s)
    if total.denominator != 1:
        raise ConsistencyError(
            f"non-integral Lagrange sum for (ell={ell}, m={m}, s={s}): {total}"
        )
    return total.numerator


# Monomials (coefficient, x power, Y0 power) of
#   x^2 + (x^-2 + x + x^2) Y0 + (x^-3 - x^-1) Y0^2 - x^-2 Y0^3,
# the combination whose positive/negative x-parts give the axis series.
_BRACKET = (
    (1, 2, 0),
    (1, -2, 1),
    (1, 1, 1),
    (1, 2, 1),
    (1, -3, 2),
    (-1, -1, 2),
    (-1, -2, 3),
)


def axis_coeff(axis: str, index: int, ell: int) -> int:
    """Counts of even walks ending on an axis, extracted analytically.

    horizontal: [x^index t^ell] H = a(2 ell, index, 0);
    vertical:   [y^index t^ell] V = a(2 ell, 0, index).
    The exponent shift is -index-1 for H and +index+1 for V.
    """
    if axis not in ("horizontal", "vertical"):
        raise ValueError(f"axis must be 'horizontal' or 'vertical', got {axis!r}")
    if index < 0 or ell < 0:
        raise ValueError("index and ell must be nonnegative")
    if ell == 0:
        # t^0: only the start point (1, 0) has a (length-0) walk.
        return 1 if (axis == "horizontal" and index == 1) else 0
    shift = -index - 1 if axis == "horizontal" else index + 1
    total = 0
    for coeff, power, m in _BRACKET:
        if m == 0:
            continue  # the Y0-free monomial only contributes at t^0
        total += coeff * lagrange_coeff(power + shift, m, ell)
    if total < 0:
        raise ConsistencyError(
            f"negative axis coefficient for ({axis}, index={index}, ell={ell}): {total}"
        )
    return total


def f_boundary(i: int, j: int, ell: int) -> int:
    """Boundary values of f by alternating axis sums:

        f(l, i, 0) = sum_{i1<=i} (-1)^(i-i1) [x^i1 t^(l+1)] H
        f(l, 0, j) = sum_{j1<=j} (-1)^(j-j1) [y^j1 t^(l+1)] V

    Must match the direct table exactly.
    """
    if i < 0 or j < 0 or ell < 0:
        raise ValueError("indices must be nonnegative")
    if i and j:
        raise ValueError("exactly one of i, j may be nonzero")
    if j == 0:
        total = sum((-1) ** (i - i1) * axis_coeff("horizontal", i1, ell + 1)
                    for i1 in range(i + 1))
    else:
        total = sum((-1) ** (j - j1) * axis_coeff("vertical", j1, ell + 1)
                    for j1 in range(j + 1))
    if total < 0:
        raise ConsistencyError(
            f"negative boundary value for (i={i}, j={j}, ell={ell}): {total}"
        )
    return total


def build_sigma_star(n: int, method: str = "direct_dp", *,
                     omega: CountTable | None = None,
                     allow_large: bool = False) -> CountTable:
    """Counts of loop-free braid walks over the n-1 braid vertices that
    correspond to 2-regular partitions of [n].

    The table covers steps 0..2(n-1); sigma_star(2(n-1), 1, 0) is the
    number of 2-regular 3-noncrossing partitions of [n].

    "inclusion_exclusion" uses sigma*(2l, i, j) =
    sum_h (-1)^h C(l, h) omega(2(l-h)+1, i, j) for even steps (an omega
    table covering step 2n-1 is required) and the odd-step recursion
    sigma*(2l+1) = sigma*(2l, i-1, j) + sigma*(2l, i, j-1) + sigma*(2l, i, j).

    "direct_dp" steps the constrained walk, carrying one bit per odd
    half-step: whether it was +e1 (in which case -e1 is forbidden next).
    Both methods must agree exactly.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    _check_cap(n, allow_large)
    m = n - 1
    width = m + 2

    if method == "inclusion_exclusion":
        if omega is None:
            raise ValueError("inclusion_exclusion needs an omega table")
        if omega.kind != "omega" or omega.max_step < 2 * m + 1:
            raise ValueError("omega table must cover step 2(n-1)+1")
        layers = []
        for level in range(m + 1):
            even = _empty_layer(width)
            for i in range(width):
                for j in range(i):
                    acc = 0
                    for h in range(level + 1):
                        term = _binom(level, h) * omega.get(2 * (level - h) + 1, i, j)
                        acc = acc - term if h % 2 else acc + term
                    if acc < 0:
                        raise ConsistencyError(
                            f"inclusion-exclusion went negative at "
                            f"(s={2 * level}, i={i}, j={j}): {acc}"
                        )
                    even[i][j] = acc
            if layers:
                prev = layers[-1]
                odd = _empty_layer(width)
                for i in range(width):
                    for j in range(i):
                        v = prev[i][j]
                        if i - 1 > j:
                            v += prev[i - 1][j]
                        if j > 0:
                            v += prev[i][j - 1]
                        odd[i][j] = v
                layers.append(odd)
            layers.append(even)
        return CountTable("sigma_star", m, layers)

    if method != "direct_dp":
        raise ValueError(f"unknown method {method!r}")

    first = _empty_layer(width)
    first[1][0] = 1
    layers = [first]
    for _v in range(m):
        even = layers[-1]
        plain = _empty_layer(width)   # last odd step was 0 or +e2
        flagged = _empty_layer(width)  # last odd step was +e1
        for i in range(width):
            for j in range(i):
                c = even[i][j]
                if not c:
                    continue
                if i + 1 < width:
                    flagged[i + 1][j] += c
                if j + 1 < i:
                    plain[i][j + 1] += c
                plain[i][j] += c
        odd_total = _empty_layer(width)
        for i in range(width):
            for j in range(i):
                odd_total[i][j] = plain[i][j] + flagged[i][j]
        layers.append(odd_total)
        nxt = _empty_layer(width)
        for i in range(width):
            for j in range(i):
                for src, e1_allowed in ((plain, True), (flagged, False)):
                    c = src[i][j]
                    if not c:
                        continue
                    if e1_allowed and i - 1 > j:
                        nxt[i - 1][j] += c
                    if j > 0:
                        nxt[i][j - 1] += c
                    nxt[i][j] += c
        layers.append(nxt)
    return CountTable("sigma_star", m, layers)


_EXPECTED_LAYERS = {
    "a": lambda n: 2 * n + 1,
    "omega": lambda n: 2 * n + 1,
    "f": lambda n: n,
    "sigma_star": lambda n: 2 * n + 1,
}


def save_table(table: CountTable, sink: str | Path | IO[str]) -> int:
    """Write the line-oriented cache format; returns the entry count.

    Header ``NCWALK v1 kind=<kind> n=<n>``, one ``s i j value`` line per
    nonzero entry in lexicographic order, trailer ``END <count>``.
    """
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="ascii") as f:
            return save_table(table, f)
    count = 0
    sink.write(f"NCWALK {FORMAT_VERSION} kind={table.kind} n={table.n}\n")
    for s, i, j, value in table.iter_entries():
        sink.write(f"{s} {i} {j} {value}\n")
        count += 1
    sink.write(f"END {count}\n")
    return count


_HEADER = re.compile(r"NCWALK (v\d+) kind=([a-z_]+) n=(\d+)\s*")


def _recurrence_holds(table: CountTable, s: int, i: int, j: int) -> bool:
    value = table.get(s, i, j)
    if table.kind in ("a", "omega"):
        # Chamber counts vanish outside i > j >= 0, so the quarter-plane
        # step recurrences hold verbatim for omega with zero-extension.
        if s % 2 == 1:
            return value == (table.get(s - 1, i + 1, j) + table.get(s - 1, i, j + 1)
                             + table.get(s - 1, i, j))
        return value == (table.get(s - 1, i - 1, j) + table.get(s - 1, i, j - 1)
                         + table.get(s - 1, i, j))
    if table.kind == "f":
        g = table.get
        return value == (g(s - 1, i, j + 1) + g(s - 1, i + 1, j) + 3 * g(s - 1, i, j)
                         + g(s - 1, i - 1, j + 1) + g(s - 1, i + 1, j - 1)
                         + g(s - 1, i - 1, j) + g(s - 1, i, j - 1))
    # sigma_star: only odd steps recur within the stored data.
    return value == (table.get(s - 1, i - 1, j) + table.get(s - 1, i, j - 1)
                     + table.get(s - 1, i, j))


def _spot_check(table: CountTable, entries: list[tuple[int, int, int, int]]) -> None:
    if table.kind == "sigma_star":
        eligible = [e for e in entries if e[0] % 2 == 1]
    else:
        eligible = [e for e in entries if e[0] >= 1]
    if not eligible:
        if table.get(0, 1, 0) != 1:
            raise TableFormatError("spot check failed: base entry (0,1,0) must be 1")
        return
    k = len(eligible)
    for idx in sorted({k // 4, k // 2, (3 * k) // 4}):
        s, i, j, _ = eligible[idx]
        if not _recurrence_holds(table, s, i, j):
            raise TableFormatError(
                f"recurrence spot check failed at (s={s}, i={i}, j={j})"
            )


def load_table(source: str | Path | IO[str]) -> CountTable:
    """Read a table written by save_table; bit-exact round trip.

    Validates the header, entry ordering and ranges, the END count, and
    spot-checks three recurrence cells.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="ascii") as f:
            return load_table(f)
    header = source.readline()
    m = _HEADER.fullmatch(header)
    if not m:
        raise TableFormatError(f"bad header line: {header!r}")
    version, kind, n_text = m.groups()
    if version != FORMAT_VERSION:
        raise TableFormatError(f"unsupported format version {version!r}")
    if kind not in TABLE_KINDS:
        raise TableFormatError(f"unknown table kind {kind!r}")
    n = int(n_text)
    layer_count = _EXPECTED_LAYERS[kind](n)
    width = n + 2
    layers = [_empty_layer(width) for _ in range(layer_count)]
    entries: list[tuple[int, int, int, int]] = []
    declared = None
    for line in source:
        parts = line.split()
        if parts and parts[0] == "END":
            if len(parts) != 2 or not parts[1].isdigit():
                raise TableFormatError(f"bad trailer line: {line!r}")
            declared = int(parts[1])
            break
        if len(parts) != 4:
            raise TableFormatError(f"bad entry line: {line!r}")
        try:
            s, i, j, value = (int(p) for p in parts)
        except ValueError:
            raise TableFormatError(f"non-numeric entry line: {line!r}") from None
        if not (0 <= s < layer_count and 0 <= i < width and 0 <= j < width):
            raise TableFormatError(f"entry out of range: {line.strip()!r}")
        if value <= 0:
            raise TableFormatError(f"entries must be positive: {line.strip()!r}")
        if entries and (s, i, j) <= entries[-1][:3]:
            raise TableFormatError(f"entries out of order at {(s, i, j)}")
        layers[s][i][j] = value
        entries.append((s, i, j, value))
    if declared is None:
        raise TableFormatError("truncated file: END trailer missing")
    if declared != len(entries):
        raise TableFormatError(
            f"entry count mismatch: header says {declared}, found {len(entries)}"
        )
    table = CountTable(kind, n, layers)
    _spot_check(table, entries)
    return table
