"""Set partitions, braids, and the crossing/regularity predicates.

A set partition of [n] = {1..n} is a family of disjoint nonempty blocks
covering [n].  Its standard representation joins consecutive elements of
each block by arcs drawn above the number line; the crossing statistics of
that arc diagram are what the rest of this package counts and samples.
Braids are arc diagrams that additionally allow loops (i, i) and treat
shared-endpoint arcs (i, j), (j, l) with i < j < l as crossing.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class PartitionParseError(ValueError):
    """Malformed block notation; ``offset`` is the character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class Arc(NamedTuple):
    left: int
    right: int


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..n} into disjoint nonempty blocks.

    Blocks are normalized on construction: each block ascending, blocks
    sorted by their minimum.  Instances are immutable and hashable.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        if n < 1:
            raise ValueError(f"ground-set size must be positive, got {n}")
        seen: set[int] = set()
        norm: list[tuple[int, ...]] = []
        for block in blocks:
            b = tuple(sorted(block))
            if not b:
                raise ValueError("empty block")
            for x in b:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValueError(f"non-integer element {x!r}")
                if not 1 <= x <= n:
                    raise ValueError(f"element {x} outside 1..{n}")
                if x in seen:
                    raise ValueError(f"element {x} occurs more than once")
                seen.add(x)
            norm.append(b)
        if len(seen) != n:
            missing = sorted(set(range(1, n + 1)) - seen)
            raise ValueError(f"elements missing from partition: {missing}")
        norm.sort(key=lambda b: b[0])
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", tuple(norm))

    def __str__(self) -> str:
        return format_partition(self)


@dataclass(frozen=True)
class Braid:
    """Arc diagram over [n] allowing loops (i, i).

    Every vertex is the left endpoint of at most one arc and the right
    endpoint of at most one arc; a loop occupies both slots at its vertex.
    """

    n: int
    arcs: tuple[Arc, ...]

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        left_used: set[int] = set()
        right_used: set[int] = set()
        norm: list[Arc] = []
        for raw in arcs:
            a = Arc(*raw)
            if not (1 <= a.left <= a.right <= n):
                raise ValueError(f"arc {a} outside 1..{n} or reversed")
            if a.left in left_used:
                raise ValueError(f"vertex {a.left} is a left endpoint twice")
            if a.right in right_used:
                raise ValueError(f"vertex {a.right} is a right endpoint twice")
            left_used.add(a.left)
            right_used.add(a.right)
            norm.append(a)
        norm.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", tuple(norm))

    def loops(self) -> tuple[int, ...]:
        return tuple(a.left for a in self.arcs if a.left == a.right)

    def is_loop_free(self) -> bool:
        return not self.loops()


def canonical_arcs(p: SetPartition) -> list[Arc]:
    """Arcs of the standard representation: consecutive elements of each
    block in numerical order, sorted by left endpoint."""
    arcs = []
    for block in p.blocks:
        for u, v in zip(block, block[1:]):
            arcs.append(Arc(u, v))
    arcs.sort()
    return arcs


def _longest_strictly_increasing(values: list[int]) -> int:
    tails: list[int] = []
    for x in values:
        k = bisect_left(tails, x)
        if k == len(tails):
            tails.append(x)
        else:
            tails[k] = x
    return len(tails)


def max_mutual_crossing(arcs: Iterable[tuple[int, int]], *,
                        shared_endpoints_cross: bool = False) -> int:
    """Largest k such that some k arcs mutually cross.

    Two arcs (i1,j1), (i2,j2) with i1 < i2 cross when i2 < j1 < j2; with
    ``shared_endpoints_cross`` (the braid convention) when i2 <= j1 < j2,
    so that (i,j),(j,l) counts.  Loops never participate and are skipped.

    A k-subset is mutually crossing iff, sorted by left endpoint, both
    coordinates strictly increase and every arc spans the gap after the
    largest left endpoint t (covers t itself under the braid convention).
    Scanning t over all left endpoints and taking a longest strictly
    increasing subsequence of right endpoints is therefore exact.
    """
    proper = [Arc(*a) for a in arcs if a[0] < a[1]]
    if not proper:
        return 0
    best = 0
    for t in sorted({a.left for a in proper}):
        if shared_endpoints_cross:
            span = [a for a in proper if a.left <= t <= a.right]
        else:
            span = [a for a in proper if a.left <= t < a.right]
        span.sort(key=lambda a: (a.left, -a.right))
        best = max(best, _longest_strictly_increasing([a.right for a in span]))
    return best


def partition_max_crossing(p: SetPartition) -> int:
    return max_mutual_crossing(canonical_arcs(p))


def braid_max_crossing(b: Braid) -> int:
    return max_mutual_crossing(b.arcs, shared_endpoints_cross=True)


def is_m_regular(p: SetPartition, m: int) -> bool:
    """True iff any two distinct elements of a block differ by at least m."""
    if m < 1:
        raise ValueError(f"regularity parameter must be positive, got {m}")
    for block in p.blocks:
        for u, v in zip(block, block[1:]):
            if v - u < m:
                return False
    return True


_N_PREFIX = re.compile(r"\s*n\s*=\s*(\d+)\s*:")


def parse_partition(text: str) -> SetPartition:
    """Parse block notation like ``{1,5}{3,7,10}{2}``.

    n is inferred as the maximum element unless an explicit ``n=15:``
    prefix is given.  Malformed input raises PartitionParseError with the
    offending character offset.
    """
    declared_n = None
    i = 0
    m = _N_PREFIX.match(text)
    if m:
        declared_n = int(m.group(1))
        i = m.end()

    def skip_ws(k: int) -> int:
        while k < len(text) and text[k].isspace():
            k += 1
        return k

    blocks: list[list[int]] = []
    offsets: dict[int, int] = {}
    i = skip_ws(i)
    while i < len(text):
        if text[i] != "{":
            raise PartitionParseError(f"expected '{{' but found {text[i]!r}", i)
        i = skip_ws(i + 1)
        block: list[int] = []
        while True:
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i:
                found = repr(text[i]) if i < len(text) else "end of input"
                raise PartitionParseError(f"expected a number but found {found}", i)
            value = int(text[i:j])
            if value < 1:
                raise PartitionParseError("elements must be >= 1", i)
            if value in offsets:
                raise PartitionParseError(f"element {value} repeated", i)
            offsets[value] = i
            block.append(value)
            i = skip_ws(j)
            if i < len(text) and text[i] == ",":
                i = skip_ws(i + 1)
                continue
            if i < len(text) and text[i] == "}":
                i += 1
                break
            found = repr(text[i]) if i < len(text) else "end of input"
            raise PartitionParseError(f"expected ',' or '}}' but found {found}", i)
        blocks.append(block)
        i = skip_ws(i)
    if not blocks:
        raise PartitionParseError("no blocks found", i)
    n = declared_n if declared_n is not None else max(offsets)
    for value, off in offsets.items():
        if value > n:
            raise PartitionParseError(f"element {value} exceeds declared n={n}", off)
    missing = sorted(set(range(1, n + 1)) - set(offsets))
    if missing:
        raise PartitionParseError(f"missing elements: {missing}", len(text))
    return SetPartition(n, blocks)


def format_partition(p: SetPartition) -> str:
    """Inverse of parse_partition; blocks by minimum, elements ascending."""
    return "".join("{" + ",".join(map(str, b)) + "}" for b in p.blocks)


def format_arcs(arcs: Iterable[tuple[int, int]]) -> str:
    """Diagnostic arc-list format, e.g. ``(1,5) (3,7)``."""
    return " ".join(f"({a[0]},{a[1]})" for a in arcs)
