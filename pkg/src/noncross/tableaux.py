"""Two-row shapes, elementary moves, vacillating tableaux, and the
insertion bijections relating them to partitions and braids.

A vacillating tableau over [n] is a sequence of 2n+1 shapes with at most
two rows, starting and ending empty.  In the partition flavor the odd
half-steps remove a square or do nothing and the even half-steps add a
square or do nothing; the braid flavor swaps the two roles.  Embedding a
shape (row1, row2) as the lattice point (row1 + 1, row2) turns shape
sequences into walks in the chamber a > b >= 0, which is how the counting
tables in :mod:`noncross.walks` see them.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

from .partitions import Arc, Braid, SetPartition, canonical_arcs


class Move(Enum):
    NOTHING = "0"
    ADD_ROW1 = "+1"
    ADD_ROW2 = "+2"
    REMOVE_ROW1 = "-1"
    REMOVE_ROW2 = "-2"


_DELTAS = {
    Move.NOTHING: (0, 0),
    Move.ADD_ROW1: (1, 0),
    Move.ADD_ROW2: (0, 1),
    Move.REMOVE_ROW1: (-1, 0),
    Move.REMOVE_ROW2: (0, -1),
}

_DELTA_TO_MOVE = {delta: move for move, delta in _DELTAS.items()}


class Shape(NamedTuple):
    row1: int
    row2: int


EMPTY_SHAPE = Shape(0, 0)

PARTITION_ODD_MOVES = (Move.NOTHING, Move.REMOVE_ROW1, Move.REMOVE_ROW2)
PARTITION_EVEN_MOVES = (Move.NOTHING, Move.ADD_ROW1, Move.ADD_ROW2)
BRAID_ODD_MOVES = (Move.NOTHING, Move.ADD_ROW1, Move.ADD_ROW2)
BRAID_EVEN_MOVES = (Move.NOTHING, Move.REMOVE_ROW1, Move.REMOVE_ROW2)


def shape_is_valid(s: Shape) -> bool:
    return s.row1 >= s.row2 >= 0


def apply_move(shape: Shape, move: Move) -> Shape | None:
    """Resulting shape, or None if the move leaves the valid region."""
    d1, d2 = _DELTAS[move]
    nxt = Shape(shape.row1 + d1, shape.row2 + d2)
    return nxt if shape_is_valid(nxt) else None


def move_between(a: Shape, b: Shape) -> Move | None:
    """The elementary move turning a into b, or None if there is none."""
    return _DELTA_TO_MOVE.get((b.row1 - a.row1, b.row2 - a.row2))


class WalkPoint(NamedTuple):
    """Lattice embedding of a shape: a = row1 + 1, b = row2."""

    a: int
    b: int


def shape_to_point(s: Shape) -> WalkPoint:
    return WalkPoint(s.row1 + 1, s.row2)


def point_to_shape(p: WalkPoint) -> Shape:
    return Shape(p.a - 1, p.b)


def in_chamber(a: int, b: int) -> bool:
    """Membership in W2, the domain of all chamber walks here."""
    return a > b >= 0


@dataclass(frozen=True)
class VacillatingTableau:
    """Immutable shape sequence; ``flavor`` is "partition" or "braid"."""

    flavor: str
    shapes: tuple[Shape, ...]

    @property
    def n(self) -> int:
        """Number of vertices (shape count is 2n + 1)."""
        return (len(self.shapes) - 1) // 2

    def moves(self) -> tuple[Move, ...]:
        out = []
        for a, b in zip(self.shapes, self.shapes[1:]):
            mv = move_between(a, b)
            if mv is None:
                raise ValueError(f"shapes {a} -> {b} differ by a non-elementary move")
            out.append(mv)
        return tuple(out)

    @classmethod
    def from_moves(cls, flavor: str, moves: Iterable[Move]) -> "VacillatingTableau":
        shapes = [EMPTY_SHAPE]
        for k, mv in enumerate(moves):
            nxt = apply_move(shapes[-1], mv)
            if nxt is None:
                raise ValueError(f"move {mv.name} at half-step {k + 1} leaves the valid region")
            shapes.append(nxt)
        return cls(flavor, tuple(shapes))

    def to_text(self) -> str:
        """Serialize as ``row1.row2`` tokens, e.g. ``0.0 0.0 1.0 0.0 0.0``."""
        return " ".join(f"{s.row1}.{s.row2}" for s in self.shapes)

    @classmethod
    def from_text(cls, flavor: str, text: str) -> "VacillatingTableau":
        shapes = []
        for token in text.split():
            parts = token.split(".")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ValueError(f"bad shape token {token!r}, expected 'row1.row2'")
            shapes.append(Shape(int(parts[0]), int(parts[1])))
        return cls(flavor, tuple(shapes))


def validate_tableau(t: VacillatingTableau) -> list[tuple[int, str]]:
    """All invariant violations as (index, description); empty means ok."""
    problems: list[tuple[int, str]] = []
    if t.flavor == "partition":
        odd_ok, even_ok = PARTITION_ODD_MOVES, PARTITION_EVEN_MOVES
    elif t.flavor == "braid":
        odd_ok, even_ok = BRAID_ODD_MOVES, BRAID_EVEN_MOVES
    else:
        return [(0, f"unknown flavor {t.flavor!r}")]
    k = len(t.shapes)
    if k == 0 or k % 2 == 0:
        return [(0, f"shape count must be odd (2n+1), got {k}")]
    for idx, s in enumerate(t.shapes):
        if not shape_is_valid(s):
            problems.append((idx, f"invalid shape {s}"))
    if problems:
        return problems
    if t.shapes[0] != EMPTY_SHAPE:
        problems.append((0, "walk must start at the empty shape"))
    if t.shapes[-1] != EMPTY_SHAPE:
        problems.append((k - 1, "walk must end at the empty shape"))
    for idx in range(k - 1):
        mv = move_between(t.shapes[idx], t.shapes[idx + 1])
        if mv is None:
            problems.append((idx, "non-elementary move"))
            continue
        half = idx + 1
        allowed = odd_ok if half % 2 == 1 else even_ok
        if mv not in allowed:
            problems.append((idx, f"parity: {mv.name} not allowed at half-step {half}"))
    return problems


def _require_valid(t: VacillatingTableau, flavor: str) -> None:
    if t.flavor != flavor:
        raise ValueError(f"expected a {flavor}-flavor tableau, got {t.flavor!r}")
    problems = validate_tableau(t)
    if problems:
        idx, msg = problems[0]
        raise ValueError(f"invalid tableau at index {idx}: {msg}")


class _Filling:
    """Two-row standard filling with distinct entries, rows and columns
    increasing.  Implements row insertion and its reverse."""

    def __init__(self) -> None:
        self.row1: list[int] = []
        self.row2: list[int] = []

    def empty(self) -> bool:
        return not self.row1 and not self.row2

    def place(self, value: int, row: int) -> None:
        target = self.row1 if row == 1 else self.row2
        if target and target[-1] >= value:
            raise RuntimeError("filling corrupted: placed entry not the largest in its row")
        target.append(value)
        if row == 2 and (len(self.row2) > len(self.row1)
                         or self.row1[len(self.row2) - 1] >= value):
            raise RuntimeError("filling corrupted: column order violated by placement")

    def reverse_insert(self, row: int) -> int:
        """Remove the corner of ``row``; from row 2 the entry bumps into
        row 1, replacing the rightmost smaller entry.  Returns the value
        expelled from row 1."""
        if row == 1:
            if not self.row1 or len(self.row1) - 1 < len(self.row2):
                raise RuntimeError("filling corrupted: row-1 corner missing")
            return self.row1.pop()
        if not self.row2:
            raise RuntimeError("filling corrupted: row-2 corner missing")
        value = self.row2.pop()
        k = bisect_left(self.row1, value) - 1
        if k < 0:
            raise RuntimeError("filling corrupted: no row-1 entry below bumped value")
        expelled = self.row1[k]
        self.row1[k] = value
        return expelled

    def insert(self, value: int) -> int:
        """Standard row insertion from row 1.  Returns the row where a new
        square appeared; raises ValueError if a third row would be needed."""
        k = bisect_left(self.row1, value)
        if k == len(self.row1):
            self.row1.append(value)
            return 1
        bumped, self.row1[k] = self.row1[k], value
        k2 = bisect_left(self.row2, bumped)
        if k2 == len(self.row2):
            self.row2.append(bumped)
            return 2
        raise ValueError("insertion needs a third row")

    def take_corner(self, value: int) -> int:
        """Delete ``value``, which must sit at a removable corner.
        Returns the row it occupied."""
        if self.row1 and self.row1[-1] == value and len(self.row1) - 1 >= len(self.row2):
            self.row1.pop()
            return 1
        if self.row2 and self.row2[-1] == value:
            self.row2.pop()
            return 2
        raise RuntimeError(f"filling corrupted: {value} is not at a removable corner")

    def contains(self, value: int) -> bool:
        for row in (self.row1, self.row2):
            k = bisect_left(row, value)
            if k < len(row) and row[k] == value:
                return True
        return False


def _blocks_from_arcs(n: int, arcs: Sequence[Arc]) -> SetPartition:
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for arc in arcs:
        parent[find(arc.left)] = find(arc.right)
    blocks: dict[int, list[int]] = {}
    for v in range(1, n + 1):
        blocks.setdefault(find(v), []).append(v)
    return SetPartition(n, blocks.values())


def tableau_to_partition(t: VacillatingTableau) -> SetPartition:
    """Insertion bijection from partition-flavor tableaux to partitions.

    Vertex v's odd move removes a corner: reverse row insertion expels a
    value m from row 1 and records the arc (m, v).  Its even move, when an
    add, places the entry v at the new corner.  Blocks are the connected
    components of the recorded arcs.
    """
    _require_valid(t, "partition")
    n = t.n
    filling = _Filling()
    arcs: list[Arc] = []
    moves = t.moves()
    for v in range(1, n + 1):
        odd, even = moves[2 * v - 2], moves[2 * v - 1]
        if odd is Move.REMOVE_ROW1:
            arcs.append(Arc(filling.reverse_insert(1), v))
        elif odd is Move.REMOVE_ROW2:
            arcs.append(Arc(filling.reverse_insert(2), v))
        if even is Move.ADD_ROW1:
            filling.place(v, 1)
        elif even is Move.ADD_ROW2:
            filling.place(v, 2)
    if not filling.empty():
        raise RuntimeError("filling corrupted: entries left over at the end")
    return _blocks_from_arcs(n, arcs)


def partition_to_tableau(p: SetPartition) -> VacillatingTableau:
    """Inverse of tableau_to_partition, built right to left.

    Requires the partition to be 3-noncrossing; otherwise the backward
    insertion would need a third row and ValueError is raised.
    """
    closer = {a.right: a.left for a in canonical_arcs(p)}
    moves = [Move.NOTHING] * (2 * p.n)
    filling = _Filling()
    for v in range(p.n, 0, -1):
        if filling.contains(v):
            row = filling.take_corner(v)
            moves[2 * v - 1] = Move.ADD_ROW1 if row == 1 else Move.ADD_ROW2
        if v in closer:
            try:
                row = filling.insert(closer[v])
            except ValueError:
                raise ValueError(
                    f"partition {p} is not 3-noncrossing: insertion needs a third row"
                ) from None
            moves[2 * v - 2] = Move.REMOVE_ROW1 if row == 1 else Move.REMOVE_ROW2
    if not filling.empty():
        raise RuntimeError("filling corrupted: entries left over after reconstruction")
    return VacillatingTableau.from_moves("partition", moves)


def braid_tableau_to_braid(t: VacillatingTableau) -> Braid:
    """Insertion bijection from braid-flavor tableaux to braids.

    Vertex v's odd move, when an add, places the entry v; its even move
    removes a corner and the value expelled from row 1 records the arc
    (m, v) -- a loop when m = v, which happens exactly for the vertex
    pair (add row 1, remove row 1).
    """
    _require_valid(t, "braid")
    n = t.n
    filling = _Filling()
    arcs: list[Arc] = []
    moves = t.moves()
    for v in range(1, n + 1):
        odd, even = moves[2 * v - 2], moves[2 * v - 1]
        if odd is Move.ADD_ROW1:
            filling.place(v, 1)
        elif odd is Move.ADD_ROW2:
            filling.place(v, 2)
        if even is Move.REMOVE_ROW1:
            arcs.append(Arc(filling.reverse_insert(1), v))
        elif even is Move.REMOVE_ROW2:
            arcs.append(Arc(filling.reverse_insert(2), v))
    if not filling.empty():
        raise RuntimeError("filling corrupted: entries left over at the end")
    return Braid(n, arcs)


def theta_forward(t: VacillatingTableau) -> VacillatingTableau:
    """Walk-level bijection: partition tableau over [n] to braid tableau
    over [n-1].

    The first and last half-steps of a partition tableau are forced to be
    NOTHING (nothing can be removed from, or added to reach, the empty
    shape), so dropping the first and last shape regroups the remaining
    2n-2 moves with offset one: braid vertex i receives partition vertex
    i's even move followed by partition vertex (i+1)'s odd move.  Adds
    land on odd slots and removes on even slots, the braid parity rule.
    """
    _require_valid(t, "partition")
    if t.n < 1:
        raise ValueError("theta_forward needs at least one vertex")
    return VacillatingTableau("braid", t.shapes[1:-1])


def theta_inverse(t: VacillatingTableau) -> VacillatingTableau:
    """Inverse of theta_forward: pad a braid tableau over [n-1] with an
    empty shape at both ends, giving a partition tableau over [n]."""
    _require_valid(t, "braid")
    return VacillatingTableau("partition", (EMPTY_SHAPE,) + t.shapes + (EMPTY_SHAPE,))


def loop_vertices(t: VacillatingTableau) -> tuple[int, ...]:
    """Vertices of a braid tableau whose move pair is (add row 1, remove
    row 1); these are exactly the loops of the corresponding braid."""
    _require_valid(t, "braid")
    moves = t.moves()
    return tuple(
        v for v in range(1, t.n + 1)
        if moves[2 * v - 2] is Move.ADD_ROW1 and moves[2 * v - 1] is Move.REMOVE_ROW1
    )
