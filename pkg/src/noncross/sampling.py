"""Exact uniform random generation driven by integer completion counts.

Both samplers walk a Markov chain whose transition weights are exact
big-integer counts of walk completions, so every admissible output has
probability exactly 1 / (total count): the per-step ratios telescope.

The plain sampler advances one half-step at a time through the chamber,
weighting each candidate by the omega table (time reversal makes "ways to
finish from here" a plain table lookup).  The 2-regular sampler advances
one braid vertex (an add/remove pair) at a time: the no-loop constraint
couples only the two half-steps inside one vertex, so pair-level
conditioning with sigma_star completion counts is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .tableaux import (
    BRAID_EVEN_MOVES,
    BRAID_ODD_MOVES,
    Move,
    PARTITION_EVEN_MOVES,
    PARTITION_ODD_MOVES,
    VacillatingTableau,
    WalkPoint,
    in_chamber,
    tableau_to_partition,
    theta_inverse,
)
from .partitions import SetPartition
from .walks import ConsistencyError, CountTable

_MASK64 = (1 << 64) - 1
_CHUNK_BITS = 64


class RandomStream:
    """Deterministic random source built from 64-bit chunks.

    Chunks come from a Mersenne Twister seeded with the 64-bit seed, so
    identical seeds give identical draw sequences on every platform.
    ``uniform_below`` masks the minimal bit width covering the bound and
    rejects, which is exact for arbitrary-precision bounds (no modulo
    bias); ``position`` counts chunks drawn so far.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self.position = 0
        self._chunks = random.Random(self.seed)

    def next_chunk(self) -> int:
        self.position += 1
        return self._chunks.getrandbits(_CHUNK_BITS)

    def uniform_below(self, bound: int) -> int:
        """Uniform integer in [0, bound) for any positive integer bound."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        nbits = (bound - 1).bit_length()
        if nbits == 0:
            return 0
        nchunks = (nbits + _CHUNK_BITS - 1) // _CHUNK_BITS
        mask = (1 << nbits) - 1
        while True:
            raw = 0
            for _ in range(nchunks):
                raw = (raw << _CHUNK_BITS) | self.next_chunk()
            value = raw & mask
            if value < bound:
                return value


@dataclass(frozen=True)
class Candidate:
    """One admissible continuation: a move (or vertex move pair), the
    point it lands on, and its exact completion-count weight."""

    move: Move | tuple[Move, Move]
    point: WalkPoint
    weight: int


@dataclass(frozen=True)
class TransitionDistribution:
    candidates: tuple[Candidate, ...]
    total: int

    def choose(self, rng: RandomStream) -> Candidate:
        r = rng.uniform_below(self.total)
        acc = 0
        for cand in self.candidates:
            acc += cand.weight
            if r < acc:
                return cand
        raise ConsistencyError("weights do not sum to the stored total")


_POINT_DELTAS = {
    Move.NOTHING: (0, 0),
    Move.ADD_ROW1: (1, 0),
    Move.ADD_ROW2: (0, 1),
    Move.REMOVE_ROW1: (-1, 0),
    Move.REMOVE_ROW2: (0, -1),
}


def _step(point: WalkPoint, move: Move) -> WalkPoint:
    da, db = _POINT_DELTAS[move]
    return WalkPoint(point.a + da, point.b + db)


def partition_step_weights(point: WalkPoint, step_index: int, n: int,
                           omega: CountTable) -> TransitionDistribution:
    """Candidates for half-step ``step_index`` (0-based) of a length-2n
    partition walk currently at ``point``.

    Candidate weights are omega(2n - step_index - 1, .) completion counts;
    their sum must equal omega(2n - step_index, point), which is asserted.
    """
    if not 0 <= step_index < 2 * n:
        raise ValueError(f"step index {step_index} outside 0..{2 * n - 1}")
    moves = PARTITION_ODD_MOVES if step_index % 2 == 0 else PARTITION_EVEN_MOVES
    remaining = 2 * n - step_index
    candidates = []
    total = 0
    for move in moves:
        nxt = _step(point, move)
        if not in_chamber(nxt.a, nxt.b):
            continue
        weight = omega.get(remaining - 1, nxt.a, nxt.b)
        candidates.append(Candidate(move, nxt, weight))
        total += weight
    if total == 0:
        raise ConsistencyError(
            f"unreachable state: no completion from {point} at step {step_index}"
        )
    expected = omega.get(remaining, point.a, point.b)
    if total != expected:
        raise ConsistencyError(
            f"weight total {total} != omega({remaining}, {point.a}, {point.b}) "
            f"= {expected}"
        )
    return TransitionDistribution(tuple(candidates), total)


def sample_partition_walk(n: int, rng: RandomStream,
                          omega: CountTable) -> VacillatingTableau:
    """One uniform partition walk of length 2n as a vacillating tableau.

    Every valid walk comes out with probability exactly
    1 / omega(2n, 1, 0): the transition ratios telescope.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if omega.kind != "omega" or omega.max_step < 2 * n:
        raise ValueError(f"omega table does not cover n={n}")
    point = WalkPoint(1, 0)
    moves = []
    for h in range(2 * n):
        cand = partition_step_weights(point, h, n, omega).choose(rng)
        moves.append(cand.move)
        point = cand.point
    return VacillatingTableau.from_moves("partition", moves)


def sample_partition(n: int, rng: RandomStream, omega: CountTable) -> SetPartition:
    """Uniform 3-noncrossing partition of [n]."""
    return tableau_to_partition(sample_partition_walk(n, rng, omega))


def partition_walk_probability(tableau: VacillatingTableau,
                               omega: CountTable) -> Fraction:
    """Exact probability the plain sampler assigns to this walk; equals
    1 / omega(2n, 1, 0) for every valid walk."""
    n = tableau.n
    point = WalkPoint(1, 0)
    prob = Fraction(1)
    for h, move in enumerate(tableau.moves()):
        dist = partition_step_weights(point, h, n, omega)
        cand = next(c for c in dist.candidates if c.move is move)
        prob *= Fraction(cand.weight, dist.total)
        point = cand.point
    return prob


def braid_pair_weights(point: WalkPoint, vertex_index: int, n: int,
                       sigma_star: CountTable) -> TransitionDistribution:
    """Candidate move pairs for braid vertex ``vertex_index`` (1-based, of
    n-1 total) of the loop-free braid walk currently at ``point``.

    Candidates are the ordered pairs (odd add or stay, even remove or
    stay) minus the forbidden (+e1, -e1), with the intermediate and final
    points both inside the chamber.  Weights are sigma_star completion
    counts, valid by the reversal symmetry of loop-free walks; their sum
    must equal sigma_star(2(n - vertex_index), point), which is asserted.
    """
    m = n - 1
    if not 1 <= vertex_index <= m:
        raise ValueError(f"vertex index {vertex_index} outside 1..{m}")
    remaining_after = m - vertex_index
    candidates = []
    total = 0
    for odd in BRAID_ODD_MOVES:
        mid = _step(point, odd)
        if not in_chamber(mid.a, mid.b):
            continue
        for even in BRAID_EVEN_MOVES:
            if odd is Move.ADD_ROW1 and even is Move.REMOVE_ROW1:
                continue  # would create a loop
            nxt = _step(mid, even)
            if not in_chamber(nxt.a, nxt.b):
                continue
            weight = sigma_star.get(2 * remaining_after, nxt.a, nxt.b)
            candidates.append(Candidate((odd, even), nxt, weight))
            total += weight
    if total == 0:
        raise ConsistencyError(
            f"unreachable state: no loop-free completion from {point} "
            f"at vertex {vertex_index}"
        )
    expected = sigma_star.get(2 * (remaining_after + 1), point.a, point.b)
    if total != expected:
        raise ConsistencyError(
            f"pair weight total {total} != sigma_star({2 * (remaining_after + 1)}, "
            f"{point.a}, {point.b}) = {expected}"
        )
    return TransitionDistribution(tuple(candidates), total)


def sample_two_regular_walk(n: int, rng: RandomStream,
                            sigma_star: CountTable) -> VacillatingTableau:
    """One uniform loop-free braid walk over [n-1] as a braid tableau."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    m = n - 1
    if sigma_star.kind != "sigma_star" or sigma_star.max_step < 2 * m:
        raise ValueError(f"sigma_star table does not cover n={n}")
    point = WalkPoint(1, 0)
    moves = []
    for v in range(1, m + 1):
        cand = braid_pair_weights(point, v, n, sigma_star).choose(rng)
        moves.extend(cand.move)
        point = cand.point
    return VacillatingTableau.from_moves("braid", moves)


def sample_two_regular_partition(n: int, rng: RandomStream,
                                 sigma_star: CountTable) -> SetPartition:
    """Uniform 2-regular 3-noncrossing partition of [n].

    Samples a loop-free braid walk over [n-1], pads it to a partition
    tableau, and applies the insertion bijection.  n = 1 has the single
    partition {1} (the braid walk over [0] is empty).
    """
    if n == 1:
        return SetPartition(1, [[1]])
    walk = sample_two_regular_walk(n, rng, sigma_star)
    return tableau_to_partition(theta_inverse(walk))


def braid_walk_probability(tableau: VacillatingTableau,
                           sigma_star: CountTable) -> Fraction:
    """Exact probability the 2-regular sampler assigns to this braid walk;
    equals 1 / sigma_star(2(n-1), 1, 0) for every valid loop-free walk."""
    m = tableau.n
    moves = tableau.moves()
    point = WalkPoint(1, 0)
    prob = Fraction(1)
    for v in range(1, m + 1):
        pair = (moves[2 * v - 2], moves[2 * v - 1])
        dist = braid_pair_weights(point, v, m + 1, sigma_star)
        cand = next(c for c in dist.candidates if c.move == pair)
        prob *= Fraction(cand.weight, dist.total)
        point = cand.point
    return prob
