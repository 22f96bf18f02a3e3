"""Independent brute-force oracles and the cross-check suite.

The enumerators here share nothing with the table builders or samplers
beyond the core predicates, so agreement between a table entry and an
enumeration is evidence for both.  The suite bundles every exact identity
the package relies on; the chi-square harness adjudicates the uniformity
claims statistically.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .partitions import SetPartition, is_m_regular, partition_max_crossing
from .tableaux import (
    BRAID_EVEN_MOVES,
    BRAID_ODD_MOVES,
    EMPTY_SHAPE,
    PARTITION_EVEN_MOVES,
    PARTITION_ODD_MOVES,
    VacillatingTableau,
    apply_move,
    loop_vertices,
    partition_to_tableau,
    tableau_to_partition,
    theta_forward,
    theta_inverse,
)
from .sampling import (
    RandomStream,
    sample_partition,
    sample_two_regular_partition,
)
from .walks import (
    ConsistencyError,
    CountTable,
    assert_tables_equal,
    axis_coeff,
    build_f_table,
    build_omega_table,
    build_q2_table,
    build_sigma_star,
)

MAX_ENUM_N = 12
MAX_WALK_LENGTH = 24

PARTITION_FILTERS = ("all", "noncrossing3", "two_regular_noncrossing3")


def enumerate_partitions(n: int, which: str = "all") -> list[SetPartition]:
    """All partitions of [n] in restricted-growth-string order, optionally
    filtered to 3-noncrossing or 2-regular 3-noncrossing ones."""
    if which not in PARTITION_FILTERS:
        raise ValueError(f"unknown filter {which!r}")
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"n={n} outside 1..{MAX_ENUM_N} (Bell growth)")
    results: list[SetPartition] = []
    labels = [0] * n

    def emit() -> None:
        block_count = max(labels) + 1
        blocks: list[list[int]] = [[] for _ in range(block_count)]
        for v, lab in enumerate(labels, start=1):
            blocks[lab].append(v)
        p = SetPartition(n, blocks)
        if which != "all":
            if partition_max_crossing(p) >= 3:
                return
            if which == "two_regular_noncrossing3" and not is_m_regular(p, 2):
                return
        results.append(p)

    def rec(i: int, used: int) -> None:
        if i == n:
            emit()
            return
        for lab in range(used + 1):
            labels[i] = lab
            rec(i + 1, used + 1 if lab == used else used)

    rec(0, 0)
    return results


WALK_KINDS = ("p_w2", "b_w2", "b_star_w2")


def enumerate_walks(kind: str, length: int, end: tuple[int, int],
                    start: tuple[int, int] = (1, 0)) -> int:
    """Depth-first count of chamber walks; the oracle for every table.

    p_w2 walks remove at odd steps and add at even steps; b_w2 the other
    way round; b_star_w2 additionally forbids a +e1 odd step answered by
    a -e1 even step within the same vertex pair.
    """
    if kind not in WALK_KINDS:
        raise ValueError(f"unknown walk kind {kind!r}")
    if not 0 <= length <= MAX_WALK_LENGTH:
        raise ValueError(f"length={length} outside 0..{MAX_WALK_LENGTH}")
    sa, sb = start
    if not sa > sb >= 0:
        raise ValueError(f"start {start} outside the chamber")
    removes = ((-1, 0), (0, -1), (0, 0))
    adds = ((1, 0), (0, 1), (0, 0))
    if kind == "p_w2":
        odd_steps, even_steps = removes, adds
    else:
        odd_steps, even_steps = adds, removes
    star = kind == "b_star_w2"
    ea, eb = end

    def count(step: int, a: int, b: int, armed: bool) -> int:
        if step == length:
            return 1 if (a, b) == (ea, eb) else 0
        total = 0
        for da, db in (odd_steps if step % 2 == 0 else even_steps):
            na, nb = a + da, b + db
            if not na > nb >= 0:
                continue
            if star:
                if step % 2 == 0:
                    next_armed = (da, db) == (1, 0)
                else:
                    if armed and (da, db) == (-1, 0):
                        continue
                    next_armed = False
            else:
                next_armed = False
            total += count(step + 1, na, nb, next_armed)
        return total

    return count(0, sa, sb, False)


def iter_tableaux(flavor: str, n: int) -> Iterator[VacillatingTableau]:
    """Exhaustively generate every valid vacillating tableau over [n]."""
    if flavor == "partition":
        odd_ok, even_ok = PARTITION_ODD_MOVES, PARTITION_EVEN_MOVES
    elif flavor == "braid":
        odd_ok, even_ok = BRAID_ODD_MOVES, BRAID_EVEN_MOVES
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    shapes = [EMPTY_SHAPE]

    def rec(idx: int) -> Iterator[VacillatingTableau]:
        if idx == 2 * n:
            if shapes[-1] == EMPTY_SHAPE:
                yield VacillatingTableau(flavor, tuple(shapes))
            return
        for mv in (odd_ok if idx % 2 == 0 else even_ok):
            nxt = apply_move(shapes[-1], mv)
            if nxt is None:
                continue
            if nxt.row1 + nxt.row2 > 2 * n - idx - 1:
                continue  # cannot reach the empty shape in time
            shapes.append(nxt)
            yield from rec(idx + 1)
            shapes.pop()

    yield from rec(0)


@dataclass(frozen=True)
class UniformityReport:
    universe_size: int
    sample_count: int
    chi_square: float
    degrees_of_freedom: int
    p_bound: str  # "pass" | "fail_low" | "fail_high"
    min_class_count: int


def chi_square_quantile(p: float, df: int) -> float:
    """Chi-square quantile via the Wilson-Hilferty cube-root approximation."""
    if df < 1:
        raise ValueError(f"df must be positive, got {df}")
    z = NormalDist().inv_cdf(p)
    c = 2.0 / (9.0 * df)
    return df * (1.0 - c + z * math.sqrt(c)) ** 3


CHI_SQUARE_BAND = (0.0005, 0.9995)


def chi_square_uniformity(counts: Mapping[object, int],
                          universe: Iterable[object],
                          expected_total: int | None = None) -> UniformityReport:
    """Chi-square goodness-of-fit against the uniform distribution.

    Zero-observation classes are included; a sampled structure outside
    the universe raises immediately (it means the sampler is broken, not
    merely biased).  Pass iff the statistic lies within the
    [0.0005, 0.9995] quantile band.
    """
    universe_list = list(universe)
    universe_set = set(universe_list)
    for key in counts:
        if key not in universe_set:
            raise ValueError(f"sampled structure outside the universe: {key!r}")
    total = sum(counts.values())
    if expected_total is not None and total != expected_total:
        raise ValueError(f"sample count {total} != expected {expected_total}")
    size = len(universe_list)
    if size == 0 or total == 0:
        raise ValueError("empty universe or no samples")
    expected = total / size
    chi2 = sum((counts.get(c, 0) - expected) ** 2 for c in universe_list) / expected
    df = size - 1
    if df == 0:
        bound = "pass" if chi2 == 0 else "fail_high"
    else:
        lo = chi_square_quantile(CHI_SQUARE_BAND[0], df)
        hi = chi_square_quantile(CHI_SQUARE_BAND[1], df)
        bound = "pass" if lo <= chi2 <= hi else ("fail_low" if chi2 < lo else "fail_high")
    return UniformityReport(
        universe_size=size,
        sample_count=total,
        chi_square=chi2,
        degrees_of_freedom=df,
        p_bound=bound,
        min_class_count=min(counts.get(c, 0) for c in universe_list),
    )


def sampler_uniformity(variant: str, n: int, samples: int, seed: int, *,
                       retries: int = 1,
                       omega: CountTable | None = None,
                       sigma_star: CountTable | None = None) -> UniformityReport:
    """Run a sampler and chi-square test it against its enumerated universe.

    A band failure triggers one automatic re-run with the next seed (the
    0.1% two-sided band makes a double false failure negligible); the
    last report is returned either way.
    """
    if variant == "plain":
        universe = enumerate_partitions(n, "noncrossing3")
        if omega is None:
            omega = build_omega_table(build_q2_table(n))
        table = omega

        def draw(rng: RandomStream) -> SetPartition:
            return sample_partition(n, rng, table)
    elif variant == "two_regular":
        universe = enumerate_partitions(n, "two_regular_noncrossing3")
        if sigma_star is None:
            sigma_star = build_sigma_star(n)
        table = sigma_star

        def draw(rng: RandomStream) -> SetPartition:
            return sample_two_regular_partition(n, rng, table)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    report = None
    for attempt in range(retries + 1):
        rng = RandomStream(seed + attempt)
        observed = Counter(draw(rng) for _ in range(samples))
        report = chi_square_uniformity(observed, universe, expected_total=samples)
        if report.p_bound == "pass":
            break
    return report


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str

    def to_line(self) -> str:
        return f"CHECK {self.name} {'pass' if self.passed else 'fail'} {self.details}"


@dataclass(frozen=True)
class CrossCheckReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        return "\n".join(c.to_line() for c in self.checks)


def check_partition_counts(omega: CountTable, n_max: int) -> CheckResult:
    for n in range(1, n_max + 1):
        table = omega.get(2 * n, 1, 0)
        oracle = len(enumerate_partitions(n, "noncrossing3"))
        if table != oracle:
            return CheckResult(
                "partition_counts", False,
                f"omega(2n,1,0) mismatch at n={n}: table {table} != oracle {oracle}")
    return CheckResult("partition_counts", True, f"n=1..{n_max} match the oracle")


def check_two_regular_counts(sigma_star: CountTable, n_max: int) -> CheckResult:
    for n in range(1, n_max + 1):
        table = sigma_star.get(2 * (n - 1), 1, 0)
        oracle = len(enumerate_partitions(n, "two_regular_noncrossing3"))
        if table != oracle:
            return CheckResult(
                "two_regular_counts", False,
                f"sigma_star(2(n-1),1,0) mismatch at n={n}: "
                f"table {table} != oracle {oracle}")
    return CheckResult("two_regular_counts", True, f"n=1..{n_max} match the oracle")


def check_tableau_round_trip(n_max: int) -> CheckResult:
    checked = 0
    for n in range(1, n_max + 1):
        for p in enumerate_partitions(n, "noncrossing3"):
            back = tableau_to_partition(partition_to_tableau(p))
            if back != p:
                return CheckResult(
                    "tableau_round_trip", False,
                    f"round trip failed at n={n} for {p}: got {back}")
            checked += 1
    return CheckResult("tableau_round_trip", True,
                       f"{checked} partitions over n=1..{n_max}")


def check_theta_bijection(n_max: int) -> CheckResult:
    name = "theta_bijection"
    for n in range(1, n_max + 1):
        part_tabs = list(iter_tableaux("partition", n))
        braid_tabs = list(iter_tableaux("braid", n - 1))
        if len(part_tabs) != len(braid_tabs):
            return CheckResult(
                name, False,
                f"tableau count mismatch at n={n}: {len(part_tabs)} partition "
                f"vs {len(braid_tabs)} braid")
        images = set()
        for t in part_tabs:
            image = theta_forward(t)
            if theta_inverse(image) != t:
                return CheckResult(name, False,
                                   f"theta round trip failed at n={n} for {t.to_text()}")
            images.add(image)
        if images != set(braid_tabs):
            return CheckResult(name, False, f"theta image is not onto at n={n}")
        for p in enumerate_partitions(n, "noncrossing3"):
            loop_free = not loop_vertices(theta_forward(partition_to_tableau(p)))
            if loop_free != is_m_regular(p, 2):
                return CheckResult(
                    name, False,
                    f"2-regular/loop-free mismatch at n={n} for {p}")
    return CheckResult(name, True, f"bijective with loop-free match for n=1..{n_max}")


def check_f_routes(n: int, a: CountTable) -> CheckResult:
    try:
        assert_tables_equal(build_f_table(n, "direct", a=a),
                            build_f_table(n, "kernel_recursion"))
    except ConsistencyError as exc:
        return CheckResult("f_routes", False, str(exc))
    return CheckResult("f_routes", True, f"direct = kernel_recursion for n={n}")


def check_sigma_routes(n: int, omega: CountTable) -> CheckResult:
    try:
        assert_tables_equal(build_sigma_star(n, "direct_dp"),
                            build_sigma_star(n, "inclusion_exclusion", omega=omega))
    except ConsistencyError as exc:
        return CheckResult("sigma_star_routes", False, str(exc))
    return CheckResult("sigma_star_routes", True,
                       f"direct_dp = inclusion_exclusion for n={n}")


def check_axis_identities(a: CountTable, ell_max: int) -> CheckResult:
    for ell in range(ell_max + 1):
        for idx in range(ell + 2):
            h = axis_coeff("horizontal", idx, ell)
            if h != a.get(2 * ell, idx, 0):
                return CheckResult(
                    "axis_identities", False,
                    f"horizontal mismatch at (i={idx}, ell={ell}): "
                    f"{h} != {a.get(2 * ell, idx, 0)}")
            v = axis_coeff("vertical", idx, ell)
            if v != a.get(2 * ell, 0, idx):
                return CheckResult(
                    "axis_identities", False,
                    f"vertical mismatch at (j={idx}, ell={ell}): "
                    f"{v} != {a.get(2 * ell, 0, idx)}")
    return CheckResult("axis_identities", True, f"ell=0..{ell_max}, all indices")


def check_tables_vs_walks(omega: CountTable, sigma_star: CountTable,
                          n_max: int) -> CheckResult:
    name = "tables_vs_walks"
    for n in range(1, min(n_max, 6) + 1):
        walks = enumerate_walks("p_w2", 2 * n, (1, 0))
        if walks != omega.get(2 * n, 1, 0):
            return CheckResult(
                name, False,
                f"p_w2 mismatch at n={n}: walks {walks} != "
                f"omega {omega.get(2 * n, 1, 0)}")
    for s in range(0, min(2 * n_max, 8) + 1):
        for i in range(1, 4):
            for j in range(i):
                walks = enumerate_walks("p_w2", s, (i, j))
                if walks != omega.get(s, i, j):
                    return CheckResult(
                        name, False,
                        f"p_w2 mismatch at (s={s}, i={i}, j={j}): walks {walks} "
                        f"!= omega {omega.get(s, i, j)}")
    for m in range(0, min(n_max - 1, 5) + 1):
        walks = enumerate_walks("b_w2", 2 * m, (1, 0))
        if walks != omega.get(2 * m + 1, 1, 0):
            return CheckResult(
                name, False,
                f"b_w2 mismatch at m={m}: walks {walks} != "
                f"omega(2m+1,1,0) {omega.get(2 * m + 1, 1, 0)}")
        star = enumerate_walks("b_star_w2", 2 * m, (1, 0))
        if star != sigma_star.get(2 * m, 1, 0):
            return CheckResult(
                name, False,
                f"b_star_w2 mismatch at m={m}: walks {star} != "
                f"sigma_star {sigma_star.get(2 * m, 1, 0)}")
    return CheckResult(name, True, f"table entries match walk enumeration, n<={n_max}")


def cross_check_suite(n_max: int) -> CrossCheckReport:
    """Run all exact identity families at sizes up to n_max (<= 9)."""
    if not 1 <= n_max <= 9:
        raise ValueError(f"n_max={n_max} outside 1..9 (exhaustive parts)")
    a = build_q2_table(n_max)
    omega = build_omega_table(a)
    sigma_star = build_sigma_star(n_max, "direct_dp")
    exhaustive = min(n_max, 8)
    checks = (
        check_partition_counts(omega, n_max),
        check_two_regular_counts(sigma_star, n_max),
        check_tableau_round_trip(exhaustive),
        check_theta_bijection(exhaustive),
        check_f_routes(n_max, a),
        check_sigma_routes(n_max, omega),
        check_axis_identities(a, n_max),
        check_tables_vs_walks(omega, sigma_star, n_max),
    )
    return CrossCheckReport(checks)
