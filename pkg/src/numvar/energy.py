"""Additive-structure statistics of integer sequences.

The additive energy of a sequence (a_1..a_N) of distinct integers is
the number of ordered quadruples (i, j, k, l) with a_i + a_j = a_k +
a_l.  It sits between 2N^2 - N (all pairwise sums distinct: Sidon sets,
lacunary sequences) and N^3 (arithmetic progressions), and it is the
quantity that separates sequences with Poissonian count statistics from
structured ones.

Counting is sort-based: materialize all N^2 ordered pair sums (int64 is
exact, since |terms| < 2**62), sort, and read off run lengths.  With
multiplicities r(s), the energy is sum r(s)^2.  Peak memory is about
16 bytes per ordered pair, so N = 4096 costs ~0.5 GB transiently;
larger N is possible but memory-bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Tuple

import numpy as np

from .errors import BudgetError
from .sequences import IntegerSequence


@dataclass(frozen=True)
class EnergyProfile:
    """Pair-sum multiplicities and the resulting additive energy.

    sums/counts are parallel arrays: counts[i] ordered pairs (i, j),
    self-pairs included, share the sum value sums[i].  energy is an
    exact Python int (arbitrary precision; values reach N^3).
    """

    N: int
    energy: int
    sums: np.ndarray
    counts: np.ndarray

    def multiplicity(self, s: int) -> int:
        """r(s): how many ordered pairs add to s (0 if none)."""
        i = int(np.searchsorted(self.sums, s))
        if i < self.sums.size and int(self.sums[i]) == s:
            return int(self.counts[i])
        return 0

    def items(self) -> Iterator[Tuple[int, int]]:
        for s, c in zip(self.sums, self.counts):
            yield int(s), int(c)


@dataclass(frozen=True)
class DifferenceProfile:
    """Multiplicities W(w) of nonzero ordered-pair differences a_i - a_j."""

    N: int
    values: np.ndarray
    counts: np.ndarray

    def count(self, w: int) -> int:
        i = int(np.searchsorted(self.values, w))
        if i < self.values.size and int(self.values[i]) == w:
            return int(self.counts[i])
        return 0

    def items(self) -> Iterator[Tuple[int, int]]:
        for w, c in zip(self.values, self.counts):
            yield int(w), int(c)

    @property
    def distinct(self) -> int:
        return int(self.values.size)


def _run_lengths(sorted_vals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if sorted_vals.size == 0:
        return sorted_vals, np.zeros(0, dtype=np.int64)
    change = np.flatnonzero(sorted_vals[1:] != sorted_vals[:-1]) + 1
    starts = np.concatenate([[0], change])
    ends = np.concatenate([change, [sorted_vals.size]])
    return sorted_vals[starts], (ends - starts).astype(np.int64)


def additive_energy(seq: IntegerSequence) -> EnergyProfile:
    """#{(i,j,k,l) : a_i + a_j = a_k + a_l}, over ordered quadruples.

    Self-pairs i = j are included, matching the quadruple definition.
    """
    a = seq.terms
    n = int(a.size)
    sums = (a[:, None] + a[None, :]).ravel()
    sums.sort(kind="stable")
    vals, counts = _run_lengths(sums)
    energy = int(np.sum(counts * counts))
    return EnergyProfile(N=n, energy=energy, sums=vals, counts=counts)


def difference_profile(seq: IntegerSequence) -> DifferenceProfile:
    """W(w) = #{i != j : a_i - a_j = w} for every nonzero difference w.

    The N zero entries of the full difference table are exactly the
    diagonal (terms are distinct), so dropping zeros removes i = j.
    """
    a = seq.terms
    n = int(a.size)
    diffs = (a[:, None] - a[None, :]).ravel()
    diffs = diffs[diffs != 0]
    diffs.sort(kind="stable")
    vals, counts = _run_lengths(diffs)
    return DifferenceProfile(N=n, values=vals, counts=counts)


def difference_energy(profile: DifferenceProfile) -> int:
    """sum_w W(w)^2: ordered quadruples with equal nonzero differences.

    Always at most the additive energy (the quadruples with i != j,
    k != l and a_i - a_j = a_k - a_l biject into the defining count).
    """
    return int(np.sum(profile.counts * profile.counts))


class GcdSumResult(NamedTuple):
    exact_sum: float
    majorant: float


def gcd_sum_diagnostic(
    profile: DifferenceProfile, *, max_distinct: int = 20000
) -> GcdSumResult:
    """Pairwise gcd-weighted sum over the difference profile, plus majorant.

    exact_sum = sum over ordered pairs (w_r, w_s) of profile values of
    W(w_r) * W(w_s) * gcd(|w_r|, |w_s|) / sqrt(|w_r * w_s|) - the
    quantity whose boundedness relative to sum W^2 signals low additive
    structure.  majorant = sum_r W(w_r)^2 * exp(10 * log r / log log
    (r+1)) with values ranked by |w| ascending (ties: negative first),
    the classical comparison scale for such sums.

    O(D^2) in the number D of distinct differences; BudgetError beyond
    max_distinct.
    """
    d = profile.distinct
    if d == 0:
        raise ValueError("difference profile is empty")
    if d > max_distinct:
        raise BudgetError(
            "profile has %d distinct differences > cap %d" % (d, max_distinct)
        )
    w = profile.values
    aw = np.abs(w).astype(np.uint64)
    weight = profile.counts.astype(np.float64) / np.sqrt(aw.astype(np.float64))

    rows_per_chunk = max(1, (1 << 22) // d)
    chunk_sums = []
    for i0 in range(0, d, rows_per_chunk):
        i1 = min(i0 + rows_per_chunk, d)
        g = np.gcd.outer(aw[i0:i1], aw).astype(np.float64)
        chunk_sums.append(np.dot(weight[i0:i1], g @ weight))
    exact = float(np.sum(np.asarray(chunk_sums)))

    order = np.lexsort((w, np.abs(w)))
    ranks = np.arange(1, d + 1, dtype=np.float64)
    factors = np.exp(10.0 * np.log(ranks) / np.log(np.log(ranks + 1.0)))
    counts_sq = profile.counts.astype(np.float64) ** 2
    majorant = float(np.dot(counts_sq[order], factors))
    return GcdSumResult(exact_sum=exact, majorant=majorant)
