"""Integer sequences and their exact dilations mod 1.

The pipeline is: a SequenceSpec names a family (monomial, lacunary, or
an explicit list), generate_sequence materializes the first N terms as
int64, and dilate_mod1 maps each term a to the circle point
frac(alpha * a) computed exactly on the 128-bit dyadic grid.  The
resulting PointSet keeps the exact numerators (as two uint64 words per
point, sorted), a float64 view for O(N log N) scan algorithms, and the
permutation back to sequence order.

Exactness of the bulk dilation is the load-bearing property: at N near
1e5 and terms near 2**34, float64 reduction of a*alpha mod 1 would lose
the low bits that local statistics live on.  The word-level routine
below reproduces (numerator * a) mod 2**128 bit for bit; a test pins it
against plain Python integer arithmetic.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from numpy.random import Philox

from .errors import DuplicateError
from .fixedpoint import FRACTION_BITS, MODULUS, FixedPointReal

# Terms must satisfy |a| < 2**62 so that 32-bit limb products and their
# column sums stay strictly inside uint64 during the dilation kernel.
TERM_BITS = 62
TERM_BOUND = 1 << TERM_BITS

_MASK32 = np.uint64(0xFFFFFFFF)
_U64 = np.uint64
_ALPHA_STREAM = 0x616C7068  # distinct Philox counter tag for alpha draws


# ---------------------------------------------------------------------------
# sequence family recipes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceSpec:
    """Recipe for an integer sequence family.

    kind is one of "monomial" (a_n = (n + offset)**degree),
    "lacunary" (a_n = base**(n + offset)), or "custom" (explicit values,
    offset ignored).  Indexing starts at n = 1.
    """

    kind: str
    degree: int = 0
    base: int = 0
    values: Optional[Tuple[int, ...]] = None
    offset: int = 0

    def __post_init__(self):
        if self.kind not in ("monomial", "lacunary", "custom"):
            raise ValueError("unknown sequence kind %r" % (self.kind,))
        if self.kind == "monomial" and self.degree < 1:
            raise ValueError("monomial degree must be >= 1")
        if self.kind == "lacunary" and self.base < 2:
            raise ValueError("lacunary base must be >= 2")
        if self.kind == "custom" and not self.values:
            raise ValueError("custom spec needs a nonempty value tuple")

    @classmethod
    def monomial(cls, degree: int, offset: int = 0) -> "SequenceSpec":
        return cls(kind="monomial", degree=degree, offset=offset)

    @classmethod
    def lacunary(cls, base: int, offset: int = 0) -> "SequenceSpec":
        return cls(kind="lacunary", base=base, offset=offset)

    @classmethod
    def custom(cls, values: Sequence[int]) -> "SequenceSpec":
        vals = tuple(int(v) for v in values)
        if len(set(vals)) != len(vals):
            raise DuplicateError("custom sequence has repeated terms")
        return cls(kind="custom", values=vals)

    @classmethod
    def parse(cls, text: str) -> "SequenceSpec":
        """Parse compact spec strings like "monomial:d=2" or "lacunary:base=3".

        Accepted forms:
            monomial:d=<degree>[,offset=<k>]
            lacunary:base=<b>[,offset=<k>]
            custom:<path>          (newline-delimited integer file)
        """
        head, _, rest = text.partition(":")
        head = head.strip()
        if head == "custom":
            return load_sequence_file(rest.strip())
        opts = {}
        if rest.strip():
            for item in rest.split(","):
                key, sep, val = item.partition("=")
                if not sep:
                    raise ValueError("malformed spec option %r" % (item,))
                opts[key.strip()] = int(val)
        offset = opts.pop("offset", 0)
        if head == "monomial":
            return cls.monomial(opts.pop("d", opts.pop("degree", 0)), offset)
        if head == "lacunary":
            return cls.lacunary(opts.pop("base", 0), offset)
        raise ValueError("unknown sequence kind %r" % (head,))

    def label(self) -> str:
        """Stable short identifier used in result tables."""
        if self.kind == "monomial":
            s = "monomial:d=%d" % self.degree
        elif self.kind == "lacunary":
            s = "lacunary:base=%d" % self.base
        else:
            digest = hashlib.sha256(
                (",".join(str(v) for v in self.values)).encode()
            ).hexdigest()[:12]
            s = "custom:%s" % digest
        if self.offset:
            s += ",offset=%d" % self.offset
        return s


@dataclass(frozen=True)
class IntegerSequence:
    """The first N terms of a family, validated distinct and in range."""

    terms: np.ndarray
    spec: SequenceSpec

    def __post_init__(self):
        t = np.asarray(self.terms, dtype=np.int64)
        object.__setattr__(self, "terms", t)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("terms must be a nonempty 1-d array")
        if np.abs(t).max() >= TERM_BOUND:
            raise OverflowError(
                "sequence term magnitude reaches 2**%d; exact dilation "
                "requires |a| < 2**%d" % (TERM_BITS, TERM_BITS)
            )
        if np.unique(t).size != t.size:
            raise DuplicateError("sequence terms are not distinct")

    def __len__(self) -> int:
        return int(self.terms.size)

    def __iter__(self) -> Iterator[int]:
        return iter(int(v) for v in self.terms)


def generate_sequence(spec: SequenceSpec, count: int) -> IntegerSequence:
    """Materialize the first `count` terms (n = 1 .. count) of a family."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if spec.kind == "custom":
        if count > len(spec.values):
            raise ValueError(
                "custom spec holds %d terms, %d requested"
                % (len(spec.values), count)
            )
        terms = np.array(spec.values[:count], dtype=np.int64)
    elif spec.kind == "monomial":
        n = np.arange(1, count + 1, dtype=object) + spec.offset
        vals = n**spec.degree
        _check_bound(vals)
        terms = np.array([int(v) for v in vals], dtype=np.int64)
    else:  # lacunary
        vals = [spec.base ** (n + spec.offset) for n in range(1, count + 1)]
        _check_bound(vals)
        terms = np.array(vals, dtype=np.int64)
    return IntegerSequence(terms=terms, spec=spec)


def _check_bound(vals) -> None:
    top = max(abs(int(v)) for v in vals)
    if top >= TERM_BOUND:
        raise OverflowError(
            "term magnitude %d exceeds the exact-dilation bound 2**%d"
            % (top, TERM_BITS)
        )


def load_sequence_file(path: str | os.PathLike) -> SequenceSpec:
    """Read a newline-delimited integer file into a custom spec.

    UTF-8 text, one signed decimal integer per line; blank lines and
    lines starting with '#' are ignored.
    """
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise ValueError(
                    "%s:%d: not an integer: %r" % (path, lineno, line)
                ) from None
    if not values:
        raise ValueError("%s holds no integers" % (path,))
    return SequenceSpec.custom(values)


# ---------------------------------------------------------------------------
# exact dilation
# ---------------------------------------------------------------------------

def _alpha_limbs(numerator: int) -> Tuple[np.uint64, ...]:
    """Split a 128-bit numerator into four 32-bit limbs, little-endian."""
    return tuple(
        _U64((numerator >> (32 * k)) & 0xFFFFFFFF) for k in range(4)
    )


def _dilate_words(alpha_num: int, terms: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(alpha_num * a) mod 2**128 for every term a, as (hi, lo) uint64 words.

    Everything runs in uint64 with 32-bit limbs.  A partial product
    A_i * b_j is < 2**64; the per-column accumulators only ever sum a
    handful of values < 2**32 plus a small carry, so no intermediate
    overflows.  Negative terms are handled by multiplying |a| and then
    negating mod 2**128.
    """
    a0, a1, a2, a3 = _alpha_limbs(alpha_num)
    neg = terms < 0
    mag = np.abs(terms).astype(np.uint64)
    b0 = mag & _MASK32
    b1 = mag >> _U64(32)

    cols = [np.zeros(terms.shape, dtype=np.uint64) for _ in range(4)]
    for i, ai in enumerate((a0, a1, a2, a3)):
        for j, bj in ((0, b0), (1, b1)):
            k = i + j
            if k > 3:
                continue
            prod = ai * bj
            cols[k] += prod & _MASK32
            if k + 1 <= 3:
                cols[k + 1] += prod >> _U64(32)

    words = []
    carry = np.zeros(terms.shape, dtype=np.uint64)
    for k in range(4):
        tot = cols[k] + carry
        words.append(tot & _MASK32)
        carry = tot >> _U64(32)

    lo = words[0] | (words[1] << _U64(32))
    hi = words[2] | (words[3] << _U64(32))

    # two's-complement negation across the 128-bit pair
    lo_n = _U64(0) - lo
    hi_n = np.where(lo == 0, _U64(0) - hi, ~hi)
    lo = np.where(neg, lo_n, lo)
    hi = np.where(neg, hi_n, hi)
    return hi, lo


class PointSet:
    """Sorted exact points frac(alpha * a_j) on the unit circle.

    Stores the 128-bit numerators as parallel uint64 arrays (hi, lo),
    a float64 view (top 53 bits, nondecreasing), and source_index such
    that point i came from sequence position source_index[i].
    """

    __slots__ = ("hi", "lo", "x", "source_index", "alpha", "sequence")

    def __init__(self, hi, lo, source_index, alpha, sequence):
        self.hi = hi
        self.lo = lo
        self.source_index = source_index
        self.alpha = alpha
        self.sequence = sequence
        self.x = hi.astype(np.float64) * 2.0**-64 + lo.astype(np.float64) * 2.0**-128

    def __len__(self) -> int:
        return int(self.hi.size)

    def numerator(self, i: int) -> int:
        """Exact 128-bit numerator of point i (sorted order)."""
        return (int(self.hi[i]) << 64) | int(self.lo[i])

    def point(self, i: int) -> FixedPointReal:
        return FixedPointReal(self.numerator(i))

    @classmethod
    def from_numerators(cls, numerators) -> "PointSet":
        """Point set from explicit 128-bit numerators (order-free)."""
        nums = [int(v) % MODULUS for v in numerators]
        if not nums:
            raise ValueError("need at least one point")
        hi = np.array([v >> 64 for v in nums], dtype=np.uint64)
        lo = np.array([v & ((1 << 64) - 1) for v in nums], dtype=np.uint64)
        order = np.lexsort((lo, hi))
        idx_dtype = np.uint32 if len(nums) < (1 << 32) else np.uint64
        return cls(
            hi=hi[order],
            lo=lo[order],
            source_index=order.astype(idx_dtype),
            alpha=None,
            sequence=None,
        )

    @classmethod
    def from_floats(cls, values) -> "PointSet":
        """Point set from floats in [0, 1); each float maps exactly."""
        return cls.from_numerators(
            FixedPointReal.from_float(float(v)).numerator for v in values
        )

    def shifted(self, offset: FixedPointReal) -> "PointSet":
        """New point set with every point rotated by offset mod 1, exactly."""
        nums = [
            ((int(h) << 64 | int(l)) + offset.numerator) % MODULUS
            for h, l in zip(self.hi, self.lo)
        ]
        return PointSet.from_numerators(nums)


def dilate_mod1(alpha: FixedPointReal, seq: IntegerSequence) -> PointSet:
    """Map each term a to frac(alpha * a), exactly, and sort."""
    hi, lo = _dilate_words(alpha.numerator, seq.terms)
    order = np.lexsort((lo, hi))
    n = seq.terms.size
    idx_dtype = np.uint32 if n < (1 << 32) else np.uint64
    return PointSet(
        hi=hi[order],
        lo=lo[order],
        source_index=order.astype(idx_dtype),
        alpha=alpha,
        sequence=seq,
    )


# ---------------------------------------------------------------------------
# reproducible alpha draws
# ---------------------------------------------------------------------------

def sample_alpha(seed: int, index: int) -> FixedPointReal:
    """index-th uniform dilation factor of the stream keyed by seed.

    Counter-based: draw (seed, index) is a pure function, so any subset
    of indices can be generated in any order or on any worker and the
    values match.  The two 64-bit Philox outputs are concatenated into a
    full-resolution 128-bit numerator, so alpha is uniform on the grid.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    bits = Philox(key=seed % (1 << 128), counter=[index, 0, 0, _ALPHA_STREAM])
    w = bits.random_raw(2)
    return FixedPointReal((int(w[0]) << 64) | int(w[1]))
