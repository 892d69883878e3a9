"""Fractal strings: nonincreasing summable length sequences and their algebra.

A string is enumerated lazily in blocks ``(length, count)`` with lengths
nonincreasing, so geometric constructions with huge multiplicities (two-scale
Cantor generations carry counts like 2^190) stay cheap.  Every stream knows a
certified upper bound on the mass ``sum count * length^sigma`` of whatever it
has not emitted yet, which is what turns partial sums of the geometric zeta
function ``zeta_L(s) = sum_j l_j^s`` into values with a proven remainder.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import InvalidSpec, NotConvergent, TailBoundUnavailable

__all__ = [
    "AString",
    "AbscissaEstimate",
    "CantorString",
    "ExtendedSelfSimilar",
    "FractalString",
    "GeneralizedCantor",
    "Hyperfractal",
    "NthOrderCantor",
    "Scaled",
    "StringSpec",
    "Tensor",
    "Trivial",
    "Union",
    "abscissa_estimate",
    "build",
    "from_lengths",
    "geometric_zeta_partial",
    "moran_real_root",
    "spec_from_json",
    "spec_to_json",
    "total_length",
    "validate_spec",
]

_MAX_BLOCKS = 400_000


# --------------------------------------------------------------------------
# Specifications
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Trivial:
    """Finite string with a single length."""

    length: float = 1.0


@dataclass(frozen=True)
class AString:
    """Lengths l_j = j^-a - (j+1)^-a for a > 0; realized by the point set {j^-a}."""

    a: float = 1.0


@dataclass(frozen=True)
class CantorString:
    """Middle-third Cantor string: 3^-j with multiplicity 2^(j-1)."""


@dataclass(frozen=True)
class GeneralizedCantor:
    """Two-parameter Cantor string: m blocks contracted by a, with m*a < 1.

    Generation k deletes (m-1)*m^(k-1) gaps of length g*a^(k-1) where
    g = (1-m*a)/(m-1).
    """

    m: int
    a: float


@dataclass(frozen=True)
class NthOrderCantor:
    """Cantor string tensored (n-1) times with the {1/3,1/3} scaling-word string."""

    n: int


@dataclass(frozen=True)
class ExtendedSelfSimilar:
    """Base string tensored with the word multiset of the scaling ratios.

    The ratio string contains one entry per finite word over the ratio list,
    with value the product of its letters, so the geometric zeta function of
    the result is zeta_base(s) / (1 - sum_j r_j^s).
    """

    base: "StringSpec"
    ratios: tuple[float, ...]


@dataclass(frozen=True)
class Scaled:
    factor: float
    inner: "StringSpec"


@dataclass(frozen=True)
class Union:
    parts: tuple["StringSpec", ...]


@dataclass(frozen=True)
class Tensor:
    left: "StringSpec"
    right: "StringSpec"


@dataclass(frozen=True)
class Hyperfractal:
    """Union of scaled two-parameter Cantor strings sharing dimension D.

    Component k is c_k * GeneralizedCantor(m_k, m_k^(-1/D)).  With the default
    rules m_k = k+1 and c_k = 2^-k the union is enumerated lazily without a
    fixed truncation; explicit (finite) sequences build a truncated union and
    record the unknown omitted mass.
    """

    dimension: float
    m_seq: tuple[int, ...] | None = None
    c_seq: tuple[float, ...] | None = None


StringSpec = (
    Trivial
    | AString
    | CantorString
    | GeneralizedCantor
    | NthOrderCantor
    | ExtendedSelfSimilar
    | Scaled
    | Union
    | Tensor
    | Hyperfractal
)


def validate_spec(spec: StringSpec) -> None:
    """Raise InvalidSpec when a specification violates its invariants."""
    if isinstance(spec, Trivial):
        if not spec.length > 0:
            raise InvalidSpec(f"trivial length must be positive, got {spec.length}")
    elif isinstance(spec, AString):
        if not spec.a > 0:
            raise InvalidSpec(f"a-string exponent must be positive, got {spec.a}")
    elif isinstance(spec, CantorString):
        pass
    elif isinstance(spec, GeneralizedCantor):
        if spec.m < 2 or int(spec.m) != spec.m:
            raise InvalidSpec(f"generalized Cantor needs integer m >= 2, got {spec.m}")
        if not (0 < spec.a and spec.m * spec.a < 1):
            raise InvalidSpec(f"generalized Cantor needs 0 < a < 1/m, got m={spec.m}, a={spec.a}")
    elif isinstance(spec, NthOrderCantor):
        if spec.n < 1:
            raise InvalidSpec(f"order must be >= 1, got {spec.n}")
    elif isinstance(spec, ExtendedSelfSimilar):
        _validate_ratios(spec.ratios)
        validate_spec(spec.base)
    elif isinstance(spec, Scaled):
        if not spec.factor > 0:
            raise InvalidSpec(f"scale factor must be positive, got {spec.factor}")
        validate_spec(spec.inner)
    elif isinstance(spec, Union):
        if not spec.parts:
            raise InvalidSpec("union of zero strings")
        for part in spec.parts:
            validate_spec(part)
    elif isinstance(spec, Tensor):
        validate_spec(spec.left)
        validate_spec(spec.right)
    elif isinstance(spec, Hyperfractal):
        if not (0 < spec.dimension < 1):
            raise InvalidSpec(f"dimension must lie in (0,1), got {spec.dimension}")
        if (spec.m_seq is None) != (spec.c_seq is None):
            raise InvalidSpec("m_seq and c_seq must be given together")
        if spec.m_seq is not None:
            if len(spec.m_seq) != len(spec.c_seq) or not spec.m_seq:
                raise InvalidSpec("m_seq and c_seq must be nonempty and equally long")
            if spec.m_seq[0] < 2 or any(b <= a for a, b in zip(spec.m_seq, spec.m_seq[1:])):
                raise InvalidSpec("m_seq must be strictly increasing with m_1 >= 2")
            if any(c <= 0 for c in spec.c_seq):
                raise InvalidSpec("c_seq must be positive")
            for m in spec.m_seq:
                if m * m ** (-1.0 / spec.dimension) >= 1:
                    raise InvalidSpec(f"m={m} with D={spec.dimension} gives m*a >= 1")
    else:
        raise InvalidSpec(f"unknown specification {spec!r}")


def _validate_ratios(ratios: tuple[float, ...]) -> None:
    if not ratios:
        raise InvalidSpec("empty ratio list")
    if any(not (0 < r < 1) for r in ratios):
        raise InvalidSpec(f"ratios must lie in (0,1), got {ratios}")
    if sum(ratios) >= 1:
        raise InvalidSpec(f"ratios must sum below 1, got sum {sum(ratios)}")


# ------------------------------------------------------------- JSON schema

_KIND_NAMES = {
    Trivial: "trivial",
    AString: "a-string",
    CantorString: "cantor",
    GeneralizedCantor: "generalized-cantor",
    NthOrderCantor: "nth-order-cantor",
    ExtendedSelfSimilar: "self-similar",
    Scaled: "scaled",
    Union: "union",
    Tensor: "tensor",
    Hyperfractal: "hyperfractal",
}


def spec_to_json(spec: StringSpec) -> dict:
    """Tagged-union document with a 'kind' field; inverse of spec_from_json."""
    kind = _KIND_NAMES[type(spec)]
    if isinstance(spec, Trivial):
        return {"kind": kind, "length": spec.length}
    if isinstance(spec, AString):
        return {"kind": kind, "a": spec.a}
    if isinstance(spec, CantorString):
        return {"kind": kind}
    if isinstance(spec, GeneralizedCantor):
        return {"kind": kind, "m": spec.m, "a": spec.a}
    if isinstance(spec, NthOrderCantor):
        return {"kind": kind, "n": spec.n}
    if isinstance(spec, ExtendedSelfSimilar):
        return {"kind": kind, "base": spec_to_json(spec.base), "ratios": list(spec.ratios)}
    if isinstance(spec, Scaled):
        return {"kind": kind, "factor": spec.factor, "inner": spec_to_json(spec.inner)}
    if isinstance(spec, Union):
        return {"kind": kind, "parts": [spec_to_json(p) for p in spec.parts]}
    if isinstance(spec, Tensor):
        return {"kind": kind, "left": spec_to_json(spec.left), "right": spec_to_json(spec.right)}
    if isinstance(spec, Hyperfractal):
        doc = {"kind": kind, "D": spec.dimension}
        if spec.m_seq is not None:
            doc["m"] = list(spec.m_seq)
            doc["c"] = list(spec.c_seq)
        return doc
    raise InvalidSpec(f"unserializable spec {spec!r}")


def spec_from_json(doc: dict) -> StringSpec:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InvalidSpec("spec document must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "trivial":
            spec = Trivial(float(doc.get("length", 1.0)))
        elif kind == "a-string":
            spec = AString(float(doc["a"]))
        elif kind == "cantor":
            spec = CantorString()
        elif kind == "generalized-cantor":
            spec = GeneralizedCantor(int(doc["m"]), float(doc["a"]))
        elif kind == "nth-order-cantor":
            spec = NthOrderCantor(int(doc["n"]))
        elif kind == "self-similar":
            spec = ExtendedSelfSimilar(
                spec_from_json(doc["base"]), tuple(float(r) for r in doc["ratios"])
            )
        elif kind == "scaled":
            spec = Scaled(float(doc["factor"]), spec_from_json(doc["inner"]))
        elif kind == "union":
            spec = Union(tuple(spec_from_json(p) for p in doc["parts"]))
        elif kind == "tensor":
            spec = Tensor(spec_from_json(doc["left"]), spec_from_json(doc["right"]))
        elif kind == "hyperfractal":
            m = doc.get("m")
            c = doc.get("c")
            spec = Hyperfractal(
                float(doc["D"]),
                tuple(int(x) for x in m) if m is not None else None,
                tuple(float(x) for x in c) if c is not None else None,
            )
        else:
            raise InvalidSpec(f"unknown spec kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed {kind!r} spec: {exc}") from exc
    validate_spec(spec)
    return spec


# --------------------------------------------------------------------------
# Block streams
# --------------------------------------------------------------------------
# A stream yields (length, count) blocks with nonincreasing length; counts are
# exact Python integers.  tail_mass(sigma) bounds sum(count * length^sigma)
# over everything not yet emitted (math.inf when sigma is at or below the
# abscissa of convergence).


def _block_mass(length: float, count: int, sigma: float) -> float:
    if count < (1 << 50):
        return count * length**sigma
    return math.exp(math.log(count) + sigma * math.log(length))


def _block_term(length: float, count: int, s: complex) -> complex:
    if count < (1 << 50):
        return count * cmath.exp(s * math.log(length))
    return cmath.exp(math.log(count) + s * math.log(length))


class _TrivialStream:
    def __init__(self, length: float):
        self._length = length
        self._done = False

    def next_block(self):
        if self._done:
            return None
        self._done = True
        return (self._length, 1)

    def tail_mass(self, sigma: float) -> float:
        return 0.0 if self._done else self._length**sigma


class _FiniteListStream:
    """Explicit nonincreasing length list (used by from_lengths and tests)."""

    def __init__(self, lengths: tuple[float, ...]):
        self._lengths = lengths
        self._pos = 0

    def next_block(self):
        if self._pos >= len(self._lengths):
            return None
        val = self._lengths[self._pos]
        self._pos += 1
        return (val, 1)

    def tail_mass(self, sigma: float) -> float:
        return sum(v**sigma for v in self._lengths[self._pos :])


class _BlockGeometricStream:
    """Blocks (first_len * ratio^k, first_count * factor^k), k = 0, 1, ...

    Covers the two-parameter Cantor generations and equal-ratio word strings.
    """

    def __init__(self, first_len: float, ratio: float, first_count: int, factor: int):
        self._len = first_len
        self._ratio = ratio
        self._count = first_count
        self._factor = factor
        self._k = 0

    def next_block(self):
        blk = (self._len * self._ratio**self._k, self._count * self._factor**self._k)
        self._k += 1
        return blk

    def tail_mass(self, sigma: float) -> float:
        q = self._factor * self._ratio**sigma
        if q >= 1.0:
            return math.inf
        head = _block_mass(
            self._len * self._ratio**self._k, self._count * self._factor**self._k, sigma
        )
        return head / (1.0 - q)


class _AStringStream:
    def __init__(self, a: float):
        self._a = a
        self._j = 0

    def next_block(self):
        self._j += 1
        j, a = self._j, self._a
        return (j**-a - (j + 1) ** -a, 1)

    def tail_mass(self, sigma: float) -> float:
        j, a = self._j, self._a
        if sigma == 1.0:
            return (j + 1.0) ** -a  # telescoping remainder, exact
        beta = (1 + a) * sigma
        if beta <= 1.0:
            return math.inf
        # l_i <= a * i^-(1+a), so bound the tail by the first term plus an integral
        return a**sigma * ((j + 1.0) ** -beta + (j + 1.0) ** (1 - beta) / (beta - 1))


class _ScaledStream:
    def __init__(self, factor: float, inner):
        self._c = factor
        self._inner = inner

    def next_block(self):
        blk = self._inner.next_block()
        if blk is None:
            return None
        return (self._c * blk[0], blk[1])

    def tail_mass(self, sigma: float) -> float:
        return self._c**sigma * self._inner.tail_mass(sigma)


class _UnionStream:
    def __init__(self, streams):
        self._streams = list(streams)
        self._heap: list[tuple[float, int, float, int, int]] = []
        for idx, stream in enumerate(self._streams):
            self._push_from(idx)

    def _push_from(self, idx: int) -> None:
        blk = self._streams[idx].next_block()
        if blk is not None:
            heapq.heappush(self._heap, (-blk[0], idx, blk[0], blk[1], idx))

    def next_block(self):
        if not self._heap:
            return None
        _, _, length, count, idx = heapq.heappop(self._heap)
        self._push_from(idx)
        return (length, count)

    def tail_mass(self, sigma: float) -> float:
        total = sum(stream.tail_mass(sigma) for stream in self._streams)
        for _, _, length, count, _ in self._heap:
            total += _block_mass(length, count, sigma)
        return total


class _BlockBuffer:
    """Memoized random access to a stream's blocks, with sigma-mass totals."""

    def __init__(self, stream):
        self._stream = stream
        self.blocks: list[tuple[float, int]] = []
        self._exhausted = False
        self._mass_sigma: float | None = None
        self._mass_value = 0.0
        self._mass_upto = 0

    def get(self, i: int):
        while len(self.blocks) <= i and not self._exhausted:
            blk = self._stream.next_block()
            if blk is None:
                self._exhausted = True
            else:
                self.blocks.append(blk)
        return self.blocks[i] if i < len(self.blocks) else None

    def mass_bound(self, sigma: float) -> float:
        """Upper bound on the full sigma-mass of the underlying string."""
        if self._mass_sigma != sigma:
            self._mass_sigma = sigma
            self._mass_value = 0.0
            self._mass_upto = 0
        while self._mass_upto < len(self.blocks):
            length, count = self.blocks[self._mass_upto]
            self._mass_value += _block_mass(length, count, sigma)
            self._mass_upto += 1
        tail = 0.0 if self._exhausted else self._stream.tail_mass(sigma)
        return self._mass_value + tail


class _TensorStream:
    """Best-first enumeration of pairwise products of two block streams."""

    def __init__(self, left, right):
        self._left = _BlockBuffer(left)
        self._right = _BlockBuffer(right)
        self._heap: list[tuple[float, int, int]] = []
        self._emitted: list[tuple[float, int]] = []
        self._em_sigma: float | None = None
        self._em_value = 0.0
        self._em_upto = 0
        first_l = self._left.get(0)
        first_r = self._right.get(0)
        if first_l is not None and first_r is not None:
            heapq.heappush(self._heap, (-first_l[0] * first_r[0], 0, 0))

    def next_block(self):
        if not self._heap:
            return None
        neg, i, j = heapq.heappop(self._heap)
        bl = self._left.get(i)
        br = self._right.get(j)
        blk = (bl[0] * br[0], bl[1] * br[1])
        self._emitted.append(blk)
        nxt = self._left.get(i + 1)
        if nxt is not None:
            heapq.heappush(self._heap, (-nxt[0] * br[0], i + 1, j))
        if i == 0:
            nxt = self._right.get(j + 1)
            if nxt is not None:
                heapq.heappush(self._heap, (-bl[0] * nxt[0], 0, j + 1))
        return blk

    def tail_mass(self, sigma: float) -> float:
        left = self._left.mass_bound(sigma)
        right = self._right.mass_bound(sigma)
        if math.isinf(left) or math.isinf(right):
            return math.inf
        if self._em_sigma != sigma:
            self._em_sigma = sigma
            self._em_value = 0.0
            self._em_upto = 0
        while self._em_upto < len(self._emitted):
            length, count = self._emitted[self._em_upto]
            self._em_value += _block_mass(length, count, sigma)
            self._em_upto += 1
        return max(left * right - self._em_value, 0.0)


class _RatioWordStream:
    """All products over finite words of a ratio list, one block per word."""

    def __init__(self, ratios: tuple[float, ...]):
        self._ratios = ratios
        self._counter = 0
        self._heap: list[tuple[float, int]] = [(-1.0, 0)]
        self._front_sigma: float | None = None
        self._front_mass = 1.0

    def next_block(self):
        if not self._heap:
            return None
        neg, _ = heapq.heappop(self._heap)
        value = -neg
        if self._front_sigma is not None:
            self._front_mass -= value**self._front_sigma
        for r in self._ratios:
            self._counter += 1
            child = value * r
            heapq.heappush(self._heap, (-child, self._counter))
            if self._front_sigma is not None:
                self._front_mass += child**self._front_sigma
        return (value, 1)

    def tail_mass(self, sigma: float) -> float:
        rho = sum(r**sigma for r in self._ratios)
        if rho >= 1.0:
            return math.inf
        if self._front_sigma != sigma:
            self._front_sigma = sigma
            self._front_mass = sum((-neg) ** sigma for neg, _ in self._heap)
        return max(self._front_mass, 0.0) / (1.0 - rho)


def _hyper_component(dimension: float, m: int, c: float):
    a = m ** (-1.0 / dimension)
    g = (1 - m * a) / (m - 1)
    return _ScaledStream(c, _BlockGeometricStream(g, a, m - 1, m))


class _LazyHyperStream:
    """Union over k of c_k * C(m_k, m_k^(-1/D)) strings with default rules
    m_k = k+1 and c_k = 2^-k; components materialize once the enumeration
    descends to their largest length, so no truncation level is fixed."""

    def __init__(self, dimension: float):
        self._D = dimension
        self._K = 0
        self._streams: list = []
        self._heap: list[tuple[float, int, float, int, int]] = []
        self._materialize()

    def _next_c(self) -> float:
        return 2.0 ** -(self._K + 1)

    def _materialize(self) -> None:
        c = self._next_c()
        self._K += 1
        m = self._K + 1
        stream = _hyper_component(self._D, m, c)
        self._streams.append(stream)
        blk = stream.next_block()
        idx = len(self._streams) - 1
        heapq.heappush(self._heap, (-blk[0], idx, blk[0], blk[1], idx))

    def next_block(self):
        # Unseen components have first length below c_{K+1}; add them before
        # the merged enumeration crosses that threshold.
        while self._heap and -self._heap[0][0] <= self._next_c():
            self._materialize()
        if not self._heap:
            return None
        _, _, length, count, idx = heapq.heappop(self._heap)
        blk = self._streams[idx].next_block()
        if blk is not None:
            heapq.heappush(self._heap, (-blk[0], idx, blk[0], blk[1], idx))
        return (length, count)

    def _omitted_mass(self, sigma: float) -> float:
        """Bound on the total sigma-mass of components beyond K."""
        if sigma == 1.0:
            return 2.0**-self._K  # exact geometric remainder of sum c_k
        k = self._K + 1
        m = k + 1
        q = m ** (1.0 - sigma / self._D)
        if q >= 1.0:
            return math.inf
        # component k mass <= c_k^sigma (m-1)^(1-sigma) / (1 - m a^sigma)
        first = 2.0 ** (-k * sigma) * (m - 1) ** (1.0 - sigma) / (1.0 - q)
        ratio = 2.0**-sigma * ((m + 1) / m) ** max(1.0 - sigma, 0.0)
        if ratio >= 1.0:
            return math.inf
        return first / (1.0 - ratio)

    def tail_mass(self, sigma: float) -> float:
        total = self._omitted_mass(sigma)
        for stream in self._streams:
            total += stream.tail_mass(sigma)
        for _, _, length, count, _ in self._heap:
            total += _block_mass(length, count, sigma)
        return total


# --------------------------------------------------------------------------
# FractalString
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FractalString:
    """Lazily enumerable string with certified tail bounds.

    ``stream()`` starts a fresh enumeration (state is never shared between
    calls, so concurrent use is safe).  ``total_length_hint`` is exact when
    set.  ``omitted_mass`` reports mass outside a truncated construction
    (explicit-sequence hyperfractals); it is informational, not enumerable.
    """

    factory: Callable[[], object]
    spec: StringSpec | None = None
    total_length_hint: float | None = None
    label: str = "string"
    truncated: bool = False
    omitted_mass: float = 0.0

    def stream(self):
        return self.factory()

    def blocks(self) -> Iterator[tuple[float, int]]:
        stream = self.stream()
        while True:
            blk = stream.next_block()
            if blk is None:
                return
            yield blk

    def lengths(self, n: int) -> list[float]:
        """First n individual lengths (blocks expanded by multiplicity)."""
        out: list[float] = []
        for length, count in self.blocks():
            take = min(count, n - len(out))
            out.extend([length] * take)
            if len(out) >= n:
                break
        return out

    def first_length(self) -> float:
        blk = self.stream().next_block()
        if blk is None:
            raise InvalidSpec("empty string")
        return blk[0]

    def tail_bound(self, level: int, sigma: float = 1.0) -> float:
        """Upper bound on the sigma-mass beyond the first ``level`` lengths."""
        stream = self.stream()
        seen = 0
        while seen < level:
            blk = stream.next_block()
            if blk is None:
                return 0.0
            length, count = blk
            if seen + count > level:
                # part of this block is still unconsumed
                return _block_mass(length, count - (level - seen), sigma) + stream.tail_mass(sigma)
            seen += count
        return stream.tail_mass(sigma)


def from_lengths(lengths, label: str = "custom") -> FractalString:
    """Wrap an explicit finite nonincreasing sequence of positive lengths."""
    vals = tuple(float(v) for v in lengths)
    if not vals:
        raise InvalidSpec("empty length list")
    if any(v <= 0 for v in vals):
        raise InvalidSpec("lengths must be positive")
    if any(b > a for a, b in zip(vals, vals[1:])):
        raise InvalidSpec("lengths must be nonincreasing")
    return FractalString(
        factory=lambda: _FiniteListStream(vals),
        spec=None,
        total_length_hint=math.fsum(vals),
        label=label,
    )


def build(spec: StringSpec) -> FractalString:
    """Construct the lazily enumerable string defined by ``spec``."""
    validate_spec(spec)
    return _build(spec)


def _build(spec: StringSpec) -> FractalString:
    if isinstance(spec, Trivial):
        return FractalString(
            factory=lambda: _TrivialStream(spec.length),
            spec=spec,
            total_length_hint=spec.length,
            label=f"trivial({spec.length:g})",
        )
    if isinstance(spec, AString):
        return FractalString(
            factory=lambda: _AStringStream(spec.a),
            spec=spec,
            total_length_hint=1.0,
            label=f"a-string(a={spec.a:g})",
        )
    if isinstance(spec, CantorString):
        return FractalString(
            factory=lambda: _BlockGeometricStream(1.0 / 3.0, 1.0 / 3.0, 1, 2),
            spec=spec,
            total_length_hint=1.0,
            label="cantor",
        )
    if isinstance(spec, GeneralizedCantor):
        g = (1.0 - spec.m * spec.a) / (spec.m - 1)
        return FractalString(
            factory=lambda: _BlockGeometricStream(g, spec.a, spec.m - 1, spec.m),
            spec=spec,
            total_length_hint=1.0,
            label=f"generalized-cantor(m={spec.m}, a={spec.a:g})",
        )
    if isinstance(spec, NthOrderCantor):
        base = _build(CantorString())

        def factory(n=spec.n):
            stream = base.factory()
            for _ in range(n - 1):
                stream = _TensorStream(stream, _BlockGeometricStream(1.0, 1.0 / 3.0, 1, 2))
            return stream

        return FractalString(
            factory=factory,
            spec=spec,
            total_length_hint=3.0 ** (spec.n - 1),
            label=f"cantor-order-{spec.n}",
        )
    if isinstance(spec, ExtendedSelfSimilar):
        inner = _build(spec.base)
        ratios = spec.ratios
        equal = all(r == ratios[0] for r in ratios)

        def factory():
            if equal:
                word = _BlockGeometricStream(1.0, ratios[0], 1, len(ratios))
            else:
                word = _RatioWordStream(ratios)
            return _TensorStream(inner.factory(), word)

        hint = None
        if inner.total_length_hint is not None:
            hint = inner.total_length_hint / (1.0 - sum(ratios))
        return FractalString(factory=factory, spec=spec, total_length_hint=hint, label="self-similar")
    if isinstance(spec, Scaled):
        inner = _build(spec.inner)
        hint = None if inner.total_length_hint is None else spec.factor * inner.total_length_hint
        return FractalString(
            factory=lambda: _ScaledStream(spec.factor, inner.factory()),
            spec=spec,
            total_length_hint=hint,
            label=f"scaled({spec.factor:g})",
        )
    if isinstance(spec, Union):
        parts = [_build(p) for p in spec.parts]
        hints = [p.total_length_hint for p in parts]
        hint = None if any(h is None for h in hints) else math.fsum(hints)
        return FractalString(
            factory=lambda: _UnionStream([p.factory() for p in parts]),
            spec=spec,
            total_length_hint=hint,
            label="union",
        )
    if isinstance(spec, Tensor):
        left = _build(spec.left)
        right = _build(spec.right)
        hint = None
        if left.total_length_hint is not None and right.total_length_hint is not None:
            hint = left.total_length_hint * right.total_length_hint
        return FractalString(
            factory=lambda: _TensorStream(left.factory(), right.factory()),
            spec=spec,
            total_length_hint=hint,
            label="tensor",
        )
    if isinstance(spec, Hyperfractal):
        if spec.m_seq is None:
            return FractalString(
                factory=lambda: _LazyHyperStream(spec.dimension),
                spec=spec,
                total_length_hint=1.0,  # sum of 2^-k
                label=f"hyperfractal(D={spec.dimension:g})",
            )
        streams = [
            (spec.dimension, m, c) for m, c in zip(spec.m_seq, spec.c_seq)
        ]
        return FractalString(
            factory=lambda: _UnionStream([_hyper_component(*args) for args in streams]),
            spec=spec,
            total_length_hint=math.fsum(spec.c_seq),
            label=f"hyperfractal(D={spec.dimension:g}, K={len(spec.m_seq)})",
            truncated=True,
            omitted_mass=math.nan,  # unknown beyond the supplied components
        )
    raise InvalidSpec(f"unknown specification {spec!r}")


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def total_length(string: FractalString, eps: float) -> float:
    """Total length sum l_j with absolute error at most eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if string.total_length_hint is not None:
        return string.total_length_hint
    value = partial_sigma_sum(string, 1.0, eps)
    return value


def partial_sigma_sum(string: FractalString, sigma: float, eps: float) -> float:
    """sum count * length^sigma with certified remainder <= eps."""
    stream = string.stream()
    acc = 0.0
    for _ in range(_MAX_BLOCKS):
        if stream.tail_mass(sigma) <= eps:
            return acc
        blk = stream.next_block()
        if blk is None:
            return acc
        acc += _block_mass(blk[0], blk[1], sigma)
    tail = stream.tail_mass(sigma)
    if math.isinf(tail):
        raise NotConvergent(f"sigma={sigma} is at or below the abscissa of convergence")
    raise TailBoundUnavailable(f"tail bound stuck at {tail:g} after {_MAX_BLOCKS} blocks")


def geometric_zeta_partial(string: FractalString, s: complex, eps: float) -> complex:
    """Partial sum of zeta_L(s) = sum_j l_j^s with remainder below eps.

    The remainder of the Dirichlet series is bounded in modulus by the
    sigma-mass of the unenumerated tail at sigma = Re s, which each stream
    certifies.  The a-string branch uses tail acceleration since its terms
    decay only polynomially.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    s = complex(s)
    if isinstance(string.spec, AString):
        return _a_string_zeta(string.spec.a, s, eps)
    sigma = s.real
    est = abscissa_estimate(string)
    if sigma <= est.value:
        raise NotConvergent(f"Re s = {sigma:g} <= abscissa {est.value:g}")
    stream = string.stream()
    acc = 0 + 0j
    for _ in range(_MAX_BLOCKS):
        if stream.tail_mass(sigma) <= eps:
            return acc
        blk = stream.next_block()
        if blk is None:
            return acc
        acc += _block_term(blk[0], blk[1], s)
    tail = stream.tail_mass(sigma)
    if math.isinf(tail):
        raise NotConvergent(f"Re s = {sigma:g} too close to the abscissa of convergence")
    raise TailBoundUnavailable(f"tail bound stuck at {tail:g} after {_MAX_BLOCKS} blocks")


def _a_string_zeta(a: float, s: complex, eps: float, start: int = 1) -> complex:
    """sum_{j>=start} (j^-a - (j+1)^-a)^s via partial sum plus tail acceleration.

    The tail past n is ~ int f(x) dx + f(n+1)/2 - f'(n+1)/12 with
    f(x) = (x^-a - (x+1)^-a)^s; the omitted correction is O(|s|^3 n^-(1+a)Re s - 3),
    far below eps for the n chosen here.
    """
    sigma = s.real
    if (1 + a) * sigma <= 1.0:
        raise NotConvergent(f"Re s = {sigma:g} <= abscissa {1/(1+a):g}")
    import warnings

    from scipy.integrate import IntegrationWarning, quad

    n = max(200, int(4 * (1 + abs(s))))
    acc = 0 + 0j
    for j in range(start, n + 1):
        acc += cmath.exp(s * math.log(j**-a - (j + 1) ** -a))

    def f(x: float) -> complex:
        return cmath.exp(s * math.log(x**-a - (x + 1) ** -a))

    def fprime(x: float) -> complex:
        g = x**-a - (x + 1) ** -a
        gp = -a * x ** (-a - 1) + a * (x + 1) ** (-a - 1)
        return s * cmath.exp((s - 1) * math.log(g)) * gp

    with warnings.catch_warnings():
        # roundoff-limited refinement near machine precision is acceptable here
        warnings.simplefilter("ignore", IntegrationWarning)
        re_int, _ = quad(lambda x: f(x).real, n + 1, math.inf, epsabs=1e-12, epsrel=1e-11, limit=400)
        im_int, _ = quad(lambda x: f(x).imag, n + 1, math.inf, epsabs=1e-12, epsrel=1e-11, limit=400)
    tail = complex(re_int, im_int) + f(n + 1) / 2.0 - fprime(n + 1) / 12.0
    return acc + tail


@dataclass(frozen=True)
class AbscissaEstimate:
    """Abscissa of convergence; exact (analytic) or fitted with an interval."""

    value: float
    low: float
    high: float
    method: str  # "analytic" | "fit"

    def to_json(self) -> dict:
        return {"value": self.value, "low": self.low, "high": self.high, "method": self.method}


def moran_real_root(ratios) -> float:
    """Unique real solution of sum r_j^s = 1 (zero when there is one ratio)."""
    _validate_ratios(tuple(ratios))
    if len(ratios) == 1:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sum(r**mid for r in ratios) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def abscissa_estimate(string: FractalString) -> AbscissaEstimate:
    """Abscissa of convergence of the geometric zeta function.

    Specs built from the catalog have exact values (self-similar families,
    the a-string, unions and tensors via the max rule).  Custom strings fall
    back to a log-log fit of l_j ~ j^(-1/D) over the last enumerated decade.
    """
    spec = string.spec
    value = _analytic_abscissa(spec) if spec is not None else None
    if value is not None:
        return AbscissaEstimate(value, value, value, "analytic")
    return _abscissa_fit(string)


def _analytic_abscissa(spec: StringSpec | None) -> float | None:
    if spec is None:
        return None
    if isinstance(spec, Trivial):
        return -math.inf
    if isinstance(spec, AString):
        return 1.0 / (1.0 + spec.a)
    if isinstance(spec, CantorString):
        return math.log(2) / math.log(3)
    if isinstance(spec, GeneralizedCantor):
        return math.log(spec.m) / math.log(1.0 / spec.a)
    if isinstance(spec, NthOrderCantor):
        return math.log(2) / math.log(3)
    if isinstance(spec, ExtendedSelfSimilar):
        base = _analytic_abscissa(spec.base)
        if base is None:
            return None
        return max(base, moran_real_root(spec.ratios))
    if isinstance(spec, Scaled):
        return _analytic_abscissa(spec.inner)
    if isinstance(spec, Union):
        vals = [_analytic_abscissa(p) for p in spec.parts]
        return None if any(v is None for v in vals) else max(vals)
    if isinstance(spec, Tensor):
        left = _analytic_abscissa(spec.left)
        right = _analytic_abscissa(spec.right)
        return None if left is None or right is None else max(left, right)
    if isinstance(spec, Hyperfractal):
        return spec.dimension
    return None


def _abscissa_fit(string: FractalString, n_max: int = 4096) -> AbscissaEstimate:
    lengths = string.lengths(n_max)
    n = len(lengths)
    if n < n_max:
        # finite string: the Dirichlet sum is entire
        return AbscissaEstimate(-math.inf, -math.inf, -math.inf, "analytic")
    import numpy as np

    lo = max(n // 10, 8)
    js = np.arange(lo, n + 1, dtype=float)
    ys = np.log(np.asarray(lengths[lo - 1 :], dtype=float))
    xs = np.log(js)
    A = np.vstack([xs, np.ones_like(xs)]).T
    coef, residuals, _, _ = np.linalg.lstsq(A, ys, rcond=None)
    slope = coef[0]
    dof = max(len(xs) - 2, 1)
    rms = math.sqrt(float(residuals[0]) / dof) if len(residuals) else 0.0
    sxx = float(((xs - xs.mean()) ** 2).sum())
    stderr = rms / math.sqrt(sxx) if sxx > 0 else 0.0
    if slope >= -1e-9:
        return AbscissaEstimate(0.0, 0.0, 0.0, "fit")
    d = -1.0 / slope
    span = 1.96 * stderr
    lo_d = -1.0 / (slope - span) if slope - span < 0 else math.inf
    hi_d = -1.0 / (slope + span) if slope + span < 0 else math.inf
    return AbscissaEstimate(d, min(lo_d, hi_d), max(lo_d, hi_d), "fit")
