"""Permutation values, cycle notation, and the array-level products used by sifting.

Points are 1-indexed in every public interface. Internally a perm of degree n
is a tuple ``a`` of 0-based images, ``a[i-1] == p(i) - 1``.

Products are read left to right: ``compose(a, b)`` applies ``a`` first, then
``b``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

__all__ = [
    "Perm",
    "InverseRep",
    "PermParseError",
    "PointOutOfRange",
    "DegreeMismatch",
    "parse_cycles",
    "format_cycles",
    "compose",
    "inverse",
    "power",
    "apply",
    "mult_by_inverse_transversal",
    "mult_transversal_by_perm",
    "largest_moved_point",
]


class PermParseError(ValueError):
    """Malformed cycle notation. ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PointOutOfRange(PermParseError):
    pass


class DegreeMismatch(ValueError):
    pass


def _trimmed(a: Sequence[int]) -> tuple[int, ...]:
    end = len(a)
    while end > 0 and a[end - 1] == end - 1:
        end -= 1
    return tuple(a[:end])


class Perm:
    """An immutable bijection of {1..degree}; larger points are implicitly fixed.

    Equality and hashing ignore trailing fixed points, so ``Perm.identity(3)``
    equals ``Perm.identity(7)``.
    """

    __slots__ = ("_a", "_key")

    def __init__(self, images: Iterable[int]):
        a = tuple(int(x) - 1 for x in images)
        n = len(a)
        if n < 1:
            raise ValueError("degree must be positive")
        if sorted(a) != list(range(n)):
            raise ValueError(f"images {[x + 1 for x in a]} are not a permutation of 1..{n}")
        self._a = a
        self._key = None

    @classmethod
    def _raw(cls, a: Sequence[int]) -> Perm:
        # trusted 0-based constructor, no validation
        p = object.__new__(cls)
        p._a = tuple(a)
        p._key = None
        return p

    @classmethod
    def identity(cls, degree: int) -> Perm:
        if degree < 1:
            raise ValueError("degree must be positive")
        return cls._raw(range(degree))

    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._a)

    def padded(self, degree: int) -> Perm:
        """Same perm viewed at a larger (or equal) degree."""
        n = len(self._a)
        if degree < n:
            if largest_moved_point(self) > degree:
                raise DegreeMismatch(f"perm moves points beyond degree {degree}")
            return Perm._raw(self._a[:degree])
        if degree == n:
            return self
        return Perm._raw(self._a + tuple(range(n, degree)))

    def is_identity(self) -> bool:
        return not self._trim()

    def _trim(self) -> tuple[int, ...]:
        if self._key is None:
            self._key = _trimmed(self._a)
        return self._key

    def __call__(self, i: int) -> int:
        return apply(self, i)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self._trim() == other._trim()

    def __hash__(self) -> int:
        return hash(self._trim())

    def __mul__(self, other: Perm) -> Perm:
        n = max(self.degree, other.degree)
        return compose(self.padded(n), other.padded(n))

    def __pow__(self, r: int) -> Perm:
        return power(self, r)

    def __invert__(self) -> Perm:
        return inverse(self)

    def __repr__(self) -> str:
        return f"Perm({format_cycles(self)!r}, degree={self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)


class InverseRep:
    """A perm stored by inverse images: the represented perm takes ``q[i] -> i``.

    This is how transversal elements are kept, so that sifting can compute
    ``p * inverse(sigma)`` with a single indexed pass.
    """

    __slots__ = ("_q",)

    def __init__(self, preimages: Iterable[int]):
        q = tuple(int(x) - 1 for x in preimages)
        if not q or sorted(q) != list(range(len(q))):
            raise ValueError("preimages are not a permutation")
        self._q = q

    @classmethod
    def _raw(cls, q: Sequence[int]) -> InverseRep:
        r = object.__new__(cls)
        r._q = tuple(q)
        return r

    @classmethod
    def of(cls, p: Perm, degree: int | None = None) -> InverseRep:
        """Inverse-image representation of ``p``, optionally at another degree."""
        if degree is not None:
            p = p.padded(degree)
        q = [0] * p.degree
        for i, x in enumerate(p._a):
            q[x] = i
        return cls._raw(q)

    @property
    def degree(self) -> int:
        return len(self._q)

    @property
    def preimages(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._q)

    def direct(self) -> Perm:
        a = [0] * len(self._q)
        for i, x in enumerate(self._q):
            a[x] = i
        return Perm._raw(a)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InverseRep):
            return NotImplemented
        return self.direct() == other.direct()

    def __hash__(self) -> int:
        return hash(self.direct())

    def __repr__(self) -> str:
        return f"InverseRep({format_cycles(self.direct())!r}, degree={self.degree})"


# -- cycle notation -------------------------------------------------------


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation such as ``"[1,2,3][5,7]"`` into a perm of ``degree``.

    Each cycle maps every element to its successor and the last back to the
    first. The empty string and ``"()"`` both denote the identity.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    a = list(range(degree))
    seen: set[int] = set()
    pos = 0
    n = len(text)

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    pos = skip_ws(pos)
    if text.startswith("()", pos):
        end = skip_ws(pos + 2)
        if end != n:
            raise PermParseError("unexpected text after '()'", end)
        return Perm._raw(a)

    while True:
        pos = skip_ws(pos)
        if pos == n:
            break
        if text[pos] != "[":
            raise PermParseError(f"expected '[' but found {text[pos]!r}", pos)
        pos += 1
        cycle: list[int] = []
        while True:
            pos = skip_ws(pos)
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if start == pos:
                found = repr(text[pos]) if pos < n else "end of input"
                raise PermParseError(f"expected a point but found {found}", pos)
            point = int(text[start:pos])
            if not 1 <= point <= degree:
                raise PointOutOfRange(f"point {point} outside 1..{degree}", start)
            if point in seen:
                raise PermParseError(f"point {point} appears twice", start)
            seen.add(point)
            cycle.append(point - 1)
            pos = skip_ws(pos)
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            if pos < n and text[pos] == "]":
                pos += 1
                break
            found = repr(text[pos]) if pos < n else "end of input"
            raise PermParseError(f"expected ',' or ']' but found {found}", pos)
        for x, y in zip(cycle, cycle[1:] + cycle[:1]):
            a[x] = y
    return Perm._raw(a)


def format_cycles(p: Perm) -> str:
    """Canonical cycle notation: nontrivial cycles only, each led by its smallest point."""
    a = p._a
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i] or a[i] == i:
            continue
        cycle = [i]
        seen[i] = True
        j = a[i]
        while j != i:
            seen[j] = True
            cycle.append(j)
            j = a[j]
        out.append("[" + ",".join(str(x + 1) for x in cycle) + "]")
    return "".join(out) if out else "()"


# -- products ------------------------------------------------------------


def compose(a: Perm, b: Perm) -> Perm:
    """Left-to-right product: the result takes ``i`` to ``b(a(i))``."""
    if a.degree != b.degree:
        raise DegreeMismatch(f"degrees differ: {a.degree} != {b.degree}")
    bb = b._a
    return Perm._raw([bb[x] for x in a._a])


def inverse(p: Perm) -> Perm:
    q = [0] * p.degree
    for i, x in enumerate(p._a):
        q[x] = i
    return Perm._raw(q)


def power(p: Perm, r: int) -> Perm:
    if r < 0:
        p, r = inverse(p), -r
    result = Perm.identity(p.degree)
    base = p
    while r:
        if r & 1:
            result = compose(result, base)
        r >>= 1
        if r:
            base = compose(base, base)
    return result


def apply(p: Perm, i: int) -> int:
    if i < 1:
        raise ValueError(f"points start at 1, got {i}")
    if i > len(p._a):
        return i
    return p._a[i - 1] + 1


def largest_moved_point(p: Perm) -> int:
    return len(p._trim())


def mult_by_inverse_transversal(p: Perm, s: InverseRep) -> Perm:
    """``p * inverse(sigma)`` computed as ``d[i] = q[p[i]]``; result has degree ``s.degree``."""
    k = len(s._q)
    if largest_moved_point(p) > k:
        raise DegreeMismatch(f"perm moves points beyond {k}")
    q = s._q
    a = p._a[:k] if p.degree >= k else p.padded(k)._a
    return Perm._raw([q[x] for x in a])


def mult_transversal_by_perm(s: InverseRep, p: Perm) -> Perm:
    """``sigma * p`` computed as ``d[q[i]] = p[i]``; result has degree ``s.degree``."""
    k = len(s._q)
    if largest_moved_point(p) > k:
        raise DegreeMismatch(f"perm moves points beyond {k}")
    a = p._a if p.degree >= k else p.padded(k)._a
    d = [0] * k
    for qi, pi in zip(s._q, a):
        d[qi] = pi
    return Perm._raw(d)
