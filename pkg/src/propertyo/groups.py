"""Concrete computable groups with word metrics and Cayley-ball enumeration.

Four families are supported, plus direct products of them:

* free groups ``free:k`` -- elements are reduced words over generators
  a, b, c, ... and their inverses (uppercase letters),
* free abelian groups ``abelian:d`` -- integer vectors,
* the discrete Heisenberg group ``heisenberg`` -- integer triples
  (x, y, z) standing for upper-triangular matrices [[1,x,z],[0,1,y],[0,0,1]],
* finite cyclic groups ``cyclic:m`` -- residues mod m.

Every model fixes the standard symmetric generating set and exposes the
word metric of the resulting Cayley graph.  Balls are enumerated by
breadth-first search with memoized layers; an element budget guards
against exponential blow-up.
"""

from __future__ import annotations

import threading
from typing import Iterable

DEFAULT_ELEMENT_BUDGET = 10**6

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class ModelMismatchError(ValueError):
    """Raised when an operation mixes elements of different group models."""


class BudgetExceededError(RuntimeError):
    """Raised when ball enumeration would exceed the configured element budget."""


class GroupElement:
    """An element of a concrete group model, in canonical form.

    Canonical forms are unique per element, so structural equality of
    ``value`` is group equality.  Hash is precomputed; elements are
    immutable and safe to share across threads.
    """

    __slots__ = ("model", "value", "_hash")

    def __init__(self, model: "GroupModel", value):
        self.model = model
        self.value = value
        self._hash = hash((model.descriptor, value))

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.model.descriptor == other.model.descriptor
            and self.value == other.value
        )

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.model.multiply(self, other)

    def __invert__(self) -> "GroupElement":
        return self.model.inverse(self)

    def __str__(self):
        return self.model.format_element(self)

    def __repr__(self):
        return f"<{self.model.descriptor}: {self}>"


class GroupModel:
    """A computable group: operations, generators, word metric, balls.

    Subclasses implement the group law on canonical ``value`` objects; this
    base class provides element wrapping, BFS ball enumeration and the word
    metric.  Models are immutable after construction except for the memoized
    layer cache, which is lock-protected for concurrent use.
    """

    descriptor: str
    is_finite = False
    subexponential_growth = True

    def __init__(self, element_budget: int = DEFAULT_ELEMENT_BUDGET):
        if element_budget < 1:
            raise ValueError("element budget must be positive")
        self.element_budget = element_budget
        self._lock = threading.Lock()
        self._layers: list[frozenset[GroupElement]] = []
        self._balls: list[frozenset[GroupElement]] = []
        self._size_so_far = 0

    # -- group law on canonical values, provided by subclasses --

    def _id_value(self):
        raise NotImplementedError

    def _mul_values(self, a, b):
        raise NotImplementedError

    def _inv_value(self, a):
        raise NotImplementedError

    def _generator_values(self) -> list:
        raise NotImplementedError

    def _format_value(self, a) -> str:
        raise NotImplementedError

    def _parse_value(self, text: str):
        raise NotImplementedError

    # -- public element API --

    def element(self, value) -> GroupElement:
        return GroupElement(self, value)

    @property
    def identity(self) -> GroupElement:
        return self.element(self._id_value())

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        """The fixed symmetric generating set (identity excluded)."""
        idv = self._id_value()
        seen, out = set(), []
        for v in self._generator_values():
            if v != idv and v not in seen:
                seen.add(v)
                out.append(self.element(v))
        return tuple(out)

    def check_element(self, x: GroupElement) -> None:
        if not isinstance(x, GroupElement) or x.model.descriptor != self.descriptor:
            raise ModelMismatchError(
                f"element {x!r} does not belong to group {self.descriptor}"
            )

    def multiply(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self.check_element(x)
        self.check_element(y)
        return self.element(self._mul_values(x.value, y.value))

    def inverse(self, x: GroupElement) -> GroupElement:
        self.check_element(x)
        return self.element(self._inv_value(x.value))

    def word_length(self, x: GroupElement) -> int:
        """Length of the shortest generator word equal to x (BFS by default)."""
        self.check_element(x)
        n = 0
        while True:
            if x in self.layer(n):
                return n
            n += 1

    def distance(self, x: GroupElement, y: GroupElement) -> int:
        """Word metric d(x, y) = |x^-1 y|; left-invariant by construction."""
        return self.word_length(self.multiply(self.inverse(x), y))

    def format_element(self, x: GroupElement) -> str:
        self.check_element(x)
        return self._format_value(x.value)

    def parse_element(self, text: str) -> GroupElement:
        return self.element(self._parse_value(text.strip()))

    def sort_key(self, x: GroupElement):
        """Deterministic ordering key (shortlex on the serialized form)."""
        s = self.format_element(x)
        return (len(s), s)

    # -- BFS layers and balls --

    def _extend_layers(self, n: int) -> None:
        with self._lock:
            if not self._layers:
                ball0 = frozenset([self.identity])
                self._layers.append(ball0)
                self._balls.append(ball0)
                self._size_so_far = 1
            while len(self._layers) <= n:
                frontier = self._layers[-1]
                if not frontier:
                    self._layers.append(frontier)
                    self._balls.append(self._balls[-1])
                    continue
                prev = self._layers[-2] if len(self._layers) >= 2 else frozenset()
                gens = self.generators
                fresh = set()
                for x in frontier:
                    for s in gens:
                        y = self.element(self._mul_values(x.value, s.value))
                        if y not in frontier and y not in prev:
                            fresh.add(y)
                if self._size_so_far + len(fresh) > self.element_budget:
                    raise BudgetExceededError(
                        f"ball({len(self._layers)}) of {self.descriptor} exceeds "
                        f"element budget {self.element_budget}"
                    )
                layer = frozenset(fresh)
                self._layers.append(layer)
                self._balls.append(self._balls[-1] | layer)
                self._size_so_far += len(layer)

    def layer(self, n: int) -> frozenset[GroupElement]:
        """Sphere of radius n: elements at word length exactly n."""
        if n < 0:
            raise ValueError("radius must be nonnegative")
        if len(self._layers) <= n:
            self._extend_layers(n)
        return self._layers[n]

    def ball(self, n: int) -> frozenset[GroupElement]:
        """Closed ball of radius n about the identity in the Cayley graph."""
        if n < 0:
            raise ValueError("radius must be nonnegative")
        if len(self._balls) <= n:
            self._extend_layers(n)
        return self._balls[n]

    def growth(self, n: int) -> int:
        """Growth value beta(n) = |ball(n)|."""
        return len(self.ball(n))

    def all_elements(self) -> frozenset[GroupElement]:
        """Every element of a finite model (BFS closure)."""
        if not self.is_finite:
            raise ValueError(f"group {self.descriptor} is not finite")
        n = 0
        while self.layer(n):
            n += 1
        return self.ball(n)


class FreeGroup(GroupModel):
    """Free group of rank k; elements are reduced words as tuples of
    signed letter indices (+i for the i-th generator, -i for its inverse)."""

    def __init__(self, rank: int, element_budget: int = DEFAULT_ELEMENT_BUDGET):
        if not 1 <= rank <= len(_LETTERS):
            raise ValueError(f"free-group rank must be in 1..{len(_LETTERS)}")
        self.rank = rank
        self.descriptor = f"free:{rank}"
        self.subexponential_growth = rank == 1
        super().__init__(element_budget)

    def _id_value(self):
        return ()

    def _mul_values(self, a, b):
        out = list(a)
        for letter in b:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def _inv_value(self, a):
        return tuple(-letter for letter in reversed(a))

    def _generator_values(self):
        return [(i,) for i in range(1, self.rank + 1)] + [
            (-i,) for i in range(1, self.rank + 1)
        ]

    def word(self, letters: Iterable[int]) -> GroupElement:
        """Element from raw letters, with free reduction applied."""
        value = ()
        for letter in letters:
            if not 1 <= abs(letter) <= self.rank:
                raise ValueError(f"letter {letter} out of range for {self.descriptor}")
            value = self._mul_values(value, (letter,))
        return self.element(value)

    def word_length(self, x: GroupElement) -> int:
        self.check_element(x)
        return len(x.value)

    def _format_value(self, a):
        if not a:
            return "e"
        return ".".join(
            _LETTERS[i - 1] if i > 0 else _LETTERS[-i - 1].upper() for i in a
        )

    def _parse_value(self, text):
        if text in ("e", ""):
            return ()
        letters = []
        for token in text.split("."):
            if len(token) != 1 or token.lower() not in _LETTERS:
                raise ValueError(f"bad free-group letter {token!r} in {text!r}")
            index = _LETTERS.index(token.lower()) + 1
            if index > self.rank:
                raise ValueError(f"letter {token!r} out of range for {self.descriptor}")
            letters.append(index if token.islower() else -index)
        return self.word(letters).value


class FreeAbelian(GroupModel):
    """Free abelian group Z^d with the standard basis generators."""

    def __init__(self, dim: int, element_budget: int = DEFAULT_ELEMENT_BUDGET):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.descriptor = f"abelian:{dim}"
        super().__init__(element_budget)

    def _id_value(self):
        return (0,) * self.dim

    def _mul_values(self, a, b):
        return tuple(ai + bi for ai, bi in zip(a, b))

    def _inv_value(self, a):
        return tuple(-ai for ai in a)

    def _generator_values(self):
        vals = []
        for i in range(self.dim):
            for sign in (1, -1):
                vals.append(tuple(sign if j == i else 0 for j in range(self.dim)))
        return vals

    def vector(self, coords: Iterable[int]) -> GroupElement:
        value = tuple(int(c) for c in coords)
        if len(value) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(value)}")
        return self.element(value)

    def word_length(self, x: GroupElement) -> int:
        self.check_element(x)
        return sum(abs(c) for c in x.value)

    def _format_value(self, a):
        if self.dim == 1:
            return str(a[0])
        return "(" + ",".join(str(c) for c in a) + ")"

    def _parse_value(self, text):
        coords = _parse_int_tuple(text)
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates in {text!r}")
        return coords


class Heisenberg(GroupModel):
    """Discrete Heisenberg group: triples (x, y, z) with
    (x1,y1,z1)*(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2)."""

    descriptor = "heisenberg"

    def _id_value(self):
        return (0, 0, 0)

    def _mul_values(self, a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def _inv_value(self, a):
        return (-a[0], -a[1], a[0] * a[1] - a[2])

    def _generator_values(self):
        return [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]

    def triple(self, x: int, y: int, z: int) -> GroupElement:
        return self.element((int(x), int(y), int(z)))

    def _format_value(self, a):
        return "(" + ",".join(str(c) for c in a) + ")"

    def _parse_value(self, text):
        coords = _parse_int_tuple(text)
        if len(coords) != 3:
            raise ValueError(f"expected a triple in {text!r}")
        return coords


class FiniteCyclic(GroupModel):
    """Cyclic group Z/mZ with generators {+1, -1} mod m."""

    is_finite = True

    def __init__(self, modulus: int, element_budget: int = DEFAULT_ELEMENT_BUDGET):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.modulus = modulus
        self.descriptor = f"cyclic:{modulus}"
        super().__init__(element_budget)

    def _id_value(self):
        return 0

    def _mul_values(self, a, b):
        return (a + b) % self.modulus

    def _inv_value(self, a):
        return (-a) % self.modulus

    def _generator_values(self):
        return [1 % self.modulus, (-1) % self.modulus]

    def residue(self, r: int) -> GroupElement:
        return self.element(int(r) % self.modulus)

    def _format_value(self, a):
        return str(a)

    def _parse_value(self, text):
        return int(text) % self.modulus


class DirectProduct(GroupModel):
    """Direct product of supported models: componentwise operations, the
    generators of each factor embedded alongside the identity of the others,
    word length by BFS."""

    def __init__(self, factors, element_budget: int = DEFAULT_ELEMENT_BUDGET):
        factors = tuple(factors)
        if len(factors) < 2:
            raise ValueError("a product needs at least two factors")
        self.factors = factors
        self.descriptor = "product:" + ",".join(
            f"({f.descriptor})" if isinstance(f, DirectProduct) else f.descriptor
            for f in factors
        )
        self.is_finite = all(f.is_finite for f in factors)
        self.subexponential_growth = all(f.subexponential_growth for f in factors)
        super().__init__(element_budget)

    def _id_value(self):
        return tuple(f._id_value() for f in self.factors)

    def _mul_values(self, a, b):
        return tuple(f._mul_values(ai, bi) for f, ai, bi in zip(self.factors, a, b))

    def _inv_value(self, a):
        return tuple(f._inv_value(ai) for f, ai in zip(self.factors, a))

    def _generator_values(self):
        idv = self._id_value()
        vals = []
        for i, f in enumerate(self.factors):
            for g in f._generator_values():
                vals.append(tuple(g if j == i else idv[j] for j in range(len(idv))))
        return vals

    def pack(self, *components: GroupElement) -> GroupElement:
        if len(components) != len(self.factors):
            raise ValueError("wrong number of components")
        for f, c in zip(self.factors, components):
            f.check_element(c)
        return self.element(tuple(c.value for c in components))

    def _format_value(self, a):
        parts = [f._format_value(ai) for f, ai in zip(self.factors, a)]
        return "[" + ";".join(parts) + "]"

    def _parse_value(self, text):
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"product element must look like [..;..], got {text!r}")
        parts = _split_top_level(text[1:-1], ";")
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components in {text!r}")
        return tuple(f._parse_value(p.strip()) for f, p in zip(self.factors, parts))


def _parse_int_tuple(text: str) -> tuple[int, ...]:
    inner = text.strip()
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    try:
        return tuple(int(p.strip()) for p in inner.split(","))
    except ValueError:
        raise ValueError(f"bad integer vector {text!r}") from None


def _split_top_level(text: str, sep: str) -> list[str]:
    """Split on sep, ignoring separators nested inside () or []."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def parse_group(descriptor: str, element_budget: int = DEFAULT_ELEMENT_BUDGET) -> GroupModel:
    """Build a group model from a descriptor string.

    Formats: ``free:k``, ``abelian:d``, ``heisenberg``, ``cyclic:m`` and
    ``product:<desc>,<desc>[,...]`` (parenthesize nested products).
    """
    desc = descriptor.strip()
    if desc.startswith("(") and desc.endswith(")"):
        desc = desc[1:-1].strip()
    if desc == "heisenberg":
        return Heisenberg(element_budget)
    head, _, tail = desc.partition(":")
    if head == "free":
        return FreeGroup(_positive_int(tail, desc), element_budget)
    if head == "abelian":
        return FreeAbelian(_positive_int(tail, desc), element_budget)
    if head == "cyclic":
        return FiniteCyclic(_positive_int(tail, desc), element_budget)
    if head == "product":
        parts = _split_top_level(tail, ",")
        if len(parts) < 2:
            raise ValueError(f"product descriptor needs two factors: {descriptor!r}")
        return DirectProduct(
            [parse_group(p, element_budget) for p in parts], element_budget
        )
    raise ValueError(f"unknown group descriptor {descriptor!r}")


def _positive_int(text: str, context: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"bad group descriptor {context!r}") from None
    if value < 1:
        raise ValueError(f"size parameter must be positive in {context!r}")
    return value
