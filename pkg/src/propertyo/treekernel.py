"""Geodesic-ray overlap kernel on free groups.

The Cayley graph of a free group is a tree.  Fix the end reached by the
positive powers of the first generator ``a``; from every vertex x there is
a unique geodesic ray toward that end.  Writing x = a^j u with j maximal,
the ray unwinds the word of x one trailing letter at a time down to a^j and
then climbs a^(j+1), a^(j+2), ...

The kernel value is the number of vertices shared by the two length-n ray
segments, scaled by n+1:

    u_n(x, y) = |ray_n(x) intersect ray_n(y)| / (n + 1)

Each segment doubles as a 0/1 feature vector over tree vertices, so every
Gram matrix of u_n is exactly (1/(n+1)) * Phi^T Phi, a sum of squares.
That factorization is what the verifier certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groups import FreeGroup, GroupElement


@dataclass(frozen=True)
class RaySegment:
    """Initial segment of the geodesic ray from ``base`` toward the fixed end."""

    base: GroupElement
    length: int
    vertices: tuple[GroupElement, ...]


@dataclass(frozen=True)
class RayFeatureVector:
    """Indicator vector of the length-n ray segment of ``owner``.

    The support holds the n+1 vertices v that lie on the ray from the owner
    (so v separates the owner from the fixed end, the owner itself included)
    within distance n of it.
    """

    owner: GroupElement
    length: int
    support: frozenset[GroupElement]
    scale: Fraction


class TreeKernel:
    """Ray-overlap kernel bound to a free-group model."""

    tag = "tree"

    def __init__(self, model: FreeGroup):
        if not isinstance(model, FreeGroup):
            raise TypeError("the ray-overlap kernel requires a free group")
        self.model = model
        self._apowers: dict[int, GroupElement] = {}

    @property
    def base_ray_description(self) -> str:
        return "positive powers of a from the identity"

    def _apower(self, k: int) -> GroupElement:
        el = self._apowers.get(k)
        if el is None:
            el = self.model.element((1,) * k)
            self._apowers[k] = el
        return el

    @staticmethod
    def _decompose(x: GroupElement) -> tuple[tuple[int, ...], int, int]:
        """Split the reduced word as a^j u with j maximal; return (word, j, t)
        where t = |u| is the number of unwinding steps down to a^j."""
        word = x.value
        j = 0
        while j < len(word) and word[j] == 1:
            j += 1
        return word, j, len(word) - j

    def ray(self, x: GroupElement, n: int) -> RaySegment:
        """The n+1 vertices of the length-n ray segment from x."""
        self.model.check_element(x)
        if n < 0:
            raise ValueError("segment length must be nonnegative")
        word, j, t = self._decompose(x)
        vertices = [
            self.model.element(word[: len(word) - i]) for i in range(min(t, n) + 1)
        ]
        for s in range(1, n - t + 1):
            vertices.append(self._apower(j + s))
        return RaySegment(x, n, tuple(vertices))

    def overlap(self, x: GroupElement, y: GroupElement, n: int) -> int:
        """Number of common vertices of the two length-n ray segments.

        Computed from the prefix/power decomposition of each ray, so the cost
        is O(|x| + |y|) independently of n.
        """
        self.model.check_element(x)
        self.model.check_element(y)
        if n < 0:
            raise ValueError("segment length must be nonnegative")
        wx, jx, tx = self._decompose(x)
        wy, jy, ty = self._decompose(y)
        px = {wx[: len(wx) - i] for i in range(min(tx, n) + 1)}
        py = {wy[: len(wy) - i] for i in range(min(ty, n) + 1)}
        count = len(px & py)
        rx = (jx + 1, jx + n - tx) if n > tx else None
        ry = (jy + 1, jy + n - ty) if n > ty else None
        if rx and ry:
            count += max(0, min(rx[1], ry[1]) - max(rx[0], ry[0]) + 1)
        # the terminal prefix a^j of one ray may sit on the power run of the other
        if ry and tx <= n and ry[0] <= jx <= ry[1]:
            count += 1
        if rx and ty <= n and rx[0] <= jy <= rx[1]:
            count += 1
        return count

    def value(self, x: GroupElement, y: GroupElement, n: int) -> Fraction:
        """u_n(x, y) as an exact rational in [0, 1]."""
        return Fraction(self.overlap(x, y, n), n + 1)

    def feature_vector(self, x: GroupElement, n: int) -> RayFeatureVector:
        segment = self.ray(x, n)
        return RayFeatureVector(
            owner=x,
            length=n,
            support=frozenset(segment.vertices),
            scale=Fraction(1, n + 1),
        )

    def value_via_features(self, x: GroupElement, y: GroupElement, n: int) -> Fraction:
        """u_n(x, y) recomputed as the inner product of the two feature vectors.

        Enumerates both supports explicitly; used as the independent route in
        equivalence checks against :meth:`value`.
        """
        fx = self.feature_vector(x, n)
        fy = self.feature_vector(y, n)
        return fx.scale * len(fx.support & fy.support)

    # -- hooks used by the verifier --

    def feature_support(self, x: GroupElement, n: int) -> frozenset[GroupElement]:
        return self.feature_vector(x, n).support

    def scale(self, n: int) -> Fraction:
        return Fraction(1, n + 1)

    def support_radius(self, n: int) -> int:
        """Radius of the ball F with u_n(x, y) != 0 only if x^-1 y in F."""
        return 2 * n

    def support_contains(self, z: GroupElement, n: int) -> bool:
        return self.model.word_length(z) <= 2 * n
