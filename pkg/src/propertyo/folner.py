"""Følner-translate intersection kernel on amenable groups.

A Følner family is a sequence of finite sets G_n whose translation defect
|g G_n symdiff G_n| / |G_n| vanishes for every fixed g.  Three providers are
implemented:

* ``box``   -- {0..n}^d in a free abelian group,
* ``ball``  -- Cayley balls of radius n (Følner when growth is
               subexponential; constructible on any model, and deliberately
               non-Følner on free groups of rank >= 2),
* ``whole`` -- the entire group, for finite models.

The kernel compares translates of G_n:

    u_n(x, y) = |x G_n intersect y G_n| / |G_n|

which equals |(x^-1 y) G_n intersect G_n| / |G_n| by left-invariance.
Membership of a point g in both translates is a product of two 0/1
indicators, so Gram matrices of u_n factor exactly as (1/|G_n|) * Phi^T Phi.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .groups import BudgetExceededError, FreeAbelian, GroupElement, GroupModel

STRATEGIES = ("box", "ball", "whole")


@dataclass(frozen=True)
class TranslateIndex:
    """The translate x G_n, viewed as the index set of the 0/1 features of x.

    ``indices`` is {g : x in g G_n^-1}, which is exactly x G_n; its size
    always equals |G_n|.
    """

    owner: GroupElement
    level: int
    indices: frozenset[GroupElement]


class FolnerProvider:
    """A Følner-set strategy bound to a group model.

    ``advertised_folner`` records whether the strategy is actually Følner for
    this model; the ball strategy on a free group of rank >= 2 is constructed
    anyway so the verifier can exhibit failure of the approximation condition.
    """

    def __init__(self, model: GroupModel, strategy: str):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown Følner strategy {strategy!r}")
        if strategy == "box" and not isinstance(model, FreeAbelian):
            raise ValueError("the box strategy requires a free abelian group")
        if strategy == "whole" and not model.is_finite:
            raise ValueError("the whole-group strategy requires a finite group")
        self.model = model
        self.strategy = strategy
        self.advertised_folner = (
            model.subexponential_growth if strategy == "ball" else True
        )
        self._sets: dict[int, frozenset[GroupElement]] = {}
        self._translates: dict[tuple, frozenset[GroupElement]] = {}
        self._supports: dict[int, frozenset[GroupElement]] = {}
        self._whole: frozenset[GroupElement] | None = None

    def folner_set(self, n: int) -> frozenset[GroupElement]:
        """The n-th set G_n of the strategy; finite, nonempty, deterministic."""
        if n < 0:
            raise ValueError("level must be nonnegative")
        cached = self._sets.get(n)
        if cached is not None:
            return cached
        if self.strategy == "box":
            dim = self.model.dim
            if (n + 1) ** dim > self.model.element_budget:
                raise BudgetExceededError(
                    f"box({n}) in {self.model.descriptor} exceeds element budget"
                )
            result = frozenset(
                self.model.element(coords)
                for coords in itertools.product(range(n + 1), repeat=dim)
            )
        elif self.strategy == "ball":
            result = self.model.ball(n)
        else:
            if self._whole is None:
                self._whole = self.model.all_elements()
            result = self._whole
        self._sets[n] = result
        return result

    def translate(self, x: GroupElement, n: int) -> frozenset[GroupElement]:
        """The set x G_n (memoized; translation is a bijection of G_n)."""
        self.model.check_element(x)
        key = (x.value, n)
        cached = self._translates.get(key)
        if cached is None:
            cached = frozenset(x * g for g in self.folner_set(n))
            self._translates[key] = cached
        return cached

    def folner_defect(self, g: GroupElement, n: int) -> Fraction:
        """Exact defect |g G_n symdiff G_n| / |G_n|."""
        gn = self.folner_set(n)
        return Fraction(len(self.translate(g, n) ^ gn), len(gn))

    def value(self, x: GroupElement, y: GroupElement, n: int) -> Fraction:
        """u_n(x, y) = |x G_n intersect y G_n| / |G_n|, exact in [0, 1].

        Evaluated through the left-invariant form |(x^-1 y) G_n intersect G_n|.
        """
        z = self.model.multiply(self.model.inverse(x), y)
        gn = self.folner_set(n)
        return Fraction(len(self.translate(z, n) & gn), len(gn))

    def translate_index(self, x: GroupElement, n: int) -> TranslateIndex:
        return TranslateIndex(owner=x, level=n, indices=self.translate(x, n))

    def value_via_features(self, x: GroupElement, y: GroupElement, n: int) -> Fraction:
        """u_n(x, y) recomputed as the inner product of translate indicators.

        Works with the absolute translates x G_n and y G_n rather than the
        difference x^-1 y; the independent route for equivalence checks.
        """
        ix = self.translate_index(x, n)
        iy = self.translate_index(y, n)
        return Fraction(len(ix.indices & iy.indices), len(self.folner_set(n)))

    def support_set(self, n: int) -> frozenset[GroupElement]:
        """The exact support F = G_n * G_n^-1: u_n(x, y) != 0 iff x^-1 y in F."""
        cached = self._supports.get(n)
        if cached is not None:
            return cached
        gn = self.folner_set(n)
        inverses = [~g for g in gn]
        out = set()
        for g in gn:
            for h in inverses:
                out.add(g * h)
                if len(out) > self.model.element_budget:
                    raise BudgetExceededError(
                        f"support set at level {n} exceeds element budget"
                    )
        result = frozenset(out)
        self._supports[n] = result
        return result

    def max_word_length(self, n: int) -> int:
        """R = max word length over G_n; the support also sits in ball(2R)."""
        return max(self.model.word_length(g) for g in self.folner_set(n))


class FolnerKernel:
    """Verifier-facing wrapper tying a provider to the kernel interface."""

    def __init__(self, provider: FolnerProvider):
        self.provider = provider
        self.model = provider.model
        self.tag = f"folner:{provider.strategy}"

    def value(self, x: GroupElement, y: GroupElement, n: int) -> Fraction:
        return self.provider.value(x, y, n)

    def value_via_features(self, x: GroupElement, y: GroupElement, n: int) -> Fraction:
        return self.provider.value_via_features(x, y, n)

    def feature_support(self, x: GroupElement, n: int) -> frozenset[GroupElement]:
        return self.provider.translate_index(x, n).indices

    def scale(self, n: int) -> Fraction:
        return Fraction(1, len(self.provider.folner_set(n)))

    def support_elements(self, n: int) -> frozenset[GroupElement]:
        return self.provider.support_set(n)

    def support_contains(self, z: GroupElement, n: int) -> bool:
        return z in self.provider.support_set(n)
