"""Property O certificates.

A kernel family u_n witnesses Property O for a finite set E and epsilon > 0
when some level N satisfies, on a group G:

1. u_N is a positive definite kernel,
2. u_N(x, y) != 0 only if x^-1 y lies in a finite set F,
3. |1 - u_N(x, y)| < epsilon whenever x^-1 y lies in E.

This module turns those conditions into checkable artifacts.  Positive
semidefiniteness is certified *exactly*: the Gram matrix over a point sample
is reproduced entrywise, in rational arithmetic, from the kernel's 0/1
feature matrix (scale * Phi^T Phi), which is a sum-of-squares decomposition.
A floating-point eigensolve confirms the conclusion numerically but is not
the proof.  The support and approximation conditions are checked with exact
rationals end to end.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .folner import FolnerKernel, FolnerProvider
from .groups import GroupElement, GroupModel
from .treekernel import TreeKernel

DEFAULT_EIG_TOLERANCE = 1e-9

Kernel = TreeKernel | FolnerKernel


class FactorizationError(RuntimeError):
    """Exact feature factorization failed to reproduce a Gram entry.

    This indicates an implementation bug, never an unlucky sample."""


def make_kernel(model: GroupModel, tag: str) -> Kernel:
    """Kernel from its tag: ``tree`` or ``folner:<box|ball|whole>``."""
    if tag == "tree":
        return TreeKernel(model)
    if tag.startswith("folner:"):
        return FolnerKernel(FolnerProvider(model, tag.split(":", 1)[1]))
    raise ValueError(f"unknown kernel tag {tag!r}")


def rational_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GramSample:
    """Exact kernel matrix over an ordered point sample."""

    points: tuple[GroupElement, ...]
    level: int
    matrix: tuple[tuple[Fraction, ...], ...]
    kernel_tag: str

    def is_symmetric(self) -> bool:
        m = self.matrix
        return all(
            m[i][j] == m[j][i] for i in range(len(m)) for j in range(i + 1, len(m))
        )


@dataclass(frozen=True)
class FactorizationCertificate:
    """Witness that scale * Phi^T Phi reproduced the Gram matrix entrywise."""

    verified: bool
    feature_rows: int
    scale: Fraction
    sha256: str


@dataclass(frozen=True)
class PsdReport:
    """Floating-point eigenvalue confirmation of positive semidefiniteness."""

    min_eigenvalue: float
    max_eigenvalue: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class SampleSpec:
    """How the PSD point sample is drawn: a ball plus seeded random words."""

    ball_radius: int = 2
    random_count: int = 0
    seed: int = 0
    max_random_word_length: int = 8


def gram_matrix(kernel: Kernel, points, n: int) -> GramSample:
    """Exact Gram matrix u_n(points[i], points[j])."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise ValueError("sample points must be distinct")
    matrix = tuple(
        tuple(kernel.value(x, y, n) for y in points) for x in points
    )
    return GramSample(points=points, level=n, matrix=matrix, kernel_tag=kernel.tag)


def certify_psd_exact(
    kernel: Kernel, points, n: int, gram: GramSample | None = None
) -> FactorizationCertificate:
    """Exact sum-of-squares certificate for the Gram matrix over ``points``.

    Builds the sparse 0/1 feature matrix Phi (rows indexed by contributing
    vertices or translate positions, columns by sample points) and verifies
    scale * Phi^T Phi == Gram entrywise in rational arithmetic.  Success
    proves the sampled quadratic form is a sum of squares, hence >= 0 for
    all real coefficients.
    """
    points = tuple(points)
    if gram is None:
        gram = gram_matrix(kernel, points, n)
    supports = [kernel.feature_support(x, n) for x in points]
    scale = kernel.scale(n)
    rows: dict[GroupElement, list[int]] = {}
    for col, support in enumerate(supports):
        for v in support:
            rows.setdefault(v, []).append(col)
    k = len(points)
    inner = [[0] * k for _ in range(k)]
    for cols in rows.values():
        for i in cols:
            for j in cols:
                inner[i][j] += 1
    for i in range(k):
        for j in range(k):
            if scale * inner[i][j] != gram.matrix[i][j]:
                raise FactorizationError(
                    f"entry ({i},{j}): features give "
                    f"{scale * inner[i][j]}, kernel gives {gram.matrix[i][j]}"
                )
    model = kernel.model
    lines = [
        f"{model.format_element(v)}:{','.join(map(str, sorted(cols)))}"
        for v, cols in sorted(
            rows.items(), key=lambda item: model.sort_key(item[0])
        )
    ]
    digest = hashlib.sha256(
        "\n".join([kernel.tag, str(n), rational_str(scale)] + lines).encode()
    ).hexdigest()
    return FactorizationCertificate(
        verified=True, feature_rows=len(rows), scale=scale, sha256=digest
    )


def check_psd_numeric(
    sample: GramSample, tolerance: float = DEFAULT_EIG_TOLERANCE
) -> PsdReport:
    """Minimum eigenvalue of the float image of an exact Gram matrix.

    Passes when lambda_min >= -tolerance * max(1, lambda_max).
    """
    if not sample.is_symmetric():
        raise ValueError("Gram matrix is not symmetric")
    if not sample.points:
        return PsdReport(0.0, 0.0, tolerance, True)
    a = np.array([[float(v) for v in row] for row in sample.matrix], dtype=float)
    eigs = np.linalg.eigvalsh(a)
    lo, hi = float(eigs[0]), float(eigs[-1])
    return PsdReport(lo, hi, tolerance, lo >= -tolerance * max(1.0, hi))


def find_parameter_tree(m: int, epsilon: Fraction) -> int:
    """Smallest usable level N for the ray-overlap kernel.

    For pairs at distance < m the overlap of length-N segments is at least
    N - m + 2 vertices, so |1 - u_N| <= (m-1)/(N+1).  N is the smallest
    integer with (m+1)/(N+1) <= epsilon, floored at m; the slack between
    (m-1) and (m+1) keeps every residual strictly below epsilon.
    """
    if m < 1:
        raise ValueError("distance bound m must be at least 1")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return max(m, math.ceil(Fraction(m + 1) / epsilon) - 1)


def find_parameter_folner(
    provider: FolnerProvider, E, epsilon: Fraction, n_max: int
) -> int | None:
    """Smallest n <= n_max with every residual |1 - u_n(e, g)|, g in E,
    strictly below epsilon; None when no level qualifies (e.g. the ball
    strategy on a free group, which is not Følner)."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    E = tuple(E)
    for n in range(n_max + 1):
        gn = provider.folner_set(n)
        size = len(gn)
        if all(
            abs(1 - Fraction(len(provider.translate(g, n) & gn), size)) < epsilon
            for g in E
        ):
            return n
    return None


def random_elements(
    model: GroupModel, count: int, max_word_length: int, rng: random.Random
) -> list[GroupElement]:
    """Random elements as products of random generators, length <= the bound."""
    gens = model.generators
    out = []
    for _ in range(count):
        x = model.identity
        if gens:
            for _ in range(rng.randint(0, max_word_length)):
                x = x * rng.choice(gens)
        out.append(x)
    return out


def sample_points(model: GroupModel, spec: SampleSpec) -> tuple[GroupElement, ...]:
    """Deterministic PSD sample: sorted ball plus seeded random words."""
    points = sorted(model.ball(spec.ball_radius), key=model.sort_key)
    seen = set(points)
    rng = random.Random(spec.seed)
    for x in random_elements(model, spec.random_count, spec.max_random_word_length, rng):
        if x not in seen:
            seen.add(x)
            points.append(x)
    return tuple(points)


@dataclass
class PropertyOCertificate:
    """Outcome of checking the three Property O conditions on a sample.

    Every recorded quantity is exact except the confirming eigenvalues.
    ``conditions`` maps condition names to True/False, or None when a failed
    parameter search left nothing to evaluate.
    """

    group: str
    kernel: str
    E: tuple[GroupElement, ...]
    epsilon: Fraction
    N: int | None
    support: dict | None
    sample_spec: SampleSpec
    points: tuple[GroupElement, ...]
    factorization: FactorizationCertificate | None
    psd_numeric: PsdReport | None
    residuals: dict[GroupElement, Fraction]
    conditions: dict[str, bool | None]
    verdict: str
    n_max: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    @property
    def failed_conditions(self) -> tuple[int, ...]:
        order = ("positive_definite", "finite_support", "approximation")
        return tuple(
            i + 1 for i, name in enumerate(order) if self.conditions.get(name) is False
        )

    def to_dict(self) -> dict:
        psd = None
        if self.factorization is not None or self.psd_numeric is not None:
            psd = {}
            if self.factorization is not None:
                psd.update(
                    factorization_verified=self.factorization.verified,
                    feature_rows=self.factorization.feature_rows,
                    scale=rational_str(self.factorization.scale),
                    factorization_sha256=self.factorization.sha256,
                )
            if self.psd_numeric is not None:
                psd.update(
                    min_eigenvalue=self.psd_numeric.min_eigenvalue,
                    max_eigenvalue=self.psd_numeric.max_eigenvalue,
                    eig_tolerance=self.psd_numeric.tolerance,
                    eig_passed=self.psd_numeric.passed,
                )
        doc = {
            "group": self.group,
            "kernel": self.kernel,
            **self.extra,
            "E": [str(z) for z in self.E],
            "epsilon": rational_str(self.epsilon),
            "N": self.N,
            "F": self.support,
            "sample": {
                "ball_radius": self.sample_spec.ball_radius,
                "random_count": self.sample_spec.random_count,
                "seed": self.sample_spec.seed,
                "max_random_word_length": self.sample_spec.max_random_word_length,
                "points": [str(p) for p in self.points],
            },
            "psd": psd,
            "residuals": {str(z): rational_str(r) for z, r in self.residuals.items()},
            "conditions": self.conditions,
            "failed_conditions": list(self.failed_conditions),
            "verdict": self.verdict,
        }
        if self.n_max is not None:
            doc["n_max"] = self.n_max
        return doc

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _certificate_extra(model: GroupModel, kernel: Kernel) -> dict:
    extra = {"generators": [str(g) for g in model.generators]}
    if isinstance(kernel, TreeKernel):
        extra["gamma0"] = kernel.base_ray_description
    else:
        extra["provider"] = kernel.provider.strategy
        extra["provider_advertised_folner"] = kernel.provider.advertised_folner
    return extra


def verify_property_o(
    model: GroupModel,
    kernel: Kernel,
    E,
    epsilon: Fraction,
    sample_spec: SampleSpec = SampleSpec(),
    n_max: int = 50,
    eig_tolerance: float = DEFAULT_EIG_TOLERANCE,
) -> PropertyOCertificate:
    """Check all three Property O conditions for (E, epsilon) and certify.

    Picks the witness level N by the kernel's parameter search, computes the
    support set F, certifies positive semidefiniteness on the sample both
    exactly and numerically, and evaluates every approximation residual
    exactly.  A failed parameter search yields a FAIL certificate pinned to
    the approximation condition, with residuals at n_max recorded.
    """
    E = tuple(E)
    for z in E:
        model.check_element(z)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    extra = _certificate_extra(model, kernel)

    if isinstance(kernel, TreeKernel):
        m = max(1, 1 + max((model.word_length(z) for z in E), default=0))
        level = find_parameter_tree(m, epsilon)
        support_payload: dict | None = {
            "kind": "ball",
            "radius": kernel.support_radius(level),
        }
        n_max_used = None
    else:
        level = find_parameter_folner(kernel.provider, E, epsilon, n_max)
        n_max_used = n_max
        if level is None:
            residuals = {
                z: abs(1 - kernel.value(model.identity, z, n_max)) for z in E
            }
            return PropertyOCertificate(
                group=model.descriptor,
                kernel=kernel.tag,
                E=E,
                epsilon=epsilon,
                N=None,
                support=None,
                sample_spec=sample_spec,
                points=(),
                factorization=None,
                psd_numeric=None,
                residuals=residuals,
                conditions={
                    "positive_definite": None,
                    "finite_support": None,
                    "approximation": False,
                },
                verdict="FAIL",
                n_max=n_max_used,
                extra=extra,
            )
        f_elements = sorted(kernel.support_elements(level), key=model.sort_key)
        support_payload = {
            "kind": "explicit",
            "size": len(f_elements),
            "elements": [str(v) for v in f_elements],
        }

    points = sample_points(model, sample_spec)
    gram = gram_matrix(kernel, points, level)
    factorization = certify_psd_exact(kernel, points, level, gram=gram)
    numeric = check_psd_numeric(gram, eig_tolerance)
    cond1 = factorization.verified and numeric.passed

    cond2 = True
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            if gram.matrix[i][j] != 0 and not kernel.support_contains(
                model.multiply(model.inverse(x), y), level
            ):
                cond2 = False

    residuals = {z: abs(1 - kernel.value(model.identity, z, level)) for z in E}
    cond3 = all(r < epsilon for r in residuals.values())

    verdict = "PASS" if (cond1 and cond2 and cond3) else "FAIL"
    return PropertyOCertificate(
        group=model.descriptor,
        kernel=kernel.tag,
        E=E,
        epsilon=epsilon,
        N=level,
        support=support_payload,
        sample_spec=sample_spec,
        points=points,
        factorization=factorization,
        psd_numeric=numeric,
        residuals=residuals,
        conditions={
            "positive_definite": cond1,
            "finite_support": cond2,
            "approximation": cond3,
        },
        verdict=verdict,
        n_max=n_max_used,
        extra=extra,
    )
