"""XOR delivery schedules and their coverage accounting."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .design import ResolvableDesign, intersect_point
from .errors import InconsistentInputError
from .schemes import MN, PROPOSED, CachingScheme


@dataclass(frozen=True)
class XorEquation:
    """One transmission: XOR over terms of subfile ``s`` of the file user ``u`` wants."""

    terms: tuple[tuple[int, int], ...]

    @property
    def users(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.terms)

    def render(self, scheme: CachingScheme) -> str:
        parts = []
        for u, s in self.terms:
            user = scheme.user_labels[u]
            user = user[2:] if user.startswith("U_") else f"{{{user}}}"
            parts.append(f"W_{{d_{user},{scheme.subfile_labels[s]}}}")
        return " ⊕ ".join(parts)


@dataclass(frozen=True)
class DeliverySchedule:
    scheme: CachingScheme
    equations: tuple[XorEquation, ...]

    @property
    def rate(self) -> Fraction:
        """Transmitted volume in units of files: one subfile per equation."""
        return Fraction(len(self.equations), self.scheme.F_s)

    @cached_property
    def term_users(self) -> np.ndarray:
        arr = np.array([eq.users for eq in self.equations], dtype=np.intp)
        arr.setflags(write=False)
        return arr

    @cached_property
    def term_subfiles(self) -> np.ndarray:
        arr = np.array([[s for _, s in eq.terms] for eq in self.equations], dtype=np.intp)
        arr.setflags(write=False)
        return arr

    def listing(self) -> str:
        return "\n".join(
            f"{n + 1:>4}: {eq.render(self.scheme)}" for n, eq in enumerate(self.equations)
        )


def empty_intersection(labels, q: int) -> bool:
    """True iff blocks B_{0,l_0}, ..., B_{k-1,l_{k-1}} share no point."""
    return sum(labels[:-1]) % q != labels[-1] % q


def schedule_proposed(scheme: CachingScheme, design: ResolvableDesign | None = None) -> DeliverySchedule:
    """One equation per label tuple whose k blocks have empty common intersection.

    Term alpha serves user B_{alpha,l_alpha} with the point shared by the other
    k-1 blocks; tuples are visited in lexicographic order.
    """
    if scheme.kind != PROPOSED:
        raise InconsistentInputError(f"schedule_proposed needs a proposed scheme, got {scheme.kind!r}")
    if design is None:
        design = scheme.design
    if design.params != scheme.params or scheme.cached != tuple(
        design.blocks[i, l] for i in range(design.params.k) for l in range(design.params.q)
    ):
        raise InconsistentInputError("scheme was not built from this design")

    q, k = design.params.q, design.params.k
    equations = []
    for labels in itertools.product(range(q), repeat=k):
        if not empty_intersection(labels, q):
            continue
        terms = []
        for alpha in range(k):
            picks = [(i, labels[i]) for i in range(k) if i != alpha]
            terms.append((alpha * q + labels[alpha], intersect_point(design, picks)))
        equations.append(XorEquation(tuple(terms)))
    return DeliverySchedule(scheme, tuple(equations))


def schedule_mn(scheme: CachingScheme) -> DeliverySchedule:
    if scheme.kind != MN:
        raise InconsistentInputError(f"schedule_mn needs an MN scheme, got {scheme.kind!r}")
    index = {subset: s for s, subset in enumerate(scheme.subsets)}
    equations = []
    for group in itertools.combinations(range(scheme.K), scheme.t + 1):
        terms = tuple((u, index[tuple(v for v in group if v != u)]) for u in group)
        equations.append(XorEquation(terms))
    return DeliverySchedule(scheme, tuple(equations))


def build_schedule(scheme: CachingScheme) -> DeliverySchedule:
    if scheme.kind == PROPOSED:
        return schedule_proposed(scheme)
    return schedule_mn(scheme)


def expected_participation(scheme: CachingScheme) -> int:
    """Equations each user should appear in: one per missing subfile."""
    if scheme.kind == PROPOSED:
        q, k = scheme.params.q, scheme.params.k
        return q ** (k - 1) - q ** (k - 2)
    return math.comb(scheme.K - 1, scheme.t)


def expected_equation_count(scheme: CachingScheme) -> int:
    if scheme.kind == PROPOSED:
        q, k = scheme.params.q, scheme.params.k
        return q ** (k - 1) * (q - 1)
    return math.comb(scheme.K, scheme.t + 1)


@dataclass
class UserCoverage:
    user: int
    participation: int
    recovered: frozenset
    complete: bool  # recovered == complement of cache
    distinct: bool  # no subfile recovered twice
    count_ok: bool  # participation matches the counting argument


@dataclass
class CoverageReport:
    users: list[UserCoverage]
    equation_count: int
    expected_equations: int
    rate: Fraction
    # (equation, term) pairs where the target is already cached or side information is missing
    undecodable: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.undecodable
            and self.equation_count == self.expected_equations
            and all(u.complete and u.distinct and u.count_ok for u in self.users)
        )


def verify_schedule(scheme: CachingScheme, schedule: DeliverySchedule) -> CoverageReport:
    """Tally what each user can decode from the schedule. Violations are reported, not raised."""
    recovered = [[] for _ in range(scheme.K)]
    undecodable = []
    for e, eq in enumerate(schedule.equations):
        for a, (u, s) in enumerate(eq.terms):
            side_ok = all(
                s2 in scheme.cached[u] for b, (_, s2) in enumerate(eq.terms) if b != a
            )
            if s in scheme.cached[u] or not side_ok:
                undecodable.append((e, a))
            recovered[u].append(s)

    want = expected_participation(scheme)
    everything = frozenset(range(scheme.F_s))
    users = []
    for u in range(scheme.K):
        got = frozenset(recovered[u])
        users.append(
            UserCoverage(
                user=u,
                participation=len(recovered[u]),
                recovered=got,
                complete=got == everything - scheme.cached[u],
                distinct=len(got) == len(recovered[u]),
                count_ok=len(recovered[u]) == want,
            )
        )
    return CoverageReport(
        users=users,
        equation_count=len(schedule.equations),
        expected_equations=expected_equation_count(scheme),
        rate=schedule.rate,
        undecodable=undecodable,
    )
