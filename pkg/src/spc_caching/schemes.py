"""Placement for the SPC-design scheme and the Maddah-Ali-Niesen baseline."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .design import ResolvableDesign, SchemeParams, build_design, enumerate_codewords
from .errors import InconsistentInputError, InvalidParamsError

PROPOSED = "proposed"
MN = "mn"


def _set_label(points) -> str:
    members = [p + 1 for p in sorted(points)]
    sep = "" if all(p < 10 for p in members) else ","
    return sep.join(str(p) for p in members)


@dataclass(frozen=True)
class CachingScheme:
    """Users, subfiles and which subfiles each user caches (same for every file).

    ``cached[u]`` is the set of subfile indices held by user ``u``. For the
    proposed scheme users are blocks in class-major order (user ``i*q + l`` is
    B_{i,l}); for MN, subfiles are the t-subsets of users in lexicographic order.
    """

    kind: str
    K: int
    N: int
    cache_ratio: Fraction
    F_s: int
    cached: tuple[frozenset, ...]
    user_labels: tuple[str, ...]
    subfile_labels: tuple[str, ...]
    params: SchemeParams | None = None
    design: ResolvableDesign | None = None
    t: int | None = None
    subsets: tuple[tuple[int, ...], ...] | None = None

    @cached_property
    def placement(self) -> np.ndarray:
        """K x F_s boolean incidence; entry (u, s) is set iff user u caches subfile s."""
        Z = np.zeros((self.K, self.F_s), dtype=bool)
        for u, subs in enumerate(self.cached):
            Z[u, sorted(subs)] = True
        Z.setflags(write=False)
        return Z

    @property
    def row_weight(self) -> int:
        return len(self.cached[0])

    def user_index(self, i: int, l: int) -> int:
        """User index of block B_{i,l} (proposed scheme only)."""
        if self.params is None:
            raise InconsistentInputError("user_index(i, l) needs a proposed-kind scheme")
        return i * self.params.q + l

    def with_files(self, N: int) -> CachingScheme:
        _check_file_count(N)
        fields = {f: getattr(self, f) for f in self.__dataclass_fields__}
        fields["N"] = N
        return CachingScheme(**fields)

    def memory_ok(self) -> bool:
        return all(Fraction(len(s), self.F_s) == self.cache_ratio for s in self.cached)


@dataclass(frozen=True)
class DemandVector:
    demands: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))

    def __len__(self):
        return len(self.demands)

    def __iter__(self):
        return iter(self.demands)

    def __getitem__(self, u):
        return self.demands[u]

    def validate(self, scheme: CachingScheme) -> None:
        if len(self.demands) != scheme.K:
            raise InconsistentInputError(
                f"demand vector has {len(self.demands)} entries, scheme has K={scheme.K} users"
            )
        bad = [d for d in self.demands if not 0 <= d < scheme.N]
        if bad:
            raise InconsistentInputError(f"demanded file(s) {bad} outside 0..{scheme.N - 1}")


def _check_file_count(N) -> None:
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidParamsError(f"N must be an integer >= 1 (got {N!r})")


def build_proposed_scheme(params: SchemeParams, N: int) -> CachingScheme:
    _check_file_count(N)
    design = build_design(enumerate_codewords(params))
    q, k = params.q, params.k
    cached, labels = [], []
    for i in range(k):
        for l in range(q):
            block = design.blocks[i, l]
            cached.append(block)
            labels.append(f"U_{{{_set_label(block)}}}")
    scheme = CachingScheme(
        kind=PROPOSED,
        K=params.K,
        N=int(N),
        cache_ratio=Fraction(1, q),
        F_s=params.F_s,
        cached=tuple(cached),
        user_labels=tuple(labels),
        subfile_labels=tuple(str(s + 1) for s in range(params.F_s)),
        params=params,
        design=design,
    )
    if not scheme.memory_ok():
        raise AssertionError("proposed placement violates the memory constraint")
    return scheme


def mn_t(K: int, cache_ratio) -> int:
    """t = K*M/N, required to be an integer with 0 < t < K."""
    ratio = Fraction(cache_ratio)
    if not 0 < ratio < 1:
        raise InvalidParamsError(f"cache ratio M/N must lie strictly between 0 and 1 (got {ratio})")
    t = K * ratio
    if t.denominator != 1:
        raise InvalidParamsError(f"t = K*M/N = {t} must be an integer")
    return int(t)


def build_mn_scheme(K: int, cache_ratio, N: int) -> CachingScheme:
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or K < 2:
        raise InvalidParamsError(f"K must be an integer >= 2 (got {K!r})")
    _check_file_count(N)
    K = int(K)
    t = mn_t(K, cache_ratio)
    subsets = tuple(itertools.combinations(range(K), t))
    cached = [[] for _ in range(K)]
    for s, subset in enumerate(subsets):
        for u in subset:
            cached[u].append(s)
    scheme = CachingScheme(
        kind=MN,
        K=K,
        N=int(N),
        cache_ratio=Fraction(cache_ratio),
        F_s=math.comb(K, t),
        cached=tuple(frozenset(c) for c in cached),
        user_labels=tuple(str(u + 1) for u in range(K)),
        subfile_labels=tuple(_set_label(subset) for subset in subsets),
        t=t,
        subsets=subsets,
    )
    if not scheme.memory_ok():
        raise AssertionError("MN placement violates the memory constraint")
    return scheme
