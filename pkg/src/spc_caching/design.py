"""
Resolvable block designs built from the (k, k-1) single parity check code over Z_q.

Points are the q^(k-1) codewords (columns of T), and block B_{i,l} holds the
columns whose i-th coordinate equals l. Everything here is 0-based: class
indices run over 0..k-1, labels over 0..q-1, points over 0..q^(k-1)-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType

import numpy as np

from .errors import InconsistentInputError, InvalidParamsError, InvalidPicksError


@dataclass(frozen=True)
class SchemeParams:
    """Cache-ratio denominator ``q`` (M/N = 1/q) and users per parallel class ``k``."""

    q: int
    k: int

    def __post_init__(self):
        for name in ("q", "k"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidParamsError(f"{name} must be an integer, got {value!r}")
        if self.q < 2:
            raise InvalidParamsError(f"q must be ≥ 2 (got q={self.q})")
        if self.k < 2:
            raise InvalidParamsError(f"k must be ≥ 2 (got k={self.k})")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "k", int(self.k))

    @property
    def K(self) -> int:
        return self.q * self.k

    @property
    def F_s(self) -> int:
        return self.q ** (self.k - 1)

    @property
    def block_size(self) -> int:
        return self.q ** (self.k - 2)


def spc_generator(params: SchemeParams) -> np.ndarray:
    """Generator matrix [I_{k-1} | 1] of the SPC code."""
    k = params.k
    return np.hstack([np.eye(k - 1, dtype=np.int64), np.ones((k - 1, 1), dtype=np.int64)])


@dataclass(frozen=True)
class SpcCodebook:
    params: SchemeParams
    T: tuple[tuple[int, ...], ...]

    @cached_property
    def matrix(self) -> np.ndarray:
        arr = np.array(self.T, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @property
    def codewords(self) -> list[tuple[int, ...]]:
        return [tuple(col) for col in zip(*self.T)]


def enumerate_codewords(params: SchemeParams) -> SpcCodebook:
    """Return the k x q^(k-1) matrix T whose columns are all SPC codewords.

    Message vectors are taken in lexicographic order with the first coordinate
    most significant, so column j is the codeword of the base-q digits of j.
    """
    q, k = params.q, params.k
    G = spc_generator(params)
    messages = np.array(list(itertools.product(range(q), repeat=k - 1)), dtype=np.int64)
    codewords = (messages @ G) % q
    T = tuple(tuple(int(x) for x in row) for row in codewords.T)
    return SpcCodebook(params, T)


@dataclass(frozen=True)
class ResolvableDesign:
    codebook: SpcCodebook
    blocks: MappingProxyType  # (class, label) -> frozenset of points

    def __hash__(self):
        return hash(self.codebook)

    @property
    def params(self) -> SchemeParams:
        return self.codebook.params

    @property
    def points(self) -> range:
        return range(self.params.F_s)

    @property
    def parallel_classes(self) -> list[list[frozenset]]:
        q, k = self.params.q, self.params.k
        return [[self.blocks[i, l] for l in range(q)] for i in range(k)]

    def block(self, i: int, l: int) -> frozenset:
        return self.blocks[i, l]

    def incidence(self) -> np.ndarray:
        """Point-by-block incidence matrix, blocks in class-major order."""
        q, k = self.params.q, self.params.k
        N = np.zeros((self.params.F_s, k * q), dtype=np.uint8)
        for i in range(k):
            for l in range(q):
                N[sorted(self.blocks[i, l]), i * q + l] = 1
        return N


def build_design(codebook: SpcCodebook) -> ResolvableDesign:
    q, k = codebook.params.q, codebook.params.k
    T = codebook.matrix
    blocks = {}
    for i in range(k):
        for l in range(q):
            blocks[i, l] = frozenset(int(j) for j in np.flatnonzero(T[i] == l))
    design = ResolvableDesign(codebook, MappingProxyType(blocks))
    check_resolvable(design)
    return design


def design_for(q: int, k: int) -> ResolvableDesign:
    return build_design(enumerate_codewords(SchemeParams(q, k)))


def check_resolvable(design: ResolvableDesign) -> None:
    """Raise if a block has the wrong size or a class fails to partition the points."""
    params = design.params
    everything = frozenset(design.points)
    for i, cls in enumerate(design.parallel_classes):
        seen = set()
        for l, block in enumerate(cls):
            if len(block) != params.block_size:
                raise InconsistentInputError(
                    f"block B[{i},{l}] has {len(block)} points, expected {params.block_size}"
                )
            if seen & block:
                raise InconsistentInputError(f"blocks of class {i} overlap")
            seen |= block
        if seen != everything:
            raise InconsistentInputError(f"class {i} does not cover the point set")


def _point_of_message(u, q: int) -> int:
    index = 0
    for digit in u:
        index = index * q + digit
    return index


def intersect_point(design: ResolvableDesign, picks) -> int:
    """The unique point shared by k-1 blocks taken from distinct parallel classes.

    ``picks`` is a sequence of (class, label) pairs. The point is found by
    solving for the message vector directly; at most one message coordinate is
    free, and it is fixed by the parity class.
    """
    q, k = design.params.q, design.params.k
    picks = [(int(i), int(l)) for i, l in picks]
    if len(picks) != k - 1:
        raise InvalidPicksError(f"need exactly {k - 1} picks, got {len(picks)}")
    classes = [i for i, _ in picks]
    if len(set(classes)) != len(classes):
        raise InvalidPicksError(f"class indices must be distinct, got {classes}")
    for i, l in picks:
        if not 0 <= i < k:
            raise InvalidPicksError(f"class index {i} outside 0..{k - 1}")
        if not 0 <= l < q:
            raise InvalidPicksError(f"block label {l} outside 0..{q - 1}")

    label = dict(picks)
    parity = k - 1
    u = [label.get(i) for i in range(k - 1)]
    if parity in label:
        missing = u.index(None)
        u[missing] = (label[parity] - sum(x for x in u if x is not None)) % q
    point = _point_of_message(u, q)

    T = design.codebook.matrix
    if any(T[i, point] != l for i, l in picks):
        raise AssertionError(f"solved point {point} is not in every picked block {picks}")
    return point
