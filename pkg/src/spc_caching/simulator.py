"""
Byte-exact simulation of placement, XOR delivery and per-user decoding.

Files are split into F_s equal subfiles after zero padding to a multiple of
F_s bytes. Each user decodes a transmission by XOR-ing away the other terms,
which it must read out of its own cache.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .delivery import DeliverySchedule, build_schedule, schedule_proposed
from .design import ResolvableDesign
from .errors import InconsistentInputError, InvalidParamsError, SweepTooLargeError
from .schemes import PROPOSED, CachingScheme, DemandVector

MAX_SWEEP_RUNS = 10**6


@dataclass(frozen=True, eq=False)
class FileCorpus:
    N: int
    F: int  # original file length in bytes
    F_s: int
    data: np.ndarray  # (N, padded_len) uint8
    seed: int | None = None

    @property
    def padded_len(self) -> int:
        return self.data.shape[1]

    @property
    def subfile_len(self) -> int:
        return self.padded_len // self.F_s

    @property
    def padding(self) -> int:
        return self.padded_len - self.F

    @property
    def subfiles(self) -> np.ndarray:
        """View of shape (N, F_s, subfile_len)."""
        return self.data.reshape(self.N, self.F_s, self.subfile_len)

    @property
    def files(self) -> list[bytes]:
        return [row[: self.F].tobytes() for row in self.data]


def make_corpus(N: int, F: int, seed: int, F_s: int) -> FileCorpus:
    if N < 1 or F < 1 or F_s < 1:
        raise InvalidParamsError(f"need N >= 1, F >= 1, F_s >= 1 (got N={N}, F={F}, F_s={F_s})")
    padded = -(-F // F_s) * F_s
    rng = np.random.default_rng(seed)
    data = np.zeros((N, padded), dtype=np.uint8)
    data[:, :F] = rng.integers(0, 256, size=(N, F), dtype=np.uint8)
    data.setflags(write=False)
    return FileCorpus(N=N, F=F, F_s=F_s, data=data, seed=seed)


def corpus_from_files(files, F_s: int) -> FileCorpus:
    """Wrap caller-supplied byte strings of equal length."""
    files = [bytes(f) for f in files]
    if not files or len({len(f) for f in files}) != 1 or not files[0]:
        raise InvalidParamsError("files must be non-empty byte strings of equal length")
    F = len(files[0])
    padded = -(-F // F_s) * F_s
    data = np.zeros((len(files), padded), dtype=np.uint8)
    for n, f in enumerate(files):
        data[n, :F] = np.frombuffer(f, dtype=np.uint8)
    data.setflags(write=False)
    return FileCorpus(N=len(files), F=F, F_s=F_s, data=data)


def populate_caches(scheme: CachingScheme, corpus: FileCorpus) -> np.ndarray:
    """Per-user cache contents, shape (K, N, F_s, subfile_len); uncached slots are zero."""
    mask = scheme.placement[:, None, :, None]
    return np.where(mask, corpus.subfiles[None], 0).astype(np.uint8)


@dataclass(eq=False)
class SimulationRun:
    scheme: CachingScheme
    schedule: DeliverySchedule
    corpus: FileCorpus
    demands: DemandVector
    cache_contents: np.ndarray  # (K, N, F_s, L)
    transmissions: np.ndarray  # (E, L), one row per equation
    decoded: list[bytes]
    measured_rate: Fraction
    error_count: int
    failed_users: list[int] = field(default_factory=list)

    @property
    def transmitted_bytes(self) -> int:
        return int(self.transmissions.size)

    def transmission_log(self) -> list[bytes]:
        return [row.tobytes() for row in self.transmissions]

    def hex_dump(self) -> str:
        return "\n".join(f"{e:>5} {row.hex()}" for e, row in enumerate(self.transmission_log()))

    def cached_bytes(self, user: int) -> int:
        return len(self.scheme.cached[user]) * self.corpus.N * self.corpus.subfile_len


def _check_inputs(scheme, corpus, demands) -> DemandVector:
    if corpus.F_s != scheme.F_s:
        raise InconsistentInputError(
            f"corpus is split into {corpus.F_s} subfiles, scheme needs F_s={scheme.F_s}"
        )
    if corpus.N != scheme.N:
        raise InconsistentInputError(f"corpus has N={corpus.N} files, scheme expects N={scheme.N}")
    if not isinstance(demands, DemandVector):
        demands = DemandVector(tuple(demands))
    demands.validate(scheme)
    return demands


def run_simulation(
    scheme: CachingScheme,
    design: ResolvableDesign | None,
    corpus: FileCorpus,
    demands,
    schedule: DeliverySchedule | None = None,
    caches: np.ndarray | None = None,
) -> SimulationRun:
    """Transmit the schedule for ``demands`` and let every user decode.

    ``schedule`` and ``caches`` may be passed in to reuse them across demand
    vectors; both depend only on the scheme (and corpus, for caches).
    """
    demands = _check_inputs(scheme, corpus, demands)
    if schedule is None:
        if scheme.kind == PROPOSED:
            schedule = schedule_proposed(scheme, design)
        else:
            schedule = build_schedule(scheme)
    elif schedule.scheme.cached != scheme.cached:
        raise InconsistentInputError("schedule belongs to a different scheme")
    if caches is None:
        caches = populate_caches(scheme, corpus)

    K = scheme.K
    d = np.asarray(demands.demands, dtype=np.intp)
    U = schedule.term_users  # (E, w)
    S = schedule.term_subfiles  # (E, w)
    D = d[U]

    # server side: XOR of the demanded subfiles named by each equation
    transmissions = np.bitwise_xor.reduce(corpus.subfiles[D, S], axis=1)

    # user side: term a XORs out terms b != a using its own cache
    w = U.shape[1]
    other = ~np.eye(w, dtype=bool)
    side = caches[U[:, :, None], D[:, None, :], S[:, None, :]]  # (E, a, b, L)
    side = np.where(other[None, :, :, None], side, 0)
    recovered = transmissions[:, None, :] ^ np.bitwise_xor.reduce(side, axis=2)
    has_side = scheme.placement[U[:, :, None], S[:, None, :]] | ~other[None]
    decodable = has_side.all(axis=2) & ~scheme.placement[U, S]

    out = caches[np.arange(K), d].copy()  # (K, F_s, L)
    known = scheme.placement.copy()
    out[U[decodable], S[decodable]] = recovered[decodable]
    known[U[decodable], S[decodable]] = True

    F = corpus.F
    rebuilt = out.reshape(K, -1)[:, :F]
    wanted = corpus.data[d, :F]
    ok = known.all(axis=1) & (rebuilt == wanted).all(axis=1)
    failed = [int(u) for u in np.flatnonzero(~ok)]

    return SimulationRun(
        scheme=scheme,
        schedule=schedule,
        corpus=corpus,
        demands=demands,
        cache_contents=caches,
        transmissions=transmissions,
        decoded=[row.tobytes() for row in rebuilt],
        measured_rate=Fraction(transmissions.size, corpus.padded_len),
        error_count=len(failed),
        failed_users=failed,
    )


@dataclass
class SweepSummary:
    runs: int = 0
    total_errors: int = 0
    failures: list[tuple[int, ...]] = field(default_factory=list)
    rates: set = field(default_factory=set)
    transmitted_bytes: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return self.total_errors == 0


def exhaustive_demands(K: int, N: int, limit: int = MAX_SWEEP_RUNS):
    runs = N**K
    if runs > limit:
        raise SweepTooLargeError(f"exhaustive sweep needs N^K = {N}^{K} = {runs} runs (limit {limit})")
    return itertools.product(range(N), repeat=K)


def random_demands(K: int, N: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield tuple(int(x) for x in rng.integers(0, N, size=K))


def sweep(scheme: CachingScheme, corpus: FileCorpus, demand_vectors, schedule=None) -> SweepSummary:
    """Simulate every demand vector, reusing one schedule and one cache fill."""
    if schedule is None:
        schedule = build_schedule(scheme)
    caches = populate_caches(scheme, corpus)
    summary = SweepSummary()
    for demands in demand_vectors:
        run = run_simulation(scheme, None, corpus, demands, schedule=schedule, caches=caches)
        summary.runs += 1
        summary.total_errors += run.error_count
        summary.rates.add(run.measured_rate)
        summary.transmitted_bytes.add(run.transmitted_bytes)
        if run.error_count:
            summary.failures.append(tuple(run.demands))
    return summary


def nominal_bytes(schedule: DeliverySchedule, corpus: FileCorpus) -> int:
    return len(schedule.equations) * corpus.subfile_len


def cache_budget_bytes(scheme: CachingScheme, corpus: FileCorpus) -> Fraction:
    """(M/N) * N * padded F: the byte budget each user's cache is allowed."""
    return scheme.cache_ratio * corpus.N * corpus.padded_len

