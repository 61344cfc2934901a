"""Closed-form rate and subpacketization comparisons against the MN baseline."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .errors import InvalidParamsError

# Reference limit quoted for the memory-sharing subpacketization exponent.
MEMSHARE_REFERENCE_LIMIT = 2.8

CSV_COLUMNS = ["K", "q", "k", "R_mn", "R_star", "F_mn", "F_star"]
MEMSHARE_COLUMNS = ["t", "R_ms", "F_ms"]


def mn_rate(K: int, cache_ratio) -> Fraction:
    """K(1 - M/N) / (1 + K M/N)."""
    r = Fraction(cache_ratio)
    return K * (1 - r) / (1 + K * r)


def mn_subpacketization(K: int, t: int) -> int:
    return math.comb(K, t)


def proposed_rate(q: int) -> Fraction:
    return Fraction(q - 1)


def proposed_subpacketization(q: int, k: int) -> int:
    return q ** (k - 1)


@dataclass(frozen=True)
class ComparisonRow:
    K: int
    q: int
    k: int
    R_mn: Fraction
    R_star: Fraction
    F_mn: int
    F_star: int


@dataclass(frozen=True)
class MemShareRow:
    k: int
    t: int
    R_ms: Fraction
    F_ms: int


@dataclass(frozen=True)
class MemShareComparison:
    row: MemShareRow
    F_star: int
    exponent: float
    reference_limit: float = MEMSHARE_REFERENCE_LIMIT


def _check_qk(q: int, k: int, k_min: int = 1) -> None:
    if q < 2:
        raise InvalidParamsError(f"q must be >= 2 (got q={q})")
    if k < k_min:
        raise InvalidParamsError(f"k must be >= {k_min} (got k={k})")


def comparison_row(q: int, k: int) -> ComparisonRow:
    # k = 1 is accepted: the formulas are plain arithmetic even where no design exists
    _check_qk(q, k)
    K = q * k
    return ComparisonRow(
        K=K,
        q=q,
        k=k,
        R_mn=mn_rate(K, Fraction(1, q)),
        R_star=proposed_rate(q),
        F_mn=mn_subpacketization(K, k),
        F_star=proposed_subpacketization(q, k),
    )


def comparison_table(q: int, k_range) -> list[ComparisonRow]:
    return [comparison_row(q, k) for k in k_range]


def rate_ratio(q: int, k: int) -> Fraction:
    """R_mn / R_star, which reduces to k / (k + 1) for every q."""
    _check_qk(q, k)
    row = comparison_row(q, k)
    ratio = row.R_mn / row.R_star
    if ratio != Fraction(k, k + 1):
        raise AssertionError(f"rate ratio {ratio} != {k}/{k + 1}")
    return ratio


def log2_comb(n: int, r: int) -> float:
    return (math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)) / math.log(2)


def subpack_exponent(q: int, k: int) -> float:
    """(1/(kq)) * log2(F_mn / F_star), computed in log space."""
    _check_qk(q, k, k_min=2)
    return (log2_comb(q * k, k) - (k - 1) * math.log2(q)) / (k * q)


def subpack_limit(q: int) -> float:
    """Large-k limit of :func:`subpack_exponent` for fixed q."""
    if q < 2:
        raise InvalidParamsError(f"q must be >= 2 (got q={q})")
    return (1 - 1 / q) * math.log2(q / (q - 1))


def memshare_row(k: int, t: int) -> MemShareRow:
    """Memory sharing between the MN points t and 2k - t at K = 2k users."""
    if not 0 < t < k:
        raise InvalidParamsError(f"memory sharing needs 0 < t < k (got k={k}, t={t})")
    R_ms = Fraction(1, 2) * (Fraction(2 * k - t, 1 + t) + Fraction(t, 1 + 2 * k - t))
    return MemShareRow(k=k, t=t, R_ms=R_ms, F_ms=2 * math.comb(2 * k, t))


def memshare_t(k: int) -> int:
    """t = (2k - 2)/3, the point where the approximate memory-sharing rate equals 1."""
    if (2 * k - 2) % 3:
        raise InvalidParamsError(
            f"t = (2k-2)/3 is not an integer for k={k}; admissible k are 1 mod 3 (4, 7, 10, ...)"
        )
    t = (2 * k - 2) // 3
    if t <= 0:
        raise InvalidParamsError(f"t = (2k-2)/3 = {t} must be positive; admissible k are 4, 7, 10, ...")
    return t


def memshare_comparison(k: int) -> MemShareComparison:
    t = memshare_t(k)
    row = memshare_row(k, t)
    F_star = proposed_subpacketization(2, k)
    exponent = (math.log(2) + math.lgamma(2 * k + 1) - math.lgamma(t + 1) - math.lgamma(2 * k - t + 1))
    exponent = (exponent / math.log(2) - (k - 1)) / k
    return MemShareComparison(row=row, F_star=F_star, exponent=exponent)


def memshare_entropy_limit() -> float:
    """2 H(1/3) - 1: what the binomial entropy estimate gives for the memshare exponent."""
    h = -(1 / 3) * math.log2(1 / 3) - (2 / 3) * math.log2(2 / 3)
    return 2 * h - 1


def format_rate(rate: Fraction) -> str:
    """Exact decimal when it fits in three places, otherwise rounded to two."""
    rate = Fraction(rate)
    if rate.denominator == 1:
        return str(rate.numerator)
    exact = Decimal(rate.numerator) / Decimal(rate.denominator)
    if (rate * 1000).denominator == 1:
        return f"{exact.normalize():f}"
    return f"{exact.quantize(Decimal('0.01'))}"


def _memshare_cells(row: ComparisonRow):
    try:
        t = memshare_t(row.k)
    except InvalidParamsError:
        return None
    return memshare_row(row.k, t)


def render_table(rows, memshare: bool = False) -> str:
    """Transposed table: one line per quantity, one column per K."""
    lines = [
        ("K", [str(r.K) for r in rows]),
        ("R^MN", [format_rate(r.R_mn) for r in rows]),
        ("R*", [format_rate(r.R_star) for r in rows]),
        ("F^MN", [str(r.F_mn) for r in rows]),
        ("F*", [str(r.F_star) for r in rows]),
    ]
    if memshare:
        ms = [_memshare_cells(r) for r in rows]
        lines += [
            ("t", [str(m.t) if m else "-" for m in ms]),
            ("R^MN,MS", [format_rate(m.R_ms) if m else "-" for m in ms]),
            ("F^MN,MS", [str(m.F_ms) if m else "-" for m in ms]),
        ]
    head = max(len(name) for name, _ in lines)
    width = max(len(c) for _, cells in lines for c in cells)
    return "\n".join(
        f"{name:<{head}}  " + "  ".join(f"{c:>{width}}" for c in cells) for name, cells in lines
    )


def to_csv(rows, memshare: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + (MEMSHARE_COLUMNS if memshare else []))
    for r in rows:
        cells = [r.K, r.q, r.k, str(r.R_mn), str(r.R_star), r.F_mn, r.F_star]
        if memshare:
            m = _memshare_cells(r)
            cells += [m.t, str(m.R_ms), m.F_ms] if m else ["", "", ""]
        writer.writerow(cells)
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Read :func:`to_csv` output back into ints and Fractions (blank cells become None)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for key, value in rec.items():
            if value == "":
                row[key] = None
            elif key.startswith("R_"):
                row[key] = Fraction(value)
            else:
                row[key] = int(value)
        out.append(row)
    return out
