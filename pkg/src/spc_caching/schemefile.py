"""Versioned JSON scheme files.

Placement rows are stored as 0/1 strings so files diff cleanly. Loading
rebuilds the scheme from its parameters and rejects the file unless every
stored table (T, placement, labels) matches the rebuild exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .design import SchemeParams
from .errors import CachingError, SchemeFileError
from .schemes import MN, PROPOSED, CachingScheme, build_mn_scheme, build_proposed_scheme

FORMAT_VERSION = 1


def scheme_to_dict(scheme: CachingScheme) -> dict:
    params = {
        "K": scheme.K,
        "N": scheme.N,
        "ratio": {"num": scheme.cache_ratio.numerator, "den": scheme.cache_ratio.denominator},
    }
    doc = {"format_version": FORMAT_VERSION, "scheme_kind": scheme.kind, "parameters": params}
    if scheme.kind == PROPOSED:
        params["q"] = scheme.params.q
        params["k"] = scheme.params.k
        doc["T"] = [list(row) for row in scheme.design.codebook.T]
    else:
        params["t"] = scheme.t
    doc["F_s"] = scheme.F_s
    doc["placement"] = ["".join("1" if x else "0" for x in row) for row in scheme.placement]
    doc["user_labels"] = list(scheme.user_labels)
    doc["subfile_labels"] = list(scheme.subfile_labels)
    return doc


def dumps(scheme: CachingScheme) -> str:
    return json.dumps(scheme_to_dict(scheme), indent=2) + "\n"


def scheme_from_dict(doc: dict) -> CachingScheme:
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise SchemeFileError(f"unsupported format_version {version!r}")
        kind = doc["scheme_kind"]
        p = doc["parameters"]
        ratio = Fraction(int(p["ratio"]["num"]), int(p["ratio"]["den"]))
        N = int(p["N"])
        if kind == PROPOSED:
            scheme = build_proposed_scheme(SchemeParams(int(p["q"]), int(p["k"])), N)
        elif kind == MN:
            scheme = build_mn_scheme(int(p["K"]), ratio, N)
        else:
            raise SchemeFileError(f"unknown scheme_kind {kind!r}")
        stored = doc
    except SchemeFileError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError, CachingError) as exc:
        raise SchemeFileError(f"malformed scheme file: {exc}") from exc

    rebuilt = scheme_to_dict(scheme)
    for key in ("parameters", "F_s", "T", "placement", "user_labels", "subfile_labels"):
        if stored.get(key) != rebuilt.get(key):
            raise SchemeFileError(f"scheme file field {key!r} disagrees with its parameters")
    return scheme


def loads(text: str) -> CachingScheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeFileError(f"scheme file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemeFileError("scheme file must hold a JSON object")
    return scheme_from_dict(doc)


def save(scheme: CachingScheme, path) -> Path:
    path = Path(path)
    path.write_text(dumps(scheme))
    return path


def load(path) -> CachingScheme:
    return loads(Path(path).read_text())
