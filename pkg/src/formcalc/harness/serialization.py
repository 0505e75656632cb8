"""JSON wire formats shared by the files, the service, and the CLI.

Complex scalars serialize as [re, im] pairs; a matrix is
{"rows": n, "cols": m, "data": [[re, im], ...]} with the pairs in row-major
order.  Infinite entropy serializes as the string "inf".  Non-finite matrix
entries are rejected on load.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from ..hermlin import ValidationError


def complex_to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_payload(M) -> dict[str, Any]:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim {M.ndim}")
    rows, cols = M.shape
    return {
        "rows": int(rows),
        "cols": int(cols),
        "data": [complex_to_pair(z) for z in M.reshape(-1)],  # row-major
    }


def payload_to_matrix(payload) -> np.ndarray:
    if not isinstance(payload, dict):
        raise ValidationError(f"matrix payload must be an object, got {type(payload).__name__}")
    try:
        rows = int(payload["rows"])
        cols = int(payload["cols"])
        data = payload["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix payload: {exc}") from exc
    if rows < 0 or cols < 0:
        raise ValidationError(f"negative matrix shape ({rows}, {cols})")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ValidationError(
            f"matrix data length {len(data) if isinstance(data, list) else '?'} "
            f"does not match {rows}x{cols}"
        )
    out = np.empty(rows * cols, dtype=complex)
    for k, entry in enumerate(data):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
        ):
            raise ValidationError(f"matrix entry {k} is not a [re, im] pair: {entry!r}")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValidationError(f"matrix entry {k} is not finite: {entry!r}")
        out[k] = complex(re, im)
    return out.reshape((rows, cols))


def extended_real_to_json(value: float):
    if math.isinf(value):
        return "inf"
    return float(value)


def extended_real_from_json(value) -> float:
    if value == "inf":
        return math.inf
    return float(value)


def load_matrix(path) -> np.ndarray:
    """Read a matrix from a JSON file, validating the wire format."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed JSON in {path}: {exc}") from exc
    return payload_to_matrix(payload)


def save_matrix(M, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_payload(M), fh, indent=2)
        fh.write("\n")


def channel_to_payload(channel) -> dict[str, Any]:
    from ..channels import KrausChannel, LinearMapOnAlgebra

    if isinstance(channel, KrausChannel):
        return {"kind": "kraus", "kraus": [matrix_to_payload(K) for K in channel.kraus]}
    if isinstance(channel, LinearMapOnAlgebra):
        return {
            "kind": "superoperator",
            "source_dim": channel.source_dim,
            "target_dim": channel.target_dim,
            "superoperator": matrix_to_payload(channel.superoperator_matrix),
            "adjoint_preserving": channel.adjoint_preserving,
        }
    raise ValidationError(f"cannot serialize channel of type {type(channel).__name__}")


def payload_to_channel(payload):
    from ..channels import LinearMapOnAlgebra, from_kraus

    if not isinstance(payload, dict) or "kind" not in payload:
        raise ValidationError("channel payload must be an object with a 'kind' field")
    kind = payload["kind"]
    if kind == "kraus":
        kraus = payload.get("kraus")
        if not isinstance(kraus, list) or not kraus:
            raise ValidationError("kraus channel payload needs a nonempty 'kraus' list")
        return from_kraus([payload_to_matrix(K) for K in kraus])
    if kind == "superoperator":
        try:
            source = int(payload["source_dim"])
            target = int(payload["target_dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed superoperator payload: {exc}") from exc
        S = payload_to_matrix(payload["superoperator"])
        if S.shape != (target * target, source * source):
            raise ValidationError(
                f"superoperator shape {S.shape} does not match dims "
                f"({target}^2, {source}^2)"
            )
        return LinearMapOnAlgebra(
            source, target, S, bool(payload.get("adjoint_preserving", True))
        )
    raise ValidationError(f"unknown channel kind {kind!r}")


def save_report(report: dict, path) -> None:
    """Write a suite report; key order is fixed so identical configurations
    produce byte-identical files apart from the timing section."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
