import csv
import json
import logging
import os

import numpy as np

from ..constants import CODE_FILE_FORMAT, CODE_FILE_VERSION
from ..errors import CorruptCodeFileError, LatticedexError
from ..numberfield.field import field_from_descriptor
from ..numberfield.ideal import Ideal
from ..util import canonical_json
from .index_code import IndexCode


def code_to_dict(code: IndexCode) -> dict:
    field = code.field
    embedded = code.embed(code.representatives)
    return {
        "format": CODE_FILE_FORMAT,
        "version": CODE_FILE_VERSION,
        "field": {
            **field.descriptor(),
            "degree": field.degree,
            "signature": list(field.signature),
            "discriminant": field.discriminant,
            "integral_basis": list(field.integral_basis),
        },
        "primes": [prime.to_dict() for prime in code.primes],
        "modulus": code.modulus.to_dict(),
        "idempotents": [[int(c) for c in e] for e in code.idempotents],
        "alphabet_sizes": list(code.alphabet_sizes),
        "energy_radius_factor": code.energy_radius_factor,
        "gamma": code.gamma,
        "points": [
            {
                "message": t,
                "labels": [int(l) for l in code.labels[t]],
                "coords": [int(c) for c in code.representatives[t]],
                "embedded": [float(v) for v in embedded[t]],
            }
            for t in range(code.size)
        ],
    }


def code_from_dict(payload) -> IndexCode:
    """Rebuild an IndexCode, re-validating the CRT map and representatives."""
    try:
        if payload.get("format") != CODE_FILE_FORMAT:
            raise CorruptCodeFileError(f"Unknown code file format: {payload.get('format')}")
        if payload.get("version") != CODE_FILE_VERSION:
            raise CorruptCodeFileError(f"Unsupported code file version: {payload.get('version')}")
        field = field_from_descriptor(payload["field"])
        primes = [Ideal.from_dict(field, entry) for entry in payload["primes"]]
        points = sorted(payload["points"], key=lambda point: point["message"])
        if [point["message"] for point in points] != list(range(len(points))):
            raise CorruptCodeFileError("Point messages are not a contiguous range")
        representatives = np.array([point["coords"] for point in points], dtype=np.int64)
        code = IndexCode(field, primes, payload["idempotents"], representatives,
                         payload.get("energy_radius_factor", 1.0))
    except CorruptCodeFileError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, LatticedexError) as e:
        raise CorruptCodeFileError(f"Invalid code file: {e}") from e

    if list(code.alphabet_sizes) != list(payload.get("alphabet_sizes", code.alphabet_sizes)):
        raise CorruptCodeFileError("Alphabet sizes disagree with the prime ideals")
    return code


def save_code(code: IndexCode, path) -> str:
    with open(path, "w", encoding="utf-8") as file:
        file.write(canonical_json(code_to_dict(code)))
        file.write("\n")
    logging.info(f"Wrote {code.size}-point code to {path}")
    return path


def load_code(path) -> IndexCode:
    if not os.path.exists(path):
        raise CorruptCodeFileError(f"Code file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as file:
            payload = json.load(file)
    except json.JSONDecodeError as e:
        raise CorruptCodeFileError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(payload, dict):
        raise CorruptCodeFileError(f"{path} does not hold a code object")
    return code_from_dict(payload)


def write_points_csv(code: IndexCode, path) -> str:
    """
    Plot-ready constellation dump.

    One row per point: message index, labels, exact coordinates, normalized embedded
    coordinates, and for every single message k whether w_k = 0 (the subcode it belongs to).
    """
    n = code.field.degree
    header = (["message"] + [f"w{k}" for k in range(1, code.K + 1)] + [f"c{i}" for i in range(n)]
              + [f"x{i}" for i in range(n)] + [f"in_S{k}" for k in range(1, code.K + 1)])
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        writer.writerow(header)
        for t in range(code.size):
            labels = code.labels[t]
            writer.writerow([t] + [int(l) for l in labels] + [int(c) for c in code.representatives[t]]
                            + [f"{v:.12g}" for v in code.points[t]] + [int(l == 0) for l in labels])
    logging.info(f"Wrote constellation points to {path}")
    return path
