"""JSON persistence for matrices, generated instances, and report fields.

A matrix document is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with
entries row-major. Serialization uses Python's shortest-roundtrip float
formatting, so save followed by load reproduces the exact same matrix, bit
for bit.

A generated-instance directory holds one matrix document per block plus an
``instance.json`` manifest recording the spec, the file map, and the
verification certificate.
"""

import json
import math
from pathlib import Path

import numpy as np

from .additive import FactorCheck
from .casegen import CaseSpec, GeneratedCase
from .errors import GDrazinError

__all__ = [
    "SCHEMA_VERSION",
    "DocumentError",
    "matrix_to_doc",
    "doc_to_matrix",
    "save_matrix",
    "load_matrix",
    "complex_to_doc",
    "doc_to_complex",
    "factor_check_to_doc",
    "parse_scalar",
    "save_instance",
    "load_instance",
    "spec_from_manifest",
]

SCHEMA_VERSION = 1


class DocumentError(GDrazinError):
    """A JSON document is missing, malformed, or inconsistent."""


def matrix_to_doc(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"need a 2-D array, got ndim {m.ndim}")
    rows, cols = m.shape
    flat = m.reshape(-1)
    return {
        "rows": int(rows),
        "cols": int(cols),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def doc_to_matrix(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise DocumentError(f"matrix document must be an object, got {type(doc).__name__}")
    for key in ("rows", "cols", "data"):
        if key not in doc:
            raise DocumentError(f"matrix document missing key {key!r}")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    # bool is an int subclass; JSON true/false must not pass as dimensions
    if (
        not isinstance(rows, int)
        or not isinstance(cols, int)
        or isinstance(rows, bool)
        or isinstance(cols, bool)
        or rows < 1
        or cols < 1
    ):
        raise DocumentError(f"rows/cols must be positive integers, got {rows!r}/{cols!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise DocumentError(
            f"data must list rows*cols = {rows * cols} entries, got "
            f"{len(data) if isinstance(data, list) else type(data).__name__}"
        )
    out = np.empty(rows * cols, dtype=complex)
    for i, entry in enumerate(data):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
        ):
            raise DocumentError(f"entry {i} must be a [re, im] pair of numbers, got {entry!r}")
        if not (math.isfinite(entry[0]) and math.isfinite(entry[1])):
            raise DocumentError(f"entry {i} is not finite: {entry!r}")
        out[i] = complex(entry[0], entry[1])
    return out.reshape(rows, cols)


def save_matrix(path, m: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_doc(m)) + "\n")


def load_matrix(path) -> np.ndarray:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {p}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{p} is not valid JSON: {exc}") from exc
    try:
        return doc_to_matrix(doc)
    except DocumentError as exc:
        raise DocumentError(f"{p}: {exc}") from exc


def complex_to_doc(z: complex | None):
    if z is None:
        return None
    z = complex(z)
    return [float(z.real), float(z.imag)]


def doc_to_complex(doc) -> complex | None:
    if doc is None:
        return None
    if not isinstance(doc, list) or len(doc) != 2:
        raise DocumentError(f"scalar must be a [re, im] pair, got {doc!r}")
    return complex(float(doc[0]), float(doc[1]))


def factor_check_to_doc(chk: FactorCheck) -> dict:
    return {
        "condition": chk.condition,
        "holds": bool(chk.holds),
        "lambda": complex_to_doc(chk.lam),
        "residual": float(chk.residual),
        "degenerate": bool(chk.degenerate),
    }


def parse_scalar(text: str) -> complex | None:
    """Parse a scalar argument: 'auto' for fitted, fractions like '1/2',
    and complex literals with either 'i' or 'j' ('3i', '1+2j', '-i')."""
    t = text.strip().lower()
    if not t:
        raise ValueError("empty scalar")
    if t == "auto":
        return None
    if "/" in t:
        num, _, den = t.partition("/")
        try:
            return complex(float(num) / float(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad fraction {text!r}") from exc
    u = t.replace("i", "j")
    try:
        return complex(u)
    except ValueError as exc:
        raise ValueError(f"bad scalar {text!r}") from exc


def save_instance(directory, case: GeneratedCase) -> dict:
    """Write one generated instance into a directory; returns the manifest."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, m in sorted(case.matrices.items()):
        fname = f"{name}.json"
        save_matrix(d / fname, m)
        files[name] = fname
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "kind": case.kind,
        "target": case.spec.target,
        "dim": int(case.spec.dim),
        "lambda": complex_to_doc(complex(case.spec.lam)),
        "seed": int(case.spec.seed),
        "negate": bool(case.spec.negate),
        "broken": case.broken,
        "files": files,
        "certificate": [factor_check_to_doc(c) for c in case.certificate],
    }
    (d / "instance.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def load_instance(directory) -> tuple[dict, dict[str, np.ndarray]]:
    """Read a generated-instance directory back: (manifest, matrices)."""
    d = Path(directory)
    mpath = d / "instance.json"
    try:
        manifest = json.loads(mpath.read_text())
    except OSError as exc:
        raise DocumentError(f"cannot read {mpath}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{mpath} is not valid JSON: {exc}") from exc
    if not isinstance(manifest, dict):
        raise DocumentError(f"{mpath}: manifest must be an object")
    for key in ("schema_version", "kind", "target", "files"):
        if key not in manifest:
            raise DocumentError(f"{mpath}: manifest missing key {key!r}")
    kind = manifest["kind"]
    expected = {"a", "b"} if kind == "pair" else {"a", "b", "c", "d"}
    files = manifest["files"]
    if not isinstance(files, dict) or set(files) != expected:
        raise DocumentError(f"{mpath}: files must map exactly {sorted(expected)}")
    matrices = {name: load_matrix(d / fname) for name, fname in files.items()}
    return manifest, matrices


def spec_from_manifest(manifest: dict) -> CaseSpec:
    lam = doc_to_complex(manifest.get("lambda"))
    return CaseSpec(
        target=manifest["target"],
        dim=int(manifest["dim"]),
        lam=lam if lam is not None else 1.0,
        seed=int(manifest.get("seed", 0)),
        negate=bool(manifest.get("negate", False)),
    )
