"""JSON encodings for states and channels.

A matrix is a row-major list of rows, each entry an ``[re, im]`` pair::

    {"d": 2, "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}

A channel file holds ``{"d": int, "operators": [matrix, ...]}``.
"""

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .channels import COMPLETENESS_TOL, custom_channel
from .errors import InvalidChannelError, InvalidStateError, SchemaError
from .linalg import check_density
from .states import TargetState


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, d, field="matrix"):
    if not isinstance(data, list) or len(data) != d:
        raise SchemaError(f"{field}: expected {d} rows", field)
    out = np.empty((d, d), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != d:
            raise SchemaError(f"{field}[{i}]: expected {d} entries", f"{field}[{i}]")
        for j, entry in enumerate(row):
            where = f"{field}[{i}][{j}]"
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            ):
                raise SchemaError(f"{where}: expected a [re, im] pair of numbers", where)
            out[i, j] = complex(entry[0], entry[1])
    if not np.all(np.isfinite(out)):
        raise SchemaError(f"{field}: non-finite entries", field)
    return out


def _read_json(source):
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc


def _dimension(data):
    if not isinstance(data, dict):
        raise SchemaError("top level must be a JSON object")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise SchemaError("d: expected an integer >= 2", "d")
    return d


def state_to_json(rho):
    rho = np.asarray(rho)
    return {"d": int(rho.shape[0]), "matrix": encode_matrix(rho)}


def load_state(source, tol=1e-10):
    """Read a state file (or already-parsed dict) and validate it as a density matrix."""
    data = _read_json(source)
    d = _dimension(data)
    if "matrix" not in data:
        raise SchemaError("matrix: missing", "matrix")
    rho = decode_matrix(data["matrix"], d)
    report = check_density(rho, tol)
    if not report.valid:
        raise InvalidStateError(f"state file is not a density matrix: {report.describe()}", report)
    return TargetState(d, rho)


def channel_to_json(chan):
    return {"d": int(chan.d), "operators": [encode_matrix(e) for e in chan.operators]}


def load_channel(source, tol=COMPLETENESS_TOL):
    """Read a custom Kraus channel; ``tol=None`` skips the completeness check."""
    data = _read_json(source)
    d = _dimension(data)
    ops = data.get("operators")
    if not isinstance(ops, list) or not ops:
        raise SchemaError("operators: expected a non-empty list of matrices", "operators")
    mats = [decode_matrix(op, d, f"operators[{k}]") for k, op in enumerate(ops)]
    try:
        return custom_channel(mats, tol=tol)
    except InvalidChannelError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc), "operators") from exc


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
