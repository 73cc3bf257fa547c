"""JSON encoding and decoding of matrices, bipartite operators and maps."""

import json
from pathlib import Path
from typing import Any, Union

import numpy as np
from pydantic import ValidationError

from sepcert.bipartite import BipartiteOperator
from sepcert.choi import MatrixMap
from sepcert.errors import MatrixFormatError
from sepcert.matrix import ComplexMatrix, as_matrix
from sepcert.schema import BipartitePayload, MapPayload, MatrixPayload


PathLike = Union[str, Path]


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_payload(a: ComplexMatrix) -> MatrixPayload:
    rows, cols = a.shape
    data = [[complex_pair(a[i, j]) for j in range(cols)] for i in range(rows)]
    return MatrixPayload(rows=rows, cols=cols, data=data)


def payload_to_matrix(payload: MatrixPayload) -> ComplexMatrix:
    arr = np.zeros((payload.rows, payload.cols), dtype=np.complex128)
    for i, row in enumerate(payload.data):
        for j, (re, im) in enumerate(row):
            arr[i, j] = complex(re, im)
    return as_matrix(arr)


def matrix_to_json(a: ComplexMatrix) -> dict:
    return matrix_to_payload(a).model_dump()


def matrix_from_json(obj: Any) -> ComplexMatrix:
    """Parse {"rows", "cols", "data"}; ragged rows are rejected."""
    try:
        payload = MatrixPayload.model_validate(obj)
    except ValidationError as e:
        raise MatrixFormatError(f"Invalid matrix JSON: {e}") from e
    return payload_to_matrix(payload)


def bipartite_to_json(op: BipartiteOperator) -> dict:
    out = matrix_to_json(op.mat)
    out["local_dim"] = op.n
    return out


def bipartite_from_json(obj: Any) -> BipartiteOperator:
    try:
        payload = BipartitePayload.model_validate(obj)
    except ValidationError as e:
        raise MatrixFormatError(f"Invalid bipartite operator JSON: {e}") from e
    return BipartiteOperator(n=payload.local_dim, mat=payload_to_matrix(payload))


def map_to_json(phi: MatrixMap) -> dict:
    return {
        "n": phi.n,
        "m": phi.m,
        "images": [matrix_to_json(img) for img in phi.images],
    }


def map_from_json(obj: Any) -> MatrixMap:
    try:
        payload = MapPayload.model_validate(obj)
    except ValidationError as e:
        raise MatrixFormatError(f"Invalid map JSON: {e}") from e
    images = tuple(payload_to_matrix(img) for img in payload.images)
    return MatrixMap(n=payload.n, m=payload.m, images=images)


def _read(path: PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except UnicodeDecodeError as e:
        raise MatrixFormatError(f"{path}: not UTF-8 text ({e})") from e
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"{path}: not valid JSON ({e})") from e


def load_bipartite(path: PathLike) -> BipartiteOperator:
    return bipartite_from_json(_read(path))


def load_map(path: PathLike) -> MatrixMap:
    return map_from_json(_read(path))


def dump_json(obj: Any, path: PathLike) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as handle:
        json.dump(obj, handle, indent=2, sort_keys=True)
        handle.write("\n")
