"""
Codec for the shared matrix-literal format.

A matrix is written as a list of rows; each entry is a two-element
``[re, im]`` pair of decimal numbers::

    [[[0.5, 0.0], [0.0, -0.5]],
     [[0.0, 0.5], [0.5,  0.0]]]

The same format is used in scenario configs and in emitted JSON reports.
"""
from typing import Any, List

import numpy as np

from qmexchange.errors import ConfigParseError

MatrixLiteral = List[List[List[float]]]


def parse_matrix_literal(raw: Any, field: str = "matrix") -> np.ndarray:
    """Decode a matrix literal into a complex array.

    Args:
        raw: Decoded JSON value.
        field: Dotted config path, reported in parse errors.

    Raises:
        ConfigParseError: If *raw* is not a rectangular list of ``[re, im]``
            pairs of numbers.
    """
    if not isinstance(raw, list) or not raw:
        raise ConfigParseError("matrix literal must be a non-empty list of rows", field=field)

    n_cols = None
    rows: List[List[complex]] = []
    for r, row in enumerate(raw):
        if not isinstance(row, list) or not row:
            raise ConfigParseError(f"row {r} must be a non-empty list", field=field)
        if n_cols is None:
            n_cols = len(row)
        elif len(row) != n_cols:
            raise ConfigParseError(
                f"row {r} has {len(row)} entries, expected {n_cols}", field=field
            )

        parsed_row = []
        for c, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(
                    isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in entry
                )
            ):
                raise ConfigParseError(
                    f"entry ({r}, {c}) must be a [re, im] pair of numbers",
                    field=field,
                )
            parsed_row.append(complex(entry[0], entry[1]))
        rows.append(parsed_row)

    return np.array(rows, dtype=complex)


def to_matrix_literal(m: np.ndarray) -> MatrixLiteral:
    """Encode a complex array as a matrix literal (plain Python floats)."""
    arr = np.asarray(m, dtype=complex)
    return [
        [[float(z.real), float(z.imag)] for z in row]
        for row in arr
    ]
