import json
from pathlib import Path

import numpy as np
import pytest

from qmexchange.data.matrix_literal import to_matrix_literal

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
KET0 = np.array([[1, 0], [0, 0]], dtype=complex)
KET1 = np.array([[0, 0], [0, 1]], dtype=complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pauli():
    return {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


@pytest.fixture
def write_config(tmp_path):
    """Write a scenario dict to JSON; numpy matrices become matrix literals."""

    def _write(doc: dict, name: str = "scenario.json") -> Path:
        payload = dict(doc)
        if "matrices" in payload:
            payload["matrices"] = {
                k: (to_matrix_literal(v) if isinstance(v, np.ndarray) else v)
                for k, v in payload["matrices"].items()
            }
        path = tmp_path / name
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        return path

    return _write
