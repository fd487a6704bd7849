# diagnostics/writer.py
"""Per-snapshot diagnostics sink and its CSV table"""
import csv
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from errors import CheckpointError
from polynomial import GaugePolynomial
from solver.grid import FieldState
from variational.functionals import FunctionalRecord
from .scattering import ScatteringReport, centroid, l4_norm, metrics_from_norms
from .virial import VirialSample, VirialSeries, VirialWeight, virial_sample

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "t", "M", "H", "G", "E", "K", "Sx_norm_trunc", "L4", "Px", "Py", "Pz",
    "V", "Vp", "K8", "A_R_bound", "yx", "yy", "yz",
]


class DiagnosticsCollector:
    """Simulation sink: evaluates the virial, L^4 and centroid diagnostics of every
    snapshot, keeps the series in memory and optionally streams CSV rows."""

    def __init__(self, g: GaugePolynomial, weight: VirialWeight, csv_path: Union[str, Path, None] = None,
                 t_wrap: float = np.inf, min_fit_points: int = 4):
        self.g = g
        self.weight = weight
        self.t_wrap = t_wrap
        self.min_fit_points = min_fit_points
        self.rows: List[Dict[str, float]] = []
        self.virial: List[VirialSample] = []
        self._s8 = 0.0
        self._last = None
        self._file = None
        self._writer = None
        self.path: Optional[Path] = None
        if csv_path is not None:
            self._open(Path(csv_path))

    def _open(self, path: Path):
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self._file = open(path, "w", encoding="utf-8", newline="")
        except OSError as e:
            raise CheckpointError(f"Failed to open diagnostics file {path}: {e}") from e
        self._writer = csv.DictWriter(self._file, fieldnames=CSV_COLUMNS, lineterminator="\n")
        self._writer.writeheader()
        self.path = path

    def __call__(self, state: FieldState, record: FunctionalRecord):
        sample = virial_sample(state, self.g, self.weight, record)
        l4 = l4_norm(state)
        if self._last is not None:
            t_prev, l4_prev = self._last
            self._s8 += 0.5 * (state.t - t_prev) * (l4_prev ** 8 + l4 ** 8)
        self._last = (state.t, l4)
        position = centroid(state) if record.M > 0 else np.zeros(3)

        row = {
            "t": state.t, "M": record.M, "H": record.H, "G": record.G, "E": record.E, "K": record.K,
            "Sx_norm_trunc": self._s8 ** 0.125, "L4": l4,
            "Px": float(record.P[0]), "Py": float(record.P[1]), "Pz": float(record.P[2]),
            "V": sample.V, "Vp": sample.Vp, "K8": sample.K8, "A_R_bound": sample.A_R_bound,
            "yx": float(position[0]), "yy": float(position[1]), "yz": float(position[2]),
        }
        self.rows.append(row)
        self.virial.append(sample)
        if self._writer is not None:
            self._writer.writerow({k: repr(float(v)) for k, v in row.items()})
            self._file.flush()

    def close(self):
        if self._file is not None:
            self._file.close()
            self._file = None
            logger.info("diagnostics written to %s", self.path)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def virial_series(self) -> VirialSeries:
        return VirialSeries.from_samples(self.virial, self.weight.R, self.weight.bound_constant(self.g))

    def scattering(self) -> ScatteringReport:
        times = [r["t"] for r in self.rows]
        norms = [r["L4"] for r in self.rows]
        return metrics_from_norms(times, norms, self.t_wrap, self.min_fit_points)

    def centroids(self) -> np.ndarray:
        return np.array([[r["yx"], r["yy"], r["yz"]] for r in self.rows]).reshape(len(self.rows), 3)


def read_diagnostics(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    """Columns of a diagnostics CSV as float arrays"""
    try:
        with open(path, encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            rows = list(reader)
            header: Optional[list] = reader.fieldnames
    except OSError as e:
        raise CheckpointError(f"Failed to read diagnostics file {path}: {e}") from e
    if header != CSV_COLUMNS:
        raise CheckpointError(f"{path} does not carry the diagnostics header")
    return {name: np.array([float(r[name]) for r in rows]) for name in CSV_COLUMNS}
