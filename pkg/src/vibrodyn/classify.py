"""Distinguished-limit diagnosis: test the degeneracy chain mean -> quadratic
drift -> cubic drift on a sampling lattice and report the first level that is
not identically zero.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Optional

import numpy as np

from .averaging import drift_v2, drift_v3
from .fields import SamplingDomain, mean_part, sample_field, tau_grid


class DL(enum.Enum):
    DL1 = "DL-1"
    DL2 = "DL-2"
    DL3 = "DL-3"
    FULLY_DEGENERATE = "fully-degenerate"


DEFAULT_TOL = 1e-8


@dataclasses.dataclass(frozen=True)
class ScanTable:
    """Per-lattice-point degeneracy evidence."""

    x: np.ndarray            # (m, dim)
    s: np.ndarray            # (m,)
    mean_norm: np.ndarray    # |<u>| per point
    v2_norm: np.ndarray
    v3_norm: np.ndarray

    def rows(self):
        for i in range(self.s.size):
            yield (self.x[i], self.s[i], self.mean_norm[i],
                   self.v2_norm[i], self.v3_norm[i])

    def write_csv(self, path):
        dim = self.x.shape[1]
        header = ",".join([f"x{j + 1}" for j in range(dim)]
                          + ["s", "mean_norm", "v2_norm", "v3_norm"])
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for x, s, m, v2, v3 in self.rows():
                cells = [f"{v:.17g}" for v in x] + [f"{v:.17g}" for v in (s, m, v2, v3)]
                fh.write(",".join(cells) + "\n")


@dataclasses.dataclass(frozen=True)
class DLClassification:
    """Outcome of the degeneracy-chain diagnosis with its evidence norms."""

    dl: DL
    max_mean_norm: float
    max_v2_norm: float
    max_v3_norm: float
    scan: SamplingDomain
    tol: float               # relative tolerance as supplied
    field_rms: float         # RMS field magnitude over the scan
    table: ScanTable

    def describe(self) -> str:
        lines = [
            f"distinguished limit : {self.dl.value}",
            f"max |<u>|           : {self.max_mean_norm:.6e}",
            f"max |V2|            : {self.max_v2_norm:.6e}",
            f"max |V3|            : {self.max_v3_norm:.6e}",
            f"field RMS on scan   : {self.field_rms:.6e}",
            f"relative tolerance  : {self.tol:.1e}",
            f"lattice             : {self.scan.x_grid_points_per_axis} pts/axis "
            f"x {len(self.scan.s_samples)} s-values on {self.scan.box}",
        ]
        rec = {
            DL.DL1: "use DL-1: slow time s = t, averaged system dx/dt = <u>"
                    " with first-order drift correction",
            DL.DL2: "use DL-2: slow time s = t/omega, averaged system dx/ds = V2",
            DL.DL3: "use DL-3: slow time s = t/omega^2, averaged system dx/ds = V3",
            DL.FULLY_DEGENERATE: "mean, V2 and V3 all vanish on the scan; no "
                                 "averaged system available at these orders",
        }[self.dl]
        lines.append(f"recommendation      : {rec}")
        return "\n".join(lines)


def _field_rms(field, scan: SamplingDomain) -> float:
    taus = tau_grid(min(scan.tau_samples_per_period, 64))
    total = 0.0
    count = 0
    for x in scan.x_lattice():
        for s in scan.s_samples:
            vals = sample_field(field, x, s, taus)
            total += float(np.sum(vals ** 2))
            count += vals.size
    return float(np.sqrt(total / max(count, 1)))


def degeneracy_scan(field, scan: SamplingDomain, n: Optional[int] = None) -> ScanTable:
    """Tabulate |<u>|, |V2|, |V3| over the lattice."""
    if scan.dim != field.dim:
        raise ValueError("scan dimension does not match field dimension")
    n = n or scan.tau_samples_per_period
    xs, ss, mn, v2n, v3n = [], [], [], [], []
    for x in scan.x_lattice():
        for s in scan.s_samples:
            xs.append(x)
            ss.append(s)
            mn.append(float(np.max(np.abs(mean_part(field, x, s)))))
            v2n.append(float(np.max(np.abs(drift_v2(field, x, s, n=n).value))))
            v3n.append(float(np.max(np.abs(drift_v3(field, x, s, n=n).value))))
    return ScanTable(np.asarray(xs), np.asarray(ss), np.asarray(mn),
                     np.asarray(v2n), np.asarray(v3n))


def classify(field, scan: SamplingDomain, tol: float = DEFAULT_TOL) -> DLClassification:
    """Decide the applicable distinguished limit for a field.

    Degeneracy is tested as identical vanishing on the lattice, with absolute
    thresholds tol*RMS, tol*RMS^2, tol*RMS^3 for the mean, quadratic and cubic
    drift levels respectively (so rescaling the field u -> c*u never changes
    the verdict).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if scan.x_grid_points_per_axis < 2:
        raise ValueError("scan too coarse: need at least 2 points per axis")
    rms = _field_rms(field, scan)
    table = degeneracy_scan(field, scan)
    max_mean = float(table.mean_norm.max())
    max_v2 = float(table.v2_norm.max())
    max_v3 = float(table.v3_norm.max())
    if max_mean > tol * rms:
        dl = DL.DL1
    elif max_v2 > tol * rms ** 2:
        dl = DL.DL2
    elif max_v3 > tol * rms ** 3:
        dl = DL.DL3
    else:
        dl = DL.FULLY_DEGENERATE
    return DLClassification(dl=dl, max_mean_norm=max_mean, max_v2_norm=max_v2,
                            max_v3_norm=max_v3, scan=scan, tol=tol,
                            field_rms=rms, table=table)
