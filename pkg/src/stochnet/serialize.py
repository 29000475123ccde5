"""File formats: path CSVs, wide ensemble CSVs, std-trajectory CSVs,
report and model JSON, and the run manifest.

Floats are written with repr, the shortest digit string that round-trips,
so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .analysis import ConvergenceReport, StdTrajectory
from .errors import MissingManifest, ParseError
from .reduction import EffectiveModel
from .sde import Ensemble, Path

MANIFEST_NAME = "manifest.json"


def _fmt(v) -> str:
    return repr(float(v))


def write_path_csv(path_obj: Path, file_path):
    """Path CSV: header t,x_1,...,x_n (or t,x_eff for scalar paths)."""
    dim = path_obj.states.shape[1]
    if dim == 1:
        header = "t,x_eff"
    else:
        header = "t," + ",".join(f"x_{i+1}" for i in range(dim))
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for t, row in zip(path_obj.times, path_obj.states):
            fh.write(_fmt(t) + "," + ",".join(_fmt(v) for v in row) + "\n")


def read_path_csv(file_path) -> Path:
    with open(file_path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty path file", line=1)
    times = []
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        try:
            times.append(float(cells[0]))
            rows.append([float(c) for c in cells[1:]])
        except ValueError:
            raise ParseError("non-numeric cell", line=lineno)
    return Path(times=np.array(times), states=np.array(rows))


def write_ensemble_csv(ens: Ensemble, file_path, component=0):
    """Wide CSV of one component across realizations: t,r_0,...,r_{R-1}."""
    mat = ens.states[:, :, component]
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t," + ",".join(f"r_{r}" for r in range(mat.shape[0])) + "\n")
        for k, t in enumerate(ens.times):
            fh.write(_fmt(t) + "," + ",".join(_fmt(v) for v in mat[:, k]) + "\n")


def read_ensemble_csv(file_path):
    """Returns (times, matrix) with matrix shaped (R, time points)."""
    with open(file_path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    times = []
    cols = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        try:
            times.append(float(cells[0]))
            cols.append([float(c) for c in cells[1:]])
        except ValueError:
            raise ParseError("non-numeric cell", line=lineno)
    return np.array(times), np.array(cols).T


def write_std_csv(traj: StdTrajectory, file_path):
    """StdTrajectory CSV: header t,std."""
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,std\n")
        for t, s in zip(traj.times, traj.std):
            fh.write(_fmt(t) + "," + _fmt(s) + "\n")


def read_std_csv(file_path) -> StdTrajectory:
    with open(file_path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "t,std":
        raise ParseError("expected header t,std", line=1)
    times = []
    std = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            t, s = line.split(",")
            times.append(float(t))
            std.append(float(s))
        except ValueError:
            raise ParseError("expected two numeric cells", line=lineno)
    return StdTrajectory(times=np.array(times), std=np.array(std))


def write_json(doc, file_path):
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(file_path):
    with open(file_path, encoding="utf-8") as fh:
        return json.load(fh)


def write_convergence_json(report: ConvergenceReport, file_path):
    write_json(report.to_json_dict(), file_path)


def read_convergence_json(file_path) -> ConvergenceReport:
    return ConvergenceReport.from_json_dict(read_json(file_path))


def write_effective_json(eff: EffectiveModel, file_path):
    write_json(eff.to_json_dict(), file_path)


def read_effective_json(file_path) -> EffectiveModel:
    return EffectiveModel.from_json_dict(read_json(file_path))


def write_manifest(doc, out_dir):
    write_json(doc, f"{out_dir}/{MANIFEST_NAME}")


def read_manifest(run_dir):
    import os

    path = os.path.join(run_dir, MANIFEST_NAME)
    if not os.path.exists(path):
        raise MissingManifest(f"no {MANIFEST_NAME} in {run_dir}")
    return read_json(path)
