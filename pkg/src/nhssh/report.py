"""Experiment configuration, execution and report serialization.

A run composes the other modules: it builds the chain, diagonalizes it,
computes winding numbers, detects edge states and cross-checks the dense
spectrum against the characteristic-equation solver.  Results come back as
a :class:`ReportBundle` of in-memory file contents so that writing to disk
is a separate, trivially testable step.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import charpoly, spectra, svg, topology
from .errors import (ConfigError, CriticalPoint, GaplessFactor, NHSSHError, NotApplicable,
                     SolverError)
from .hamiltonian import build_obc, build_pbc
from .model import (Boundary, ChainSpec, HoppingSet, Kind, effective_params,
                    from_effective, qhc_enforce, qhc_residual, is_quasi_hermitian)

ANALYSES = ("spectrum", "charpoly", "winding", "edges", "trajectory")

DEFAULT_TOLERANCES: dict[str, float] = {
    "qhc": 1e-9,
    "reality": 1e-7,
    "residual": 1e-8,
    "pair": 1e-6,
    "charpoly_qh": 1e-6,
    "charpoly_general": 1e-5,
    "resolution": 4096,
    "trajectory_samples": 512,
}

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class OutputOptions:
    directory: str = "nhssh_out"
    svg: bool = True
    vectors: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    model: HoppingSet
    chain: ChainSpec
    analyses: frozenset[str]
    tolerances: Mapping[str, float] = field(default_factory=dict)
    output: OutputOptions = OutputOptions()
    label: str = ""

    def __post_init__(self):
        if not self.analyses:
            raise ConfigError("at least one analysis must be requested")
        unknown = set(self.analyses) - set(ANALYSES)
        if unknown:
            raise ConfigError(f"unknown analyses {sorted(unknown)}; choose from {list(ANALYSES)}")
        for key, val in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
                raise ConfigError(f"tolerance {key!r} must be a positive number, got {val!r}")
        if self.chain.boundary is Boundary.PBC and {"charpoly", "edges"} & set(self.analyses):
            raise ConfigError("charpoly and edges analyses need open boundaries")

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "ExperimentConfig":
        if not isinstance(obj, Mapping):
            raise ConfigError("config must be a JSON object")
        try:
            model = HoppingSet.from_json(obj["model"])
            ch = obj.get("chain", {})
            chain = ChainSpec(int(ch.get("n_cells", 20)), ch.get("parity", "even"),
                              ch.get("boundary", "obc"))
            analyses = frozenset(obj.get("analyses", ANALYSES))
            out = obj.get("output", {})
            output = OutputOptions(str(out.get("dir", "nhssh_out")), bool(out.get("svg", True)),
                                   bool(out.get("vectors", False)))
        except KeyError as exc:
            raise ConfigError(f"missing config field {exc}") from None
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid config: {exc}") from None
        return cls(model, chain, analyses, dict(obj.get("tolerances", {})), output,
                   str(obj.get("label", "")))

    def to_json(self) -> dict:
        return {"label": self.label, "model": self.model.to_json(),
                "chain": {"n_cells": self.chain.n_cells, "parity": self.chain.parity.value,
                          "boundary": self.chain.boundary.value},
                "analyses": sorted(self.analyses), "tolerances": dict(sorted(self.tolerances.items())),
                "output": {"dir": self.output.directory, "svg": self.output.svg,
                           "vectors": self.output.vectors}}


@dataclass
class ReportBundle:
    report: dict
    files: dict[str, str]

    @property
    def inconsistent(self) -> bool:
        return bool(self.report.get("inconsistencies"))

    def write(self, directory: str | os.PathLike) -> list[Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in self.files.items():
            path = out / name
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
        return written


# ---------------------------------------------------------------- serialization

def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:.17g}"


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits.

    Output depends only on the value, so identical reports are
    byte-identical.
    """
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cx(z) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


# ---------------------------------------------------------------- run

def _topology(cfg: ExperimentConfig, rep: dict) -> topology.TopologyReport | None:
    try:
        topo = topology.topology_report(cfg.model, cfg.chain.parity, int(cfg.tol("resolution")))
    except (CriticalPoint, GaplessFactor) as exc:
        rep["topology"] = {"status": "critical", "message": str(exc)}
        return None
    out = topo.to_json()
    out["status"] = "ok"
    out["expected_edge_states"] = topology.expected_edge_count(topo)
    rep["topology"] = out
    return topo


def _spectrum_stats(spec: spectra.Spectrum, cfg: ExperimentConfig) -> dict:
    E = spec.values
    mirror, _ = spectra.matching_distance(E, -E)
    return {"dimension": spec.dim, "norm": spec.norm,
            "max_abs": float(np.abs(E).max()), "max_abs_imag": float(np.abs(E.imag).max()),
            "real": spectra.reality_check(spec, cfg.tol("reality")),
            "max_residual": float(spec.residuals.max()),
            "chiral_mirror_distance": mirror}


def _edges(cfg: ExperimentConfig, spec, topo, rep: dict, files: dict):
    if topo is None:
        rep["edges"] = {"status": "skipped", "message": "edge count unknown at a phase boundary"}
        return
    expected = topology.expected_edge_count(topo)
    lc = spectra.LocalizationConfig(pair_tol=cfg.tol("pair"))
    er = spectra.detect_edge_states(spec, expected, lc)
    pred = topo.predicted
    rep["edges"] = {
        "status": "ok", "count": er.count, "expected": expected,
        "n_left": er.n_left, "n_right": er.n_right,
        "gap_ratio": er.gap_ratio, "unreliable": er.unreliable,
        "pairs": [list(p) for p in er.pairs],
        "agrees_with_prediction": (pred.admits(er.n_left, er.n_right)
                                   if pred.options else None),
        "states": [{"energy": _cx(s.energy), "side": s.side.value, "weight_left": s.weight_left,
                    "sublattice_weight_A": s.sublattice_weight_A, "decay_factor": s.decay_factor}
                   for s in er.states],
    }
    if cfg.output.vectors:
        files["edge_states.csv"] = spectra.Spectrum(
            np.array([s.energy for s in er.states]), np.column_stack([s.vector for s in er.states])
            if er.states else np.zeros((spec.dim, 0)), np.zeros(er.count), spec.norm).vectors_csv()
    if cfg.output.svg:
        raw = [spec.vectors[:, k] for k in er.indices]
        titles = [f"state {k}: E = {spec.values[k].real:.3g}{spec.values[k].imag:+.3g}i"
                  for k in er.indices]
        # paired states come first, as (sum, difference) per pair
        comb, ctitles = [], []
        for n, (a, b) in enumerate(er.pairs):
            for st, how in zip(er.states[2 * n:2 * n + 2], ("sum", "difference")):
                comb.append(st.vector)
                ctitles.append(f"{how} of states {a}, {b} ({st.side.value})")
        files["wavefunctions.svg"] = svg.wavefunction_plot(raw + comb, titles + ctitles)
    return er


def _charpoly(cfg: ExperimentConfig, spec, rep: dict, files: dict, problems: list):
    try:
        cs = charpoly.solve_chain(cfg.model, cfg.chain, cfg.tol("qhc"))
    except NotApplicable as exc:
        rep["charpoly"] = {"status": "not_applicable", "message": str(exc)}
        return
    except SolverError as exc:
        rep["charpoly"] = {"status": "failed", "message": str(exc)}
        problems.append(f"charpoly: {exc}")
        return
    worst, mean = spectra.matching_distance(cs.energies, spec.values)
    tol = cfg.tol("charpoly_general" if cs.method.startswith("general") else "charpoly_qh")
    ok = worst <= tol
    if not ok:
        problems.append(f"charpoly: distance {worst:.3e} to dense spectrum exceeds {tol:g}")
    diag = {k: v for k, v in cs.diagnostics.items()
            if isinstance(v, (int, float)) and not isinstance(v, bool)}
    rep["charpoly"] = {"status": "ok" if ok else "inconsistent", "method": cs.method,
                       "degree": cs.degree, "quotient_degree": cs.quotient_degree,
                       "max_distance": worst, "mean_distance": mean, "tolerance": tol,
                       "max_root_residual": float(np.max(cs.residuals)) if len(cs.residuals) else 0.0,
                       "diagnostics": dict(sorted(diag.items()))}
    files["charpoly.csv"] = cs.to_csv()


def run(cfg: ExperimentConfig) -> ReportBundle:
    """Execute every analysis requested by ``cfg``.

    Raises
    ------
    NumericalInconsistency
        Propagated from the winding cross-check; other numerical
        disagreements are collected under ``"inconsistencies"``.
    """
    h, chain = cfg.model, cfg.chain
    eff = effective_params(h)
    problems: list[str] = []
    rep: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "config": cfg.to_json(),
                           "effective": {"kind": eff.kind.value,
                                         "tbar": {str(b): eff.tbar[b] for b in h.kind.bonds},
                                         "r": eff.r}}
    try:
        rep["qhc_residual"] = qhc_residual(h)
    except NotApplicable:
        rep["qhc_residual"] = None
    rep["quasi_hermitian"] = is_quasi_hermitian(h, cfg.tol("qhc"))
    files: dict[str, str] = {}
    want = cfg.analyses

    topo = None
    if {"winding", "edges"} & want:
        topo = _topology(cfg, rep)

    spec = None
    if {"spectrum", "edges", "charpoly"} & want:
        M = build_pbc(h, chain.n_cells) if chain.boundary is Boundary.PBC else build_obc(h, chain)
        spec = spectra.eigendecompose(M, want_vectors="edges" in want, tol=cfg.tol("residual"))
        rep["spectrum"] = _spectrum_stats(spec, cfg)
        files["spectrum.csv"] = spec.to_csv()

    er = _edges(cfg, spec, topo, rep, files) if "edges" in want else None
    if "charpoly" in want:
        _charpoly(cfg, spec, rep, files, problems)

    loop = None
    if "trajectory" in want:
        tr = topology.trajectory(h, int(cfg.tol("trajectory_samples")))
        files["trajectory.csv"] = tr.to_csv()
        loop = np.concatenate([tr.energy, -tr.energy])
        rep["trajectory"] = {"samples": len(tr.p) - 1, "accumulated_phase": tr.accumulated_phase}

    if spec is not None and cfg.output.svg:
        hl = er.indices if er is not None else ()
        files["spectrum.svg"] = svg.spectrum_plot(spec.values, cfg.label or "spectrum",
                                                  loop=loop, highlight=hl)
    rep["inconsistencies"] = problems
    files["report.json"] = dumps(rep) + "\n"
    return ReportBundle(rep, files)


# ---------------------------------------------------------------- sweep

def _apply_axis(h: HoppingSet, axis: str, value: float, enforce_qh: bool) -> HoppingSet:
    """Replace one amplitude (``t.<bond>.<L|R>``) or mean amplitude (``tbar.<bond>``)."""
    parts = axis.replace("−", "-").split(".")
    try:
        bond = int(parts[1])
    except (IndexError, ValueError):
        raise ConfigError(f"axis {axis!r} is not of the form t.<bond>.<L|R> or tbar.<bond>") from None
    if bond not in h.kind.bonds:
        raise ConfigError(f"axis {axis!r}: no bond class {bond} in a {h.kind.value} model")
    if parts[0] == "tbar" and len(parts) == 2:
        eff = effective_params(h)
        tbar = [value if b == bond else eff.tbar[b] for b in h.kind.bonds]
        return from_effective(h.kind, tbar, eff.r)
    if parts[0] == "t" and len(parts) == 3 and parts[2] in ("L", "R"):
        t = dict(h.t)
        L, R = t[bond]
        t[bond] = (value, R) if parts[2] == "L" else (L, value)
        out = HoppingSet(h.kind, t)
        return qhc_enforce(out) if enforce_qh and h.kind is not Kind.SSH else out
    raise ConfigError(f"axis {axis!r} is not of the form t.<bond>.<L|R> or tbar.<bond>")


@dataclass
class SweepRow:
    value: float
    status: str
    nu_bar: int | None = None
    nu_E_L: int | None = None
    nu_E_R: int | None = None
    predicted: str = ""
    transition: bool = False

    @property
    def key(self):
        return (self.status, self.nu_bar, self.nu_E_L, self.nu_E_R)


def sweep(base: ExperimentConfig, axis: str, values: Sequence[float],
          enforce_qh: bool = False) -> tuple[list[SweepRow], str]:
    """Topology along one parameter axis, flagging changes between neighbours.

    Returns the rows and their CSV rendering.  Values at phase boundaries
    get ``status = "critical"``; a row is marked as a transition when its
    invariants differ from those of the previous row.
    """
    values = [float(v) for v in values]
    if not values:
        raise ConfigError("sweep needs at least one value")
    if not all(math.isfinite(v) for v in values):
        raise ConfigError("sweep values must be finite")
    # validate the axis once, before any computation
    _apply_axis(base.model, axis, values[0], enforce_qh)
    rows: list[SweepRow] = []
    for v in values:
        try:
            h = _apply_axis(base.model, axis, v, enforce_qh)
        except NHSSHError as exc:
            rows.append(SweepRow(v, f"invalid: {exc}"))
            continue
        try:
            topo = topology.topology_report(h, base.chain.parity, int(base.tol("resolution")))
        except (CriticalPoint, GaplessFactor):
            rows.append(SweepRow(v, "critical"))
            continue
        pred = ";".join(f"{a}/{b}" for a, b in topo.predicted.options) or topo.predicted.status.value
        rows.append(SweepRow(v, "ok", topo.nu_bar, topo.nu_E_L, topo.nu_E_R, pred))
    for prev, row in zip(rows, rows[1:]):
        row.transition = row.key != prev.key
    lines = ["value,status,nu_bar,nu_E_L,nu_E_R,predicted,transition"]
    for r in rows:
        cells = [f"{r.value:.17g}", r.status, *("" if x is None else str(x)
                                               for x in (r.nu_bar, r.nu_E_L, r.nu_E_R)),
                 r.predicted, str(r.transition).lower()]
        lines.append(",".join(c if "," not in c else f'"{c}"' for c in cells))
    return rows, "\n".join(lines) + "\n"


def preset_config(pid: str, output_dir: str | None = None) -> ExperimentConfig:
    from .presets import get_preset
    p = get_preset(pid)
    return ExperimentConfig(p.hopping, p.chain, frozenset(ANALYSES),
                            output=OutputOptions(output_dir or f"nhssh_out/{p.id}"), label=p.id)


def with_output(cfg: ExperimentConfig, directory: str) -> ExperimentConfig:
    return replace(cfg, output=replace(cfg.output, directory=directory))
