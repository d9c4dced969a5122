"""Declarative scenario execution behind the ``clonometry`` command.

A config document is YAML with a ``scenarios`` list. Each scenario names a
``kind`` and a kind-specific ``params`` record; the runner validates it with
the JSON schema in ``schema.json``, dispatches to the physics modules and
writes one CSV table plus a JSON sidecar per scenario.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from math import sqrt

import jsonschema
import numpy as np
import scipy
import yaml

from . import __version__, fock, qubit, werner
from ._config import TOL, tolerance_scale
from .hilbert import trace_distance

KINDS = ("qubit-povm", "spin-uncertainty", "spin-coherent-benchmark", "cv-joint",
         "cv-sigma-scan", "werner-scan", "route-crosscheck")
COLUMNS = ("quantity", "parameter", "measured", "target", "deviation", "rel_deviation",
           "tolerance", "passed", "reference")


class ConfigError(Exception):
    """Config text could not be parsed."""


class ValidationError(Exception):
    """Config parsed but does not satisfy the schema or a precondition."""


@dataclass
class ResultRow:
    quantity: str
    measured: float
    target: float | None = None
    tolerance: float | None = None
    parameter: str = ""
    reference: str = ""
    relative: bool = False

    def __post_init__(self):
        self.measured = float(self.measured)
        self.target = None if self.target is None else float(self.target)

    @property
    def deviation(self) -> float | None:
        return None if self.target is None else abs(self.measured - self.target)

    @property
    def rel_deviation(self) -> float | None:
        if self.target in (None, 0):
            return None
        return self.deviation / abs(self.target)

    def passed(self, scale: float = 1.0) -> bool:
        if self.target is None or self.tolerance is None:
            return True
        dev = self.rel_deviation if self.relative else self.deviation
        return bool(dev <= self.tolerance * scale)

    def record(self, scale: float = 1.0) -> dict:
        return {"quantity": self.quantity, "parameter": self.parameter,
                "measured": self.measured, "target": self.target,
                "deviation": self.deviation, "rel_deviation": self.rel_deviation,
                "tolerance": None if self.tolerance is None else self.tolerance * scale,
                "passed": self.passed(scale), "reference": self.reference}


@dataclass
class ScenarioResult:
    name: str
    kind: str
    reproduces: str
    rows: list[ResultRow]
    diagnostics: dict

    def passed(self, scale: float = 1.0) -> bool:
        return all(r.passed(scale) for r in self.rows)


# ---------------------------------------------------------------------------
# config loading

def load_schema() -> dict:
    return json.loads(resources.files("clonometry").joinpath("schema.json").read_text())


def parse_config(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping at the top level")
    return doc


def validate_config(doc: dict) -> None:
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"{where}: {exc.message}") from exc
    names = [s["name"] for s in doc["scenarios"]]
    if len(set(names)) != len(names):
        raise ValidationError("scenario names must be unique")
    for scen in doc["scenarios"]:
        p = scen.get("params", {})
        if scen["kind"] == "route-crosscheck" and p.get("nmax", 10) > fock.MAX_THREE_MODE_NMAX:
            raise ValidationError(f"{scen['name']}: three-mode route limited to nmax <= "
                                  f"{fock.MAX_THREE_MODE_NMAX}")
        if scen["kind"] == "spin-uncertainty":
            for b in p.get("inputs", []):
                if np.linalg.norm(b) > 1 + 1e-12:
                    raise ValidationError(f"{scen['name']}: Bloch vector {b} has length > 1")


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    doc = parse_config(text)
    validate_config(doc)
    return doc


def bundled_scenarios() -> dict[str, dict]:
    """Bundled config documents keyed by file stem, in sorted order."""
    root = resources.files("clonometry").joinpath("scenarios")
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".yaml"):
            out[entry.name[:-5]] = parse_config(entry.read_text())
    return out


def bundled_path(name: str):
    return resources.files("clonometry").joinpath("scenarios", f"{name}.yaml")


# ---------------------------------------------------------------------------
# scenario kinds

def _complex(pair) -> complex:
    return complex(pair[0], pair[1])


def _fmt(z: complex) -> str:
    return f"alpha={z.real:g}{z.imag:+g}j"


def _qubit_ket(bloch) -> np.ndarray:
    b = np.asarray(bloch, dtype=float)
    return 0.5 * (np.eye(2) + sum(c * s for c, s in zip(b, qubit.PAULIS)))


def run_qubit_povm(p: dict) -> tuple[list[ResultRow], dict]:
    ref = "Pi(m) = (1/8)[1 + (5/9) m.sigma]"
    assignment = tuple(p.get("assignment", [0, 1, 2]))
    family = qubit.derived_povm_family(assignment)
    rows = []
    for m in qubit.OUTCOMES:
        dev = np.max(np.abs(family[m] - qubit.closed_form_povm(m)))
        label = "".join("+" if v > 0 else "-" for v in m)
        rows.append(ResultRow("povm deviation", dev, 0.0, TOL.povm_closed_form, f"m={label}", ref))
    total = sum(family.values())
    rows.append(ResultRow("completeness", np.max(np.abs(total - np.eye(2))), 0.0,
                          TOL.povm_closed_form, "", "sum_m Pi(m) = 1"))
    if p.get("negative_control", True):
        rows.append(ResultRow("ideal povm min eigenvalue", qubit.ideal_povm_min_eigenvalue(),
                              (1 - sqrt(3)) / 8, TOL.povm_closed_form, "",
                              "(1/8)[1 + m.sigma] has eigenvalue (1 - sqrt 3)/8"))
    return rows, {"assignment": list(assignment)}


def run_spin_uncertainty(p: dict) -> tuple[list[ResultRow], dict]:
    povm = qubit.SpinCoherentPovm(0.5, p.get("n_theta", 64), p.get("n_phi", 128))
    rows = []
    for bloch in p.get("inputs", [[0, 0, 1]]):
        rho = _qubit_ket(bloch)
        s2 = float(np.dot(bloch, bloch))
        label = "bloch=[" + ",".join(f"{v:g}" for v in bloch) + "]"
        rep = qubit.estimate_moments(rho)
        rows.append(ResultRow("clone-based", rep["<dJ^2>_e"].measured, (243 - 25 * s2) / 100,
                              TOL.uncertainty, label, "<dJ^2>_e = 109/50 (pure), 243/100 (mixed)"))
        rows.append(ResultRow("coherent-optimal", qubit.coherent_total_uncertainty_quadrature(povm, rho),
                              2.25 - s2 / 4, TOL.sphere_grid, label,
                              "sum_a <dJ_a^2> = 2 for pure states (= 2j + 1)"))
    return rows, {"n_theta": povm.n_theta, "n_phi": povm.n_phi}


def run_spin_coherent(p: dict) -> tuple[list[ResultRow], dict]:
    ref = "E2_a = (j+1)/(j+3/2) [J_a^2 + (j+1)/2]"
    rows, diag = [], {"first_moment_sign": {}}
    for j in p.get("j", [0.5, 1.0, 1.5]):
        povm = qubit.SpinCoherentPovm(j, p.get("n_theta", 64), p.get("n_phi", 128))
        mom = qubit.coherent_moment_operators(povm)
        spins = qubit.spin_operators(j)
        rows.append(ResultRow("grid normalization", povm.normalization_error(), 0.0,
                              TOL.sphere_grid, f"j={j:g}", "int dmu |n><n| = 1"))
        rows.append(ResultRow("second moment residual", max(mom.second_moment_residuals), 0.0,
                              TOL.coherent_second_moment, f"j={j:g}", ref))
        e1 = max(np.max(np.abs(mom.first[a] - mom.first_sign * spins[a])) for a in range(3))
        rows.append(ResultRow("first moment residual", e1, 0.0, TOL.coherent_second_moment, f"j={j:g}",
                              "E1_a = -J_a (sign measured)"))
        top = np.zeros(povm.dim)
        top[0] = 1.0
        rows.append(ResultRow("coherent total uncertainty",
                              qubit.coherent_total_uncertainty_quadrature(povm, top), 2 * j + 1,
                              TOL.sphere_grid, f"j={j:g}", "sum_a <dJ_a^2> = 2j + 1 on |j, j>"))
        diag["first_moment_sign"][f"{j:g}"] = mom.first_sign
    return rows, diag


def _grid(p: dict, space: fock.FockSpace) -> fock.QuadratureGrid:
    g = p.get("grid")
    if g is None:
        return fock.QuadratureGrid.for_space(space)
    grid = fock.QuadratureGrid(g["half_width"], g.get("step", 0.05))
    if not grid.resolves(space):
        raise ValidationError(f"grid half width {grid.half_width} too small for nmax={space.nmax}")
    return grid


def _moment_rows(rep, parameter: str, ref_for) -> list[ResultRow]:
    return [ResultRow(r.name, r.measured, r.target, r.tolerance, parameter, ref_for(r.name))
            for r in rep.rows]


def _cv_ref(name: str) -> str:
    if "added var" in name:
        return "added variance = (1/4)|sin 2phi|, phi = arctan sigma^2 (1/4 at sigma = 1)"
    if "offset" in name:
        return "<x^2> - <X^2> = (1/4)|sin 2phi| along rotated axes"
    return "<x> = <X>, <y> = <Y>"


def run_cv_joint(p: dict) -> tuple[list[ResultRow], dict]:
    sigma = p.get("sigma", 1.0)
    space = fock.FockSpace(p.get("nmax", 40))
    grid = _grid(p, space)
    rows = []
    half, step = p.get("povm_half_width", 1.5), p.get("povm_step", 0.5)
    axis = np.arange(-half, half + 1e-9, step)
    worst_td, worst_tr = 0.0, 0.0
    for x in axis:
        for y in axis:
            f = fock.joint_povm_f(x, y, 1.0, space)
            tr = np.trace(f).real
            target = np.outer(fock.coherent_state(space, complex(x, y)),
                              fock.coherent_state(space, complex(x, y)).conj())
            worst_td = max(worst_td, trace_distance(f / tr, target))
            worst_tr = max(worst_tr, abs(tr - 1 / np.pi))
    ref = "F(x, y) = (1/pi)|x + iy><x + iy|"
    rows.append(ResultRow("povm vs coherent projector", worst_td, 0.0, TOL.coherent_povm,
                          f"|x|,|y|<={half:g}", ref))
    rows.append(ResultRow("povm trace", 1 / np.pi + worst_tr, 1 / np.pi, TOL.coherent_povm,
                          f"|x|,|y|<={half:g}", "Tr F = 1/pi"))
    for pair in p.get("inputs", [[0, 0], [1, 0]]):
        alpha = _complex(pair)
        rep = fock.moment_check(sigma, fock.coherent_state(space, alpha), space, grid)
        rows += _moment_rows(rep, f"sigma={sigma:g} {_fmt(alpha)}", _cv_ref)
    return rows, {"nmax": space.nmax, "half_width": grid.half_width, "step": grid.step}


def run_cv_sigma_scan(p: dict) -> tuple[list[ResultRow], dict]:
    space = fock.FockSpace(p.get("nmax", 40))
    grid = _grid(p, space)
    alpha = _complex(p.get("input", [0.5, 0.0]))
    rows = []
    for sigma in p.get("sigmas", [0.7, 1.0, 1.4]):
        rep = fock.moment_check(sigma, fock.coherent_state(space, alpha), space, grid)
        rows += _moment_rows(rep, f"sigma={sigma:g} {_fmt(alpha)}", _cv_ref)
    return rows, {"nmax": space.nmax, "half_width": grid.half_width, "step": grid.step}


def run_werner_scan(p: dict) -> tuple[list[ResultRow], dict]:
    lams = p.get("lambdas", [0.8, 0.9, 0.95])
    tail = p.get("tail", 1e-3)
    alpha = _complex(p.get("input", [0, 0]))
    rows, nmaxes = [], {}
    excess_ref = "excess <x^2> - <X^2>/2 = (1/8)(1 + 2 lam/(1 - lam))"
    for lam in lams:
        th = werner.ThermalWeight(lam, tail=tail)
        nmaxes[f"{lam:g}"] = th.nmax
        state = fock.coherent_state(th.nmax, alpha)
        rep = werner.moments_g(th, state)
        ex = rep["excess x^2"]
        rows.append(ResultRow("excess x^2", ex.measured, ex.target, TOL.werner_rel_fit,
                              f"lambda={lam:g}", excess_ref, relative=True))
        first = rep["<x>"]
        rows.append(ResultRow("first moment x", first.measured, first.target,
                              TOL.werner_first_moment, f"lambda={lam:g}", "<x> -> <X>/2"))
        rows.append(ResultRow("rescaled added noise x", rep["rescaled added noise x"].measured,
                              None, None, f"lambda={lam:g}",
                              "exceeds the optimum 1/4 of the covariant cloner"))
    dep = p.get("depolarizing_lambda")
    if dep is not None:
        th = werner.ThermalWeight(dep, tail=1e-6)
        vac = fock.coherent_state(th.nmax, alpha)
        res = werner.regularized_clone(vac, th, dense=False)
        target = werner.depolarizing_target(vac, th)
        rows.append(ResultRow("trace", res.trace, 1.0, TOL.werner_trace, f"lambda={dep:g}",
                              "K = 2 / Tr[(1 + rho) lam^n]"))
        rows.append(ResultRow("depolarizing limit", float(np.max(np.abs(res.reduced - target))), 0.0,
                              TOL.depolarizing_limit, f"lambda={dep:g}",
                              "Tr_2 T(rho) -> (rho + lam^n / Tr lam^n)/2"))
        nmaxes[f"{dep:g}"] = th.nmax
    return rows, {"nmax": nmaxes, "tail": tail}


def run_route_crosscheck(p: dict) -> tuple[list[ResultRow], dict]:
    space = fock.FockSpace(p.get("nmax", 10))
    ref_space = fock.FockSpace(p.get("projector_nmax", 40))
    d = space.dim
    lam = p.get("lam", 1 / 3)
    rows = [ResultRow("twin beam photons", _twin_photons(space, lam),
                      fock.twin_beam_photons(lam), TOL.twin_beam_photons, f"lambda={lam:g}",
                      "<N> = 2 lam^2/(1 - lam^2) = 1/4 at lam = 1/3")]
    ref = "U = exp[c(a^dag + b) - c^dag(a + b^dag)] vs P = V(|0><0| (x) 1)V^dag"
    for pair in p.get("alphas", [[0, 0], [0.5, 0.3], [0.8, 0]]):
        alpha = _complex(pair)
        uc, ua = fock.unitary_route_reductions(fock.coherent_state(space, alpha), space, lam)
        # the projector route runs at its own, larger cutoff and is cropped to the U levels
        out = fock.clone_channel_cv(fock.coherent_state(ref_space, alpha), 1.0, ref_space)
        pc, pa = (r[:d, :d] for r in fock.clone_reductions(out, ref_space))
        rows.append(ResultRow("route distance c", trace_distance(uc, pc), 0.0,
                              TOL.route_crosscheck, _fmt(alpha), ref))
        rows.append(ResultRow("route distance a", trace_distance(ua, pa), 0.0,
                              TOL.route_crosscheck, _fmt(alpha), ref))
        rows.append(ResultRow("clone symmetry", trace_distance(uc, ua), 0.0,
                              TOL.route_crosscheck, _fmt(alpha), "the two clones are identical"))
    return rows, {"nmax": space.nmax, "projector_nmax": ref_space.nmax, "lambda": lam}


def _twin_photons(space: fock.FockSpace, lam: float) -> float:
    psi = fock.twin_beam(space, lam)
    n = np.arange(space.dim)
    total = np.add.outer(n, n).reshape(-1)
    return float(np.sum(total * np.abs(psi) ** 2))


DISPATCH = {
    "qubit-povm": run_qubit_povm,
    "spin-uncertainty": run_spin_uncertainty,
    "spin-coherent-benchmark": run_spin_coherent,
    "cv-joint": run_cv_joint,
    "cv-sigma-scan": run_cv_sigma_scan,
    "werner-scan": run_werner_scan,
    "route-crosscheck": run_route_crosscheck,
}


def run_scenario(scen: dict) -> ScenarioResult:
    rows, diag = DISPATCH[scen["kind"]](scen.get("params", {}))
    return ScenarioResult(scen["name"], scen["kind"], scen.get("reproduces", ""), rows, diag)


# ---------------------------------------------------------------------------
# output

def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(result: ScenarioResult, scale: float = 1.0) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in result.rows:
        rec = row.record(scale)
        writer.writerow([_cell(rec[c]) for c in COLUMNS])
    return buf.getvalue()


def sidecar(result: ScenarioResult, scale: float = 1.0) -> dict:
    return {
        "scenario": result.name,
        "kind": result.kind,
        "reproduces": result.reproduces,
        "passed": result.passed(scale),
        "rows": len(result.rows),
        "tolerance_scale": scale,
        "diagnostics": result.diagnostics,
        "versions": {"clonometry": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
    }


def write_result(result: ScenarioResult, out_dir, scale: float | None = None) -> tuple[str, str]:
    import os

    scale = tolerance_scale() if scale is None else scale
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{result.name}.csv")
    json_path = os.path.join(out_dir, f"{result.name}.json")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(result, scale))
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(sidecar(result, scale), fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")
    return csv_path, json_path
