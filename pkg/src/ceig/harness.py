"""Experiment harness: material fixtures, seeded perturbations, and the
table-style perturbation study.

The protocol mirrors the reference tables: for each material and each
epsilon, draw a nonnegative random perturbation with entries below
epsilon, compute the three intervals plus the true largest C-eigenvalue
of the perturbed tensor, and require containment and nesting to hold
before anything is emitted.

Sub-seeds are derived by mixing (seed, material index, epsilon index,
trial), so cells are independent: results do not depend on worker count
or on appending further materials or epsilons.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import check_nesting, full_report
from .errors import CeigError, PropertyViolation, ValidationError
from .rng import SplitMix64, derive_seed
from .spectral import SolverConfig, c_max_via_lift
from .tensors import PiezoTensor, make_piezo, parse_tensor_text

_SLACK = 1e-8  # containment / nesting slack carried through from bounds

DEFAULT_EPSILONS = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


@dataclass(frozen=True)
class MaterialRecord:
    name: str
    tensor: PiezoTensor

    def __post_init__(self):
        if not self.name:
            raise ValidationError("material name must be non-empty")


@dataclass(frozen=True)
class ExperimentConfig:
    epsilons: tuple = DEFAULT_EPSILONS
    trials: int = 1
    seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    signed: bool = False
    shared_direction: bool = False
    workers: int = 1

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise ValidationError("need at least one epsilon")
        if any(e < 0 for e in eps):
            raise ValidationError(f"epsilons must be nonnegative, got {eps}")
        object.__setattr__(self, "epsilons", eps)
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2 ** 64):
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ValidationError(f"workers must be a positive integer, got {self.workers!r}")


@dataclass(frozen=True)
class ResultRow:
    material: str
    epsilon: float
    trial: int
    true_lambda: float
    lo21: float
    hi21: float
    lo24: float
    hi24: float
    lo25: float
    hi25: float
    nested: bool
    contained: bool


def load_material(path):
    """Parse one tensor text file; the name falls back to the file stem."""
    path = Path(path)
    tensor, name = parse_tensor_text(path.read_text(encoding="utf-8"), str(path))
    return MaterialRecord(name=name or path.stem, tensor=tensor)


def load_materials(directory):
    """All *.txt fixtures in a directory, sorted by filename."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.txt"))
    if not paths:
        raise ValidationError(f"no *.txt material files found in {directory}")
    return [load_material(p) for p in paths]


def gen_perturbation(n, epsilon, stream, signed=False):
    """Random perturbation tensor with entries symmetrized over (j, k).

    Draws n^3 uniforms from `stream`, scales by epsilon, and averages the
    two orderings of the last index pair; entries land in [0, epsilon)
    (or (-epsilon, epsilon) with `signed`).
    """
    if epsilon < 0:
        raise ValidationError(f"epsilon must be nonnegative, got {epsilon!r}")
    u = np.array(stream.uniforms(n ** 3), dtype=float)
    if signed:
        u = 2.0 * u - 1.0
    return make_piezo(n, epsilon * u, mode="auto_symmetrize")


def _run_cell(material, m_idx, epsilon, e_idx, trial, cfg):
    if cfg.shared_direction:
        stream = SplitMix64(derive_seed(cfg.seed, m_idx, trial))
        e = epsilon * gen_perturbation(material.tensor.n, 1.0, stream, signed=cfg.signed)
    else:
        stream = SplitMix64(derive_seed(cfg.seed, m_idx, e_idx, trial))
        e = gen_perturbation(material.tensor.n, epsilon, stream, signed=cfg.signed)
    where = f"material {material.name!r}, epsilon {epsilon:g}, trial {trial}"
    try:
        report = full_report(material.tensor, e, cfg.solver)
        true_lambda = c_max_via_lift(material.tensor + e, cfg.solver).value
    except CeigError as exc:
        raise type(exc)(f"{where}: {exc}") from exc
    contained = all(
        iv.contains(true_lambda, _SLACK)
        for iv in (report.interval_21, report.interval_24, report.interval_25)
    )
    nested = check_nesting(report, _SLACK)
    if not (contained and nested):
        raise PropertyViolation(
            f"{where}: containment={contained} nesting={nested}, "
            f"true={true_lambda!r}, report={report!r}"
        )
    return ResultRow(
        material=material.name,
        epsilon=epsilon,
        trial=trial,
        true_lambda=true_lambda,
        lo21=report.interval_21.lo,
        hi21=report.interval_21.hi,
        lo24=report.interval_24.lo,
        hi24=report.interval_24.hi,
        lo25=report.interval_25.lo,
        hi25=report.interval_25.hi,
        nested=nested,
        contained=contained,
    )


def run_experiment(materials, cfg=ExperimentConfig()):
    """All (material, epsilon, trial) cells, epsilon descending per material.

    Raises PropertyViolation if any cell's true value escapes an interval
    or the nesting chain breaks; rows are only returned for clean runs.
    """
    if not materials:
        raise ValidationError("no materials given")
    dims = {m.tensor.n for m in materials}
    if len(dims) != 1:
        raise ValidationError(f"materials mix dimensions {sorted(dims)}")
    eps_sorted = tuple(sorted(cfg.epsilons, reverse=True))
    cells = [
        (mat, m_idx, eps, e_idx, trial)
        for m_idx, mat in enumerate(materials)
        for e_idx, eps in enumerate(eps_sorted)
        for trial in range(cfg.trials)
    ]
    if cfg.workers == 1:
        return [_run_cell(mat, m, e, ei, t, cfg) for mat, m, e, ei, t in cells]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(_run_cell, mat, m, e, ei, t, cfg) for mat, m, e, ei, t in cells]
        return [f.result() for f in futures]


def _open_for_write(destination):
    if hasattr(destination, "write"):
        return destination, False
    return open(destination, "w", encoding="utf-8", newline="\n"), True


CSV_HEADER = "material,epsilon,trial,true_lambda,lo21,hi21,lo24,hi24,lo25,hi25,nested,contained"


def emit_csv(rows, destination):
    """Write rows as CSV with 8-decimal values and LF line endings."""
    out, own = _open_for_write(destination)
    try:
        out.write(CSV_HEADER + "\n")
        for r in rows:
            fields = [
                r.material,
                f"{r.epsilon:.8f}",
                str(r.trial),
                f"{r.true_lambda:.8f}",
                f"{r.lo21:.8f}",
                f"{r.hi21:.8f}",
                f"{r.lo24:.8f}",
                f"{r.hi24:.8f}",
                f"{r.lo25:.8f}",
                f"{r.hi25:.8f}",
                "true" if r.nested else "false",
                "true" if r.contained else "false",
            ]
            out.write(",".join(fields) + "\n")
    finally:
        if own:
            out.close()


def emit_markdown(rows, destination):
    """Table per material: epsilon columns, an upper-endpoint section and
    a lower-endpoint section, mirroring the reference layout.

    Only trial 0 is rendered; other trials stay CSV-only.
    """
    out, own = _open_for_write(destination)
    try:
        if not rows:
            out.write("No experiment rows.\n")
            return
        n_trials = max(r.trial for r in rows) + 1
        shown = [r for r in rows if r.trial == 0]
        materials = []
        for r in shown:
            if r.material not in materials:
                materials.append(r.material)
        if n_trials > 1:
            out.write(f"Showing trial 0 of {n_trials}; all trials are in the CSV output.\n\n")
        for name in materials:
            mine = [r for r in shown if r.material == name]
            mine.sort(key=lambda r: -r.epsilon)
            eps_hdr = " | ".join(f"eps={r.epsilon:g}" for r in mine)
            out.write(f"### {name}\n\n")
            out.write(f"| bound | {eps_hdr} |\n")
            out.write("|---" * (len(mine) + 1) + "|\n")
            sections = (
                ("upper", [("TRUE", "true_lambda"), ("(2.1)", "hi21"), ("(2.4)", "hi24"), ("(2.5)", "hi25")]),
                ("lower", [("TRUE", "true_lambda"), ("(2.1)", "lo21"), ("(2.4)", "lo24"), ("(2.5)", "lo25")]),
            )
            for section, spec_rows in sections:
                for label, attr in spec_rows:
                    cells = " | ".join(f"{getattr(r, attr):.8f}" for r in mine)
                    tag = label if label == "TRUE" else f"{label} {section}"
                    out.write(f"| {tag} | {cells} |\n")
            out.write("\n")
    finally:
        if own:
            out.close()
