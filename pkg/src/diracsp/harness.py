"""Experiment driver: parameter sweeps, learning traces, heatmaps, benchmarks.

Every command consumes an :class:`ExperimentPlan` and writes plot-ready CSV.
Output files start with comment lines carrying a format tag and the full
resolved plan as canonical JSON, so a result file is self-describing and a
re-run with the same plan and seed reproduces the data rows byte for byte
(benchmark wall-times excepted).

Randomness is fully keyed: the noise draw for grid cell c and repetition k
uses the substream (plan.seed, cell_index=c, draw_index=k), so cells can be
evaluated in any order or in parallel without changing any number.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__ as _version
from .complexes import SimplicialComplex, load_complex
from .errors import ParseError
from .filtering import (
    FilterConfig,
    dirac_filter,
    learn,
    rayleigh_m,
    reconstruction_error,
)
from .generators import NgfParams, ngf_generate
from .operators import DiracOperator, SpectralBasis, assemble_dirac, spectral_basis
from .signals import (
    NoiseModel,
    SignalSpec,
    eigenmode_signal,
    gaussian_mix_signal,
    lift_signal,
    load_signal,
    sample_noise,
    select_eigenvalue,
)
from .spinors import TopologicalSpinor

HARNESS_FORMAT_VERSION = 1

# Default grids for `heatmap` and the named signal presets.
HEATMAP_TAUS = (0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
HEATMAP_ALPHAS = (0.1, 0.3, 0.5, 0.7, 1.0, 1.5)
SIGNAL_PRESETS = {
    "smallest": {"mode": "eigen", "selector": "smallest_positive", "m0": 1.0},
    "largest": {"mode": "eigen", "selector": "largest_positive", "m0": 3.0},
    "gaussian": {"mode": "gaussian_mix", "lambda_bar": 1.0, "sigma_hat": 0.2, "m0": 2.0},
}
BASIN_ALPHAS = (0.6, 1.5)


@dataclass(frozen=True)
class ExperimentPlan:
    """Fully resolved description of one harness run."""

    dataset: dict  # {"kind": "ngf", ...} or {"kind": "file", "path": ...}
    signal: SignalSpec
    alphas: tuple[float, ...] = (0.6,)
    taus: tuple[float, ...] = (10.0,)
    ms: tuple[float, ...] = ()  # sweep-m grid (0 baseline always added)
    m0s: tuple = ("auto",)  # learn-mode initial guesses
    eta: float = 0.3
    delta: float = 1e-4
    max_iters: int = 500
    seeds: int = 10  # noise draws per grid cell
    seed: int = 0  # master seed
    sizes: tuple[int, ...] = ()  # bench: NGF target node counts
    runs: int = 20  # bench: timed runs per size
    workers: int = 1

    def __post_init__(self):
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.alphas or not self.taus:
            raise ValueError("alpha and tau grids must be non-empty")

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "signal": self.signal.to_dict(),
            "alphas": [float(a) for a in self.alphas],
            "taus": [float(t) for t in self.taus],
            "ms": [float(m) for m in self.ms],
            "m0s": [m0 if isinstance(m0, str) else float(m0) for m0 in self.m0s],
            "eta": self.eta,
            "delta": self.delta,
            "max_iters": self.max_iters,
            "seeds": self.seeds,
            "seed": self.seed,
            "sizes": [int(s) for s in self.sizes],
            "runs": self.runs,
        }

    def config(self, tau: float, m0="auto") -> FilterConfig:
        return FilterConfig(
            tau=tau, m0=m0, eta=self.eta, delta=self.delta, max_iters=self.max_iters
        )


def plan_from_dict(data: dict) -> ExperimentPlan:
    """Build a plan from its JSON form (the `--plan` config file)."""
    try:
        sig = dict(data["signal"])
        spec = SignalSpec(
            mode=sig.pop("mode"),
            n=int(sig.pop("n", 1)),
            selector=sig.pop("selector", "smallest_positive"),
            lambda_bar=float(sig.pop("lambda_bar", 1.0)),
            sigma_hat=float(sig.pop("sigma_hat", 0.2)),
            source=sig.pop("source", None),
            variance_convention=sig.pop("variance_convention", "linear"),
        )
        kwargs = {
            k: tuple(v) if isinstance(v, list) else v
            for k, v in data.items()
            if k not in ("signal",)
        }
        return ExperimentPlan(signal=spec, **kwargs)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed plan: {exc}") from exc


def load_plan(path) -> ExperimentPlan:
    try:
        return plan_from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc


# -- dataset and signal resolution -------------------------------------------


def resolve_dataset(plan: ExperimentPlan) -> SimplicialComplex:
    kind = plan.dataset.get("kind")
    if kind == "ngf":
        params = NgfParams(
            target_nodes=int(plan.dataset["target_nodes"]),
            flavor=int(plan.dataset.get("flavor", -1)),
            beta=float(plan.dataset.get("beta", 0.0)),
            seed=int(plan.dataset.get("seed", plan.seed)),
        )
        return ngf_generate(params)
    if kind == "file":
        return load_complex(plan.dataset["path"])
    raise ParseError(f"unknown dataset kind {kind!r}")


def make_signal(
    spec: SignalSpec, Dop: DiracOperator, basis: SpectralBasis
) -> tuple[TopologicalSpinor, float]:
    """Resolve a SignalSpec to (unit true signal, its spectral center m_true)."""
    if spec.mode == "eigen":
        idx = select_eigenvalue(basis, spec.selector)
        s = eigenmode_signal(basis, spec.selector)
        return s, float(basis.eigenvalues[idx])
    if spec.mode == "gaussian_mix":
        s = gaussian_mix_signal(
            basis,
            spec.lambda_bar,
            spec.sigma_hat,
            variance_convention=spec.variance_convention,
        )
        return s, rayleigh_m(s, Dop, spec.n)
    if spec.mode == "lifted":
        src = spec.source
        if not isinstance(src, TopologicalSpinor):
            src = load_signal(src, Dop.K)
        s = lift_signal(src, Dop, spec.n)
        return s, rayleigh_m(s, Dop, spec.n)
    raise ParseError(f"unknown signal mode {spec.mode!r}")


def _cell_seed(plan: ExperimentPlan, cell_index: int) -> int:
    ss = np.random.SeedSequence(plan.seed, spawn_key=(cell_index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _noise(plan, Dop, n, alpha, cell_index, draw_index) -> TopologicalSpinor:
    model = NoiseModel(
        alpha1=alpha if n == 1 else 0.0,
        alpha2=alpha if n == 2 else 0.0,
        seed=_cell_seed(plan, cell_index),
    )
    return sample_noise(model, Dop, n, draw_index)


# -- CSV output ---------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def write_csv(path, plan: ExperimentPlan, command: str, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# diracsp/{command}/{HARNESS_FORMAT_VERSION} v{_version}\n")
        fh.write("# plan: " + json.dumps(plan.to_dict(), sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Read a harness CSV back: (header, data rows), comments skipped."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    return rows[0], rows[1:]


def _run_cells(plan: ExperimentPlan, cells: list, worker) -> list:
    """Evaluate independent grid cells, possibly on a thread pool.

    Results are collected positionally, so the output never depends on
    execution order.
    """
    if plan.workers == 1:
        return [worker(i, c) for i, c in enumerate(cells)]
    with ThreadPoolExecutor(max_workers=plan.workers) as pool:
        futures = [pool.submit(worker, i, c) for i, c in enumerate(cells)]
        return [f.result() for f in futures]


# -- commands -----------------------------------------------------------------


def cmd_sweep_m(plan: ExperimentPlan, out) -> Path:
    """Fixed-m error curves: rows (tau, alpha, m, rel-error stats, error stats).

    The m = 0 Hodge baseline is always part of the grid; rel_error divides
    each draw's error by its own m = 0 error, then aggregates over draws.
    """
    K = resolve_dataset(plan)
    Dop = assemble_dirac(K)
    n = plan.signal.n
    basis = spectral_basis(Dop, n)
    s_true, _ = make_signal(plan.signal, Dop, basis)

    ms = list(plan.ms)
    if 0.0 not in ms:
        ms = [0.0] + ms
    cells = [(tau, alpha) for tau in plan.taus for alpha in plan.alphas]

    def worker(cell_index, cell):
        tau, alpha = cell
        errs = np.empty((plan.seeds, len(ms)))
        for k in range(plan.seeds):
            if alpha > 0:
                s_tilde = s_true + _noise(plan, Dop, n, alpha, cell_index, k)
            else:
                s_tilde = s_true
            for j, m in enumerate(ms):
                s_hat = dirac_filter(s_tilde, Dop, n, tau, m, basis=basis)
                errs[k, j] = reconstruction_error(s_hat, s_true)
        base = errs[:, ms.index(0.0)]
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(base[:, None] > 0, errs / base[:, None], 1.0)
        rows = []
        for j, m in enumerate(ms):
            rows.append(
                (
                    tau,
                    alpha,
                    m,
                    float(rel[:, j].mean()),
                    float(rel[:, j].std(ddof=1)) if plan.seeds > 1 else 0.0,
                    float(errs[:, j].mean()),
                    float(errs[:, j].std(ddof=1)) if plan.seeds > 1 else 0.0,
                )
            )
        return rows

    results = _run_cells(plan, cells, worker)
    rows = [r for cell_rows in results for r in cell_rows]
    header = ["tau", "alpha", "m", "rel_error_mean", "rel_error_std", "delta_s_mean", "delta_s_std"]
    write_csv(out, plan, "sweep-m", header, rows)
    return Path(out)


def cmd_learn(plan: ExperimentPlan, out) -> Path:
    """Adaptive-filter traces, one row per iteration per draw.

    A companion ``<out stem>.summary.csv`` holds one row per draw with the
    converged flag, final m and the error-reduction ratio vs the noisy input.
    """
    K = resolve_dataset(plan)
    Dop = assemble_dirac(K)
    n = plan.signal.n
    basis = spectral_basis(Dop, n)
    s_true, m_true = make_signal(plan.signal, Dop, basis)

    cells = [
        (tau, alpha, m0)
        for tau in plan.taus
        for alpha in plan.alphas
        for m0 in plan.m0s
    ]

    def worker(cell_index, cell):
        tau, alpha, m0 = cell
        trace_rows, summary_rows = [], []
        for k in range(plan.seeds):
            s_tilde = s_true + _noise(plan, Dop, n, alpha, cell_index, k) if alpha > 0 else s_true
            _, tr = learn(s_tilde, Dop, n, plan.config(tau, m0), truth=s_true, basis=basis)
            for r in tr.rows:
                trace_rows.append(
                    (tau, alpha, m0, k, r.t, r.m_hat, r.delta_s, r.rel_error)
                )
            final = tr.rows[-1]
            reduction = (
                1.0 - final.delta_s / tr.noisy_error if tr.noisy_error else float("nan")
            )
            summary_rows.append(
                (
                    tau, alpha, m0, k,
                    int(tr.converged), tr.iterations, tr.final_m, m_true,
                    final.delta_s, final.rel_error, tr.noisy_error, reduction,
                )
            )
        return trace_rows, summary_rows

    results = _run_cells(plan, cells, worker)
    trace_rows = [r for t, _ in results for r in t]
    summary_rows = [r for _, s in results for r in s]

    out = Path(out)
    write_csv(
        out, plan, "learn",
        ["tau", "alpha", "m0", "draw", "t", "m_hat", "delta_s", "rel_error"],
        trace_rows,
    )
    write_csv(
        out.with_name(out.stem + ".summary.csv"), plan, "learn-summary",
        ["tau", "alpha", "m0", "draw", "converged", "iterations", "m_final",
         "m_true", "final_delta_s", "final_rel_error", "noisy_error", "reduction"],
        summary_rows,
    )
    return out


def cmd_heatmap(plan: ExperimentPlan, out) -> Path:
    """Mean reconstruction error of the learned filter over a (tau, alpha) grid."""
    K = resolve_dataset(plan)
    Dop = assemble_dirac(K)
    n = plan.signal.n
    basis = spectral_basis(Dop, n)
    s_true, _ = make_signal(plan.signal, Dop, basis)
    m0 = plan.m0s[0]

    cells = [(tau, alpha) for tau in plan.taus for alpha in plan.alphas]

    def worker(cell_index, cell):
        tau, alpha = cell
        errs, convs = [], []
        for k in range(plan.seeds):
            s_tilde = s_true + _noise(plan, Dop, n, alpha, cell_index, k) if alpha > 0 else s_true
            _, tr = learn(s_tilde, Dop, n, plan.config(tau, m0), truth=s_true, basis=basis)
            errs.append(tr.rows[-1].delta_s)
            convs.append(tr.converged)
        errs = np.array(errs)
        return (
            tau, alpha,
            float(errs.mean()),
            float(errs.std(ddof=1)) if plan.seeds > 1 else 0.0,
            float(np.mean(convs)),
        )

    rows = _run_cells(plan, cells, worker)
    write_csv(
        out, plan, "heatmap",
        ["tau", "alpha", "delta_s_mean", "delta_s_std", "converged_fraction"],
        rows,
    )
    return Path(out)


def cmd_basin(plan: ExperimentPlan, out) -> Path:
    """Convergence basin: |m_final - m_true| as a function of the initial guess."""
    K = resolve_dataset(plan)
    Dop = assemble_dirac(K)
    n = plan.signal.n
    basis = spectral_basis(Dop, n)
    s_true, m_true = make_signal(plan.signal, Dop, basis)

    cells = [
        (tau, alpha, m0)
        for tau in plan.taus
        for alpha in plan.alphas
        for m0 in plan.m0s
    ]

    def worker(cell_index, cell):
        tau, alpha, m0 = cell
        devs = []
        for k in range(plan.seeds):
            s_tilde = s_true + _noise(plan, Dop, n, alpha, cell_index, k) if alpha > 0 else s_true
            _, tr = learn(s_tilde, Dop, n, plan.config(tau, m0), truth=s_true, basis=basis)
            devs.append(abs(tr.final_m - m_true))
        devs = np.array(devs)
        return (
            tau, alpha, m0, m_true,
            float(devs.mean()),
            float(devs.std(ddof=1)) if plan.seeds > 1 else 0.0,
        )

    rows = _run_cells(plan, cells, worker)
    write_csv(
        out, plan, "basin",
        ["tau", "alpha", "m0", "m_true", "abs_dm_mean", "abs_dm_std"],
        rows,
    )
    return Path(out)


def cmd_bench(plan: ExperimentPlan, out) -> tuple[Path, float, float]:
    """Wall-time scaling of one full adaptive run vs problem size N + L.

    Per size: an NGF complex is grown, the Gaussian-mixture signal prepared,
    and `runs` adaptive runs are timed on a monotonic clock (one untimed
    warm-up first).  Each timed run is the plain implementation end to end:
    assemble the operator, diagonalize D_n densely (method="eigh", the cost
    that dominates), then run the adaptive loop in the eigenbasis.  Returns
    (path, exponent, stderr) of the log-log least-squares fit of the median
    run time vs N + L (the median resists scheduler noise; per-size means
    are reported alongside).  With only two sizes the fit is flagged
    low-confidence.
    """
    if len(plan.sizes) < 2:
        raise ValueError("bench needs at least two sizes")
    tau = plan.taus[0]
    alpha = plan.alphas[0]

    rows = []
    for si, nodes in enumerate(plan.sizes):
        K = ngf_generate(
            NgfParams(
                target_nodes=int(nodes),
                flavor=int(plan.dataset.get("flavor", -1)),
                beta=float(plan.dataset.get("beta", 0.0)),
                seed=_cell_seed(plan, si),
            )
        )
        prep = assemble_dirac(K)
        prep_basis = spectral_basis(prep, plan.signal.n, include_kernel=False)
        s_true, _ = make_signal(plan.signal, prep, prep_basis)
        times = []
        for r in range(plan.runs + 1):  # +1 warm-up
            s_tilde = s_true + _noise(plan, prep, plan.signal.n, alpha, si, r)
            t0 = time.perf_counter()
            Dop = assemble_dirac(K)
            basis = spectral_basis(
                Dop, plan.signal.n, include_kernel=False, method="eigh"
            )
            learn(s_tilde, Dop, plan.signal.n, plan.config(tau, plan.m0s[0]), basis=basis)
            dt = time.perf_counter() - t0
            if r > 0:
                times.append(dt)
        times = np.array(times)
        rows.append(
            (
                int(nodes), K.n0 + K.n1, len(times),
                float(times.mean()), float(np.median(times)),
                float(times.std(ddof=1)) if len(times) > 1 else 0.0,
            )
        )

    x = np.log([r[1] for r in rows])
    y = np.log([r[4] for r in rows])  # median column
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = max(len(x) - 2, 1)
    stderr = float(np.sqrt((resid**2).sum() / dof / ((x - x.mean()) ** 2).sum()))
    low_confidence = len(x) < 3

    out = Path(out)
    write_csv(
        out, plan, "bench",
        ["target_nodes", "n_plus_l", "runs", "seconds_mean", "seconds_median", "seconds_std"],
        rows,
    )
    with open(out, "a") as fh:
        fh.write(
            f"# fit: exponent={slope!r} stderr={stderr!r} low_confidence={low_confidence}\n"
        )
    return out, float(slope), stderr
