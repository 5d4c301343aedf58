"""Seeded generators and runners for the transformation-quotient experiments.

Experiments
-----------
1. Norm-relative condition quotient versus degree, orthogonal ``A``.
2. Coefficientwise condition quotient versus ``rho`` (degree 2), orthogonal ``A``.
3. Norm-relative condition quotient versus ``cond_inf(A)``, ill-conditioned ``A``.
4. Backward-error counterpart of 1 (optionally with ill-conditioned ``A``).
5. Backward-error counterpart of 2.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigensolve import SingularPolynomialError, eigentriples
from .mobius import Mobius2x2, ProjPoint, map_eigenvalue, mobius_transform, push_eigenvalue
from .polycore import HomMatrixPolynomial, WeightScheme
from .sensitivity import (
    SensitivityRecord,
    backward_record,
    condition_record,
    rho_factors,
)

log = logging.getLogger(__name__)

# trial counts n_k for degrees k = 1..15 at full scale
TRIAL_TABLE = (75, 37, 25, 18, 15, 12, 10, 9, 8, 7, 7, 6, 5, 5, 5)
DESK_TRIALS = (15, 8, 5, 4, 3, 3, 2, 2, 2, 2)
EXP3_PAIRS = ((1, 5), (1, 10), (1, 15), (2, 5), (2, 10), (3, 5), (3, 8))

CSV_COLUMNS = (
    "experiment", "trial", "seed", "k", "n", "scheme", "cond_inf_A", "det_abs", "rho",
    "rho_tilde", "alpha_re", "alpha_im", "beta_re", "beta_im", "gamma_re", "gamma_im",
    "delta_re", "delta_im", "kappa_P", "kappa_MAP", "q_exact", "q_direct", "lower", "upper",
    "lower_sharp", "upper_sharp", "simple_flag",
)

RHO_TOL = 1e-6
_DEFAULT_SCHEME = {1: "p", 2: "r", 3: "p", 4: "p", 5: "r"}


# configuration ---------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """Campaign description.

    Each ``(k, n)`` in ``pairs`` gets the matching count from ``trials``. Trials
    take a parameter from ``rho_exponents`` (``rho = 10**e``) or, for
    ill-conditioned ``A``, from ``s_values`` (``cond_2(A) = 10**s``): cycled
    when ``sweep == "grid"``, drawn uniformly when ``sweep == "random"``.
    """

    experiment: int
    pairs: tuple = ()
    trials: tuple = ()
    seed: int = 0
    scheme: str | None = None
    rho_exponents: tuple = ()
    s_values: tuple = ()
    matrix_kind: str = "orthogonal"
    sweep: str = "grid"
    workers: int = 1
    label: str = "custom"

    def __post_init__(self):
        if self.experiment not in (1, 2, 3, 4, 5):
            raise ValueError("experiment id must be 1..5")
        self.pairs = tuple((int(k), int(n)) for k, n in self.pairs)
        self.trials = tuple(int(t) for t in self.trials)
        self.rho_exponents = tuple(self.rho_exponents)
        self.s_values = tuple(self.s_values)
        if self.scheme is None:
            self.scheme = _DEFAULT_SCHEME[self.experiment]
        self.scheme = WeightScheme.parse(self.scheme).value
        if len(self.pairs) != len(self.trials):
            raise ValueError("pairs and trials must have equal length")
        if any(t < 1 for t in self.trials):
            raise ValueError("trials must be >= 1")
        if any(not 1 <= k <= 15 for k, _ in self.pairs):
            raise ValueError("degrees must lie in [1, 15]")
        if any(n < 1 for _, n in self.pairs):
            raise ValueError("sizes must be >= 1")
        if any(not 0 <= s <= 10 for s in self.s_values):
            raise ValueError("s values must lie in [0, 10]")
        if self.matrix_kind not in ("orthogonal", "illcond"):
            raise ValueError("matrix_kind must be 'orthogonal' or 'illcond'")
        if self.matrix_kind == "illcond" and not self.s_values:
            raise ValueError("ill-conditioned runs need s values")
        if self.sweep not in ("grid", "random"):
            raise ValueError("sweep must be 'grid' or 'random'")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def backward(self) -> bool:
        return self.experiment in (4, 5)

    @classmethod
    def desk(cls, experiment: int, seed: int = 0, matrix_kind: str | None = None,
             **kw) -> "ExperimentConfig":
        """Reduced campaign that runs in seconds in double precision."""
        return cls._build(experiment, seed, "desk", matrix_kind, **kw)

    @classmethod
    def paper(cls, experiment: int, seed: int = 0, matrix_kind: str | None = None,
              **kw) -> "ExperimentConfig":
        """Full-size campaign: complete trial table and parameter ranges."""
        return cls._build(experiment, seed, "paper", matrix_kind, **kw)

    @classmethod
    def _build(cls, experiment, seed, scale, matrix_kind, **kw):
        desk = scale == "desk"
        smax = 6 if desk else 10
        rmax = 6 if desk else 10
        sweep = "grid" if desk else "random"
        if experiment == 3 or (experiment == 4 and matrix_kind == "illcond"):
            if experiment == 3:
                pairs = EXP3_PAIRS
                trials = (10,) * len(pairs)
            else:
                pairs = ((1, 5),)
                trials = (21,) if desk else (30,)
            base = dict(pairs=pairs, trials=trials, s_values=tuple(range(smax + 1)),
                        matrix_kind="illcond", sweep=sweep)
        elif experiment in (1, 4):
            counts = DESK_TRIALS if desk else TRIAL_TABLE
            base = dict(pairs=tuple((k, 5) for k in range(1, len(counts) + 1)), trials=counts)
        else:
            base = dict(pairs=((2, 5),), trials=(35,) if desk else (30,),
                        rho_exponents=tuple(range(rmax + 1)), sweep=sweep)
        base.update(kw)
        return cls(experiment=experiment, seed=seed, label=scale, **base)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pairs"] = [list(p) for p in self.pairs]
        d["trials"] = list(self.trials)
        d["rho_exponents"] = list(self.rho_exponents)
        d["s_values"] = list(self.s_values)
        return d


@dataclass(frozen=True)
class TrialSpec:
    trial: int
    k: int
    n: int
    slot: int


@dataclass
class TrialRecord:
    """Outcome of one ``(P, A)`` trial."""

    spec: TrialSpec
    records: list = field(default_factory=list)
    rho_target: float | None = None
    s: int | None = None
    error: str | None = None


def plan_trials(cfg: ExperimentConfig) -> list[TrialSpec]:
    """Deterministic trial list: one spec per generated polynomial."""
    specs = []
    idx = 0
    for (k, n), count in zip(cfg.pairs, cfg.trials):
        for j in range(count):
            specs.append(TrialSpec(idx, k, n, j))
            idx += 1
    return specs


def trial_rng(seed: int, experiment: int, trial: int) -> np.random.Generator:
    """Independent PCG64 stream for one trial."""
    return np.random.default_rng([seed, experiment, trial])


# generators --------------------------------------------------------------------------


def random_polynomial(n: int, k: int, rng: np.random.Generator) -> HomMatrixPolynomial:
    """Coefficients with i.i.d. standard normal real entries."""
    if n < 1 or not 1 <= k <= 15:
        raise ValueError("need n >= 1 and 1 <= k <= 15")
    return HomMatrixPolynomial(rng.standard_normal((k + 1, n, n)))


def _random_orthogonal(rng: np.random.Generator) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    return Q


def random_orthogonal_2x2(rng: np.random.Generator) -> Mobius2x2:
    """Orthogonal factor of the QR factorization of a 2x2 Gaussian matrix."""
    return Mobius2x2.from_matrix(_random_orthogonal(rng))


def random_illcond(rng: np.random.Generator, s: int) -> Mobius2x2:
    """``U diag(r, r / 10**s) W`` with orthogonal ``U``, ``W`` and Gaussian ``r``."""
    if not 0 <= s <= 10:
        raise ValueError("s must lie in [0, 10]")
    r = rng.standard_normal()
    while abs(r) < 1e-3:
        r = rng.standard_normal()
    U = _random_orthogonal(rng)
    W = _random_orthogonal(rng)
    return Mobius2x2.from_matrix(U @ np.diag([r, r / 10.0**s]) @ W)


def rho_scaling_branch(norms, rho: float) -> tuple[str, bool]:
    """Case label of the degree-2 rho scaling and whether ``B_0``/``B_2`` roles swap."""
    n0, n1, n2 = norms
    mirrored = n2 < n0
    if mirrored:
        n0, n2 = n2, n0
    if n0 == n1 == n2:
        return "a", mirrored
    rho_T = max(n0, n1, n2) / n0
    s = 1 if n1 > n2 else 2
    if s == 1:
        return ("b1" if rho_T <= rho else "b2"), mirrored
    return ("c1" if rho_T <= rho else "c2"), mirrored


def scale_poly_to_rho(P: HomMatrixPolynomial, rho: float,
                      rng: np.random.Generator | None = None) -> HomMatrixPolynomial:
    """Rescale the coefficients of a degree-2 polynomial so that ``rho_factors`` equals ``rho``.

    ``rng`` is only used when all three coefficient norms coincide.
    """
    if P.degree != 2:
        raise ValueError("rho scaling is defined for degree 2 only")
    if rho < 1:
        raise ValueError("target rho must be >= 1")
    norms = [float(v) for v in P.coeff_norms()]
    if norms[0] == 0 or norms[2] == 0:
        raise ValueError("B_0 and B_2 must be nonzero")
    branch, mirrored = rho_scaling_branch(norms, rho)
    B = [np.array(c) for c in P.coeffs]
    if mirrored:
        B.reverse()
        norms.reverse()
    n0, n1, n2 = norms
    rho_T = max(norms) / n0
    if branch == "a":
        if rng is None:
            rng = np.random.default_rng()
        q = int(rng.integers(0, 3))
        f = [1.0, 1.0, 1.0]
        f[q] = rho
    elif branch == "b1":
        f = [rho_T, rho, rho_T]
    elif branch == "b2":
        f = [rho_T, rho, rho * n1 / n2]
    elif branch == "c1":
        f = [1.0, 1.0, rho / rho_T]
    else:
        f = [rho_T, rho * n2 / n1, rho]
    out = [fi * Bi for fi, Bi in zip(f, B)]
    if mirrored:
        out.reverse()
    return HomMatrixPolynomial(np.stack(out))


# attainability ------------------------------------------------------------------------


def _upper_target(A: Mobius2x2, k: int) -> ProjPoint:
    if k == 1:
        M = np.abs(A.matrix)
        j = int(np.argmax(M.sum(axis=0)))
        g = np.zeros(2, dtype=complex)
        g[j] = 1.0
        return push_eigenvalue(A, ProjPoint(g[0], g[1]))
    Ainv = A.inverse().matrix
    i = int(np.argmax(np.abs(Ainv).sum(axis=1)))
    row = Ainv[i]
    v = np.where(row != 0, np.conj(row) / np.where(row != 0, np.abs(row), 1.0), 1.0)
    return ProjPoint(v[0], v[1])


def attainment_target_eigenvalue(A: Mobius2x2, k: int, target: str = "upper") -> ProjPoint:
    """Eigenvalue of ``attainment_poly(A, k, ...)`` aimed at the chosen bound."""
    if target == "upper":
        return _upper_target(A, k)
    if target == "lower":
        return push_eigenvalue(A, _upper_target(A.inverse(), k))
    raise ValueError("target must be 'upper' or 'lower'")


def _linear_times(coeffs: np.ndarray, u: complex, v: complex) -> np.ndarray:
    # multiply by (u alpha + v beta); index i holds alpha^i beta^(deg - i)
    return np.convolve(coeffs, np.array([v, u]))


def _upper_poly(A: Mobius2x2, k: int, n: int, eps: float, alpha0: ProjPoint) -> HomMatrixPolynomial:
    a0, b0 = alpha0.alpha, alpha0.beta
    q = np.array([-a0, b0])  # beta0 alpha - alpha0 beta
    for _ in range(k - 1):
        q = _linear_times(q, np.conj(a0), np.conj(b0))
    coeffs = np.zeros((k + 1, n, n), dtype=complex)
    coeffs[:, 0, 0] = eps * q
    # the large block follows the largest entry of A
    idx = int(np.argmax(np.abs([A.a, A.b, A.c, A.d])))
    lead = k if idx in (0, 1) else 0
    coeffs[lead, 1:, 1:] = np.eye(n - 1)
    return HomMatrixPolynomial(coeffs)


def attainment_poly(A: Mobius2x2, k: int, n: int, target: str = "upper",
                    eps: float = 1e-3) -> HomMatrixPolynomial:
    """Block-diagonal polynomial whose eigenvalue nearly attains a quotient bound.

    ``P = diag(eps q, Q)`` where ``q`` has the target eigenvalue as a simple root
    and ``Q`` is ``alpha^k I`` or ``beta^k I`` depending on which entry of ``A``
    has the largest modulus. The lower target is built as the upper target for
    ``A^{-1}`` and transformed back with ``A^{-1}``.
    """
    if k < 1 or n < 2 or eps <= 0:
        raise ValueError("need k >= 1, n >= 2 and eps > 0")
    if target == "upper":
        return _upper_poly(A, k, n, eps, _upper_target(A, k))
    if target == "lower":
        B = A.inverse()
        return mobius_transform(B, _upper_poly(B, k, n, eps, _upper_target(B, k)))
    raise ValueError("target must be 'upper' or 'lower'")


# runner ---------------------------------------------------------------------------------


def _param(values: tuple, spec: TrialSpec, cfg: ExperimentConfig, rng: np.random.Generator):
    if not values:
        return None
    if cfg.sweep == "grid":
        return values[spec.slot % len(values)]
    return values[int(rng.integers(0, len(values)))]


def run_trial(cfg: ExperimentConfig, spec: TrialSpec) -> TrialRecord:
    """Generate one ``(P, A)`` pair and its per-eigenvalue records."""
    rng = trial_rng(cfg.seed, cfg.experiment, spec.trial)
    out = TrialRecord(spec)
    try:
        e = _param(cfg.rho_exponents, spec, cfg, rng)
        s = _param(cfg.s_values, spec, cfg, rng) if cfg.matrix_kind == "illcond" else None
        P = random_polynomial(spec.n, spec.k, rng)
        if e is not None:
            out.rho_target = 10.0**e
            P = scale_poly_to_rho(P, out.rho_target, rng)
            measured, _ = rho_factors(P)
            if abs(measured / out.rho_target - 1) > RHO_TOL:
                raise ArithmeticError(f"rho scaling missed target: {measured} vs {out.rho_target}")
        if s is not None:
            out.s = int(s)
            A = random_illcond(rng, int(s))
        else:
            A = random_orthogonal_2x2(rng)
        P_tilde = mobius_transform(A, P)
        if cfg.backward:
            out.records = [backward_record(A, P, P_tilde, t, cfg.scheme)
                           for t in eigentriples(P_tilde, refine=False)]
        else:
            out.records = [condition_record(A, P, P_tilde, t, cfg.scheme)
                           for t in eigentriples(P)]
    except (SingularPolynomialError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        log.warning("experiment %d trial %d dropped: %s", cfg.experiment, spec.trial, exc)
        out.records = []
        out.error = str(exc)
    return out


def run_experiment(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Run every trial; results are in trial order regardless of ``workers``."""
    specs = plan_trials(cfg)
    if cfg.workers == 1:
        return [run_trial(cfg, s) for s in specs]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda s: run_trial(cfg, s), specs))


# output ---------------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def record_row(rec: SensitivityRecord, experiment: int = 0, trial: int = 0, seed: int = 0,
               k: int = 0, n: int = 0) -> list[str]:
    """One CSV row (as strings) in ``CSV_COLUMNS`` order."""
    a, g = rec.eigenvalue, rec.mapped
    vals = (
        experiment, trial, seed, k, n, rec.scheme.value, rec.cond_inf_A, rec.det_abs, rec.rho,
        rec.rho_tilde, a.alpha.real, a.alpha.imag, a.beta.real, a.beta.imag,
        g.alpha.real, g.alpha.imag, g.beta.real, g.beta.imag, rec.kappa_P, rec.kappa_MAP,
        rec.q_exact, rec.q_direct, rec.lower, rec.upper, rec.lower_sharp, rec.upper_sharp,
        bool(rec.simple_flag),
    )
    return [_fmt(v) for v in vals]


def write_csv(fh, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)


def experiment_rows(cfg: ExperimentConfig, results: list[TrialRecord]) -> list[list[str]]:
    rows = []
    for tr in results:
        for rec in tr.records:
            rows.append(record_row(rec, cfg.experiment, tr.spec.trial, cfg.seed,
                                   tr.spec.k, tr.spec.n))
    return rows


def experiment_csv(cfg: ExperimentConfig, results: list[TrialRecord]) -> str:
    buf = io.StringIO()
    write_csv(buf, experiment_rows(cfg, results))
    return buf.getvalue()


def read_csv(path_or_fh) -> list[dict]:
    """Rows of a results CSV with numeric columns converted to float."""
    if isinstance(path_or_fh, (str, os.PathLike)):
        with open(path_or_fh, newline="") as fh:
            return read_csv(fh)
    reader = csv.DictReader(path_or_fh)
    missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise ValueError(f"CSV is missing columns: {', '.join(missing)}")
    out = []
    for row in reader:
        conv = {}
        for key, val in row.items():
            conv[key] = val if key == "scheme" else float(val)
        out.append(conv)
    return out


def save_experiment(cfg: ExperimentConfig, out_dir: str, version: str) -> dict:
    """Run ``cfg`` and write ``exp<id>.csv`` plus ``exp<id>_manifest.json`` into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    t0 = time.perf_counter()
    results = run_experiment(cfg)
    wall = time.perf_counter() - t0
    stem = os.path.join(out_dir, f"exp{cfg.experiment}")
    text = experiment_csv(cfg, results)
    with open(stem + ".csv", "w", newline="") as fh:
        fh.write(text)
    manifest = {
        "config": cfg.to_dict(),
        "version": version,
        "wall_time_s": wall,
        "trials": len(results),
        "rows": sum(len(t.records) for t in results),
        "flagged_rows": sum(1 for t in results for r in t.records if not r.simple_flag),
        "dropped_trials": [{"trial": t.spec.trial, "reason": t.error} for t in results if t.error],
    }
    with open(stem + "_manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest
