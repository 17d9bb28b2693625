"""Batch harness: composes the verification suites into reproducible,
seeded runs with structured reports.

Reproducibility contract: the master seed is split into independent
substreams keyed by (seed, suite, space, index) through SHA-256 into a
numpy SeedSequence, so results do not depend on execution order or worker
count; records are sorted by (name, params) before report assembly.  Two
runs with the same config and seed produce reports that are identical
after stripping the timestamp and the per-record wall times.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .diffops import GroupFunction, tau, tau_iterated
from .eigenfamilies import (
    EigenfunctionSpec,
    build_eigenfunction,
    expected_eigenvalues,
    random_parameters,
    verify_dual,
    verify_eigen,
)
from .exact import rc
from .formal import build_phi_p, evaluate_formal, tau_formal, verify_p_harmonic
from .identities import (
    IdentityCheckResult,
    assert_full_coverage,
    check_coordinate_identities,
    check_generator_sums,
    check_kappa_basis_decomposition,
    check_skew_lemma,
    check_symplectic_facts,
)
from .lie import (
    SO,
    SP,
    SPACE_FAMILIES,
    SU,
    GroupSpec,
    SymmetricSpaceSpec,
    basis_g,
    sample_with_coefficients,
)

SUITES = ("eigen", "dual", "pharmonic", "identities", "crosscheck")

SCHEMA_VERSION = 1

DEFAULT_SPACES: Tuple[Tuple[str, int], ...] = tuple(
    (family, n) for family in SPACE_FAMILIES for n in (2, 3)
)

# Per-suite default overrides, applied beneath config-file sections and CLI flags.
SUITE_DEFAULTS: Dict[str, Dict] = {
    "identities": {"samples": 20, "tol": 1e-9},
    "crosscheck": {"samples": 10, "abs_tol": 1e-6, "rel_tol": 1e-7},
    "dual": {"sigma": 0.2, "tau2_tol": 1e-5, "tol": 1e-7},
    "eigen": {"draws": 3},
}


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 2)."""


@dataclass
class RunConfig:
    suites: Tuple[str, ...] = SUITES
    spaces: Tuple[Tuple[str, int], ...] = DEFAULT_SPACES
    p_max: int = 4
    samples: int = 50
    tol: float = 1e-8
    sigma: float = 0.5
    seed: int = 42
    budget: int = 10**6
    out: Optional[str] = None
    jobs: int = 1
    suite_overrides: Dict[str, Dict] = field(default_factory=dict)
    # keys set explicitly on the command line; they beat per-suite defaults
    explicit: Tuple[str, ...] = ()

    def validate(self):
        for s in self.suites:
            if s not in SUITES:
                raise ConfigError(f"unknown suite {s!r}; choose from {SUITES}")
        for family, n in self.spaces:
            if family not in SPACE_FAMILIES:
                raise ConfigError(f"unknown space family {family!r}")
            if not isinstance(n, int) or n < 2:
                raise ConfigError(f"space parameter n must be an integer >= 2, got {n!r}")
        if self.p_max < 1:
            raise ConfigError(f"p_max must be >= 1, got {self.p_max}")
        if self.samples < 0:
            raise ConfigError(f"samples must be >= 0, got {self.samples}")
        if self.tol <= 0 or self.sigma <= 0:
            raise ConfigError("tol and sigma must be positive")
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        return self

    def suite_param(self, suite: str, key: str, default=None):
        """Effective value of a key for a suite.

        Precedence: explicit CLI flag > config-file suite section >
        built-in suite default > global field > `default`.
        """
        if key in self.explicit and hasattr(self, key):
            return getattr(self, key)
        override = self.suite_overrides.get(suite, {})
        if key in override:
            return override[key]
        if key in SUITE_DEFAULTS.get(suite, {}):
            return SUITE_DEFAULTS[suite][key]
        if hasattr(self, key):
            return getattr(self, key)
        return default

    def echo(self) -> Dict:
        d = asdict(self)
        d["spaces"] = [list(s) for s in self.spaces]
        d["suites"] = list(self.suites)
        return d


def substream(seed: int, *keys) -> np.random.Generator:
    """Deterministic child RNG: SeedSequence([seed, sha256(key)...])."""
    parts = [int(seed)]
    for k in keys:
        if isinstance(k, (int, np.integer)):
            parts.append(int(k) & 0xFFFFFFFFFFFFFFFF)
        else:
            digest = hashlib.sha256(str(k).encode("utf-8")).digest()
            parts.append(int.from_bytes(digest[:8], "big"))
    return np.random.default_rng(np.random.SeedSequence(parts))


@dataclass
class CheckRecord:
    name: str
    params: Dict
    residual: float
    passed: bool
    ms: float

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "params": _jsonable(self.params),
            "residual": float(self.residual),
            "pass": bool(self.passed),
            "ms": float(self.ms),
        }


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.complexfloating, complex)):
        return [float(np.real(value)), float(np.imag(value))]
    return value


@dataclass
class VerificationReport:
    config: Dict
    records: List[CheckRecord]
    passed: bool
    version: str
    timestamp: str
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "schema": SCHEMA_VERSION,
            "version": self.version,
            "timestamp": self.timestamp,
            "config": _jsonable(self.config),
            "records": [r.to_dict() for r in self.records],
            "pass": bool(self.passed),
            "warnings": list(self.warnings),
        }


def strip_timing(report_dict: Dict) -> Dict:
    """The determinism-relevant content: everything except timestamp and ms."""
    out = json.loads(json.dumps(report_dict))
    out.pop("timestamp", None)
    for rec in out.get("records", []):
        rec.pop("ms", None)
    return out


def report_fingerprint(report_dict: Dict) -> str:
    canonical = json.dumps(strip_timing(report_dict), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def reports_equivalent(a: Dict, b: Dict) -> bool:
    return strip_timing(a) == strip_timing(b)


def report_write(report: VerificationReport, path: str):
    """Write the JSON report; I/O failures propagate (CLI exit code 3)."""
    payload = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload + "\n")


def summary_table(report: VerificationReport) -> str:
    lines = [f"{'check':48} {'residual':>12} {'pass':>5} {'ms':>9}"]
    lines.append("-" * 78)
    for r in report.records:
        params = json.dumps(_jsonable(r.params), sort_keys=True)
        label = f"{r.name} {params}"
        if len(label) > 48:
            label = label[:45] + "..."
        lines.append(f"{label:48} {r.residual:12.3e} {str(r.passed):>5} {r.ms:9.1f}")
    lines.append("-" * 78)
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'} ({len(report.records)} records)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _timed(fn: Callable[[], Tuple[float, bool, Dict]], name: str) -> CheckRecord:
    start = time.perf_counter()
    residual, passed, params = fn()
    ms = (time.perf_counter() - start) * 1e3
    return CheckRecord(name, params, residual, passed, ms)


def eigen_suite(cfg: RunConfig) -> List[CheckRecord]:
    records = []
    samples = cfg.suite_param("eigen", "samples")
    tol = cfg.suite_param("eigen", "tol")
    sigma = cfg.suite_param("eigen", "sigma")
    draws = cfg.suite_param("eigen", "draws")
    for family, n in cfg.spaces:
        space = SymmetricSpaceSpec(family, n)
        for draw in range(draws):
            def task(space=space, draw=draw):
                rng = substream(cfg.seed, "eigen", space.family, space.n, draw)
                spec = random_parameters(space, rng)
                v = verify_eigen(spec, samples, tol, rng, sigma=sigma)
                params = {"n": space.n, "draw": draw}
                if v.vacuous:
                    params["warning"] = "no samples requested; vacuous pass"
                if v.witness_coefficients is not None:
                    params["witness_coefficients"] = v.witness_coefficients
                    params["witness_a"] = [
                        [float(z.real), float(z.imag)] for z in np.asarray(spec.a)
                    ]
                    if spec.indices is not None:
                        params["witness_indices"] = list(spec.indices)
                return v.max_residual, v.passed, params

            records.append(_timed(task, f"eigen/{family}"))
    return records


def dual_suite(cfg: RunConfig) -> List[CheckRecord]:
    records = []
    samples = cfg.suite_param("dual", "samples")
    tol = cfg.suite_param("dual", "tol")
    sigma = cfg.suite_param("dual", "sigma")
    tau2_tol = cfg.suite_param("dual", "tau2_tol")
    for family, n in cfg.spaces:
        space = SymmetricSpaceSpec(family, n)

        def task(space=space):
            rng = substream(cfg.seed, "dual", space.family, space.n)
            spec = random_parameters(space, rng)
            v = verify_dual(
                spec, samples, tol, rng, sigma=sigma, tau2_tol=tau2_tol, budget=cfg.budget
            )
            params = {"n": space.n, "rejected": v.rejected_points}
            if v.vacuous:
                params["warning"] = "no samples requested; vacuous pass"
            if v.witness_coefficients is not None:
                params["witness_coefficients"] = v.witness_coefficients
            return v.max_residual, v.passed, params

        records.append(_timed(task, f"dual/{family}"))
    return records


def pharmonic_suite(cfg: RunConfig) -> List[CheckRecord]:
    records = []
    for family, n in cfg.spaces:
        space = SymmetricSpaceSpec(family, n)
        lam, mu = expected_eigenvalues(space)
        for p in range(1, cfg.p_max + 1):
            def task(lam=lam, mu=mu, p=p, n=n):
                cert = verify_p_harmonic(build_phi_p(p, lam, mu), lam, mu, p)
                ok = cert.proper and cert.numeric_witness > 1e-10
                return 0.0 if ok else 1.0, ok, {"n": n, "p": p, "exact": True}

            records.append(_timed(task, f"pharmonic/{family}"))
    synthetic = (
        ("pharmonic/synthetic-mu-zero", rc(1), rc(0)),
        ("pharmonic/synthetic-lambda-equals-mu", rc(1), rc(1)),
    )
    for name, lam, mu in synthetic:
        for p in range(1, cfg.p_max + 1):
            def task(lam=lam, mu=mu, p=p):
                cert = verify_p_harmonic(build_phi_p(p, lam, mu), lam, mu, p)
                ok = cert.proper and cert.numeric_witness > 1e-10
                return 0.0 if ok else 1.0, ok, {"p": p, "exact": True}

            records.append(_timed(task, name))
    return records


def identities_suite(cfg: RunConfig) -> List[CheckRecord]:
    samples = cfg.suite_param("identities", "samples")
    tol = cfg.suite_param("identities", "tol")
    sigma = cfg.suite_param("identities", "sigma")
    results: List[IdentityCheckResult] = []
    records: List[CheckRecord] = []

    def collect(fn: Callable[[], List[IdentityCheckResult]]):
        start = time.perf_counter()
        batch = fn()
        ms = (time.perf_counter() - start) * 1e3
        for r in batch:
            results.append(r)
            records.append(
                CheckRecord(f"identities/{r.name}", r.params, r.max_residual, r.passed, ms / len(batch))
            )

    for n in range(2, 7):
        collect(lambda n=n: check_generator_sums(n))
    for family, n in ((SO, 3), (SO, 4), (SU, 2), (SU, 3), (SP, 2), (SP, 3)):
        rng = substream(cfg.seed, "identities", "coordinate", family, n)
        collect(
            lambda family=family, n=n, rng=rng: check_coordinate_identities(
                GroupSpec(family, n), samples, tol, rng, sigma=sigma
            )
        )
    for n in range(2, 7):
        rng = substream(cfg.seed, "identities", "decomposition", n)
        numeric_samples = min(samples, 10) if n == 2 else 0
        collect(
            lambda n=n, rng=rng, numeric_samples=numeric_samples: check_kappa_basis_decomposition(
                n, numeric_samples, tol, rng, sigma=sigma
            )
        )
    rng = substream(cfg.seed, "identities", "skew-lemma")
    collect(lambda rng=rng: check_skew_lemma(1000, 6, rng))
    rng = substream(cfg.seed, "identities", "symplectic")
    collect(lambda rng=rng: check_symplectic_facts(2, samples, max(tol, 1e-10), rng, sigma=sigma))

    try:
        assert_full_coverage(results)
    except AssertionError as exc:
        records.append(CheckRecord("identities/coverage", {"error": str(exc)}, 1.0, False, 0.0))
    return records


def crosscheck_suite(cfg: RunConfig) -> List[CheckRecord]:
    records = []
    samples = cfg.suite_param("crosscheck", "samples")
    sigma = cfg.suite_param("crosscheck", "sigma")
    abs_tol = cfg.suite_param("crosscheck", "abs_tol")
    rel_tol = cfg.suite_param("crosscheck", "rel_tol")
    for family, n in cfg.spaces:
        space = SymmetricSpaceSpec(family, n)

        def task(space=space):
            rng = substream(cfg.seed, "crosscheck", space.family, space.n)
            spec = random_parameters(space, rng)
            f = build_eigenfunction(spec)
            lam, mu = expected_eigenvalues(spec)
            phi2 = build_phi_p(2, lam, mu)
            tau1_formal = tau_formal(phi2, lam, mu)
            g_spec = space.group_spec()
            b = basis_g(g_spec)
            dim = len(b)
            if dim**2 > cfg.budget:
                return 0.0, True, {"n": space.n, "skipped": "budget"}

            def h_fn(g):
                return evaluate_formal(phi2, f(g))

            h = GroupFunction(h_fn, domain=g_spec, name="Phi2.phi")
            worst_abs = worst_scaled = worst_rel = 0.0
            done = attempts = 0
            while done < samples:
                attempts += 1
                if attempts > 50 * max(samples, 1):
                    raise RuntimeError(f"{space}: not enough admissible points for crosscheck")
                x, _ = sample_with_coefficients(g_spec, rng, sigma)
                phi = complex(f(x))
                if abs(phi) < 1e-10 or (phi.real <= 0 and abs(phi.imag) <= 1e-12):
                    continue
                done += 1
                t2 = complex(tau_iterated(h, x, b, 2, budget=cfg.budget))
                # phi^{1-lam/mu} can be huge at small |phi|; judge the nullity
                # of tau^2 relative to the size of the function it acts on
                scale = max(1.0, abs(complex(h(x))))
                worst_abs = max(worst_abs, abs(t2))
                worst_scaled = max(worst_scaled, abs(t2) / scale)
                t1_num = complex(tau(h, x, b))
                t1_sym = complex(evaluate_formal(tau1_formal, phi))
                worst_rel = max(worst_rel, abs(t1_num - t1_sym) / max(1.0, abs(t1_sym)))
            ok = worst_scaled <= abs_tol and worst_rel <= rel_tol
            return max(worst_scaled, worst_rel), ok, {
                "n": space.n,
                "tau2_abs": worst_abs,
                "tau2_scaled": worst_scaled,
                "tau1_rel": worst_rel,
            }

        records.append(_timed(task, f"crosscheck/{family}"))
    return records


SUITE_RUNNERS = {
    "eigen": eigen_suite,
    "dual": dual_suite,
    "pharmonic": pharmonic_suite,
    "identities": identities_suite,
    "crosscheck": crosscheck_suite,
}


def run(config: RunConfig) -> VerificationReport:
    """Execute the selected suites; deterministic given (config, seed)."""
    config.validate()
    warnings: List[str] = []
    if not config.suites:
        warnings.append("empty suite list: nothing was verified")
    records: List[CheckRecord] = []
    runners = [SUITE_RUNNERS[s] for s in config.suites]
    if config.jobs > 1 and len(runners) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            for batch in pool.map(lambda fn: fn(config), runners):
                records.extend(batch)
    else:
        for fn in runners:
            records.extend(fn(config))
    for rec in records:
        if isinstance(rec.params, dict) and rec.params.get("skipped") == "budget":
            warnings.append(f"{rec.name}: skipped (budget)")
    records.sort(key=lambda r: (r.name, json.dumps(_jsonable(r.params), sort_keys=True)))
    report = VerificationReport(
        config=config.echo(),
        records=records,
        passed=all(r.passed for r in records),
        version=__version__,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        warnings=warnings,
    )
    if config.out:
        report_write(report, config.out)
    return report


def replay_record(record: CheckRecord, config: RunConfig) -> float:
    """Recompute the residual of a failed eigen record from its stored witness.

    Rebuilding the sample from the recorded algebra coefficients reproduces
    the identical floating-point pipeline, so the residual matches to 1e-14.
    """
    from .lie import rebuild_sample

    params = record.params
    if "witness_coefficients" not in params:
        raise ConfigError("record carries no witness to replay")
    family = record.name.split("/", 1)[1]
    space = SymmetricSpaceSpec(family, int(params["n"]))
    a = np.array([complex(re, im) for re, im in params["witness_a"]])
    indices = tuple(params["witness_indices"]) if "witness_indices" in params else None
    spec = EigenfunctionSpec(space, a, indices, _skip_validation=True)
    f = build_eigenfunction(spec)
    x = rebuild_sample(space.group_spec(), params["witness_coefficients"])
    lam, mu = (complex(v) for v in expected_eigenvalues(spec))
    phi = complex(f(x))
    from .diffops import tau_and_kappa

    t, kap = tau_and_kappa(f, x, basis_g(space.group_spec()))
    return max(abs(t - lam * phi), abs(kap - mu * phi * phi))
