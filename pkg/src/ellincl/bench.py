"""Random benchmark corpus and timing harness.

Each case is a pair ``(E, E0)`` for which none of the pretests is
conclusive, so :func:`~ellincl.inclusion.decide` always reaches the
bisection. Labels are fixed by construction: the shape of ``E`` is scaled
until its minimal factor ``gamma`` hits a drawn target below or above 1.
"""
import csv
import io
import math
import statistics
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from .dualfn import DualContext
from .ellipsoid import Ellipsoid, NormalizedProblem
from .inclusion import contact_points, decide, maximize_dual, minimal_scaling, rescaled_pair
from .oracle import boundary_max_norm, direction_for_point, psd_cross_check

EIG_RANGE = (0.5, 50.0)
INSIDE_GAMMA = (0.5, 0.95)
OUTSIDE_GAMMA = (1.05, 2.0)
CENTER_RADIUS = (0.1, 0.7)

CSV_FIELDS = ["n", "case_id", "label", "verdict", "iterations", "wall_time_ns", "rule_fired", "exit", "gamma"]


@dataclass(frozen=True)
class BenchCase:
    n: int
    case_id: int
    label: str
    E: Ellipsoid
    E0: Ellipsoid
    gamma: float


@dataclass(frozen=True)
class BenchRecord:
    n: int
    case_id: int
    label: str
    verdict: str
    iterations: int
    wall_time_ns: int
    rule_fired: str
    exit: str
    gamma: float


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_spd(rng, n, lo=EIG_RANGE[0], hi=EIG_RANGE[1]):
    Q = random_orthogonal(rng, n)
    lam = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
    return (Q * lam) @ Q.T


def _gamma_of_scale(c_tilde, lam, V):
    def gamma(s):
        problem = NormalizedProblem.from_spectrum(c_tilde, s * lam, V)
        return maximize_dual(DualContext(problem), tol=1e-13).gamma

    return gamma


def _case_1d(rng, label):
    # gamma = (|c~| + lam^{-1/2})^2 with lam = p / p0 and c~ = sqrt(p0) (c - c0)
    while True:
        rho = rng.uniform(*CENTER_RADIUS)
        target = rng.uniform(*(INSIDE_GAMMA if label == "inside" else OUTSIDE_GAMMA))
        lam = 1.0 / (math.sqrt(target) - rho) ** 2 if math.sqrt(target) > rho else math.inf
        if math.isfinite(lam) and lam >= 1.0 / (1.0 - rho**2):
            break
    p0 = math.exp(rng.uniform(math.log(EIG_RANGE[0]), math.log(EIG_RANGE[1])))
    c0 = rng.standard_normal()
    sign = rng.choice([-1.0, 1.0])
    E0 = Ellipsoid([c0], [[p0]])
    E = Ellipsoid([c0 + sign * rho / math.sqrt(p0)], [[lam * p0]])
    return E, E0, (rho + lam**-0.5) ** 2


def generate_case(rng, n, label):
    """One pair with minimal factor inside ``INSIDE_GAMMA`` or ``OUTSIDE_GAMMA``.

    The center of E sits at normalized radius ``rho``; the shape is scaled by
    ``s >= s_min`` with ``lam_min(s P_tilde) >= 1 / (1 - rho^2)`` so that every
    pretest is inconclusive. ``gamma(s)`` decreases in ``s``; the target is
    found by root finding on ``log s``.
    """
    if label not in ("inside", "outside"):
        raise ValueError(f"unknown label {label!r}")
    if n == 1:
        return _case_1d(rng, label)
    while True:
        P0 = random_spd(rng, n)
        c0 = rng.standard_normal(n)
        P_prov = random_spd(rng, n)
        L0 = np.linalg.cholesky(P0)
        X = np.linalg.solve(L0, P_prov)
        P_t = np.linalg.solve(L0, X.T)
        lam, V = np.linalg.eigh(0.5 * (P_t + P_t.T))
        rho = rng.uniform(*CENTER_RADIUS)
        d = rng.standard_normal(n)
        c_tilde = rho * d / np.linalg.norm(d)
        s_min = 1.0 / ((1.0 - rho**2) * lam[0]) * (1.0 + 1e-6)
        gamma = _gamma_of_scale(c_tilde, lam, V)
        g_max = gamma(s_min)
        if label == "inside":
            target = rng.uniform(*INSIDE_GAMMA)
            if not rho**2 < target < g_max:
                continue
        else:
            top = min(OUTSIDE_GAMMA[1], g_max)
            if top < OUTSIDE_GAMMA[0] + 1e-2:
                continue
            target = rng.uniform(OUTSIDE_GAMMA[0], top)
        hi = math.log(s_min)
        while gamma(math.exp(hi)) > target:
            hi += 1.0
        log_s = brentq(lambda t: gamma(math.exp(t)) - target, math.log(s_min), hi, xtol=1e-14, rtol=1e-14)
        s = math.exp(log_s)
        c = c0 + np.linalg.solve(L0.T, c_tilde)
        return Ellipsoid(c, s * P_prov), Ellipsoid(c0, P0), gamma(s)


def confirm_label(case):
    """Check a generated label without the bisection.

    Inside: the LMI matrix is PSD at the dual maximizer. Outside: boundary
    search (seeded with the contact direction of the rescaled pair) finds a
    point of E outside E0.
    """
    scaling = minimal_scaling(case.E, case.E0)
    if case.label == "inside":
        return psd_cross_check(case.E, scaling.beta_star, case.E0)
    E0_scaled, _ = rescaled_pair(case.E, case.E0, scaling.gamma)
    hint = contact_points(case.E, E0_scaled, tol=1e-6).points[0]
    start = direction_for_point(case.E, hint, case.E0)
    report = boundary_max_norm(case.E, case.E0, samples=16, iterations=50, starts=start)
    return report.max_sq_norm > 1.0


def generate_corpus(dims, cases, seed):
    """``cases`` pairs per dimension, half inside and half outside, deterministic in ``seed``."""
    corpus = []
    for n in dims:
        rng = np.random.default_rng([seed, n])
        for case_id in range(cases):
            label = "inside" if case_id < (cases + 1) // 2 else "outside"
            E, E0, gamma = generate_case(rng, n, label)
            corpus.append(BenchCase(n, case_id, label, E, E0, gamma))
    return corpus


def time_decide(E, E0, repetitions=10, eps=1e-12):
    """Verdict and median wall time (ns) of ``decide`` over ``repetitions`` runs."""
    times = []
    verdict = None
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        verdict = decide(E, E0, eps)
        times.append(time.perf_counter_ns() - t0)
    return verdict, max(1, int(statistics.median(times)))


def run_bench(dims, cases, seed, repetitions=10, validate=True):
    corpus = generate_corpus(dims, cases, seed)
    records = []
    for case in corpus:
        if validate and not confirm_label(case):
            raise AssertionError(f"generated case n={case.n} id={case.case_id} fails its {case.label} check")
        verdict, ns = time_decide(case.E, case.E0, repetitions)
        records.append(
            BenchRecord(
                case.n,
                case.case_id,
                case.label,
                verdict.relation.value,
                verdict.iterations,
                ns,
                verdict.rule,
                verdict.exit,
                case.gamma,
            )
        )
    return records


def records_to_csv(records):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = asdict(rec)
        row["gamma"] = repr(rec.gamma)
        writer.writerow(row)
    return buf.getvalue()


def summarize(records):
    """Median and mean ``decide`` time per dimension, in nanoseconds."""
    out = {}
    for n in sorted({r.n for r in records}):
        ts = [r.wall_time_ns for r in records if r.n == n]
        out[n] = {"cases": len(ts), "median_ns": statistics.median(ts), "mean_ns": statistics.fmean(ts)}
    return out
