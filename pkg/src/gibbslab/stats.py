"""Statistical diagnostics for Birkhoff sums under a Gibbs chain.

The route avoids complex transfer operators entirely: the asymptotic
variance comes from a resolvent solve cross-checked against the
Green-Kubo series, normality and local-limit checks compare exact
dynamic-programming laws of S_n psi to the Gaussian, and the rate
function is the Legendre transform of the tilted-pressure curve
Lambda(s) = P(phi + s psi) - P(phi), solved through the identity
Lambda'(s) = integral of psi under the tilted Gibbs measure.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import (
    DegenerateVariance,
    NoConvergence,
    NotLattice,
    OutOfRange,
    SizeGuard,
    SolveFailure,
    ValidationError,
)
from . import transfer
from .gibbs import block_chain, expectation, gibbs_measure
from .potential import affine_combine

DP_CELL_CAP = 10**8


def _block_data(mu, *fns):
    """Common block presentation carrying every observable as a state
    vector."""
    L = max([mu.block_length] + [f.memory for f in fns])
    states, pi, Q = block_chain(mu, L)
    vecs = [np.array([f(u) for u in states]) for f in fns]
    return states, pi, Q, vecs


def correlation(mu, f, g, n):
    """Exact C_n(f, g) = E[f (g o shift^n)] - E[f] E[g] by pushing the
    f-weighted state distribution n steps through the chain."""
    if n < 0:
        raise ValidationError("lag must be nonnegative")
    _, pi, Q, (fv, gv) = _block_data(mu, f, g)
    ef = float(pi @ fv)
    eg = float(pi @ gv)
    w = pi * fv
    for _ in range(n):
        w = w @ Q
    return float(w @ gv - ef * eg)


def asymptotic_variance(mu, psi, tol=1e-9):
    """Variance rate of S_n psi, by the resolvent route with a
    Green-Kubo cross-check.

    Resolvent: with psi centered, solve (I - Q) u = Q psi on the
    mean-zero subspace through the fundamental matrix
    (I - Q + 1 pi)^-1; then xi^2 = E[psi^2] + 2 E[psi u].  Green-Kubo
    sums Var + 2 sum_k C_k until terms fall below 1e-15 Var.  The two
    must agree within tol.
    """
    _, pi, Q, (pv,) = _block_data(mu, psi)
    c = pv - pi @ pv
    var0 = float(pi @ c**2)
    if var0 == 0.0:
        return 0.0
    k = Q.shape[0]
    try:
        Z = np.linalg.solve(np.eye(k) - Q + np.outer(np.ones(k), pi), Q @ c)
    except np.linalg.LinAlgError as exc:
        raise SolveFailure(f"resolvent system is singular: {exc}")
    if not np.all(np.isfinite(Z)):
        raise SolveFailure("resolvent solve produced non-finite entries")
    resolvent = var0 + 2.0 * float(pi @ (c * Z))

    gk = var0
    w = pi * c
    for _ in range(1, 200_000):
        w = w @ Q
        term = float(w @ c)
        gk += 2.0 * term
        if abs(term) < 1e-15 * var0:
            break
    else:
        raise SolveFailure("Green-Kubo series did not decay (gap ratio near 1)")
    if abs(gk - resolvent) > tol:
        raise SolveFailure(
            f"Green-Kubo {gk:.12g} and resolvent {resolvent:.12g} disagree"
        )
    return float(resolvent)


def cohomology_check(mu, psi, tol=1e-10):
    """Structural test for xi^2 = 0: the centered observable must be a
    block coboundary, i.e. U(v) = U(u) - psi_hat(u) consistently over
    every edge of the recoded graph.  A spanning-tree assignment fixes
    U; the chords certify or refute."""
    states, pi, Q, (pv,) = _block_data(mu, psi)
    c = pv - float(pi @ pv)
    k = len(states)
    adj = [[] for _ in range(k)]
    edges = []
    for i in range(k):
        for j in np.flatnonzero(Q[i] > 0):
            edges.append((i, int(j)))
            adj[i].append((int(j), -c[i]))  # forward: U(j) = U(i) - c(i)
            adj[int(j)].append((i, +c[i]))  # backward
    U = np.full(k, np.nan)
    U[0] = 0.0
    stack = [0]
    while stack:
        i = stack.pop()
        for j, delta in adj[i]:
            if math.isnan(U[j]):
                U[j] = U[i] + delta
                stack.append(j)
    defect = max(abs(U[j] - (U[i] - c[i])) for i, j in edges)
    degenerate = bool(defect <= tol)
    witness = {states[i]: float(U[i]) for i in range(k)} if degenerate else None
    return {"degenerate": degenerate, "witness": witness, "max_cycle_defect": float(defect)}


class PressureFamily:
    """Tilted family s -> P(phi + s psi) with cached eigendata.

    Provides the cumulant Lambda, its derivative as the tilted mean,
    its second derivative as the tilted variance, and the Legendre
    transform."""

    def __init__(self, space, phi, psi, tol=1e-13):
        self.space = space
        self.phi = phi
        self.psi = psi
        self.tol = tol
        self._cache = {}
        self._p0 = self._solve(0.0)[1].pressure

    def _solve(self, s):
        if s not in self._cache:
            pot = self.phi if s == 0.0 else affine_combine(self.phi, self.psi, s)
            T = transfer.build(self.space, pot)
            E = transfer.dominant_eigendata(T, tol=self.tol)
            self._cache[s] = (T, E)
        return self._cache[s]

    def pressure(self, s):
        return self._solve(s)[1].pressure

    def cumulant(self, s):
        if s == 0.0:
            return 0.0
        return self.pressure(s) - self._p0

    def mean(self, s):
        """Lambda'(s) = integral of psi under the tilted Gibbs measure."""
        T, E = self._solve(s)
        return expectation(gibbs_measure(T, E), self.psi)

    def variance(self, s):
        """Lambda''(s) = asymptotic variance under the tilted measure."""
        T, E = self._solve(s)
        return asymptotic_variance(gibbs_measure(T, E), self.psi)


def cumulant(space, phi, psi, s):
    """Lambda(s) = P(phi + s psi) - P(phi); exactly zero at s = 0."""
    return PressureFamily(space, phi, psi).cumulant(s)


@dataclass(frozen=True)
class RateFunctionPoint:
    t: float
    s_star: float
    rate: float
    cumulant_at_s_star: float


def rate_function(space, phi, psi, t, s_max=50.0, tol=1e-12, family=None):
    """Legendre point I(t) = s* t - Lambda(s*) where Lambda'(s*) = t.

    Lambda' is increasing (strictly unless psi is cohomologous to a
    constant), so an outward-expanding bracket followed by bisection
    and Newton steps with Lambda'' converges globally.  The bracket
    grows lazily from [-1, 1] up to [-s_max, s_max]: extreme tilts can
    be spectrally degenerate (the tilted chain approaches a periodic
    orbit and the gap closes), so they are only solved when t really
    lies that far out in the range of the mean.
    """
    fam = family or PressureFamily(space, phi, psi)
    level = min(1.0, s_max)
    lo, hi = -level, level
    while True:
        try:
            mlo, mhi = fam.mean(lo), fam.mean(hi)
        except NoConvergence as exc:
            raise OutOfRange(
                f"cannot certify t={t:g}: tilted solve at |s|={level:g} is "
                f"near-degenerate ({exc})"
            )
        if mlo <= t <= mhi:
            break
        if level >= s_max:
            raise OutOfRange(
                f"t={t:g} outside attainable mean range [{mlo:g}, {mhi:g}]"
            )
        level = min(2.0 * level, s_max)
        lo, hi = -level, level
    scale = max(abs(mlo), abs(mhi), 1.0)
    s = 0.0
    # bisection to a tight bracket
    for _ in range(200):
        s = 0.5 * (lo + hi)
        ms = fam.mean(s)
        if abs(ms - t) <= tol * scale:
            break
        if ms < t:
            lo = s
        else:
            hi = s
        if hi - lo <= 1e-13 * max(1.0, abs(s)):
            break
    # Newton polish
    for _ in range(40):
        ms = fam.mean(s)
        if abs(ms - t) <= tol * scale:
            break
        v = fam.variance(s)
        if v <= 0:
            break
        step = (ms - t) / v
        nxt = s - step
        if not lo <= nxt <= hi:
            break
        s = nxt
    lam_s = fam.cumulant(s)
    rate = s * t - lam_s
    if abs(rate) < 1e-14:
        rate = abs(rate)
    return RateFunctionPoint(t=float(t), s_star=float(s), rate=float(rate),
                             cumulant_at_s_star=float(lam_s))


def pressure_derivative_check(space, phi, psi, step=1e-4, family=None):
    """Central finite differences of the tilted pressure at 0 against
    the analytic mean and variance."""
    if step <= 0:
        raise ValidationError("step must be positive")
    fam = family or PressureFamily(space, phi, psi)
    p_plus, p_minus, p0 = fam.pressure(step), fam.pressure(-step), fam.pressure(0.0)
    fd1 = (p_plus - p_minus) / (2.0 * step)
    fd2 = (p_plus - 2.0 * p0 + p_minus) / step**2
    mean = fam.mean(0.0)
    var = fam.variance(0.0)
    return {
        "step": step,
        "fd_first": fd1,
        "analytic_first": mean,
        "first_error": abs(fd1 - mean),
        "fd_second": fd2,
        "analytic_second": var,
        "second_error": abs(fd2 - var),
    }


@dataclass(frozen=True)
class LatticeDistribution:
    """Exact law of S_n psi on the lattice n*offset + span*Z.

    probs[j] is the probability of the point value(j) = n*offset +
    span*indices[j]."""

    n: int
    offset: float
    span: float
    indices: np.ndarray
    probs: np.ndarray

    @property
    def values(self):
        return self.n * self.offset + self.span * self.indices

    def mean(self):
        return float(self.values @ self.probs)

    def variance(self):
        v = self.values
        m = self.mean()
        return float(self.probs @ (v - m) ** 2)


def lattice_parameters(values, tol=1e-9):
    """Offset and span of the smallest lattice containing `values`.

    The span is the real gcd of the differences (Euclid with rounding
    tolerance); raises NotLattice when the values are incommensurable.
    Constant observables get span 1 by convention.
    """
    vals = sorted(set(float(v) for v in values))
    a = vals[0]
    diffs = [v - a for v in vals[1:]]
    if not diffs:
        return a, 1.0
    g = diffs[0]
    scale = max(abs(v) for v in vals) + max(diffs)
    for d in diffs[1:]:
        g = _real_gcd(g, d, tol * max(1.0, scale))
    # a true span sits far above the rounding floor; an incommensurable
    # Euclid residue lands at the tolerance scale
    if g < 1e3 * tol * max(1.0, scale):
        raise NotLattice("observable values are not commensurable within tolerance")
    for v in vals:
        k = round((v - a) / g)
        if abs(v - (a + k * g)) > tol * max(1.0, scale):
            raise NotLattice(f"value {v} is off-lattice for span {g}")
    return a, g


def _real_gcd(x, y, tol):
    x, y = abs(x), abs(y)
    while y > tol:
        x, y = y, x - y * math.floor(x / y)
    return x


def exact_birkhoff_distribution(mu, psi, n, cap=DP_CELL_CAP):
    """Exact law of S_n psi by dynamic programming over
    (state, accumulated lattice index)."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    states, pi, Q, (pv,) = _block_data(mu, psi)
    a, b = lattice_parameters(pv)
    idx = np.array([round((v - a) / b) for v in pv], dtype=np.int64)
    span_idx = int(idx.max())
    width = n * span_idx + 1
    if n * width > cap:
        raise SizeGuard(f"DP table of {n * width} cells exceeds cap {cap}")
    k = len(states)
    table = np.zeros((k, width))
    table[:, 0] = pi
    filled = 1
    for t in range(1, n):
        nxt = np.zeros_like(table)
        hi = filled + span_idx
        for u in range(k):
            row = table[u, :filled]
            if not row.any():
                continue
            j = idx[u]
            contrib = np.outer(Q[u], row)
            nxt[:, j : j + filled] += contrib
        table = nxt
        filled = min(hi, width)
    # fold in the final term
    out = np.zeros(width)
    for u in range(k):
        j = idx[u]
        out[j : j + filled] += table[u, :filled]
    total = out.sum()
    if abs(total - 1.0) > 1e-12:
        raise SolveFailure(f"DP mass drifted to {total!r}")
    support = np.flatnonzero(out > 0.0)
    lo, hi = int(support.min()), int(support.max())
    return LatticeDistribution(
        n=n,
        offset=a,
        span=b,
        indices=np.arange(lo, hi + 1),
        probs=out[lo : hi + 1].copy(),
    )


def _norm_cdf(z):
    return 0.5 * (1.0 + erf(np.asarray(z) / math.sqrt(2.0)))


def clt_diagnostics(dist, mean, xi2):
    """Kolmogorov distance of the standardized exact law to the normal,
    evaluated on both sides of every atom, and its sqrt(n) multiple."""
    if xi2 <= 0.0:
        raise DegenerateVariance("asymptotic variance must be positive")
    n = dist.n
    z = (dist.values - n * mean) / math.sqrt(xi2 * n)
    cdf = np.cumsum(dist.probs)
    gauss = _norm_cdf(z)
    ks = float(np.max(np.maximum(np.abs(cdf - gauss),
                                 np.abs(np.concatenate(([0.0], cdf[:-1])) - gauss))))
    return {"n": n, "ks": ks, "be_constant": ks * math.sqrt(n)}


def local_limit_check(dist, mean, xi2):
    """Max pointwise gap in the lattice Gaussian approximation
    xi sqrt(n) P(S_n = v) ~ (b / sqrt(2 pi)) exp(-(v - n mean)^2 / (2 n xi^2))."""
    if xi2 <= 0.0:
        raise DegenerateVariance("asymptotic variance must be positive")
    n = dist.n
    xi = math.sqrt(xi2)
    keep = dist.probs > 0.0
    v = dist.values[keep]
    p = dist.probs[keep]
    gauss = dist.span / math.sqrt(2.0 * math.pi) * np.exp(
        -((v - n * mean) ** 2) / (2.0 * n * xi2)
    )
    return float(np.max(np.abs(xi * math.sqrt(n) * p - gauss)))


def ldp_empirical(dists, interval, rate_oracle, gibbs_mean):
    """Empirical decay rates -(1/n) log P(S_n/n in [a, b]) against the
    rate-function infimum over the closed interval.

    Boundary atoms count as inside.  Zero-probability events are
    recorded per n, not fatal.  Convexity with minimum at the Gibbs
    mean reduces the infimum to the clamped endpoint.
    """
    a, b = interval
    if a > b:
        raise ValidationError("interval must be ordered")
    t_star = min(max(gibbs_mean, a), b)
    inf_rate = 0.0 if t_star == gibbs_mean else rate_oracle(t_star)
    rows = []
    for dist in dists:
        n = dist.n
        lev = dist.values / n
        slack = 1e-12 * max(1.0, abs(a), abs(b))
        p = float(dist.probs[(lev >= a - slack) & (lev <= b + slack)].sum())
        if p == 0.0:
            rows.append({"n": n, "probability": 0.0, "empirical_rate": None,
                         "inf_rate": inf_rate, "gap": None, "zero_probability": True})
        else:
            rate = -math.log(p) / n
            rows.append({"n": n, "probability": p, "empirical_rate": rate,
                         "inf_rate": inf_rate, "gap": rate - inf_rate,
                         "zero_probability": False})
    return rows
