"""Finite transfer matrix for a finite-memory potential.

A memory-m potential acts exactly on functions of the leading
l = max(m-1, 1) coordinates, so after higher-block recoding the
weighted preimage-sum operator is a finite positive matrix and the
dominant eigendata are computed without discretization error.

Matrix orientation: entry [u, w] weighs the recoded move u -> w, i.e.
rows are preimage blocks.  The operator acting on functions is the
transpose, so the eigenfunction h solves matrix.T @ h = lambda h and
the eigenmeasure nu solves matrix @ nu = lambda nu.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import cone
from .errors import NoConvergence, SizeGuard, ValidationError
from .potential import holder_seminorm, total_variation, var_n
from .shift_space import enumerate_words, enumeration_cap

DEFAULT_TOL = 1e-12
MAX_ITER = 10**6
FULL_SOLVE_LIMIT = 64


@dataclass(frozen=True, eq=False)
class TransferSystem:
    space: object
    potential: object
    block_length: int
    states: tuple
    matrix: np.ndarray
    _index: dict = field(repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.states)})
        self.matrix.setflags(write=False)

    @property
    def state_count(self):
        return len(self.states)

    def state_index(self, block):
        return self._index[tuple(block)]


@dataclass(frozen=True, eq=False)
class EigenData:
    """Dominant eigendata of a transfer system.

    h is normalized so nu(h) = 1 and nu sums to 1; min_h records min(h)
    for the min-h = 1 convention.  gap_ratio is |second eigenvalue| /
    lambda and ess_radius_bound is alpha * lambda.
    """

    lambda_: float
    pressure: float
    h: np.ndarray
    nu: np.ndarray
    min_h: float
    gap_ratio: float
    ess_radius_bound: float
    residual_h: float
    residual_nu: float
    iterations: int


def build(space, phi, cap=None):
    """Assemble the transfer matrix of phi on l-block states.

    Entry (u -> w) is exp(phi evaluated on the first m symbols of the
    (l+1)-word made of u's leading symbol followed by w).
    """
    if not phi.space.same_as(space):
        raise ValidationError("potential is not defined on this shift space")
    ell = max(phi.memory - 1, 1)
    states = enumerate_words(space, ell, cap=cap)
    k = len(states)
    if cap is None:
        cap = enumeration_cap()
    if k * k > cap:
        raise SizeGuard(f"{k}x{k} transfer matrix exceeds cap {cap}")
    pos = {w: i for i, w in enumerate(states)}
    M = np.zeros((k, k))
    for i, u in enumerate(states):
        for s in space.successors(u[-1]):
            w = u[1:] + (s,)
            j = pos.get(w)
            if j is not None:
                M[i, j] = math.exp(phi((u + (s,))[: phi.memory]))
    return TransferSystem(
        space=space, potential=phi, block_length=ell, states=tuple(states), matrix=M
    )


def dominant_eigendata(T, tol=DEFAULT_TOL, max_iter=None):
    """Power iteration for (lambda, h, nu) from the all-ones vector.

    Stops when both residuals max|M.T h - lambda h| and the l1 residual
    of nu fall below tol * lambda.  Primitivity guarantees convergence
    at the spectral-gap rate; the iteration cap signals a nearly
    degenerate gap.
    """
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if max_iter is None:
        max_iter = MAX_ITER
    M = T.matrix
    k = T.state_count
    nu = np.full(k, 1.0 / k)
    h = np.ones(k)
    lam = float(M.sum(axis=1).max())
    iters = 0
    for iters in range(1, max_iter + 1):
        Mnu = M @ nu
        lam = Mnu.sum()  # nu is a probability vector, so this estimates lambda
        nu = Mnu / lam
        Mh = M.T @ h
        h = Mh / (nu @ Mh)
        res_h = np.abs(M.T @ h - lam * h).max()
        res_nu = np.abs(M @ nu - lam * nu).sum()
        if res_h <= tol * lam and res_nu <= tol * lam:
            break
    else:
        raise NoConvergence(
            f"eigendata residuals above {tol:g}*lambda after {max_iter} iterations"
        )
    h = h / (nu @ h)
    gap = _gap_ratio(M, lam, h, nu)
    alpha = T.potential.alpha
    return EigenData(
        lambda_=float(lam),
        pressure=float(np.log(lam)),
        h=h,
        nu=nu,
        min_h=float(h.min()),
        gap_ratio=gap,
        ess_radius_bound=float(alpha * lam),
        residual_h=float(np.abs(M.T @ h - lam * h).max()),
        residual_nu=float(np.abs(M @ nu - lam * nu).sum()),
        iterations=iters,
    )


def _deflated_gap(M, lam, h, nu, max_iter=100_000, tol=1e-13):
    """|second eigenvalue| / lambda by power iteration on the deflated
    matrix, re-projecting against h with the nu-weighted pairing."""
    k = M.shape[0]
    B = M - lam * np.outer(nu, h)  # spectral projector is nu h^T since h.nu = 1
    v = np.cos(np.arange(1, k + 1))  # fixed, generic start
    v = v - (h @ v) * nu
    norm = np.abs(v).max()
    if norm == 0.0:
        return 0.0
    v /= norm
    prev = None
    for it in range(1, max_iter + 1):
        w = B @ v
        w = w - (h @ w) * nu
        r = np.abs(w).max()
        if r <= 1e-15 * lam:
            return 0.0
        v = w / r
        # two-step growth absorbs sign flips and complex-pair rotation
        if it % 2 == 0:
            w2 = B @ (B @ v)
            w2 = w2 - (h @ w2) * nu
            est = math.sqrt(np.abs(w2).max())
            if prev is not None and abs(est - prev) <= tol * lam:
                return min(est / lam, 1.0)
            prev = est
    raise NoConvergence("second-eigenvalue power iteration did not settle")


def _gap_ratio(M, lam, h, nu):
    k = M.shape[0]
    if k <= FULL_SOLVE_LIMIT:
        mods = np.sort(np.abs(np.linalg.eigvals(M)))[::-1]
        full = float(mods[1] / lam) if k > 1 else 0.0
        try:
            defl = _deflated_gap(M, lam, h, nu)
        except NoConvergence:
            return full
        if full > 1e-8 and abs(defl - full) > 1e-8 * max(1.0, full):
            raise NoConvergence(
                f"gap estimates disagree: deflation {defl:.3e} vs full solve {full:.3e}"
            )
        return full
    return _deflated_gap(M, lam, h, nu)


def spectral_gap(T, eigendata):
    """Ratio of the second eigenvalue modulus to lambda."""
    return _gap_ratio(T.matrix, eigendata.lambda_, eigendata.h, eigendata.nu)


def normalized_operator(T, eigendata):
    """Row-stochastic forward kernel Q of the Gibbs chain and its
    stationary vector pi = h * nu (sums to one under nu(h) = 1).

    With rows indexed by the preimage block, peeling one symbol off an
    (l+1)-cylinder gives mu([u0 w]) = h(u) entry(u -> w) nu(w) / lambda,
    so Q(u -> w) = entry(u -> w) nu(w) / (lambda nu(u)); row sums are
    (M nu)(u) / (lambda nu(u)) = 1 exactly.
    """
    lam, h, nu = eigendata.lambda_, eigendata.h, eigendata.nu
    Q = T.matrix * nu[None, :] / (lam * nu[:, None])
    pi = h * nu
    return Q, pi


def pressure_via_partition(space, phi, n, cap=None):
    """(1/n) log of the partition sum over admissible n-words, taking
    on each cylinder the exact maximum of the length-n Birkhoff sum
    over all admissible (m-1)-symbol continuations."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    m = phi.memory
    tail = m - 1
    total = 0.0
    best = -math.inf
    sums = []
    for w in enumerate_words(space, n, cap=cap):
        if tail == 0:
            s = sum(phi.values[w[k : k + m]] for k in range(n))
        else:
            s = max(
                sum(phi.values[x[k : k + m]] for k in range(n))
                for x in _extensions(space, w, tail)
            )
        sums.append(s)
        best = max(best, s)
    # factor out the max before exponentiating to keep the sum stable
    total = sum(math.exp(s - best) for s in sums)
    return (best + math.log(total)) / n


def _extensions(space, w, tail):
    out = [w]
    for _ in range(tail):
        out = [x + (s,) for x in out for s in space.successors(x[-1])]
    return out


def constants_report(space, phi, alpha, eigendata):
    """Explicitly computable constants attached to the spectral data.

    B_m uses only variations beyond scale m (all zero past the memory);
    B0_geometric uses the geometric envelope var_k <= |phi|_alpha
    alpha**k; K is the cone diameter bound lambda**M exp(M sup|phi|)
    B0_geometric.  Entries that would need the unavailable Bowen-lemma
    coefficients are reported as not computed.
    """
    M = space.mixing_time
    lam = eigendata.lambda_
    bm = {}
    for m in range(phi.memory + 1):
        bm[m] = math.exp(sum(2.0 * var_n(phi, k) for k in range(m + 1, phi.memory)))
    halpha = holder_seminorm(phi, alpha)
    b0_geom = math.exp(2.0 * halpha * alpha / (1.0 - alpha))
    K = lam**M * math.exp(M * phi.sup_norm) * b0_geom
    cc = cone.cone_constants(space, phi)
    return {
        "mixing_time": M,
        "var_total": total_variation(phi),
        "holder_seminorm": halpha,
        "sup_norm": phi.sup_norm,
        "B_m": bm,
        "B0_geometric": b0_geom,
        "K": K,
        "ess_radius_bound": alpha * lam,
        "cone_delta_prime": cc.delta_prime,
        "cone_n0": cc.n0,
        "cone_kappa_at_2delta": cc.kappa(2.0 * cc.delta_prime) if cc.delta_prime > 0 else 0.0,
        "eta": "not computed",
        "convergence_constant": "not computed",
    }
