"""Nonlinear approximation: multi-start simplex search over the frequencies,
the one-frequency root equation for the sign function, and a numerical
exploration of the two-frequency infimum."""
import concurrent.futures
import itertools
import logging
import math

import numpy as np
from scipy import optimize

from .exceptions import (
    ExpoApproxException, InvalidArgumentsError, RootBracketError
)
from .objective import (
    DEFAULT_CLUSTER_TOL, FrequencySet, _axis, linear_fit, phi
)
from .signals import SignFunction

# Module-level logger
log = logging.getLogger(__name__)

V0_BRACKET = (0.1, 0.9)
SIMPLEX_XTOL = 1e-8
QUARTER = 0.25


def _v0_equation(v):
    """g(v) = sin(pi v) pi v + cos(pi v) - 1 and its derivative."""
    w = math.pi * v
    return math.sin(w) * w + math.cos(w) - 1.0, math.pi * w * math.cos(w)


def _newton_bisection(func, lo, hi, maxiter=100):
    """Safeguarded Newton iteration inside a sign-changing bracket.

    ``func`` returns (value, derivative). A Newton step is taken when it
    stays inside the bracket and shrinks fast enough; otherwise the bracket
    is bisected.

    """
    f_lo, _ = func(lo)
    f_hi, _ = func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        msg = "Bracket [{}, {}] does not contain a sign change ({!r}, {!r})"
        raise RootBracketError(msg.format(lo, hi, f_lo, f_hi))
    if f_lo > 0.0:
        lo, hi = hi, lo  # orient so that func(lo) < 0

    x = 0.5 * (lo + hi)
    dx_old = dx = abs(hi - lo)
    f, df = func(x)
    for _ in range(maxiter):
        if (((x - hi) * df - f) * ((x - lo) * df - f) > 0.0 or
                abs(2.0 * f) > abs(dx_old * df)):
            dx_old = dx
            dx = 0.5 * (hi - lo)
            x = lo + dx
        else:
            dx_old = dx
            dx = f / df
            x -= dx
        if abs(dx) <= 4.0 * np.finfo(float).eps * abs(x):
            break
        f, df = func(x)
        if f == 0.0:
            break
        if f < 0.0:
            lo = x
        else:
            hi = x
    return x


def solve_v0():
    """Root v0 of sin(pi v) pi v + cos(pi v) = 1 in (0.1, 0.9).

    +-i v0 are the minimizers of the one-frequency objective for the sign
    function; v0 = 0.742019...

    """
    v0 = _newton_bisection(_v0_equation, *V0_BRACKET)
    residual, _ = _v0_equation(v0)
    log.debug("v0 = %r, residual %.3e", v0, residual)
    return v0


class OptimizeConfig(object):
    """Settings for :func:`minimize_phi`.

    Args:
        n (int): number of frequencies
        starts (int): number of simplex searches
        seed (int): seed of the start sampler
        u_bounds (tuple): (min, max) box for the real parts of the starts
        v_bounds (tuple): (min, max) box for the imaginary parts
        simplex_tol (float): convergence tolerance on the spread of Phi
            over the simplex
        max_iters (int): iteration budget per start
        cluster_tol (float): frequency merge tolerance
        workers (int): processes to spread the starts over

    """

    def __init__(self, n=1, starts=32, seed=0, u_bounds=(-2.0, 2.0),
                 v_bounds=(-3.0, 3.0), simplex_tol=1e-10, max_iters=2000,
                 cluster_tol=DEFAULT_CLUSTER_TOL, workers=1):
        self.n = n
        self.starts = starts
        self.seed = seed
        self.u_bounds = tuple(float(b) for b in u_bounds)
        self.v_bounds = tuple(float(b) for b in v_bounds)
        self.simplex_tol = float(simplex_tol)
        self.max_iters = max_iters
        self.cluster_tol = float(cluster_tol)
        self.workers = workers
        self._validate_config()

    @property
    def start_box(self):
        """Per-coordinate (low, high) arrays over (u1, v1, ..., un, vn)."""
        low = np.tile([self.u_bounds[0], self.v_bounds[0]], self.n)
        high = np.tile([self.u_bounds[1], self.v_bounds[1]], self.n)
        return low, high

    def _validate_config(self):
        for name in ("n", "starts", "max_iters", "workers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                msg = "'{}' must be a positive integer, got {!r}"
                raise InvalidArgumentsError(msg.format(name, value))

        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            msg = "'seed' must be a non-negative integer, got {!r}"
            raise InvalidArgumentsError(msg.format(self.seed))

        for name in ("u_bounds", "v_bounds"):
            bounds = getattr(self, name)
            if len(bounds) != 2 or not all(map(math.isfinite, bounds)) or bounds[0] > bounds[1]:
                msg = "'{}' must be an ordered pair of finite numbers, got {!r}"
                raise InvalidArgumentsError(msg.format(name, bounds))

        for name in ("simplex_tol", "cluster_tol"):
            if not getattr(self, name) > 0.0:
                msg = "'{}' must be positive, got {!r}"
                raise InvalidArgumentsError(msg.format(name, getattr(self, name)))

    def __repr__(self):
        return ("OptimizeConfig(n={}, starts={}, seed={}, u_bounds={}, v_bounds={}, "
                "simplex_tol={!r}, max_iters={})").format(
            self.n, self.starts, self.seed, self.u_bounds, self.v_bounds,
            self.simplex_tol, self.max_iters)


class OptimizeResult(object):
    """Best frequency set found by :func:`minimize_phi`.

    Attributes:
        best_freqs (FrequencySet): the n-frequency spectrum found
        best_phi (float): Phi at ``best_freqs``
        fit (LinearFit): coefficients at ``best_freqs``
        starts_converged (int): starts whose simplex met the tolerance
        evaluations (int): objective evaluations over all starts
        start_values (list): final Phi of every start, in start order

    """

    def __init__(self, best_freqs, best_phi, fit, starts_converged, evaluations,
                 start_values=()):
        self.best_freqs = best_freqs
        self.best_phi = best_phi
        self.fit = fit
        self.starts_converged = starts_converged
        self.evaluations = evaluations
        self.start_values = list(start_values)

    def __repr__(self):
        return "OptimizeResult(best_phi={!r}, lambdas={!r})".format(
            self.best_phi, list(self.best_freqs.lambdas))


class _Objective(object):
    """Phi over flat coordinates; evaluations that the linear layer rejects
    (overflow, numerically dependent basis) score as ||f||**2."""

    def __init__(self, signal, cluster_tol):
        self.signal = signal
        self.cluster_tol = cluster_tol
        self.worst = signal.norm_sq()

    def __call__(self, coordinates):
        freqs = FrequencySet.from_coordinates(coordinates, self.cluster_tol)
        try:
            return phi(freqs, self.signal)
        except ExpoApproxException as e:
            log.debug("Penalized evaluation at %r: %s", freqs.lambdas, e)
            return self.worst


def _run_start(task):
    index, x0, signal, config = task
    objective = _Objective(signal, config.cluster_tol)
    result = optimize.minimize(
        objective, x0, method="Nelder-Mead",
        options={
            "maxiter": config.max_iters,
            "xatol": SIMPLEX_XTOL,
            "fatol": config.simplex_tol,
        },
    )
    return index, np.array(result.x, dtype=float), float(result.fun), bool(result.success), int(result.nfev)


def minimize_phi(signal, config):
    """Search for the n frequencies that minimize Phi for ``signal``.

    Runs ``config.starts`` Nelder-Mead searches over (u1, v1, ..., un, vn),
    started from uniform draws in the start box. The draws come from a
    generator seeded with ``config.seed``, so results are reproducible.
    Searches may leave the box.

    Returns:
        OptimizeResult: the best start; ties go to the lowest start index.

    """
    rng = np.random.default_rng(config.seed)
    low, high = config.start_box
    starts = rng.uniform(low, high, size=(config.starts, low.size))
    tasks = [(i, x0, signal, config) for i, x0 in enumerate(starts)]

    if config.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_run_start, tasks))
    else:
        outcomes = []
        for task in tasks:
            outcome = _run_start(task)
            log.info("start %d/%d phi=%.10g converged=%s",
                     outcome[0] + 1, config.starts, outcome[2], outcome[3])
            outcomes.append(outcome)

    outcomes.sort(key=lambda outcome: outcome[0])
    converged = sum(1 for outcome in outcomes if outcome[3])
    if converged < len(outcomes):
        log.warning("%d of %d starts did not converge", len(outcomes) - converged, len(outcomes))

    index, x, _, _, _ = min(outcomes, key=lambda outcome: (outcome[2], outcome[0]))
    best_freqs = FrequencySet.from_coordinates(x, config.cluster_tol)
    fit = linear_fit(best_freqs, signal)
    log.info("best phi %.10g from start %d at %r", fit.f_min, index + 1, best_freqs.lambdas)
    return OptimizeResult(
        best_freqs=best_freqs,
        best_phi=fit.f_min,
        fit=fit,
        starts_converged=converged,
        evaluations=sum(outcome[4] for outcome in outcomes),
        start_values=[outcome[2] for outcome in outcomes],
    )


class ConjectureReport(object):
    """Outcome of :func:`explore_conjecture`.

    Attributes:
        grid_min (float): smallest Phi over the non-cluster grid pairs
        grid_argmin (tuple): the pair (lam_1, lam_2) attaining it
        pairs_evaluated (int): number of grid pairs evaluated
        below_quarter (int): grid pairs with Phi < 1/4
        shrinking (list): (eps, Phi(i eps, -i eps)) in the order given
        shrinking_ok (bool): the shrinking values approach 1/4 within the
            tolerances
        conjecture_violated (bool): some evaluated pair lies below 1/4

    """

    def __init__(self, grid_min, grid_argmin, pairs_evaluated, below_quarter, shrinking,
                 shrinking_ok):
        self.grid_min = grid_min
        self.grid_argmin = grid_argmin
        self.pairs_evaluated = pairs_evaluated
        self.below_quarter = below_quarter
        self.shrinking = list(shrinking)
        self.shrinking_ok = shrinking_ok

    @property
    def conjecture_violated(self):
        return self.grid_min < QUARTER or any(value < QUARTER for _, value in self.shrinking)

    def __repr__(self):
        return ("ConjectureReport(grid_min={!r}, grid_argmin={!r}, below_quarter={}, "
                "conjecture_violated={})").format(
            self.grid_min, self.grid_argmin, self.below_quarter, self.conjecture_violated)


def explore_conjecture(u_range=(-1.0, 1.0, 21), v_range=(-2.0, 2.0, 21),
                       epsilons=(0.5, 0.1, 0.02), signal=None,
                       cluster_tol=DEFAULT_CLUSTER_TOL):
    """Check numerically whether 1/4 bounds Phi(lam_1, lam_2) from below for lam_1 != lam_2.

    Phi is evaluated on all unordered pairs of distinct points of the
    (u, v) grid, and on the shrinking pairs (i eps, -i eps). Values below
    1/4 are findings: they are logged and reported, never raised.

    Args:
        u_range (tuple): (min, max, steps) for the real parts
        v_range (tuple): (min, max, steps) for the imaginary parts
        epsilons (tuple): decreasing sizes of the shrinking pairs
        signal (Signal): target function (default: sign)

    Returns:
        ConjectureReport

    """
    signal = signal or SignFunction()
    points = [complex(u, v) for u in _axis(*u_range) for v in _axis(*v_range)]

    grid_min, grid_argmin = math.inf, None
    evaluated = below = 0
    for lam_1, lam_2 in itertools.combinations(points, 2):
        if abs(lam_1 - lam_2) < cluster_tol:
            continue
        try:
            value = phi(FrequencySet([lam_1, lam_2], cluster_tol), signal)
        except ExpoApproxException as e:
            log.debug("Skipped pair (%r, %r): %s", lam_1, lam_2, e)
            continue
        evaluated += 1
        if value < QUARTER:
            below += 1
        if value < grid_min:
            grid_min, grid_argmin = value, (lam_1, lam_2)

    shrinking = []
    for eps in epsilons:
        value = phi(FrequencySet([1j * eps, -1j * eps], cluster_tol), signal)
        shrinking.append((eps, value))

    gaps = [abs(value - QUARTER) for _, value in shrinking]
    shrinking_ok = bool(gaps) and gaps[-1] < 1e-3
    if len(gaps) > 1:
        shrinking_ok = shrinking_ok and gaps[-2] < 2e-2

    report = ConjectureReport(grid_min, grid_argmin, evaluated, below, shrinking, shrinking_ok)
    if report.conjecture_violated:
        log.warning("Phi below 1/4 found: grid minimum %.10g at %r (%d of %d pairs below)",
                    grid_min, grid_argmin, below, evaluated)
    if not shrinking_ok:
        log.warning("Shrinking pairs do not approach 1/4: %r", shrinking)
    return report
