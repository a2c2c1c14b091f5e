"""The nonlinear objective: minimal squared deflection as a function of the
frequencies alone, plus closed forms for the sign function."""
import concurrent.futures
import logging
import math

import numpy as np

from .common import _ensure_complex
from .exceptions import IllConditionedBasisError, InvalidArgumentsError
from .gram import Basis, build_gram, build_moments, solve_normal_equations
from .inner import ExpoPolyTerm
from .signals import SignFunction

# Module-level logger
log = logging.getLogger(__name__)

DEFAULT_CLUSTER_TOL = 1e-6
MERGE_RADIUS = 0.1

_ZERO_U = 1e-8
_SHIFTED_U = 20.0
_SMALL_W = 1e-2


class FrequencySet(object):
    """A multiset of n complex frequencies and the tolerance under which
    nearby frequencies are merged into a cluster."""

    def __init__(self, lambdas, cluster_tol=DEFAULT_CLUSTER_TOL):
        self._lambdas = tuple(_ensure_complex(lam) for lam in lambdas)
        if not self._lambdas:
            raise InvalidArgumentsError("A frequency set needs at least one frequency")
        try:
            cluster_tol = float(cluster_tol)
        except (TypeError, ValueError) as e:
            msg = "cluster_tol must be a real number, got {!r}"
            raise InvalidArgumentsError(msg.format(cluster_tol)) from e
        if not cluster_tol > 0.0:
            msg = "cluster_tol must be positive, got {!r}"
            raise InvalidArgumentsError(msg.format(cluster_tol))
        self._cluster_tol = cluster_tol

    @classmethod
    def from_coordinates(cls, coordinates, cluster_tol=DEFAULT_CLUSTER_TOL):
        """Build from flat real coordinates (u1, v1, ..., un, vn)."""
        coordinates = [float(c) for c in coordinates]
        if not coordinates or len(coordinates) % 2:
            msg = "Expected an even, non-zero number of coordinates, got {}"
            raise InvalidArgumentsError(msg.format(len(coordinates)))
        pairs = zip(coordinates[0::2], coordinates[1::2])
        return cls([complex(u, v) for u, v in pairs], cluster_tol)

    @property
    def lambdas(self):
        return self._lambdas

    @property
    def cluster_tol(self):
        return self._cluster_tol

    def coordinates(self):
        """Flat real coordinates (u1, v1, ..., un, vn)."""
        return [part for lam in self._lambdas for part in (lam.real, lam.imag)]

    def __len__(self):
        return len(self._lambdas)

    def __iter__(self):
        return iter(self._lambdas)

    def __eq__(self, other):
        if not isinstance(other, FrequencySet):
            return NotImplemented
        return (self._lambdas, self._cluster_tol) == (other._lambdas, other._cluster_tol)

    def __hash__(self):
        return hash((self._lambdas, self._cluster_tol))

    def __repr__(self):
        return "FrequencySet({!r}, cluster_tol={!r})".format(list(self._lambdas), self._cluster_tol)


def _clusters(lambdas, tol):
    """Group indices by transitive closeness (single linkage)."""
    parent = list(range(len(lambdas)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(lambdas)):
        for j in range(i + 1, len(lambdas)):
            if abs(lambdas[i] - lambdas[j]) < tol:
                parent[find(j)] = find(i)

    groups = {}
    for i in range(len(lambdas)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda group: group[0])


def _group_basis(lambdas, groups):
    terms = []
    for group in groups:
        centroid = sum(lambdas[i] for i in group) / len(group)
        terms.extend(ExpoPolyTerm(k, centroid) for k in range(len(group)))
    return Basis(terms)


def build_basis(freqs):
    """Build the basis spanned by a frequency set.

    Each group of m merged frequencies contributes the expo-polynomials
    x**k exp(c x), k = 0..m-1, at the group centroid c. The basis always has
    ``len(freqs)`` terms.

    """
    return _group_basis(freqs.lambdas, _clusters(freqs.lambdas, freqs.cluster_tol))


def _owner(groups, index):
    """Position of the group whose terms include basis term ``index``."""
    for position, group in enumerate(groups):
        if index < len(group):
            return position
        index -= len(group)
    raise InvalidArgumentsError("Basis term {} is out of range".format(index))


def _merge_nearest(lambdas, groups, owner):
    """Join group ``owner`` with its closest neighbour (single linkage).

    Returns (groups, distance), or None when there is no neighbour within
    MERGE_RADIUS.

    """
    def gap(position):
        return min(abs(lambdas[i] - lambdas[j])
                   for i in groups[owner] for j in groups[position])

    others = [position for position in range(len(groups)) if position != owner]
    if not others:
        return None
    nearest = min(others, key=gap)
    distance = gap(nearest)
    if distance >= MERGE_RADIUS:
        return None
    merged = sorted(groups[owner] + groups[nearest])
    rest = [group for position, group in enumerate(groups) if position not in (owner, nearest)]
    return sorted(rest + [merged], key=lambda group: group[0]), distance


def linear_fit(freqs, signal):
    """Solve the linear problem for fixed frequencies; returns a LinearFit.

    Frequencies closer than ``cluster_tol`` are merged up front. If the Gram
    matrix still fails its pivot check, the group owning the failed pivot is
    merged with its nearest neighbour and the solve is repeated, so closely
    spaced frequencies degrade into the cluster basis instead of raising.

    Raises:
        IllConditionedBasisError: no neighbour within MERGE_RADIUS is left
            to merge.

    """
    lambdas = freqs.lambdas
    groups = _clusters(lambdas, freqs.cluster_tol)
    while True:
        basis = _group_basis(lambdas, groups)
        gram = build_gram(basis)
        try:
            return solve_normal_equations(gram, build_moments(basis, signal), signal.norm_sq())
        except IllConditionedBasisError as e:
            merge = _merge_nearest(lambdas, groups, _owner(groups, e.index))
            if merge is None:
                raise
            groups, distance = merge
            log.debug("Pivot %d failed; merged frequencies %.3g apart into %d groups",
                      e.index, distance, len(groups))


def phi(freqs, signal):
    """Minimal squared deflection for the given frequencies."""
    return linear_fit(freqs, signal).f_min


def phi_cluster(lam, signal, cluster_tol=DEFAULT_CLUSTER_TOL):
    """Phi of the doubled frequency lam = lam_1 = lam_2 (basis e^{lam x}, x e^{lam x})."""
    return phi(FrequencySet([lam, lam], cluster_tol), signal)


def phi_sign_one_freq(u, v):
    """Closed form of Phi(u + iv) for f = sign and a single frequency.

    Even in both u and v. The u -> 0 limit is used for |u| < 1e-8 and an
    exponent-shifted form for |u| > 20, where cosh and sinh would overflow.

    """
    u, v = abs(float(u)), float(v)
    w = math.pi * v
    if u < _ZERO_U:
        if w == 0.0:
            return 1.0
        one_minus_cos = 2.0 * math.sin(0.5 * w) ** 2
        return 1.0 - one_minus_cos ** 2 / (w * w)
    if u > _SHIFTED_U:
        q = math.exp(-math.pi * u)
        # (cosh(pi u) - cos(pi v))**2 / sinh(2 pi u) with e^{2 pi u} cancelled
        ratio = 2.0 * (0.5 * (1.0 + q * q) - math.cos(w) * q) ** 2 / (1.0 - q ** 4)
    else:
        cosh_minus_cos = 2.0 * math.sinh(0.5 * math.pi * u) ** 2 + 2.0 * math.sin(0.5 * w) ** 2
        ratio = cosh_minus_cos ** 2 / math.sinh(2.0 * math.pi * u)
    return 1.0 - 2.0 * u / (u * u + v * v) * ratio / math.pi


def phi_sign_cluster_axis(v):
    """Closed form of Phi for the doubled frequency lam_1 = lam_2 = iv, f = sign.

    Tends to 1/4 as v -> 0; v = 0 returns exactly 0.25.

    """
    w = math.pi * float(v)
    if abs(w) < _SMALL_W:
        return 0.25 + w * w / 8.0 - 5.0 * w ** 4 / 192.0
    one_minus_cos = 2.0 * math.sin(0.5 * w) ** 2
    bracket = (2.0 * math.cos(w) * w * w + 3.0 * one_minus_cos + 4.0 * w * w
               - 6.0 * math.sin(w) * w)
    return 1.0 - one_minus_cos * bracket / w ** 4


def _axis(lo, hi, steps):
    steps = int(steps)
    if steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, steps)


def _phi_row(task):
    u, vs, signal, mode, cluster_tol = task
    row = []
    for v in vs:
        lam = complex(u, v)
        if mode == "2cluster":
            value = phi_cluster(lam, signal, cluster_tol)
        else:
            value = phi(FrequencySet([lam], cluster_tol), signal)
        row.append((float(u), float(v), value))
    return row


def phi_map(u_range, v_range, signal=None, mode="1", cluster_tol=DEFAULT_CLUSTER_TOL, workers=1):
    """Sweep Phi over a rectangular (u, v) grid.

    Args:
        u_range (tuple): (min, max, steps) for the real part
        v_range (tuple): (min, max, steps) for the imaginary part
        signal (Signal): target function (default: sign)
        mode (str): ``"1"`` for one frequency, ``"2cluster"`` for the
            doubled frequency
        workers (int): processes to spread the rows over

    Returns:
        list of (u, v, phi) tuples, row-major with u as the slow index;
        the order does not depend on ``workers``.

    """
    if mode not in ("1", "2cluster"):
        msg = "Unknown map mode '{}', expected '1' or '2cluster'"
        raise InvalidArgumentsError(msg.format(mode))
    for name, (lo, hi, steps) in (("u", u_range), ("v", v_range)):
        if int(steps) <= 0:
            msg = "Step count for {} must be positive, got {}"
            raise InvalidArgumentsError(msg.format(name, steps))
    signal = signal or SignFunction()
    us = _axis(*u_range)
    vs = _axis(*v_range)
    tasks = [(u, vs, signal, mode, cluster_tol) for u in us]

    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_phi_row, tasks))
    else:
        rows = [_phi_row(task) for task in tasks]
    log.debug("Evaluated a %dx%d phi map (mode %s)", len(us), len(vs), mode)
    return [point for row in rows for point in row]
