"""Exact L2 inner products of expo-polynomials on [-pi, +pi].

All integrals carry the 1/(2*pi) normalization, so the constant function 1
has unit norm::

    <a|b> = 1/(2 pi) * integral_{-pi}^{+pi} conj(a(x)) b(x) dx

"""
import cmath
import logging
import math
import sys

from .common import _ensure_complex, _ensure_degree
from .exceptions import InvalidArgumentsError

# Module-level logger
log = logging.getLogger(__name__)

MAX_DEGREE = 40
SERIES_THRESHOLD = 0.5

_EPS = sys.float_info.epsilon
_MAX_SERIES_TERMS = 1000
_TWO_PI = 2.0 * math.pi


class ExpoPolyTerm(object):
    """One basis function ``x**degree * exp(lam * x)``.

    Terms are immutable and hashable, so they can be collected in sets and
    used as dictionary keys.

    """
    __slots__ = ("_degree", "_lam")

    def __init__(self, degree, lam):
        """Create a term.

        Args:
            degree (int): power of x, 0 <= degree <= MAX_DEGREE
            lam (complex): the frequency (u + iv); both parts finite

        """
        self._degree = _ensure_degree(degree, MAX_DEGREE)
        self._lam = _ensure_complex(lam)

    @property
    def degree(self):
        return self._degree

    @property
    def lam(self):
        return self._lam

    def _key(self):
        return (self._degree, self._lam.real, self._lam.imag)

    def __eq__(self, other):
        if not isinstance(other, ExpoPolyTerm):
            return NotImplemented
        return self._key() == other._key()

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "ExpoPolyTerm(degree={}, lam={!r})".format(self._degree, self._lam)


def _switch_point(m):
    # Upward recurrence amplifies rounding by roughly (m / (e |mu| pi))**m,
    # so the series keeps the low-|mu| region for higher degrees.
    return max(SERIES_THRESHOLD, 0.5 * m)


def _checked(value, m, mu):
    if not cmath.isfinite(value):
        msg = "Integral of degree {} at mu={!r} overflows double precision"
        raise InvalidArgumentsError(msg.format(m, mu))
    return value


def _exp(z, m, mu):
    try:
        return cmath.exp(z)
    except OverflowError as e:
        msg = "Integral of degree {} at mu={!r} overflows double precision"
        raise InvalidArgumentsError(msg.format(m, mu)) from e


def _full_series(m, mu):
    """Power series for I_m(mu), keeping only the j with m + j even."""
    z = mu * math.pi
    z2 = z * z
    j = m % 2
    power = math.pi ** m * (z if j else 1.0)  # mu**j * pi**(m+j) / j!
    total = 0j
    for _ in range(_MAX_SERIES_TERMS):
        term = power / (m + j + 1)
        total += term
        if j > abs(z) and abs(term) <= _EPS * abs(total):
            break
        if term == 0:
            break
        power *= z2 / ((j + 1) * (j + 2))
        j += 2
    else:
        log.warning("Series for I_%d(%r) stopped after %d terms", m, mu, _MAX_SERIES_TERMS)
    return total


def _full_recurrence(m, mu):
    """Boundary-term recurrence for I_m(mu), seeded by sinh(mu pi)/(mu pi)."""
    z = mu * math.pi
    ep = _exp(z, m, mu)
    em = _exp(-z, m, mu)
    value = (ep - em) / (2.0 * z)
    scale = _TWO_PI * mu
    for k in range(1, m + 1):
        boundary = (math.pi ** k * ep - (-math.pi) ** k * em) / scale
        value = boundary - (k / mu) * value
    return value


def _half_series(m, mu):
    """Power series for J_m(mu) over [0, pi]."""
    z = mu * math.pi
    power = complex(math.pi ** m)  # mu**j * pi**(m+j) / j!
    total = 0j
    j = 0
    for _ in range(_MAX_SERIES_TERMS):
        term = power / (2 * (m + j + 1))
        total += term
        if j > abs(z) and abs(term) <= _EPS * abs(total):
            break
        if term == 0:
            break
        power *= z / (j + 1)
        j += 1
    else:
        log.warning("Series for J_%d(%r) stopped after %d terms", m, mu, _MAX_SERIES_TERMS)
    return total


def _half_recurrence(m, mu):
    """Boundary-term recurrence for J_m(mu); the lower limit only
    contributes to J_0."""
    z = mu * math.pi
    ep = _exp(z, m, mu)
    scale = _TWO_PI * mu
    value = (ep - 1.0) / scale
    for k in range(1, m + 1):
        value = math.pi ** k * ep / scale - (k / mu) * value
    return value


def integral_full(m, mu):
    """Compute I_m(mu) = 1/(2 pi) * integral_{-pi}^{+pi} x**m exp(mu x) dx.

    Args:
        m (int): power of x, at most MAX_DEGREE
        mu (complex): exponent, finite

    Returns:
        complex: the integral, exact to near machine precision.

    Raises:
        InvalidArgumentsError: degree out of range, non-finite mu, or an
            exponent too large for double precision.

    """
    m = _ensure_degree(m, MAX_DEGREE)
    mu = _ensure_complex(mu, "mu")
    if abs(mu) * math.pi < _switch_point(m):
        return _checked(_full_series(m, mu), m, mu)
    return _checked(_full_recurrence(m, mu), m, mu)


def integral_half(m, mu):
    """Compute J_m(mu) = 1/(2 pi) * integral_0^{+pi} x**m exp(mu x) dx.

    Satisfies I_m(mu) = J_m(mu) + (-1)**m * J_m(-mu).

    """
    m = _ensure_degree(m, MAX_DEGREE)
    mu = _ensure_complex(mu, "mu")
    if abs(mu) * math.pi < _switch_point(m):
        return _checked(_half_series(m, mu), m, mu)
    return _checked(_half_recurrence(m, mu), m, mu)


def inner_product(a, b):
    """Return <a|b> = I_{deg(a)+deg(b)}(conj(lam_a) + lam_b).

    The pair is evaluated in a canonical order and conjugated when swapped,
    so ``inner_product(a, b) == conj(inner_product(b, a))`` holds exactly.

    """
    if a._key() > b._key():
        return inner_product(b, a).conjugate()
    degree = a.degree + b.degree
    if degree > MAX_DEGREE:
        msg = "Combined degree {} of {!r} and {!r} exceeds {}"
        raise InvalidArgumentsError(msg.format(degree, a, b, MAX_DEGREE))
    value = integral_full(degree, a.lam.conjugate() + b.lam)
    if a == b:
        # <t|t> is a norm; drop the rounding residue in the imaginary part.
        value = complex(value.real, 0.0)
    return value
