"""Target functions f on [-pi, +pi]: the sign function and sampled data."""
import csv
import logging
import math

import numpy as np
from scipy import integrate

from .common import _format_float
from .exceptions import InvalidArgumentsError, MalformedSignalError
from .inner import integral_half

# Module-level logger
log = logging.getLogger(__name__)

CSV_HEADER = ("x", "f_re", "f_im")
GRID_TOL = 1e-12
MIN_POINTS = 5

_TWO_PI = 2.0 * math.pi


class Signal(object):
    """Common interface of target functions.

    Subclasses provide the squared norm ||f||**2 and the moments <phi|f>
    against expo-polynomial basis terms, both with the 1/(2 pi)
    normalization.

    """

    @property
    def descriptor(self):
        """Short text naming the signal, as used in reports."""
        raise NotImplementedError

    def moment(self, term):
        """Return <term|f>."""
        raise NotImplementedError

    def moment_left(self, term):
        """Return <f|term>, evaluated directly rather than by conjugation."""
        raise NotImplementedError

    def norm_sq(self):
        raise NotImplementedError

    def distance_sq(self, approximant):
        """Return ||f - approximant||**2 by direct quadrature.

        Args:
            approximant (callable): maps a numpy array of abscissae to the
                complex values of the approximating function.

        """
        raise NotImplementedError


class SignFunction(Signal):
    """f(x) = sign(x), with sign(0) = 1. All quantities are analytic."""

    @property
    def descriptor(self):
        return "sign"

    def moment(self, term):
        # Split at 0: <x^k e^{lam x}|sign> = J_k(mu) - (-1)^k J_k(-mu), mu = conj(lam)
        mu = term.lam.conjugate()
        k = term.degree
        return integral_half(k, mu) - (-1) ** k * integral_half(k, -mu)

    def moment_left(self, term):
        lam = term.lam
        k = term.degree
        return integral_half(k, lam) - (-1) ** k * integral_half(k, -lam)

    def norm_sq(self):
        return 1.0

    def evaluate(self, x):
        """Return sign(x) on an array, with sign(0) = 1."""
        return np.where(np.asarray(x, dtype=float) >= 0.0, 1.0, -1.0)

    def distance_sq(self, approximant):
        def residual(x):
            point = np.array([x])
            return abs(complex(self.evaluate(point)[0] - approximant(point)[0])) ** 2

        # Adaptive quadrature on each side of the jump; x = 0 is never sampled.
        total = 0.0
        for lo, hi in ((-math.pi, 0.0), (0.0, math.pi)):
            value, _ = integrate.quad(residual, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
            total += value
        return total / _TWO_PI

    def __eq__(self, other):
        return isinstance(other, SignFunction)

    def __hash__(self):
        return hash(SignFunction)

    def __repr__(self):
        return "SignFunction()"


class SampledSignal(Signal):
    """A signal given by complex samples on a uniform grid over [-pi, +pi].

    The grid must start at -pi, end at +pi, have an odd number of points
    (at least five) and constant spacing. Moments and norms use composite
    Simpson quadrature on that grid.

    A jump must be sampled at its midpoint. For the sign function that means
    f(0) = 0, as ``numpy.sign`` gives, with x = 0 exactly on the grid;
    sampling ``SignFunction.evaluate`` (sign(0) = 1) instead biases every
    moment by about h/(2 pi) and leaves a first-order error behind.

    """

    def __init__(self, grid, values, source=None):
        """Create a sampled signal.

        Args:
            grid: increasing abscissae covering [-pi, +pi]
            values: complex samples, one per grid point
            source (str): where the samples came from, for reports (optional)

        """
        self._grid = np.array(grid, dtype=float)
        self._values = np.array(values, dtype=complex)
        self._source = source
        self._validate_grid()
        self._spacing = _TWO_PI / (self._grid.size - 1)
        self._grid.setflags(write=False)
        self._values.setflags(write=False)

    @classmethod
    def from_function(cls, func, points=4001, source=None):
        """Sample ``func`` on the uniform grid with ``points`` points.

        ``func`` is called once on the whole grid. The middle abscissa is
        pinned to exactly 0, so a function taking the midpoint value at a
        jump there, e.g. ``numpy.sign`` for the sign function, samples it
        correctly.

        """
        grid = np.linspace(-math.pi, math.pi, points)
        if points % 2:
            grid[points // 2] = 0.0
        return cls(grid, func(grid), source=source)

    @classmethod
    def read_csv(cls, path):
        """Read a signal from a CSV file with header ``x,f_re,f_im``.

        Raises:
            MalformedSignalError: if the file cannot be read or parsed, or
                its grid is invalid. Parse errors name the offending line.

        """
        grid, values = [], []
        try:
            with open(path, newline="") as f:
                reader = csv.reader(f)
                header = next(reader, None)
                if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
                    msg = "{}: line 1: expected header '{}', got {!r}"
                    raise MalformedSignalError(msg.format(path, ",".join(CSV_HEADER), header))
                for row in reader:
                    line = reader.line_num
                    if not row or all(not cell.strip() for cell in row):
                        continue
                    if len(row) != 3:
                        msg = "{}: line {}: expected 3 fields, got {}"
                        raise MalformedSignalError(msg.format(path, line, len(row)))
                    try:
                        x, re, im = (float(cell) for cell in row)
                    except ValueError as e:
                        msg = "{}: line {}: not a number in {!r}"
                        raise MalformedSignalError(msg.format(path, line, row)) from e
                    grid.append(x)
                    values.append(complex(re, im))
        except OSError as e:
            msg = "Cannot read signal file '{}': {}"
            raise MalformedSignalError(msg.format(path, e)) from e
        except (UnicodeDecodeError, csv.Error) as e:
            msg = "{}: not a CSV text file: {}"
            raise MalformedSignalError(msg.format(path, e)) from e

        log.debug("Read %d samples from %s", len(grid), path)
        return cls(grid, values, source=str(path))

    def write_csv(self, path):
        """Write the samples in the format read by :meth:`read_csv`."""
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for x, value in zip(self._grid, self._values):
                writer.writerow([
                    _format_float(x), _format_float(value.real), _format_float(value.imag)
                ])

    @property
    def grid(self):
        return self._grid

    @property
    def values(self):
        return self._values

    @property
    def spacing(self):
        return self._spacing

    @property
    def descriptor(self):
        if self._source:
            return "csv:" + self._source
        return "sampled[{}]".format(self._grid.size)

    def _validate_grid(self):
        """Validates the grid and samples. Raises errors for violations."""
        grid, values = self._grid, self._values
        if grid.ndim != 1 or values.ndim != 1:
            raise MalformedSignalError("Grid and values must be one-dimensional")

        if grid.size != values.size:
            msg = "Grid has {} points but {} values were given"
            raise MalformedSignalError(msg.format(grid.size, values.size))

        if grid.size < MIN_POINTS or grid.size % 2 == 0:
            msg = "Grid needs an odd number of points, at least {}; got {}"
            raise MalformedSignalError(msg.format(MIN_POINTS, grid.size))

        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise MalformedSignalError("Grid and values must be finite")

        if abs(grid[0] + math.pi) > GRID_TOL or abs(grid[-1] - math.pi) > GRID_TOL:
            msg = "Grid must run from -pi to +pi, got [{!r}, {!r}]"
            raise MalformedSignalError(msg.format(grid[0], grid[-1]))

        steps = np.diff(grid)
        expected = _TWO_PI / (grid.size - 1)
        if np.any(steps <= 0):
            raise MalformedSignalError("Grid must be strictly increasing")

        worst = int(np.argmax(np.abs(steps - expected)))
        if abs(steps[worst] - expected) > GRID_TOL:
            msg = "Grid is not uniform: step {} is {!r}, expected {!r}"
            raise MalformedSignalError(msg.format(worst, steps[worst], expected))

    def _simpson(self, samples):
        h = self._spacing
        real = integrate.simpson(samples.real, dx=h)
        imag = integrate.simpson(samples.imag, dx=h)
        return complex(real, imag) / _TWO_PI

    def _term_values(self, term):
        with np.errstate(over="raise", invalid="raise"):
            try:
                return self._grid ** term.degree * np.exp(term.lam * self._grid)
            except FloatingPointError as e:
                msg = "Basis term {!r} overflows on the sampling grid"
                raise InvalidArgumentsError(msg.format(term)) from e

    def moment(self, term):
        return self._simpson(np.conj(self._term_values(term)) * self._values)

    def moment_left(self, term):
        return self._simpson(np.conj(self._values) * self._term_values(term))

    def norm_sq(self):
        return self._simpson(np.abs(self._values) ** 2).real

    def distance_sq(self, approximant):
        residual = self._values - np.asarray(approximant(self._grid), dtype=complex)
        return self._simpson(np.abs(residual) ** 2).real

    def __repr__(self):
        return "SampledSignal(points={}, source={!r})".format(self._grid.size, self._source)


def moment(term, signal):
    """Return <term|f> for the given signal."""
    return signal.moment(term)


def norm_sq(signal):
    """Return ||f||**2 for the given signal."""
    return signal.norm_sq()
