"""Linear part of the approximation problem: Gram matrices, normal
equations and the minimal squared deflection."""
import logging
import math

import numpy as np
from scipy import linalg

from .exceptions import (
    ConsistencyError, IllConditionedBasisError, ValidationError
)
from .inner import ExpoPolyTerm, inner_product

# Module-level logger
log = logging.getLogger(__name__)

PIVOT_RTOL = 1e-13
CLAMP_SLACK = 1e-10


class Basis(object):
    """An ordered sequence of distinct expo-polynomial terms.

    For every frequency present, the degrees must form the contiguous run
    0..(multiplicity - 1), as produced for a cluster of coincident
    frequencies.

    """

    def __init__(self, terms):
        self._terms = tuple(terms)
        self._validate_basis()

    @property
    def terms(self):
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __getitem__(self, index):
        return self._terms[index]

    def __eq__(self, other):
        if not isinstance(other, Basis):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return "Basis({!r})".format(list(self._terms))

    def _validate_basis(self):
        """Validates Basis terms. Raises errors for invariant violations."""
        if not self._terms:
            raise ValidationError("A basis needs at least one term")

        degrees = {}
        for term in self._terms:
            if not isinstance(term, ExpoPolyTerm):
                msg = "Basis entries must be ExpoPolyTerm, got {!r}"
                raise ValidationError(msg.format(term))
            seen = degrees.setdefault(term.lam, set())
            if term.degree in seen:
                msg = "Basis term {!r} appears more than once"
                raise ValidationError(msg.format(term))
            seen.add(term.degree)

        for lam, seen in degrees.items():
            if seen != set(range(len(seen))):
                msg = "Degrees {} at frequency {!r} are not a contiguous run from 0"
                raise ValidationError(msg.format(sorted(seen), lam))


class GramMatrix(object):
    """The Hermitian matrix g_ij = <phi_i|phi_j> of a basis."""

    def __init__(self, entries, basis=None):
        entries = np.array(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            msg = "Gram matrix must be square, got shape {}"
            raise ValidationError(msg.format(entries.shape))
        if basis is not None and len(basis) != entries.shape[0]:
            msg = "Gram matrix of order {} does not match a basis of {} terms"
            raise ValidationError(msg.format(entries.shape[0], len(basis)))
        entries.setflags(write=False)
        self._entries = entries
        self._basis = basis

    @property
    def order(self):
        return self._entries.shape[0]

    @property
    def entries(self):
        return self._entries

    @property
    def basis(self):
        return self._basis

    def __getitem__(self, index):
        return self._entries[index]

    def max_asymmetry(self):
        """Largest |g_ij - conj(g_ji)|."""
        return float(np.max(np.abs(self._entries - self._entries.conj().T)))

    def inverse_transpose(self):
        """Return g^{ij}, the components of the transposed inverse."""
        return np.linalg.inv(self._entries).T


def build_gram(basis):
    """Assemble the Gram matrix of ``basis``.

    Only the upper triangle is evaluated; the lower one is its conjugate
    mirror, so the result is Hermitian bit for bit.

    """
    n = len(basis)
    entries = np.empty((n, n), dtype=complex)
    for i in range(n):
        entries[i, i] = inner_product(basis[i], basis[i])
        for j in range(i + 1, n):
            value = inner_product(basis[i], basis[j])
            entries[i, j] = value
            entries[j, i] = value.conjugate()
    return GramMatrix(entries, basis)


def build_moments(basis, signal):
    """Return the moment vector b_i = <phi_i|f>."""
    return np.array([signal.moment(term) for term in basis], dtype=complex)


def _cholesky(matrix):
    """Lower Cholesky factor of a Hermitian matrix with a pivot check.

    Raises:
        IllConditionedBasisError: on the first pivot below
            PIVOT_RTOL * (largest diagonal entry).

    """
    n = matrix.shape[0]
    lower = np.zeros_like(matrix)
    threshold = PIVOT_RTOL * float(np.max(matrix.diagonal().real))
    for k in range(n):
        row = lower[k, :k]
        pivot = matrix[k, k].real - float(np.sum(np.abs(row) ** 2))
        if not pivot > threshold:
            msg = ("Gram matrix is not numerically positive definite: pivot {} "
                   "is {:.3e}, threshold {:.3e}")
            raise IllConditionedBasisError(msg.format(k, pivot, threshold), k)
        diag = math.sqrt(pivot)
        lower[k, k] = diag
        for i in range(k + 1, n):
            lower[i, k] = (matrix[i, k] - np.dot(lower[i, :k], row.conj())) / diag
    return lower


def _clamp(f_min, norm_f_sq):
    slack = CLAMP_SLACK * max(1.0, norm_f_sq)
    if f_min < 0.0:
        if f_min < -slack:
            msg = "Squared deflection {!r} is negative beyond rounding"
            raise ConsistencyError(msg.format(f_min))
        log.debug("Clamped f_min=%r to 0", f_min)
        return 0.0
    if f_min > norm_f_sq:
        if f_min > norm_f_sq + slack:
            msg = "Squared deflection {!r} exceeds ||f||^2 = {!r}"
            raise ConsistencyError(msg.format(f_min, norm_f_sq))
        log.debug("Clamped f_min=%r to ||f||^2=%r", f_min, norm_f_sq)
        return norm_f_sq
    return f_min


class LinearFit(object):
    """Optimal coefficients for a fixed basis and the resulting deflection.

    Attributes:
        basis (Basis): the basis the coefficients belong to
        coefficients (numpy.ndarray): complex a^j, one per basis term
        f_min (float): minimal squared deflection ||f - phi||**2
        norm_f_sq (float): ||f||**2

    """

    def __init__(self, basis, coefficients, f_min, norm_f_sq):
        self.basis = basis
        self.coefficients = np.array(coefficients, dtype=complex)
        self.coefficients.setflags(write=False)
        self.f_min = float(f_min)
        self.norm_f_sq = float(norm_f_sq)
        self._validate_fit()

    @property
    def rms_deflection(self):
        return math.sqrt(self.f_min)

    def evaluate(self, x):
        """Evaluate phi(x) = sum_j a^j x**k_j exp(lam_j x) on an array."""
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape, dtype=complex)
        for coefficient, term in zip(self.coefficients, self.basis):
            total += coefficient * x ** term.degree * np.exp(term.lam * x)
        return total

    def _validate_fit(self):
        if self.basis is not None and len(self.coefficients) != len(self.basis):
            msg = "{} coefficients given for a basis of {} terms"
            raise ValidationError(msg.format(len(self.coefficients), len(self.basis)))
        slack = 1e-12 * max(1.0, self.norm_f_sq)
        if not -slack <= self.f_min <= self.norm_f_sq + slack:
            msg = "f_min={!r} lies outside [0, {!r}]"
            raise ValidationError(msg.format(self.f_min, self.norm_f_sq))

    def __repr__(self):
        return "LinearFit(n={}, f_min={!r})".format(len(self.coefficients), self.f_min)


def solve_normal_equations(gram, moments, norm_f_sq):
    """Solve sum_j g_ij a^j = b_i and evaluate the minimal deflection.

    The matrix is scaled to unit diagonal before a Cholesky factorization
    G = D^{1/2} L L^H D^{1/2}; with y = L^{-1} D^{-1/2} b the minimum is
    F_min = ||f||**2 - |y|**2.

    Args:
        gram (GramMatrix): Gram matrix of the basis
        moments: the moments <phi_i|f>, one per basis term
        norm_f_sq (float): ||f||**2

    Returns:
        LinearFit: with ``basis`` taken from ``gram``

    Raises:
        IllConditionedBasisError: the basis is numerically dependent.
        ConsistencyError: f_min left [0, ||f||**2] beyond rounding.

    """
    moments = np.asarray(moments, dtype=complex)
    if moments.shape != (gram.order,):
        msg = "Moment vector of shape {} does not match a Gram matrix of order {}"
        raise ValidationError(msg.format(moments.shape, gram.order))

    diagonal = gram.entries.diagonal().real
    bad = np.flatnonzero(~(diagonal > 0.0))
    if bad.size:
        index = int(bad[0])
        msg = "Gram matrix has a non-positive diagonal entry at {}"
        raise IllConditionedBasisError(msg.format(index), index)

    scale = np.sqrt(diagonal)
    lower = _cholesky(gram.entries / np.outer(scale, scale))
    y = linalg.solve_triangular(lower, moments / scale, lower=True)
    coefficients = linalg.solve_triangular(lower, y, lower=True, trans="C") / scale
    projection = float(np.sum(np.abs(y) ** 2))
    f_min = _clamp(norm_f_sq - projection, norm_f_sq)
    return LinearFit(gram.basis, coefficients, f_min, norm_f_sq)


def f_min_explicit(gram, moments, norm_f_sq):
    """F_min from the explicit double sum over the inverse Gram matrix.

    Numerically inferior to :func:`solve_normal_equations`; kept as an
    independent check.

    """
    moments = np.asarray(moments, dtype=complex)
    upper = gram.inverse_transpose()
    total = np.einsum("ij,i,j->", upper, moments, moments.conj())
    return float(norm_f_sq - total.real)


def residual_orthogonality(fit, signal):
    """Return <phi_i|f - phi> for every basis term; zero for an exact fit."""
    gram = build_gram(fit.basis)
    return build_moments(fit.basis, signal) - gram.entries.dot(fit.coefficients)


def direct_deflection_sq(fit, signal):
    """||f - phi||**2 by direct quadrature of the residual."""
    return signal.distance_sq(fit.evaluate)
