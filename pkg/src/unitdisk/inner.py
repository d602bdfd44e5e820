"""Core objects: coefficient sequences and analytic functions on the open unit disk.

A real function f on the unit circle is carried here as an analytic
function w on the open disk.  Writing the cosine and sine coefficients of
f as alpha_k and beta_k, the complex Taylor coefficients of w are

    c_k = alpha_k - i beta_k,        w(z) = c_0 + sum_{k>=1} c_k z^k,

and f is recovered as the radial limit of Re[w] on the boundary.  The
constant term c_0 holds the circle mean (zero for zero-average data).
Everything in this module is immutable after construction and safe to
share between threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

#: recover_real refuses angles closer than this to a declared singular angle
EXCLUSION_WINDOW = 1e-3

#: absolute tolerance for coefficient equality at unit scale
COEFF_TOL = 1e-12


class UnitDiskError(Exception):
    """Base class for errors raised by this package."""


class DomainError(UnitDiskError):
    """A point lies outside the open disk or inside an exclusion window."""


class ConvergenceError(UnitDiskError):
    """A radial extrapolation failed to settle.

    Carries the sequence of extrapolation increments so the failure can be
    inspected.
    """

    def __init__(self, message, increments=()):
        super().__init__(message)
        self.increments = tuple(float(x) for x in increments)


class MissingCoefficientView(UnitDiskError):
    """The operation needs Taylor coefficients this object cannot provide."""


class _NotAdmissibleType:
    """Singleton returned by growth_class for super-power-law sequences."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotAdmissible"


NotAdmissible = _NotAdmissibleType()


def normalize_angle(theta: float) -> float:
    """Map an angle in radians to the canonical interval [-pi, pi)."""
    t = math.remainder(theta, TWO_PI)
    if t >= math.pi:  # remainder returns (-pi, pi]; fold the right endpoint
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class CirclePoint:
    """An angle on the unit circle, normalized to [-pi, pi)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def z(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk in polar form, 0 <= rho < 1 strictly."""

    rho: float
    theta: float

    def __post_init__(self):
        rho = float(self.rho)
        if not (0.0 <= rho < 1.0) or not math.isfinite(rho):
            raise DomainError(f"rho={rho!r} is outside the open unit disk")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def z(self) -> complex:
        return self.rho * complex(math.cos(self.theta), math.sin(self.theta))


def as_angle(point) -> float:
    """Accept a CirclePoint or a bare angle in radians, return the angle."""
    if isinstance(point, CirclePoint):
        return point.theta
    return normalize_angle(float(point))


def as_disk_point(point) -> DiskPoint:
    """Accept a DiskPoint or a (rho, theta) pair."""
    if isinstance(point, DiskPoint):
        return point
    rho, theta = point
    return DiskPoint(rho, theta)


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Complex Taylor coefficients c_k for k = 1..K plus the constant c_0.

    The cosine and sine coefficient views satisfy c_k = alpha_k - i beta_k.
    The array is finite, immutable and 0-indexed from k = 1.
    """

    coeffs: np.ndarray
    c0: complex = 0.0

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 1:
            raise ValueError("coefficient array must be one-dimensional")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("coefficients must be finite")
        c0 = complex(self.c0)
        if not (math.isfinite(c0.real) and math.isfinite(c0.imag)):
            raise ValueError("constant term must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "c0", c0)

    @classmethod
    def from_rule(cls, rule: Callable[[np.ndarray], np.ndarray], K: int,
                  c0: complex = 0.0) -> "CoefficientSequence":
        """Materialize a closed-form rule k -> c_k up to the cap K."""
        k = np.arange(1, K + 1)
        return cls(np.asarray(rule(k), dtype=complex), c0)

    @classmethod
    def from_alpha_beta(cls, alpha, beta, c0: complex = 0.0) -> "CoefficientSequence":
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        if alpha.shape != beta.shape:
            raise ValueError("alpha and beta must have matching length")
        return cls(alpha - 1j * beta, c0)

    @property
    def K(self) -> int:
        return len(self.coeffs)

    @property
    def alpha(self) -> np.ndarray:
        """Cosine coefficients, alpha_k = Re(c_k)."""
        return self.coeffs.real.copy()

    @property
    def beta(self) -> np.ndarray:
        """Sine coefficients, beta_k = -Im(c_k)."""
        return -self.coeffs.imag

    def truncated(self, K: int) -> "CoefficientSequence":
        if K > self.K:
            raise ValueError(f"only {self.K} coefficients stored, {K} requested")
        return CoefficientSequence(self.coeffs[:K], self.c0)

    def scaled(self, factor: complex) -> "CoefficientSequence":
        return CoefficientSequence(self.coeffs * factor, self.c0 * factor)

    def to_json(self) -> str:
        payload = {
            "c0": [self.c0.real, self.c0.imag],
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
            "K": self.K,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "CoefficientSequence":
        payload = json.loads(text)
        c0 = complex(payload["c0"][0], payload["c0"][1])
        coeffs = np.array([complex(re, im) for re, im in payload["coeffs"]],
                          dtype=complex)
        if "K" in payload and int(payload["K"]) != len(coeffs):
            raise ValueError("declared K does not match the coefficient list")
        return cls(coeffs, c0)


def coefficients_close(a: CoefficientSequence, b: CoefficientSequence,
                       tol: float = COEFF_TOL) -> bool:
    """Equality up to tol, absolute for |c| <= 1 and relative above."""
    if a.K != b.K:
        return False
    ca = np.concatenate([[a.c0], a.coeffs])
    cb = np.concatenate([[b.c0], b.coeffs])
    scale = np.maximum(1.0, np.maximum(np.abs(ca), np.abs(cb)))
    return bool(np.all(np.abs(ca - cb) <= tol * scale))


# ---------------------------------------------------------------------------
# disk functions
# ---------------------------------------------------------------------------

class InnerFunction:
    """An analytic function on the open unit disk.

    Subclasses implement ``_eval_z`` on scalar or array arguments with
    |z| < 1.  ``singular_angles`` lists boundary angles where the analytic
    continuation is known to be singular; radial recovery refuses angles
    inside the exclusion window around them.
    """

    singular_angles: tuple = ()

    def _eval_z(self, z):
        raise NotImplementedError

    def eval(self, point) -> complex:
        """Value at a DiskPoint (or (rho, theta) pair) strictly inside the disk."""
        p = as_disk_point(point)
        return complex(self._eval_z(p.z))

    def eval_grid(self, rho: float, thetas) -> np.ndarray:
        """Vectorized values on the circle of radius rho at the given angles."""
        rho = float(rho)
        if not (0.0 <= rho < 1.0):
            raise DomainError(f"rho={rho!r} is outside the open unit disk")
        thetas = np.asarray(thetas, dtype=float)
        return np.asarray(self._eval_z(rho * np.exp(1j * thetas)), dtype=complex)

    def coefficient_view(self, K: int | None = None) -> CoefficientSequence:
        raise MissingCoefficientView(
            f"{type(self).__name__} has no Taylor coefficient view")


class Series(InnerFunction):
    """Truncated power series c_0 + sum c_k z^k, summed by Horner's rule."""

    def __init__(self, seq: CoefficientSequence, singular_angles: Sequence[float] = ()):
        self.seq = seq
        self.singular_angles = tuple(normalize_angle(a) for a in singular_angles)
        # polyval expects [c0, c1, ..., cK] and evaluates by Horner
        self._poly = np.concatenate([[seq.c0], seq.coeffs])

    def _eval_z(self, z):
        return np.polynomial.polynomial.polyval(z, self._poly)

    def coefficient_view(self, K: int | None = None) -> CoefficientSequence:
        if K is None or K == self.seq.K:
            return self.seq
        return self.seq.truncated(K)

    def __repr__(self):
        return f"Series(K={self.seq.K}, c0={self.seq.c0:.6g})"


class LinearCombination(InnerFunction):
    """Lazy weighted sum of disk functions; evaluation distributes."""

    def __init__(self, terms):
        flat = []
        angles = []
        for weight, fn in terms:
            w = complex(weight)
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                raise ValueError("weights must be finite")
            if not isinstance(fn, InnerFunction):
                raise TypeError(f"not a disk function: {fn!r}")
            flat.append((w, fn))
            angles.extend(fn.singular_angles)
        self.terms = tuple(flat)
        self.singular_angles = tuple(sorted(set(angles)))

    def _eval_z(self, z):
        total = 0
        for weight, fn in self.terms:
            total = total + weight * fn._eval_z(z)
        return total

    def coefficient_view(self, K: int | None = None) -> CoefficientSequence:
        if not self.terms:
            return CoefficientSequence(np.zeros(0 if K is None else K, dtype=complex))
        views = [fn.coefficient_view(K) for _, fn in self.terms]
        kmin = min(v.K for v in views)
        if K is not None and kmin < K:
            raise ValueError(f"only {kmin} coefficients available, {K} requested")
        coeffs = sum(w * v.coeffs[:kmin] for (w, _), v in zip(self.terms, views))
        c0 = sum(w * v.c0 for (w, _), v in zip(self.terms, views))
        return CoefficientSequence(coeffs, c0)

    def __repr__(self):
        return f"LinearCombination({len(self.terms)} terms)"


def make_series(seq: CoefficientSequence,
                singular_angles: Sequence[float] = ()) -> Series:
    """Wrap a coefficient sequence as an evaluatable disk function."""
    return Series(seq, singular_angles)


def evaluate(w: InnerFunction, point) -> complex:
    """Value of w at a point strictly inside the disk."""
    return w.eval(point)


def combine(terms) -> LinearCombination:
    """Real linear combination [(weight, w), ...] of disk functions."""
    checked = []
    for weight, fn in terms:
        wgt = float(weight)
        if not math.isfinite(wgt):
            raise ValueError("weights must be finite reals")
        checked.append((wgt, fn))
    return LinearCombination(checked)


def scale(w: InnerFunction, factor: complex) -> LinearCombination:
    """Complex multiple of a disk function.

    Complex factors leave the vector space of circle representatives over
    the reals, but -i w in particular swaps the roles of Re[w] and Im[w]
    and is needed to move between a function and its conjugate partner.
    """
    return LinearCombination([(complex(factor), w)])


def rotate(w: InnerFunction, theta1) -> InnerFunction:
    """Precompose with z -> z/z1, z1 = exp(i theta1).

    On the circle this shifts the represented function by theta1; on
    coefficients it multiplies c_k by exp(-i k theta1).
    """
    t1 = as_angle(theta1)
    if isinstance(w, Series):
        k = np.arange(1, w.seq.K + 1)
        seq = CoefficientSequence(w.seq.coeffs * np.exp(-1j * k * t1), w.seq.c0)
        return Series(seq, [a + t1 for a in w.singular_angles])
    if isinstance(w, LinearCombination):
        return LinearCombination([(wt, rotate(fn, t1)) for wt, fn in w.terms])
    rotated = getattr(w, "rotated", None)
    if rotated is not None:
        return rotated(t1)
    raise TypeError(f"cannot rotate {type(w).__name__}")


def parity_split(w: InnerFunction, K: int | None = None):
    """Split into even and odd carriers, w = w1 + w2.

    w1 keeps Re(c_k) and is real on the real diameter; w2 keeps i Im(c_k)
    and is purely imaginary there.  Requires a coefficient view.
    """
    seq = w.coefficient_view(K)
    angles = set(w.singular_angles) | {normalize_angle(-a) for a in w.singular_angles}
    angles = tuple(sorted(angles))
    w1 = Series(CoefficientSequence(seq.coeffs.real + 0j, seq.c0.real), angles)
    w2 = Series(CoefficientSequence(1j * seq.coeffs.imag, 1j * seq.c0.imag), angles)
    return w1, w2


# ---------------------------------------------------------------------------
# radial limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadiusSchedule:
    """Radii rho_j = 1 - 2^-j for j = j_min..j_max, approaching the boundary.

    Halving the distance h = 1 - rho at every step matches Richardson
    extrapolation with ratio 2.
    """

    j_min: int = 4
    j_max: int = 24

    def __post_init__(self):
        if not (0 < self.j_min <= self.j_max):
            raise ValueError("need 0 < j_min <= j_max")

    def radii(self) -> np.ndarray:
        j = np.arange(self.j_min, self.j_max + 1)
        return 1.0 - 2.0 ** (-j.astype(float))

    def clipped(self, rho_max: float) -> np.ndarray:
        """The schedule restricted to rho <= rho_max (a prefix of radii())."""
        r = self.radii()
        return r[r <= rho_max]


class BoundaryValue(NamedTuple):
    value: float
    error: float


def richardson_limit(values) -> tuple[float, float, list[float]]:
    """Limit of a sequence sampled at step sizes halving each time.

    Returns (limit, error estimate, diagonal increments).  The error
    estimate is the magnitude of the last diagonal increment.
    """
    row = [float(v) for v in values]
    if len(row) == 0:
        raise ValueError("empty value sequence")
    if len(row) == 1:
        return row[0], math.inf, []
    increments = []
    level = 1
    while len(row) > 1:
        factor = 2.0 ** level
        nxt = [(factor * row[i + 1] - row[i]) / (factor - 1.0)
               for i in range(len(row) - 1)]
        increments.append(abs(nxt[-1] - row[-1]))
        row = nxt
        level += 1
    return row[0], increments[-1], increments


def _check_exclusion(w: InnerFunction, theta: float):
    for a in w.singular_angles:
        if abs(math.remainder(theta - a, TWO_PI)) < EXCLUSION_WINDOW:
            raise DomainError(
                f"theta={theta:.6g} lies within the exclusion window of the "
                f"singular angle {a:.6g}")


def _radial_limit(samples: np.ndarray, what: str) -> BoundaryValue:
    value, err, increments = richardson_limit(samples)
    if not math.isfinite(value):
        raise ConvergenceError(f"{what}: extrapolation produced a non-finite "
                               f"value", increments)
    scale0 = max(1.0, abs(value))
    if len(increments) >= 2:
        first = next((x for x in increments if x > 0), 0.0)
        if err > first and err > 1e-10 * scale0:
            raise ConvergenceError(
                f"{what}: extrapolation increments failed to decrease "
                f"(first {first:.3e}, last {err:.3e})", increments)
    return BoundaryValue(value, err)


def recover_real(w: InnerFunction, theta, schedule: RadiusSchedule | None = None
                 ) -> BoundaryValue:
    """Boundary value of Re[w] at the angle theta, by radial extrapolation.

    Samples Re[w] along the schedule radii and Richardson-extrapolates in
    h = 1 - rho.  Returns the limit together with the last extrapolation
    increment as an error estimate.  Angles inside the exclusion window of
    a declared singular angle raise DomainError; a diverging extrapolation
    raises ConvergenceError instead.
    """
    t = as_angle(theta)
    _check_exclusion(w, t)
    sched = schedule or RadiusSchedule()
    z = sched.radii() * complex(math.cos(t), math.sin(t))
    return _radial_limit(np.real(w._eval_z(z)), "recover_real")


def fourier_conjugate(w: InnerFunction, theta, schedule: RadiusSchedule | None = None
                      ) -> BoundaryValue:
    """Boundary value of Im[w]: the conjugate partner of recover_real."""
    t = as_angle(theta)
    _check_exclusion(w, t)
    sched = schedule or RadiusSchedule()
    z = sched.radii() * complex(math.cos(t), math.sin(t))
    return _radial_limit(np.imag(w._eval_z(z)), "fourier_conjugate")


# ---------------------------------------------------------------------------
# coefficient growth
# ---------------------------------------------------------------------------

def growth_class(seq: CoefficientSequence):
    """Smallest power p >= 1 with |c_k|/k^p -> 0, fitted from the tail.

    Least-squares slope s of log|c_k| against log k over the tail half
    gives p = max(1, floor(s) + 1).  Returns the NotAdmissible sentinel
    when the tail outruns its own power-law fit by a widening margin,
    which is a documented heuristic rather than a proof.  All-zero
    sequences return 1 by convention.
    """
    if seq.K < 16:
        raise ValueError("growth_class needs at least 16 coefficients")
    mags = np.abs(seq.coeffs)
    k = np.arange(1, seq.K + 1)
    tail = slice(seq.K // 2, seq.K)
    m, kk = mags[tail], k[tail]
    keep = m > 0
    if not np.any(keep):
        return 1
    logk = np.log(kk[keep])
    logm = np.log(m[keep])
    if len(logk) < 2 or logk[-1] == logk[0]:
        return 1
    slope, intercept = np.polyfit(logk, logm, 1)
    # residual trend: super-power-law growth bends upward along the tail
    resid = logm - (slope * logk + intercept)
    third = max(1, len(resid) // 3)
    drift = float(np.mean(resid[-third:]) - np.mean(resid[:third]))
    if drift > math.log(4.0):
        return NotAdmissible
    # nudge protects exact integer slopes from rounding just below
    return max(1, math.floor(slope + 1e-6) + 1)
