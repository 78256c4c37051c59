"""Numerically careful special-function primitives for Fock-ladder sums.

Factorial-bearing magnitudes are kept in log scale until the last moment;
alternating sums are accumulated with error-free (fsum) summation in a fixed
serial order so results are deterministic and cancellation is measurable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import PreconditionError

# A result whose magnitude falls below this fraction of the largest term in an
# alternating sum has lost ten decimal digits to cancellation and is flagged.
CANCELLATION_GUARD = 1e-10


@dataclass(frozen=True)
class LogMagnitude:
    """A signed real carried as (sign, log|x|); sign == 0 iff log_abs == -inf."""

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if (self.sign == 0) != (self.log_abs == -math.inf):
            raise ValueError("sign == 0 must coincide with log_abs == -inf")

    @classmethod
    def from_value(cls, x: float) -> "LogMagnitude":
        if x == 0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0, -math.inf)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        s = self.sign * other.sign
        if s == 0:
            return LogMagnitude.zero()
        return LogMagnitude(s, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.sign == 0:
            raise ZeroDivisionError("division by zero LogMagnitude")
        if self.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(self.sign * other.sign, self.log_abs - other.log_abs)

    def value(self) -> float:
        """Convert back to a float; overflows to +-inf rather than raising."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf


def log_factorial(n: int) -> float:
    """ln(n!) via lgamma, exact to the precision of the libm implementation."""
    if n < 0:
        raise PreconditionError("log_factorial requires n >= 0")
    return math.lgamma(n + 1)


def bracket_factorial_log(n: int, q: int) -> float:
    """ln of the shifted product (1+|q|)(2+|q|)...(n+|q|) = (n+|q|)!/|q|!.

    The empty product (n == 0) is 1.
    """
    if n < 0:
        raise PreconditionError("bracket_factorial_log requires n >= 0")
    a = abs(q)
    return log_factorial(n + a) - log_factorial(a)



@dataclass(frozen=True)
class HermiteValue:
    """Result of a two-variable Hermite evaluation.

    ``value`` is the polynomial value (it overflows to inf beyond roughly
    order 165; ``log_abs``/``phase``/``sign`` stay finite and are the scale-free
    representation).  ``cancellation_limited`` is set when the alternating sum
    retained less than CANCELLATION_GUARD of its largest term, i.e. when more
    than ten decimal digits were lost; such values carry few trustworthy digits.
    """

    value: complex
    sign: int
    log_abs: float
    phase: float
    cancellation_limited: bool
    largest_term_log: float


def hermite_two_var(m: int, n: int, z: complex) -> HermiteValue:
    """Two-variable Hermite polynomial H_{m,n}(z, z*).

    Evaluates the defining alternating sum

        sum_{k=0}^{min(m,n)} (-1)^k m! n! z^(m-k) conj(z)^(n-k)
                             / (k! (m-k)! (n-k)!)

    with every term carried as a log magnitude and a final fsum.  Since the
    term phases are all (m-n)*arg(z), the sum itself is real and the common
    phase factors out exactly.
    """
    if m < 0 or n < 0:
        raise PreconditionError("hermite_two_var requires m, n >= 0")
    zc = complex(z)
    if zc == 0:
        # Only the k == m == n term can survive.
        if m == n:
            sign = -1 if n % 2 else 1
            la = log_factorial(n)
            try:
                value = complex(sign * math.exp(la))
            except OverflowError:
                value = complex(sign * math.inf)
            return HermiteValue(value, sign, la, 0.0, False, la)
        return HermiteValue(0j, 0, -math.inf, 0.0, False, -math.inf)

    log_z = math.log(abs(zc))
    phase = (m - n) * cmath.phase(zc)
    lm, ln = log_factorial(m), log_factorial(n)

    parts = []
    largest = -math.inf
    for k in range(min(m, n) + 1):
        mag = LogMagnitude(
            -1 if k % 2 else 1,
            lm + ln + (m + n - 2 * k) * log_z
            - log_factorial(k) - log_factorial(m - k) - log_factorial(n - k),
        )
        parts.append(mag)
        largest = max(largest, mag.log_abs)

    # Scale by the largest term before leaving log space, then fsum serially.
    total = math.fsum(p.sign * math.exp(p.log_abs - largest) for p in parts)
    limited = abs(total) < CANCELLATION_GUARD
    if total == 0.0:
        return HermiteValue(0j, 0, -math.inf, phase, limited, largest)
    sign = 1 if total > 0 else -1
    log_abs = math.log(abs(total)) + largest
    try:
        value = sign * math.exp(log_abs) * cmath.exp(1j * phase)
    except OverflowError:
        value = complex(sign * math.inf)
    return HermiteValue(value, sign, log_abs, phase, limited, largest)
