"""Conjugacy-class counting via reduced indefinite binary quadratic forms.

A hyperbolic element of the modular group with trace t >= 3 corresponds to an
integral binary quadratic form of discriminant t^2 - 4, and conjugacy classes
correspond to reduction cycles of such forms, imprimitive forms included.
`class_number` therefore counts reduction cycles; `h_star_range` is the batch
version used to build trace tables.

All comparisons against sqrt(D) are done by integer squaring, never in
floating point, so results are exact for any discriminant that fits in
memory (the batch kernel is limited to int64 range, far beyond any table
this package builds).
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from math import isqrt
from typing import NamedTuple

from .errors import InvalidDiscriminantError, NonReducedFormError

__all__ = [
    "Discriminant",
    "QuadraticForm",
    "FormClassTally",
    "list_reduced_forms",
    "reduction_step",
    "reduction_cycles",
    "class_number",
    "tally",
    "h_star_range",
]


@dataclass(frozen=True)
class Discriminant:
    """Positive non-square discriminant, congruent to 0 or 1 mod 4."""

    value: int

    def __post_init__(self) -> None:
        try:
            d = int(operator.index(self.value))
        except TypeError:
            raise InvalidDiscriminantError(
                f"discriminant must be an integer, got {self.value!r}") from None
        object.__setattr__(self, "value", d)
        if d <= 0:
            raise InvalidDiscriminantError(f"discriminant must be positive, got {d}")
        if d % 4 not in (0, 1):
            raise InvalidDiscriminantError(f"{d} = {d % 4} (mod 4); need 0 or 1")
        r = isqrt(d)
        if r * r == d:
            raise InvalidDiscriminantError(f"{d} = {r}^2 is a perfect square")

    @classmethod
    def from_trace(cls, t: int) -> "Discriminant":
        if t < 3:
            raise InvalidDiscriminantError(f"hyperbolic trace must be >= 3, got {t}")
        return cls(t * t - 4)

    def __int__(self) -> int:
        return self.value


class QuadraticForm(NamedTuple):
    """Integral binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


@dataclass(frozen=True)
class FormClassTally:
    D: Discriminant
    reduced_count: int
    class_count: int


def _as_disc(D: "Discriminant | int") -> int:
    if isinstance(D, Discriminant):
        return D.value
    return Discriminant(D).value


def is_reduced(form: QuadraticForm, D: "Discriminant | int") -> bool:
    """Reduction predicate |sqrt(D) - 2|a|| < b < sqrt(D), checked exactly."""
    d = _as_disc(D)
    a, b, c = form
    if a == 0 or c == 0 or form.discriminant() != d:
        return False
    if b <= 0 or b * b >= d:
        return False
    v = d + 4 * a * a - b * b  # == (sqrt(D) - 2|a|)(sqrt(D) + 2|a|) + (D - b^2) sign carrier
    return v <= 0 or v * v < 16 * a * a * d


_PRIMES: list[int] = [2, 3, 5, 7]
_PRIME_LIMIT = 10


def _primes_upto(limit: int) -> list[int]:
    """Cached ascending primes; regrown geometrically when the limit rises."""
    global _PRIMES, _PRIME_LIMIT
    if limit > _PRIME_LIMIT:
        new_limit = max(limit, 2 * _PRIME_LIMIT)
        sieve = bytearray([1]) * (new_limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, isqrt(new_limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = b"\x00" * len(range(p * p, new_limit + 1, p))
        _PRIMES = [i for i, f in enumerate(sieve) if f]
        _PRIME_LIMIT = new_limit
    return _PRIMES


def _factorize(m: int) -> list[tuple[int, int]]:
    out = []
    for p in _primes_upto(isqrt(m) + 1):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return out


def _divisor_window(b: int, D: int, w: int) -> tuple[int, int]:
    """Integer bounds [lo, hi] for divisors inside ((sqrt(D)-b)/2, (sqrt(D)+b)/2)."""
    lo = max(1, (w - b) // 2)
    while (2 * lo + b) ** 2 <= D:
        lo += 1
    while lo > 1 and (2 * (lo - 1) + b) ** 2 > D:
        lo -= 1
    hi = (w + b) // 2 + 1
    while hi > 0 and not (2 * hi <= b or (2 * hi - b) ** 2 < D):
        hi -= 1
    while 2 * (hi + 1) <= b or (2 * (hi + 1) - b) ** 2 < D:
        hi += 1
    return lo, hi


def _window_divisors(m: int, lo: int, hi: int) -> list[int]:
    if hi < lo:
        return []
    if hi - lo <= 900:
        return [d for d in range(lo, hi + 1) if m % d == 0]
    divs = [1]
    for p, e in _factorize(m):
        pk = 1
        more = []
        for _ in range(e):
            pk *= p
            if pk > hi:
                break
            more.extend(d * pk for d in divs if d * pk <= hi)
        divs.extend(more)
    return sorted(d for d in divs if d >= lo)


def list_reduced_forms(D: "Discriminant | int") -> frozenset[QuadraticForm]:
    """All reduced forms of discriminant D.

    Iterates b of the right parity with 0 < b < sqrt(D), then finds the
    divisors of m = (D - b^2)/4 inside the reduced window; each divisor d
    yields the pair (d, b, -m/d), (-d, b, m/d).
    """
    d = _as_disc(D)
    w = isqrt(d)
    forms = []
    for b in range(2 - (d & 1), w + 1, 2):
        m = (d - b * b) // 4
        lo, hi = _divisor_window(b, d, w)
        for a in _window_divisors(m, lo, hi):
            c = m // a
            forms.append(QuadraticForm(a, b, -c))
            forms.append(QuadraticForm(-a, b, c))
    return frozenset(forms)


def reduction_step(form: QuadraticForm, D: "Discriminant | int") -> QuadraticForm:
    """Right neighbor (c, b', c') of a reduced form; a bijection on reduced forms."""
    d = _as_disc(D)
    if not is_reduced(form, d):
        raise NonReducedFormError(f"{form} is not reduced for discriminant {d}")
    _, b, c = form
    m2 = 2 * abs(c)
    w = isqrt(d)
    bp = w - ((w - (-b) % m2) % m2)
    cp = (bp * bp - d) // (4 * c)
    return QuadraticForm(c, bp, cp)


def reduction_cycles(D: "Discriminant | int") -> list[tuple[QuadraticForm, ...]]:
    """Partition of the reduced forms of D into reduction cycles."""
    d = _as_disc(D)
    remaining = set(list_reduced_forms(d))
    cycles = []
    while remaining:
        start = min(remaining)
        cycle = [start]
        f = reduction_step(start, d)
        while f != start:
            cycle.append(f)
            f = reduction_step(f, d)
        remaining.difference_update(cycle)
        cycles.append(tuple(cycle))
    return cycles


def class_number(D: "Discriminant | int") -> int:
    """Number of reduction cycles h*(D), imprimitive forms counted.

    For D = t^2 - 4 this is the number of PSL(2,Z)-conjugacy classes of
    hyperbolic elements with trace t.
    """
    return len(reduction_cycles(D))


def tally(D: "Discriminant | int") -> FormClassTally:
    disc = D if isinstance(D, Discriminant) else Discriminant(D)
    cycles = reduction_cycles(disc)
    return FormClassTally(
        D=disc,
        reduced_count=sum(len(c) for c in cycles),
        class_count=len(cycles),
    )


# ---------------------------------------------------------------------------
# Batch kernel. Same enumeration as above, compiled, int64-only; used to
# build trace tables where per-discriminant Python overhead would dominate.
# Checked against the pure path in the test suite.
# ---------------------------------------------------------------------------


def h_star_range(t_lo: int, t_hi: int) -> "list[int]":
    """h*(t^2-4) for t in [t_lo, t_hi); compiled batch path."""
    import numpy as np

    from . import _bulk

    if t_lo < 3:
        raise InvalidDiscriminantError("traces start at 3")
    if t_hi <= t_lo:
        return []
    ts = np.arange(t_lo, t_hi, dtype=np.int64)
    max_m = (int(ts[-1]) ** 2 - 4) // 4
    primes = np.array(_primes_upto(isqrt(max_m) + 1), dtype=np.int64)
    return [int(v) for v in _bulk.h_star_many(ts, primes)]
