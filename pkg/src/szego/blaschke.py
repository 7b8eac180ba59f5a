"""Finite Blaschke products and the Schur root-location test.

A finite Blaschke product is stored as (angle, P) with P a monic
polynomial whose roots all lie in the open unit disc.  The function on
the circle is

    Psi(z) = exp(-i*angle) * P(z) / D(z),      D = conj_reflect(P, deg P),

which has modulus one for |z| = 1.  Membership of P in the Schur class is
decided by the coefficient recursion

    b_k = (a_k - a_d * conj(a_{d-k})) / (1 - |a_d|**2),

which maps degree-d Schur coefficient vectors onto degree-(d-1) ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import Poly, conj_reflect
from .errors import InputError, NumericalError

TWO_PI = 2.0 * math.pi


def normalize_angle(psi: float) -> float:
    """Reduce an angle to [0, 2*pi), mapping 2*pi to 0."""
    psi = math.fmod(float(psi), TWO_PI)
    if psi < 0.0:
        psi += TWO_PI
    if psi >= TWO_PI - 1e-15:
        psi = 0.0
    return psi


def is_schur(a) -> bool:
    """Decide whether z**d + a[0]*z**(d-1) + ... + a[d-1] has all roots in |z| < 1.

    a lists the non-leading coefficients from degree d-1 down to degree 0.
    Empty a (a constant polynomial) counts as Schur.
    """
    a = np.asarray(a, dtype=complex)
    while a.size:
        last = a[-1]
        if abs(last) >= 1.0:
            return False
        head = a[:-1]
        a = (head - last * np.conj(head[::-1])) / (1.0 - abs(last) ** 2)
    return True


def is_schur_poly(p: Poly) -> bool:
    """Schur test for a monic polynomial given low-degree-first."""
    if p.degree < 0:
        return False
    if p.degree == 0:
        return True
    # a_k is the coefficient of z**(d-k): drop the leading 1 and reverse.
    lead = p.coeffs[-1]
    monic = p.coeffs / lead
    return is_schur(monic[:-1][::-1])


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """Inner rational function exp(-i*angle) * P/D with P monic Schur."""

    angle: float
    p: Poly

    def __post_init__(self):
        psi = normalize_angle(self.angle)
        p = self.p
        if p.degree < 0:
            raise InputError("Blaschke numerator must be nonzero")
        lead = p.coeffs[-1]
        if abs(lead - 1.0) > 1e-8:
            raise InputError("Blaschke numerator must be monic")
        if abs(lead - 1.0) > 0:
            p = p * (1.0 / lead)
        if not is_schur_poly(p):
            raise InputError("Blaschke numerator is not a Schur polynomial")
        object.__setattr__(self, "angle", psi)
        object.__setattr__(self, "p", p)

    @property
    def degree(self) -> int:
        return self.p.degree

    @property
    def d(self) -> Poly:
        return conj_reflect(self.p, self.p.degree)

    @property
    def phase(self) -> complex:
        return complex(np.exp(-1j * self.angle))

    def __call__(self, z):
        return blaschke_eval(self, z)

    @staticmethod
    def constant(angle: float) -> "BlaschkeProduct":
        return BlaschkeProduct(angle, Poly.one())


def from_zeros(zeros, angle: float) -> BlaschkeProduct:
    """Expand prod (z - p_j) from zeros in the open disc."""
    zeros = np.asarray(list(zeros), dtype=complex)
    if zeros.size and np.max(np.abs(zeros)) >= 1.0:
        raise InputError("Blaschke zero with modulus >= 1")
    if zeros.size == 0:
        return BlaschkeProduct(angle, Poly.one())
    return BlaschkeProduct(angle, Poly(npoly.polyfromroots(zeros)))


def blaschke_eval(b: BlaschkeProduct, z):
    """Evaluate exp(-i*angle) * P(z)/D(z)."""
    denom = b.d(z)
    if np.min(np.abs(np.atleast_1d(denom))) < 1e-14:
        raise NumericalError("Blaschke evaluation at a pole (|z| > 1 region)")
    return b.phase * b.p(z) / denom


def blaschke_mul(a: BlaschkeProduct, b: BlaschkeProduct) -> BlaschkeProduct:
    """Product of two Blaschke products: degrees add, angles add mod 2*pi."""
    return BlaschkeProduct(a.angle + b.angle, a.p * b.p)
