"""
This module contains arithmetic in the finite field F_q, q = p^r.

Elements are represented by their integer encoding sum(coeffs[i] * p^i),
where coeffs is the little-endian coefficient vector of the residue
polynomial modulo the field's modulus. Every operation accepts Python ints or
numpy integer arrays and acts elementwise, so matrices over F_q are plain
`int64` arrays.
"""

import functools
import itertools
import logging
import math

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (gf_irreducible_p, gf_mul, gf_pow_mod,
                                     gf_rem, gf_strip)

from . import constants, exceptions

logger = logging.getLogger(__name__)


def _asarray(x):
    return np.asarray(x, dtype=np.int64)


def smallest_irreducible(p, r):
    """
    Returns the lexicographically smallest monic irreducible polynomial of
    degree `r` over F_p, big-endian, leading 1 included.
    """
    for tail in itertools.product(range(p), repeat=r):
        poly = [1] + list(tail)
        if gf_irreducible_p(poly, p, ZZ):
            return poly
    raise exceptions.FieldError(p=p, r=r,
                                reason='no irreducible polynomial found')


class GaloisField(object):
    """
    The field F_{p^r} with a deterministically chosen modulus.

    Multiplication goes through exp/log tables over a primitive element;
    addition acts on base-p digits. Instances are immutable and shared
    through `get_field`.
    """

    def __init__(self, p, r=1):
        if not isinstance(p, int) or not isprime(p):
            raise exceptions.FieldError(p=p, r=r, reason='p must be prime')
        if not isinstance(r, int) or r < 1:
            raise exceptions.FieldError(
                p=p, r=r, reason='the degree must be a positive integer')
        if p ** r > constants.FIELD_ORDER_CAP:
            raise exceptions.CapExceeded(action='field construction',
                                         size=p ** r,
                                         cap=constants.FIELD_ORDER_CAP)
        self.p = p
        self.r = r
        self.q = p ** r
        self._modulus = smallest_irreducible(p, r)
        self._powers = p ** np.arange(r, dtype=np.int64)
        self.primitive = self._find_primitive()
        self._exp, self._log = self._build_log_tables()
        self._trace = self._build_trace_table()
        self._roots = np.exp(2j * np.pi * np.arange(p) / p)
        logger.debug('Built F_%d with modulus %s and primitive element %d',
                     self.q, self.modulus, self.primitive)

    def __repr__(self):
        return 'GaloisField(p={}, r={})'.format(self.p, self.r)

    def __eq__(self, other):
        return (isinstance(other, GaloisField) and
                (self.p, self.r) == (other.p, other.r))

    def __hash__(self):
        return hash((self.p, self.r))

    @property
    def modulus(self):
        """
        The modulus as a little-endian coefficient tuple of length r + 1.
        """
        return tuple(reversed(self._modulus))

    # Conversions between encodings and polynomials

    def coeffs(self, x):
        """
        Returns the little-endian coefficient list of element `x`.
        """
        x = int(x)
        return [(x // self.p ** i) % self.p for i in range(self.r)]

    def element(self, coeffs):
        """
        Returns the encoding of the element with the given coefficients.
        """
        coeffs = list(coeffs)
        if len(coeffs) > self.r or any(not 0 <= c < self.p for c in coeffs):
            raise exceptions.FieldError(
                p=self.p, r=self.r,
                reason='{} is not a canonical residue'.format(coeffs))
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    def _to_poly(self, x):
        return gf_strip(list(reversed(self.coeffs(x))))

    def _from_poly(self, poly):
        coeffs = [int(c) for c in reversed(poly)]
        return self.element(coeffs + [0] * (self.r - len(coeffs)))

    def _poly_mul(self, x, y):
        product = gf_mul(self._to_poly(x), self._to_poly(y), self.p, ZZ)
        return self._from_poly(gf_rem(product, self._modulus, self.p, ZZ))

    def _poly_pow(self, x, e):
        power = gf_pow_mod(self._to_poly(x), e, self._modulus, self.p, ZZ)
        return self._from_poly(power)

    # Table construction

    def _find_primitive(self):
        order = self.q - 1
        factors = list(factorint(order)) if order > 1 else []
        for candidate in range(1, self.q):
            if all(self._poly_pow(candidate, order // f) != 1
                   for f in factors):
                return candidate
        raise exceptions.FieldError(p=self.p, r=self.r,
                                    reason='no primitive element found')

    def _build_log_tables(self):
        exp = np.ones(self.q - 1, dtype=np.int64)
        for k in range(1, self.q - 1):
            exp[k] = self._poly_mul(int(exp[k - 1]), self.primitive)
        log = np.zeros(self.q, dtype=np.int64)
        log[exp] = np.arange(self.q - 1, dtype=np.int64)
        return exp, log

    def _build_trace_table(self):
        elements = self.elements()
        total = np.zeros(self.q, dtype=np.int64)
        for i in range(self.r):
            total = self.add(total, self.pow(elements, self.p ** i))
        if np.any(total >= self.p):
            raise exceptions.FieldError(p=self.p, r=self.r,
                                        reason='trace left the prime field')
        return total

    # Digits

    def _digits(self, x):
        return (x[..., None] // self._powers) % self.p

    def _from_digits(self, digits):
        return (digits * self._powers).sum(axis=-1)

    # Field operations

    def elements(self):
        """
        Returns all q elements in encoding order.
        """
        return np.arange(self.q, dtype=np.int64)

    def nonzero_elements(self):
        return np.arange(1, self.q, dtype=np.int64)

    def random(self, rng, size=None):
        """
        Draws uniform elements with the numpy Generator `rng`.
        """
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    def add(self, x, y):
        x, y = _asarray(x), _asarray(y)
        if self.r == 1:
            return (x + y) % self.p
        return self._from_digits((self._digits(x) + self._digits(y)) % self.p)

    def neg(self, x):
        x = _asarray(x)
        if self.r == 1:
            return (-x) % self.p
        return self._from_digits((-self._digits(x)) % self.p)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        x, y = np.broadcast_arrays(_asarray(x), _asarray(y))
        product = self._exp[(self._log[x] + self._log[y]) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, product)

    def inv(self, x):
        x = _asarray(x)
        if np.any(x == 0):
            raise exceptions.ZeroDivisionInField(q=self.q)
        return self._exp[(-self._log[x]) % (self.q - 1)]

    def pow(self, x, e):
        x = _asarray(x)
        e = int(e)
        if e < 0:
            return self.pow(self.inv(x), -e)
        power = self._exp[(self._log[x] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(x == 0, 0 if e > 0 else 1, power)

    def sum(self, x, axis=None):
        """
        Field sum of the entries of `x` along `axis` (all entries if None).
        """
        x = _asarray(x)
        if axis is None:
            x = x.reshape(-1)
            axis = 0
        if self.r == 1:
            return x.sum(axis=axis) % self.p
        axis = axis % x.ndim
        return self._from_digits(self._digits(x).sum(axis=axis) % self.p)

    # Trace and characters

    def trace(self, x):
        """
        Absolute trace to F_p, sum of x^(p^i) for i < r, as a residue mod p.
        """
        return self._trace[_asarray(x)]

    def character(self, x, y):
        """
        The additive character value omega^Tr(xy), omega = exp(2 pi i / p).
        """
        return self._roots[self.trace(self.mul(x, y))]

    def root_of_unity(self, k):
        """
        Returns omega^k for residues k mod p.
        """
        return self._roots[_asarray(k) % self.p]

    @functools.lru_cache(maxsize=None)
    def trace_product_table(self):
        """
        The q x q table Tr(xy), for vectorised character sums.
        """
        if self.q * self.q > constants.ENUMERATION_CAP:
            raise exceptions.CapExceeded(action='trace product table',
                                         size=self.q * self.q,
                                         cap=constants.ENUMERATION_CAP)
        elements = self.elements()
        return self.trace(self.mul(elements[:, None], elements[None, :]))

    # Roots

    def nth_roots(self, x, n):
        """
        Returns every z in F_q^* with z^n = x, in encoding order.
        """
        if int(x) == 0:
            raise exceptions.NotAnNthPower(
                detail='Zero has no n-th root in the multiplicative group.')
        candidates = self.nonzero_elements()
        return candidates[self.pow(candidates, n) == int(x)]

    def nth_root(self, x, n):
        """
        Returns the smallest z with z^n = x, or None when x is not an n-th
        power. A linear scan of F_q^* stands in for polynomial factoring.
        """
        roots = self.nth_roots(x, n)
        if len(roots) == 0:
            return None
        return int(roots[0])

    def is_nth_power(self, x, n):
        if int(x) == 0:
            return False
        exponent = (self.q - 1) // math.gcd(n, self.q - 1)
        return int(self.pow(x, exponent)) == 1

    def nth_powers(self, n):
        """
        The subgroup (F_q^*)^n as a frozenset of encodings.
        """
        return frozenset(int(v) for v in self.pow(self.nonzero_elements(), n))


@functools.lru_cache(maxsize=None)
def get_field(p, r=1):
    """
    Returns the shared field context for F_{p^r}.
    """
    return GaloisField(p, r)


def field_from_order(q):
    """
    Returns the field with `q` elements; `q` must be a prime power.
    """
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise exceptions.FieldError(p=q, r=1,
                                    reason='{} is not a prime power'.format(q))
    (p, r), = factors.items()
    return get_field(int(p), int(r))
