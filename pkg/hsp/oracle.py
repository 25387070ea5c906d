"""
This module contains the hiding function f as a query-counted black box.

The concrete f labels a matrix A by the canonical form of X A under left
multiplication by invertible lower triangular matrices, which is constant
exactly on the right cosets of X^{-1} L X. Views built on top of an oracle
(conjugation by Z, restriction to diag(A', 1), the determinant-root
extension of an SL oracle) forward their queries to the same counter.
"""

import collections
import logging
import threading

import numpy as np

from . import borel, constants, exceptions, linalg

logger = logging.getLogger(__name__)


OracleLabel = collections.namedtuple('OracleLabel', ['tag', 'payload'])


def canonical_form(field, M):
    """
    Canonical representative of the orbit {l M : l invertible lower
    triangular}. Row by row, the pivot columns of earlier rows are cleared
    using those rows only, then the row is scaled to a leading 1.
    """
    C = np.array(M, dtype=np.int64)
    pivots = []
    for i in range(C.shape[0]):
        row = C[i]
        for j, col in pivots:
            if row[col] != 0:
                row = field.sub(row, field.mul(row[col], C[j]))
        nonzero = np.flatnonzero(row)
        if len(nonzero):
            col = int(nonzero[0])
            row = field.mul(row, field.inv(row[col]))
            pivots.append((i, col))
        C[i] = row
    return C


class OracleView(object):
    """
    Something that answers queries on n x n matrices over `field` and hides
    a Borel subgroup intersected with det^{-1}(determinant_group).
    """
    field = None
    n = None
    base = None
    # None stands for all of F_q^*.
    determinant_group = None

    def query(self, A):
        raise NotImplementedError

    @property
    def query_count(self):
        return self.base.query_count

    def conjugated(self, Z):
        return ConjugatedOracle(self, Z)

    def restricted(self):
        return RestrictedOracle(self)

    def _simulator_conjugator(self):
        """
        W with hidden subgroup W^{-1} L_D W. Only the measurement simulator
        may call this; the solver works from labels alone.
        """
        raise NotImplementedError

    def _simulator_flag(self):
        return borel.flag_from_conjugator(self.field,
                                          self._simulator_conjugator())

    def _check_shape(self, A, n=None):
        A = np.asarray(A, dtype=np.int64)
        n = self.n if n is None else n
        if A.shape != (n, n):
            raise exceptions.DimensionMismatch(left=A.shape, right=(n, n),
                                               action='query')
        return A


class HidingOracle(OracleView):
    """
    The black box f with hidden conjugator X. In GL mode f is defined on all
    n x n matrices (singular ones get a separate tag); in SL mode it is only
    defined on SL_n and hides X^{-1} L_0 X.
    """

    def __init__(self, field, conjugator, mode=constants.MODE_GL):
        if mode not in constants.MODES:
            raise exceptions.HspError(
                detail='Unknown oracle mode "{}".'.format(mode))
        self.field = field
        self.n = conjugator.shape[0]
        self.mode = mode
        self.base = self
        self.determinant_group = (frozenset([1]) if mode == constants.MODE_SL
                                  else None)
        self._conjugator = np.array(conjugator, dtype=np.int64)
        self._conjugator.setflags(write=False)
        self._query_count = 0
        self._lock = threading.Lock()

    @property
    def query_count(self):
        return self._query_count

    def _record_query(self):
        with self._lock:
            self._query_count += 1

    def _label(self, A, determinant):
        tag = (constants.LABEL_SINGULAR if determinant == 0
               else constants.LABEL_COSET)
        M = linalg.mat_mul(self.field, self._conjugator, A)
        return OracleLabel(tag, tuple(linalg.encode(canonical_form(self.field,
                                                                   M))))

    def query(self, A):
        A = self._check_shape(A)
        self._record_query()
        determinant = linalg.det(self.field, A)
        if self.mode == constants.MODE_SL and determinant != 1:
            raise exceptions.OutsideDomain(
                reason='determinant {} is not 1'.format(determinant))
        return self._label(A, determinant)

    def _simulator_conjugator(self):
        return self._conjugator


class ConjugatedOracle(OracleView):
    """
    f'(A) = f(Z A Z^{-1}), hiding Z^{-1} H Z. Conjugating a conjugated view
    composes: (f^{Z1})^{Z2} = f^{Z1 Z2}.
    """

    def __init__(self, parent, Z):
        Z = np.asarray(Z, dtype=np.int64)
        if isinstance(parent, ConjugatedOracle):
            Z = linalg.mat_mul(parent.field, parent.Z, Z)
            parent = parent.parent
        self.parent = parent
        self.field = parent.field
        self.n = parent.n
        self.base = parent.base
        self.determinant_group = parent.determinant_group
        self.Z = parent._check_shape(Z)
        self.Z_inv = linalg.inverse(self.field, self.Z)

    def query(self, A):
        A = self._check_shape(A)
        return self.parent.query(linalg.mat_mul_chain(self.field, self.Z, A,
                                                      self.Z_inv))

    def _simulator_conjugator(self):
        return linalg.mat_mul(self.field, self.parent._simulator_conjugator(),
                              self.Z)


class RestrictedOracle(OracleView):
    """
    The oracle on GL_{n-1} given by A' -> parent(diag(A', 1)). Meaningful once
    the parent's hidden flag ends in span(e_n); it then hides the Borel
    subgroup of the intersected flag.
    """

    def __init__(self, parent):
        if parent.n < 2:
            raise exceptions.DimensionMismatch(left=parent.n, right=2,
                                               action='restrict')
        self.parent = parent
        self.field = parent.field
        self.n = parent.n - 1
        self.base = parent.base
        self.determinant_group = parent.determinant_group

    def query(self, A):
        A = self._check_shape(A)
        return self.parent.query(linalg.block_diag_one(self.field, A))

    def _simulator_conjugator(self):
        flag = self.parent._simulator_flag()
        last = linalg.Subspace.coordinate(self.field, self.parent.n,
                                          [self.parent.n - 1])
        if flag.last != last:
            raise exceptions.OutsideDomain(
                reason='the parent flag does not end in span(e_n)')
        return borel.conjugator_from_flag(borel.restrict_flag(flag))


class SLExtendedOracle(OracleView):
    """
    Extends an SL-mode oracle to G = {A : det A in (F_q^*)^n} by
    f(A) = f(z^{-1} A) with z^n = det A. The label does not depend on the
    root chosen because z_1^{-1} z I lies in the hidden subgroup.
    """

    def __init__(self, oracle):
        if getattr(oracle, 'mode', None) != constants.MODE_SL:
            raise exceptions.OutsideDomain(
                reason='the determinant extension needs an SL-mode oracle')
        self.oracle = oracle
        self.field = oracle.field
        self.n = oracle.n
        self.base = oracle.base
        self.determinant_group = self.field.nth_powers(self.n)

    def query(self, A, root=None):
        """
        `root` forces a particular n-th root of det A; by default the
        smallest one is used.
        """
        A = self._check_shape(A)
        field = self.field
        determinant = linalg.det(field, A)
        if determinant == 0:
            self.base._record_query()
            return self.base._label(A, 0)
        if determinant not in self.determinant_group:
            self.base._record_query()
            raise exceptions.NotAnNthPower(value=determinant, n=self.n,
                                           q=field.q)
        z = field.nth_root(determinant, self.n) if root is None else root
        if int(field.pow(z, self.n)) != determinant:
            raise exceptions.NotAnNthPower(
                detail='{} is not an n-th root of {}.'.format(z, determinant))
        return self.oracle.query(field.mul(field.inv(z), A))

    def _simulator_conjugator(self):
        return self.oracle._simulator_conjugator()


def sl_oracle(oracle):
    """
    Returns the determinant-root extension of an SL-mode oracle.
    """
    return SLExtendedOracle(oracle)


def make_instance(field, n, rng, mode=constants.MODE_GL):
    """
    Draws X uniformly from GL_n(F_q) and returns the oracle hiding
    X^{-1} L X (or its determinant-one part) with the matching descriptor.
    """
    X = linalg.random_invertible(field, n, rng)
    flag = borel.flag_from_conjugator(field, X)
    logger.debug('Generated %s instance over F_%d of degree %d', mode,
                 field.q, n)
    return HidingOracle(field, X, mode), borel.BorelDescriptor(flag, X)


def query(oracle, A):
    return oracle.query(A)


def conjugated_oracle(oracle, Z):
    """
    The view A -> f(Z A Z^{-1}), hiding Z^{-1} H Z.
    """
    return oracle.conjugated(Z)


def restricted_oracle(oracle):
    """
    The view A' -> f(diag(A', 1)) over GL_{n-1}.
    """
    return oracle.restricted()
