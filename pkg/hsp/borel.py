"""
This module contains flags of F_q^n, Borel subgroups as their stabilizers,
stabilizer generators and small-group enumeration.

A Borel subgroup is represented by the flag it stabilizes. For the standard
flag V_k = span(e_{k+1}, ..., e_n) the stabilizer is the group of invertible
lower triangular matrices; X^{-1} V_k gives the flag of X^{-1} L X.
"""

import collections
import itertools

import numpy as np

from . import constants, exceptions, linalg
from .linalg import Subspace


class Flag(object):
    """
    A complete flag F_q^n > U_1 > ... > U_{n-1} > 0, dim U_k = n - k.
    """

    def __init__(self, field, n, subspaces):
        subspaces = tuple(subspaces)
        if len(subspaces) != max(n - 1, 0):
            raise exceptions.DimensionMismatch(left=len(subspaces), right=n,
                                               action='flag length')
        for k, U in enumerate(subspaces, start=1):
            if U.ambient_dim != n or U.dim != n - k:
                raise exceptions.DimensionMismatch(left=U.dim, right=n - k,
                                                   action='flag member')
        for larger, smaller in zip(subspaces, subspaces[1:]):
            if not smaller.issubspace(larger):
                raise exceptions.DimensionMismatch(
                    detail='Flag members must form a decreasing chain.')
        self.field = field
        self.n = n
        self.subspaces = subspaces

    def __eq__(self, other):
        return (isinstance(other, Flag) and self.n == other.n and
                self.subspaces == other.subspaces)

    def __hash__(self):
        return hash((self.n, self.subspaces))

    def __repr__(self):
        return 'Flag(n={}, {})'.format(
            self.n, [U.vectors() for U in self.subspaces])

    def __len__(self):
        return len(self.subspaces)

    @property
    def last(self):
        """
        The one-dimensional member U_{n-1}.
        """
        return self.subspaces[-1]

    def members(self):
        """
        Basis vectors of every member, for serialization.
        """
        return [U.vectors() for U in self.subspaces]


class BorelDescriptor(object):
    """
    The flag of a Borel subgroup, plus the conjugator it was generated from
    when the instance is synthetic.
    """

    def __init__(self, flag, conjugator=None):
        self.flag = flag
        self.conjugator = conjugator


def standard_flag(field, n):
    return Flag(field, n, [Subspace.coordinate(field, n, range(k, n))
                           for k in range(1, n)])


def flag_from_conjugator(field, X):
    """
    Returns the flag X^{-1} V_1 > ... > X^{-1} V_{n-1} stabilized by X^{-1} L X.
    """
    X_inv = linalg.inverse(field, X)
    n = X.shape[0]
    return Flag(field, n, [Subspace.span(field, X_inv[:, k:].T, n)
                           for k in range(1, n)])


def adapted_basis(flag):
    """
    Returns P whose last n - k columns span U_k for every k, so that
    flag_from_conjugator(P^{-1}) == flag.
    """
    field, n = flag.field, flag.n
    columns = []
    members = list(flag.subspaces[::-1]) + [Subspace.full(field, n)]
    current = Subspace.zero(field, n)
    for U in members:
        for v in U.basis:
            if not current.contains(v):
                columns.insert(0, v)
                current = current.sum(Subspace.span(field, v, n))
                break
    return np.stack(columns, axis=1)


def conjugator_from_flag(flag):
    return linalg.inverse(flag.field, adapted_basis(flag))


def stabilizes(field, A, flag):
    """
    True if A U_k is contained in U_k for every member of the flag.
    """
    A = np.asarray(A)
    if A.shape != (flag.n, flag.n):
        raise exceptions.DimensionMismatch(left=A.shape, right=flag.n,
                                           action='stabilizes')
    return all(U.image(A).issubspace(U) for U in flag.subspaces)


def _lower_triangular_generators(field, n, special):
    g = field.primitive
    generators = []
    if special:
        g_inv = int(field.inv(g))
        for i in range(n - 1):
            D = linalg.identity(field, n)
            D[i, i], D[i + 1, i + 1] = g, g_inv
            generators.append(D)
    else:
        for i in range(n):
            D = linalg.identity(field, n)
            D[i, i] = g
            generators.append(D)
    for i in range(n - 1):
        T = linalg.identity(field, n)
        T[i + 1, i] = g
        generators.append(T)
    return generators


def stabilizer_generators(flag, special=False):
    """
    Generators of the stabilizer of `flag`: torus generators and lower
    transvections I + g E_{i+1,i}, conjugated onto the flag. With `special`
    the torus generators have determinant one, generating the Borel subgroup
    of SL_n.
    """
    field = flag.field
    P = adapted_basis(flag)
    P_inv = linalg.inverse(field, P)
    return [linalg.mat_mul_chain(field, P, G, P_inv)
            for G in _lower_triangular_generators(field, flag.n, special)]


def generate_group(field, generators, cap=constants.ENUMERATION_CAP):
    """
    Closes `generators` under multiplication; returns the elements as a dict
    keyed by their byte encoding.
    """
    n = generators[0].shape[0]
    identity = linalg.identity(field, n)
    elements = {identity.tobytes(): identity}
    queue = collections.deque([identity])
    while queue:
        A = queue.popleft()
        for G in generators:
            product = linalg.mat_mul(field, A, G)
            key = product.tobytes()
            if key not in elements:
                if len(elements) >= cap:
                    raise exceptions.CapExceeded(action='generate_group',
                                                 size=len(elements) + 1,
                                                 cap=cap)
                elements[key] = product
                queue.append(product)
    return elements


def borel_order(q, n, determinant_group=None):
    """
    Number of invertible lower triangular n x n matrices, optionally only
    those with determinant in `determinant_group`.
    """
    torus = (q - 1) ** n
    if determinant_group is not None:
        torus = torus * len(determinant_group) // (q - 1)
    return torus * q ** (n * (n - 1) // 2)


def lower_triangular_elements(field, n, determinant_group=None):
    """
    Yields every invertible lower triangular matrix, optionally restricted to
    determinants in `determinant_group`.
    """
    size = field.q ** (n * (n + 1) // 2)
    if size > constants.ENUMERATION_CAP:
        raise exceptions.CapExceeded(action='enumerate_borel', size=size,
                                     cap=constants.ENUMERATION_CAP)
    rows, cols = np.tril_indices(n, k=-1)
    nonzero = field.nonzero_elements()
    for diagonal in itertools.product(nonzero, repeat=n):
        if determinant_group is not None:
            determinant = 1
            for d in diagonal:
                determinant = int(field.mul(determinant, d))
            if determinant not in determinant_group:
                continue
        for below in itertools.product(range(field.q), repeat=len(rows)):
            A = np.diag(np.array(diagonal, dtype=np.int64))
            A[rows, cols] = below
            yield A


def enumerate_borel(flag, determinant_group=None):
    """
    Yields every element of the stabilizer of `flag` (desk scale only).
    """
    field = flag.field
    P = adapted_basis(flag)
    P_inv = linalg.inverse(field, P)
    for A in lower_triangular_elements(field, flag.n, determinant_group):
        yield linalg.mat_mul_chain(field, P, A, P_inv)


def restrict_flag(flag):
    """
    Intersects every member but the last with {x_n = 0} and drops the last
    coordinate, giving a flag of F_q^{n-1}. The last member must be
    span(e_n).
    """
    field, n = flag.field, flag.n
    hyperplane = Subspace.coordinate(field, n, range(n - 1))
    members = []
    for U in flag.subspaces[:-1]:
        W = U.intersection(hyperplane)
        members.append(Subspace.span(field, W.basis[:, :-1], n - 1))
    return Flag(field, n - 1, members)


def lift_flag(sub, Z):
    """
    Embeds each member of the flag `sub` of F_q^{n-1} into F_q^n with a zero
    last coordinate, adds span(e_n), appends span(e_n) itself as the last
    member and maps every member through Z.
    """
    field = sub.field
    n = Z.shape[0]
    if sub.n != n - 1:
        raise exceptions.DimensionMismatch(left=sub.n, right=n,
                                           action='lift_flag')
    last = Subspace.coordinate(field, n, [n - 1])
    members = []
    for W in sub.subspaces:
        embedded = np.concatenate(
            [W.basis, np.zeros((W.dim, 1), dtype=np.int64)], axis=1)
        members.append(Subspace.span(field, embedded, n).sum(last))
    members.append(last)
    return Flag(field, n, [U.image(Z) for U in members])
