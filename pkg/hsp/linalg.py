"""
This module contains exact linear algebra over F_q.

Matrices and vectors are numpy `int64` arrays of field encodings (see `gf`);
every function takes the field as its first argument. Vectors are columns
by convention, so a subspace spanned by vectors is stored with those vectors
as the rows of its basis.
"""

import itertools

import numpy as np

from . import constants, exceptions


def _check_square(M, action):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise exceptions.DimensionMismatch(left=M.shape, right=M.shape,
                                           action=action)


def as_matrix(field, rows):
    """
    Builds a matrix from nested lists of encodings, checking the range.
    """
    M = np.array(rows, dtype=np.int64)
    if M.ndim != 2 or M.size == 0:
        raise exceptions.DimensionMismatch(left=M.shape, right='(n, m)',
                                           action='as_matrix')
    if np.any((M < 0) | (M >= field.q)):
        raise exceptions.FieldError(p=field.p, r=field.r,
                                    reason='entries outside F_q')
    return M


def identity(field, n):
    return np.eye(n, dtype=np.int64)


def zeros(field, n_rows, n_cols=None):
    return np.zeros((n_rows, n_rows if n_cols is None else n_cols),
                    dtype=np.int64)


def unit_vector(field, n, k):
    """
    Returns e_k (0-indexed) of length n.
    """
    e = np.zeros(n, dtype=np.int64)
    e[k] = 1
    return e


def transpose(field, A):
    return np.ascontiguousarray(np.asarray(A).T)


def mat_add(field, A, B):
    if np.shape(A) != np.shape(B):
        raise exceptions.DimensionMismatch(left=np.shape(A),
                                           right=np.shape(B), action='add')
    return field.add(A, B)


def scalar_mul(field, c, A):
    """
    Returns cA for a field scalar c.
    """
    return field.mul(c, A)


def mat_mul(field, A, B):
    """
    Returns the matrix product AB; B may be a vector.
    """
    A, B = np.asarray(A), np.asarray(B)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if A.shape[1] != B.shape[0]:
        raise exceptions.DimensionMismatch(left=A.shape, right=B.shape,
                                           action='multiply')
    product = field.sum(field.mul(A[:, :, None], B[None, :, :]), axis=1)
    return product[:, 0] if vector else product


def mat_mul_chain(field, *matrices):
    result = matrices[0]
    for M in matrices[1:]:
        result = mat_mul(field, result, M)
    return result


def rref(field, M):
    """
    Returns (R, rank, T) where R = T M is the reduced row-echelon form of M
    and T is invertible.
    """
    M = np.asarray(M, dtype=np.int64)
    n_rows, n_cols = M.shape
    work = np.concatenate([M, identity(field, n_rows)], axis=1)
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        candidates = np.flatnonzero(work[rank:, col])
        if len(candidates) == 0:
            continue
        pivot = rank + candidates[0]
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        work[rank] = field.mul(work[rank], field.inv(work[rank, col]))
        factors = work[:, col].copy()
        factors[rank] = 0
        work = field.sub(work, field.mul(factors[:, None], work[rank][None, :]))
        rank += 1
    return work[:, :n_cols], rank, work[:, n_cols:]


def rank(field, M):
    return rref(field, M)[1]


def pivot_columns(R):
    """
    Returns the pivot column of every nonzero row of an echelon matrix.
    """
    pivots = []
    for row in R:
        nonzero = np.flatnonzero(row)
        if len(nonzero) == 0:
            break
        pivots.append(int(nonzero[0]))
    return pivots


def det(field, M):
    """
    Returns the determinant of a square matrix as an encoding.
    """
    M = np.array(M, dtype=np.int64)
    _check_square(M, 'det')
    n = M.shape[0]
    result = 1
    for col in range(n):
        candidates = np.flatnonzero(M[col:, col])
        if len(candidates) == 0:
            return 0
        pivot = col + candidates[0]
        if pivot != col:
            M[[col, pivot]] = M[[pivot, col]]
            result = int(field.neg(result))
        result = int(field.mul(result, M[col, col]))
        below = field.mul(M[col + 1:, col], field.inv(M[col, col]))
        M[col + 1:] = field.sub(M[col + 1:],
                                field.mul(below[:, None], M[col][None, :]))
    return result


def is_invertible(field, M):
    return det(field, M) != 0


def inverse(field, M):
    M = np.asarray(M, dtype=np.int64)
    _check_square(M, 'inverse')
    _, r, T = rref(field, M)
    if r < M.shape[0]:
        raise exceptions.SingularMatrix(action='inverse')
    return T


def kernel(field, M):
    """
    Returns the right null space {v : M v = 0} as a Subspace.
    """
    M = np.asarray(M, dtype=np.int64)
    n_cols = M.shape[1]
    R, r, _ = rref(field, M)
    pivots = pivot_columns(R[:r])
    free = [c for c in range(n_cols) if c not in pivots]
    vectors = np.zeros((len(free), n_cols), dtype=np.int64)
    for i, f in enumerate(free):
        vectors[i, f] = 1
        for row, p in enumerate(pivots):
            vectors[i, p] = field.neg(R[row, f])
    return Subspace.span(field, vectors, n_cols)


def conjugate(field, X, A):
    """
    Returns X^{-1} A X.
    """
    return mat_mul_chain(field, inverse(field, X), A, X)


def mat_trace(field, A):
    A = np.asarray(A)
    _check_square(A, 'trace')
    return field.sum(np.diagonal(A))


def frobenius_form(field, A, B):
    """
    Returns sum a_ij b_ij = tr(A B^T).
    """
    if np.shape(A) != np.shape(B):
        raise exceptions.DimensionMismatch(left=np.shape(A),
                                           right=np.shape(B),
                                           action='frobenius_form')
    return field.sum(field.mul(A, B))


def block_diag_one(field, A):
    """
    Returns diag(A, 1).
    """
    n = A.shape[0] + 1
    M = identity(field, n)
    M[:-1, :-1] = A
    return M


def random_matrix(field, n, rng, n_cols=None):
    return field.random(rng, size=(n, n if n_cols is None else n_cols))


def random_invertible(field, n, rng):
    """
    Uniform element of GL_n(F_q) by rejection from uniform matrices.
    """
    while True:
        M = random_matrix(field, n, rng)
        if is_invertible(field, M):
            return M


def complete_to_invertible(field, u):
    """
    Returns an invertible Z whose last column is `u`. The other columns are
    the standard basis vectors in order, skipping e_j for the position j of
    the first nonzero entry of `u`.
    """
    u = np.asarray(u, dtype=np.int64)
    nonzero = np.flatnonzero(u)
    if len(nonzero) == 0:
        raise exceptions.SingularMatrix(action='complete_to_invertible')
    n = len(u)
    skip = nonzero[0]
    columns = [unit_vector(field, n, k) for k in range(n) if k != skip]
    return np.stack(columns + [u], axis=1)


def all_matrices(field, n_rows, n_cols=None):
    """
    Returns every n_rows x n_cols matrix, stacked, the last entry (row-major)
    varying fastest.
    """
    n_cols = n_rows if n_cols is None else n_cols
    size = field.q ** (n_rows * n_cols)
    if size > constants.DENSE_OUTCOME_CAP:
        raise exceptions.CapExceeded(action='all_matrices', size=size,
                                     cap=constants.DENSE_OUTCOME_CAP)
    entries = np.array(list(itertools.product(range(field.q),
                                              repeat=n_rows * n_cols)),
                       dtype=np.int64)
    return entries.reshape(size, n_rows, n_cols)


def matrix_index(field, M):
    """
    Position of M in the order of `all_matrices`.
    """
    index = 0
    for entry in np.asarray(M).reshape(-1):
        index = index * field.q + int(entry)
    return index


def general_linear_group(field, n):
    """
    Returns every invertible n x n matrix in `all_matrices` order.
    """
    return [M for M in all_matrices(field, n) if is_invertible(field, M)]


def encode(M):
    """
    Wire encoding of a matrix or vector: its entries row-major as ints.
    """
    return [int(x) for x in np.asarray(M).reshape(-1)]


class Subspace(object):
    """
    A subspace of F_q^d stored by its reduced row-echelon basis, so equal
    subspaces have identical representations.
    """

    def __init__(self, field, basis, ambient_dim):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = np.array(basis, dtype=np.int64).reshape(-1, ambient_dim)
        self.basis.setflags(write=False)

    @classmethod
    def span(cls, field, vectors, ambient_dim):
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        if len(vectors) == 0:
            return cls(field, vectors, ambient_dim)
        R, r, _ = rref(field, vectors)
        return cls(field, R[:r], ambient_dim)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, np.zeros((0, ambient_dim)), ambient_dim)

    @classmethod
    def full(cls, field, ambient_dim):
        return cls(field, identity(field, ambient_dim), ambient_dim)

    @classmethod
    def coordinate(cls, field, ambient_dim, indices):
        """
        The span of the unit vectors e_k for k in `indices` (0-indexed).
        """
        return cls.span(field, [unit_vector(field, ambient_dim, k)
                                for k in indices], ambient_dim)

    @property
    def dim(self):
        return self.basis.shape[0]

    def __eq__(self, other):
        return (isinstance(other, Subspace) and
                self.field == other.field and
                self.ambient_dim == other.ambient_dim and
                np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return 'Subspace(dim={}, basis={})'.format(self.dim,
                                                   self.basis.tolist())

    def vectors(self):
        """
        The basis as lists of encodings, for serialization.
        """
        return self.basis.tolist()

    def contains(self, v):
        v = np.asarray(v, dtype=np.int64).reshape(1, self.ambient_dim)
        return rank(self.field, np.concatenate([self.basis, v])) == self.dim

    def issubspace(self, other):
        """
        True if this subspace lies inside `other`.
        """
        if self.dim == 0:
            return True
        stacked = np.concatenate([other.basis, self.basis])
        return rank(self.field, stacked) == other.dim

    def image(self, A):
        """
        Returns A U = span of A v for the basis vectors v.
        """
        if self.dim == 0:
            return Subspace.zero(self.field, A.shape[0])
        images = transpose(self.field,
                           mat_mul(self.field, A,
                                   transpose(self.field, self.basis)))
        return Subspace.span(self.field, images, A.shape[0])

    def sum(self, other):
        return Subspace.span(self.field,
                             np.concatenate([self.basis, other.basis]),
                             self.ambient_dim)

    def intersection(self, other):
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        field = self.field
        system = np.concatenate([self.basis, field.neg(other.basis)]).T
        solutions = kernel(field, system)
        if solutions.dim == 0:
            return Subspace.zero(field, self.ambient_dim)
        vectors = mat_mul(field, solutions.basis[:, :self.dim], self.basis)
        return Subspace.span(field, vectors, self.ambient_dim)

    def perp(self):
        """
        Returns {u : (u, v) = 0 for all v in this subspace}.
        """
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel(self.field, self.basis)

    def elements(self):
        """
        Every vector of the subspace (q^dim of them).
        """
        size = self.field.q ** self.dim
        if size > constants.ENUMERATION_CAP:
            raise exceptions.CapExceeded(action='subspace elements', size=size,
                                         cap=constants.ENUMERATION_CAP)
        if self.dim == 0:
            return np.zeros((1, self.ambient_dim), dtype=np.int64)
        coefficients = np.array(list(itertools.product(range(self.field.q),
                                                       repeat=self.dim)),
                                dtype=np.int64)
        return mat_mul(self.field, coefficients, self.basis)

    def random_element(self, rng):
        if self.dim == 0:
            return np.zeros(self.ambient_dim, dtype=np.int64)
        coefficients = self.field.random(rng, size=(1, self.dim))
        return mat_mul(self.field, coefficients, self.basis)[0]
