"""
This module contains the exact simulation of the algorithm's quantum steps.

Coset-state preparation. The algorithm applies U_f to the uniform
superposition over all n x n matrices and measures the label register.
Measuring yields label value c with probability |f^{-1}(c)| / q^{n^2} and
leaves the uniform superposition over f^{-1}(c). Drawing A uniformly from
Mat_n(F_q) and reporting f(A) has exactly this law, and when f(A) is a coset
label the post-measurement state is |H A>. So `prep_coset_state` samples A
classically, and the representative B = A stands for the coset state.

Fourier sampling. For the coset state |H B> with H = W^{-1} L_D W (L_D the
invertible lower triangular matrices with determinant in D) the QFT of
Mat_n(F_q) gives amplitudes

    c_Y = (|L_D| q^{n^2})^{-1/2} sum_{A in L_D} omega^{Tr tr(A M)},
    M = W B Y^T W^{-1}.

tr(A M) splits over the entries of A: each free entry below the diagonal
contributes q [M_ji = 0], so M must be lower triangular, and the diagonal
contributes the torus sum S_D(diag M). Hence

    P(Y) = [M lower triangular] P_D(diag M) / q^{n(n-1)/2},
    P_D(d) = |S_D(d)|^2 / (|T_D| q^n).

For D = F_q^* (GL) the torus sum factorises: each diagonal entry is 0 with
probability (q-1)/q and each nonzero value has probability 1/(q(q-1)).
`brute_force_distribution` evaluates the defining character sums and
certifies the closed form.
"""

import functools
import itertools
import logging
import math
from fractions import Fraction

import numpy as np

from . import borel, constants, exceptions, linalg

logger = logging.getLogger(__name__)


class PrepOutcome(object):
    """
    Result of one coset-state preparation.
    """

    def __init__(self, kind, representative=None, label=None):
        self.kind = kind
        self.representative = representative
        self.label = label

    @property
    def is_coset(self):
        return self.kind == constants.PREP_COSET


class FourierMatrix(object):
    """
    The QFT of F_q: entry (x, y) is omega^Tr(xy) / sqrt(q).
    """

    def __init__(self, field):
        if field.q * field.q > constants.DENSE_OUTCOME_CAP:
            raise exceptions.CapExceeded(action='qft_matrix',
                                         size=field.q * field.q,
                                         cap=constants.DENSE_OUTCOME_CAP)
        self.field = field
        self.matrix = (field.root_of_unity(field.trace_product_table()) /
                       math.sqrt(field.q))

    def unitarity_defect(self):
        return unitarity_defect(self.matrix)


def qft_matrix(field):
    return FourierMatrix(field)


def unitarity_defect(U):
    """
    Largest entry of |U U^dagger - I|.
    """
    product = U @ U.conj().T
    return float(np.max(np.abs(product - np.eye(U.shape[0]))))


# Preparation

def prep_success_probability(field, n, determinant_group=None):
    """
    Probability that a uniform n x n matrix lands in the oracle's group:
    prod_{j=1}^n (1 - q^{-j}), times |D| / (q - 1) for a determinant
    subgroup D.
    """
    q = field.q
    probability = Fraction(1)
    for j in range(1, n + 1):
        probability *= 1 - Fraction(1, q ** j)
    if determinant_group is not None:
        probability *= Fraction(len(determinant_group), q - 1)
    return probability


def coset_fidelity(field, n, determinant_group=None):
    """
    Fidelity between the coset state of L_D and the uniform state over the
    lower triangular matrices: sqrt(|L_D| / q^{n(n+1)/2}).
    """
    order = borel.borel_order(field.q, n, determinant_group)
    return math.sqrt(order / field.q ** (n * (n + 1) // 2))


def prep_coset_state(view, rng):
    """
    Simulates preparing a coset state of the subgroup hidden by `view` and
    measuring the label register.
    """
    A = linalg.random_matrix(view.field, view.n, rng)
    try:
        label = view.query(A)
    except exceptions.OutsideDomain:
        return PrepOutcome(constants.PREP_JUNK)
    except exceptions.NotAnNthPower:
        return PrepOutcome(constants.PREP_JUNK)
    if label.tag == constants.LABEL_COSET:
        return PrepOutcome(constants.PREP_COSET, A, label)
    return PrepOutcome(constants.PREP_JUNK, None, label)


# The subspace picture

def perp_of_coset(field, X, B):
    """
    Returns (H'B)^perp = {Y : (X^T)^{-1} Y B^T X^T strictly upper triangular}
    as a subspace of F_q^{n^2} (matrices flattened row-major).
    """
    n = X.shape[0]
    Xt = linalg.transpose(field, X)
    right = linalg.mat_mul(field, linalg.inverse(field, Xt),
                           linalg.inverse(field, linalg.transpose(field, B)))
    vectors = []
    for i, j in zip(*np.triu_indices(n, k=1)):
        S = linalg.zeros(field, n)
        S[i, j] = 1
        vectors.append(linalg.mat_mul_chain(field, Xt, S, right).reshape(-1))
    return linalg.Subspace.span(field, np.array(vectors).reshape(-1, n * n),
                                n * n)


def subspace_hsp_measure(field, W, v0, rng):
    """
    Fourier sampling of the coset state |W + v0>: a uniform element of W^perp.
    The offset only contributes a phase.
    """
    if len(v0) != W.ambient_dim:
        raise exceptions.DimensionMismatch(left=len(v0), right=W.ambient_dim,
                                           action='subspace_hsp_measure')
    return W.perp().random_element(rng)


def subspace_hsp_amplitudes(field, W, v0):
    """
    Exhaustive amplitudes c_y = omega^{(v0,y)} (|W| q^m)^{-1/2}
    sum_{v in W} omega^{(v,y)} for every y in F_q^m, in encoding order.
    """
    m = W.ambient_dim
    ys = linalg.all_matrices(field, 1, m)[:, 0, :]
    vs = W.elements()
    table = field.trace_product_table()
    phases = np.zeros((len(vs), len(ys)), dtype=np.int64)
    for k in range(m):
        phases += table[vs[:, k][:, None], ys[:, k][None, :]]
    offset = np.zeros(len(ys), dtype=np.int64)
    v0 = np.asarray(v0, dtype=np.int64)
    for k in range(m):
        offset += table[v0[k], ys[:, k]]
    amplitudes = (field.root_of_unity(offset) *
                  field.root_of_unity(phases).sum(axis=0) /
                  math.sqrt(len(vs) * field.q ** m))
    return ys, amplitudes


# The diagonal law

class TorusLaw(object):
    """
    The law P_D of diag(M) for Fourier-sampled Borel coset states. With
    D = None the law factorises and probabilities are exact Fractions;
    otherwise the torus sums are enumerated and probabilities are floats.
    """

    def __init__(self, field, n, determinant_group=None):
        self.field = field
        self.n = n
        self.determinant_group = determinant_group
        q = field.q
        if determinant_group is None:
            self.size = (q - 1) ** n
            self._diagonals = None
            self._weights = None
            return
        torus = self._torus(field, n, determinant_group)
        self.size = len(torus)
        count = q ** n
        if count * len(torus) > constants.ENUMERATION_CAP:
            raise exceptions.CapExceeded(action='torus law',
                                         size=count * len(torus),
                                         cap=constants.ENUMERATION_CAP)
        diagonals = np.array(list(itertools.product(range(q), repeat=n)),
                             dtype=np.int64).reshape(count, n)
        characters = field.root_of_unity(field.trace_product_table())
        sums = np.ones((len(torus), count), dtype=complex)
        for i in range(n):
            sums *= characters[torus[:, i][:, None], diagonals[:, i][None, :]]
        weights = np.abs(sums.sum(axis=0)) ** 2 / (self.size * count)
        self._diagonals = diagonals
        self._weights = weights / weights.sum()

    @staticmethod
    def _torus(field, n, determinant_group):
        if (field.q - 1) ** n > constants.TORUS_ENUMERATION_CAP:
            raise exceptions.CapExceeded(action='torus enumeration',
                                         size=(field.q - 1) ** n,
                                         cap=constants.TORUS_ENUMERATION_CAP)
        rows = []
        for t in itertools.product(field.nonzero_elements(), repeat=n):
            determinant = 1
            for entry in t:
                determinant = int(field.mul(determinant, entry))
            if determinant in determinant_group:
                rows.append(t)
        return np.array(rows, dtype=np.int64).reshape(-1, n)

    @property
    def exact(self):
        return self.determinant_group is None

    def _index(self, d):
        index = 0
        for entry in d:
            index = index * self.field.q + int(entry)
        return index

    def diagonal_probability(self, d):
        if not self.exact:
            return float(self._weights[self._index(d)])
        q = self.field.q
        probability = Fraction(1)
        for entry in d:
            if entry == 0:
                probability *= Fraction(q - 1, q)
            else:
                probability *= Fraction(1, q * (q - 1))
        return probability

    def sample_diagonal(self, rng):
        if not self.exact:
            index = rng.choice(len(self._weights), p=self._weights)
            return self._diagonals[index].copy()
        q = self.field.q
        zero = rng.random(self.n) < (q - 1) / q
        values = rng.integers(1, q, size=self.n, dtype=np.int64)
        return np.where(zero, 0, values)

    def zero_probability(self):
        """
        Mass of the perp stratum (diag M = 0): ((q-1)/q)^n for GL.
        """
        if self.exact:
            return Fraction(self.field.q - 1, self.field.q) ** self.n
        return float(self._weights[0])

    def kernel_probability(self):
        """
        Probability that rank Y = n - 1 and ker Y^T is the hidden line:
        M must have a zero last column and rank n - 1. Given diag M, column
        j < n is independent of the later ones with probability 1 if M_jj is
        nonzero and 1 - 1/q otherwise.
        """
        q, n = self.field.q, self.n
        if self.exact:
            return Fraction((q - 1) * (q * q - q + 1) ** (n - 1),
                            q ** (2 * n - 1))
        zero = self._diagonals == 0
        factors = np.where(zero[:, :-1], 1 - 1 / q, 1.0).prod(axis=1)
        return float((self._weights * zero[:, -1] * factors).sum())


@functools.lru_cache(maxsize=None)
def torus_law(field, n, determinant_group=None):
    return TorusLaw(field, n, determinant_group)


def rank_stratification(field, n):
    """
    Exact fraction of strictly upper triangular n x n matrices of rank n - 1.
    """
    rows, cols = np.triu_indices(n, k=1)
    total = field.q ** len(rows)
    if total > constants.ENUMERATION_CAP:
        raise exceptions.CapExceeded(action='rank_stratification', size=total,
                                     cap=constants.ENUMERATION_CAP)
    hits = 0
    for entries in itertools.product(range(field.q), repeat=len(rows)):
        Z = linalg.zeros(field, n)
        Z[rows, cols] = entries
        if linalg.rank(field, Z) == n - 1:
            hits += 1
    return Fraction(hits, total)


# Outcome distributions

class OutcomeDistribution(object):
    """
    The law of the measured Y after Fourier sampling |H B>, where
    H = X^{-1} L_D X.
    """

    def __init__(self, field, X, B, determinant_group=None):
        self.field = field
        self.n = X.shape[0]
        self.X = X
        self.B = B
        self.determinant_group = determinant_group
        self._X_inv = linalg.inverse(field, X)
        self._B_inv = linalg.inverse(field, B)
        self._XB = linalg.mat_mul(field, X, B)
        self._hidden_line = linalg.Subspace.span(field,
                                                 self._X_inv[:, -1],
                                                 self.n)

    def lower_form(self, Y):
        """
        Returns M = X B Y^T X^{-1}.
        """
        return linalg.mat_mul_chain(self.field, self._XB,
                                    linalg.transpose(self.field, Y),
                                    self._X_inv)

    def from_lower_form(self, M):
        """
        Inverse of `lower_form`: Y = (B^{-1} X^{-1} M X)^T.
        """
        return linalg.transpose(self.field, linalg.mat_mul_chain(
            self.field, self._B_inv, self._X_inv, M, self.X))

    def probability(self, Y):
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError

    def outcomes(self):
        """
        Yields (Y, probability) over all of Mat_n(F_q).
        """
        for Y in linalg.all_matrices(self.field, self.n):
            yield Y, self.probability(Y)

    def classify(self, Y):
        """
        Returns (Y in the perp, rank Y, ker Y^T is the hidden line).
        """
        M = self.lower_form(Y)
        in_perp = not np.any(np.triu(M))
        r = linalg.rank(self.field, Y)
        kernel = linalg.kernel(self.field, linalg.transpose(self.field, Y))
        return in_perp, r, r == self.n - 1 and kernel == self._hidden_line

    def event_masses(self):
        """
        Masses of the events by enumeration over all outcomes.
        """
        masses = {'total': 0, 'perp': 0, 'perp_rank': 0, 'kernel': 0}
        for Y, probability in self.outcomes():
            masses['total'] += probability
            if not probability:
                continue
            in_perp, r, kernel_ok = self.classify(Y)
            if in_perp:
                masses['perp'] += probability
                if r == self.n - 1:
                    masses['perp_rank'] += probability
            if kernel_ok:
                masses['kernel'] += probability
        return masses


class ClosedFormDistribution(OutcomeDistribution):
    """
    The certified closed form; needs no enumeration except in `outcomes`.
    """

    def __init__(self, field, X, B, determinant_group=None):
        super(ClosedFormDistribution, self).__init__(field, X, B,
                                                     determinant_group)
        self.law = torus_law(field, self.n, determinant_group)
        self.denominator = ((field.q - 1) ** self.n *
                            field.q ** (self.n * (self.n - 1) // 2 +
                                        self.n * self.n))

    def _exact(self, Y):
        M = self.lower_form(Y)
        if np.any(np.triu(M, k=1)):
            return 0
        return (self.law.diagonal_probability(np.diagonal(M)) /
                self.field.q ** (self.n * (self.n - 1) // 2))

    def probability(self, Y):
        return float(self._exact(Y))

    def exact_probability(self, Y):
        """
        Returns (numerator, denominator) over the common denominator
        (q-1)^n q^{n(n-1)/2 + n^2}; GL cosets only.
        """
        if not self.law.exact:
            raise exceptions.HspError(
                detail='Determinant-restricted laws are not rational.')
        return int(self._exact(Y) * self.denominator), self.denominator

    def perp_mass(self):
        return self.law.zero_probability()

    def perp_rank_mass(self):
        q, n = self.field.q, self.n
        return self.perp_mass() * Fraction(q - 1, q) ** (n - 1)

    def kernel_mass(self):
        return self.law.kernel_probability()

    def sample(self, rng):
        field, n = self.field, self.n
        M = linalg.zeros(field, n)
        rows, cols = np.tril_indices(n, k=-1)
        M[rows, cols] = field.random(rng, size=len(rows))
        M[np.diag_indices(n)] = self.law.sample_diagonal(rng)
        return self.from_lower_form(M)


class BruteForceDistribution(OutcomeDistribution):
    """
    Evaluates c_Y = (|L_D| q^{n^2})^{-1/2} sum_{A in L_D}
    omega^{Tr (X^{-1} A X B, Y)} for every Y.
    """

    chunk = 4096

    def __init__(self, field, X, B, determinant_group=None):
        super(BruteForceDistribution, self).__init__(field, X, B,
                                                     determinant_group)
        n, q = self.n, field.q
        order = borel.borel_order(q, n, determinant_group)
        outcomes = q ** (n * n)
        if order * outcomes > constants.BRUTE_FORCE_BUDGET:
            raise exceptions.CapExceeded(action='brute_force_distribution',
                                         size=order * outcomes,
                                         cap=constants.BRUTE_FORCE_BUDGET)
        coset = np.array([
            linalg.mat_mul_chain(field, self._X_inv, A, X, B).reshape(-1)
            for A in borel.lower_triangular_elements(field, n,
                                                     determinant_group)])
        self._outcomes = linalg.all_matrices(field, n)
        flat = self._outcomes.reshape(outcomes, n * n)
        table = field.trace_product_table()
        amplitudes = np.zeros(outcomes, dtype=complex)
        for start in range(0, outcomes, self.chunk):
            block = flat[start:start + self.chunk]
            phases = np.zeros((len(coset), len(block)), dtype=np.int64)
            for k in range(n * n):
                phases += table[coset[:, k][:, None], block[:, k][None, :]]
            amplitudes[start:start + len(block)] = (
                field.root_of_unity(phases).sum(axis=0))
        self.amplitudes = amplitudes / math.sqrt(len(coset) * outcomes)
        self.probabilities = np.abs(self.amplitudes) ** 2

    def probability(self, Y):
        return float(self.probabilities[linalg.matrix_index(self.field, Y)])

    def outcomes(self):
        for Y, probability in zip(self._outcomes, self.probabilities):
            yield Y, float(probability)

    def sample(self, rng):
        weights = self.probabilities / self.probabilities.sum()
        return self._outcomes[rng.choice(len(weights), p=weights)].copy()


def exact_distribution(field, X, B, determinant_group=None):
    return ClosedFormDistribution(field, X, B, determinant_group)


def brute_force_distribution(field, X, B, determinant_group=None):
    return BruteForceDistribution(field, X, B, determinant_group)


def sample_outcome(field, X, B, rng, determinant_group=None,
                   backend=constants.BACKEND_EXACT):
    """
    Samples the measured Y for the coset state |X^{-1} L_D X B>.
    """
    if backend == constants.BACKEND_BRUTE:
        distribution = brute_force_distribution(field, X, B,
                                                determinant_group)
    else:
        distribution = exact_distribution(field, X, B, determinant_group)
    return distribution.sample(rng)


def measure_coset_state(view, B, rng, backend=constants.BACKEND_EXACT):
    """
    Fourier-samples the coset state |H B> of the subgroup hidden by `view`.
    This is the simulated physics; its caller only sees Y.
    """
    return sample_outcome(view.field, view._simulator_conjugator(), B, rng,
                          view.determinant_group, backend)
