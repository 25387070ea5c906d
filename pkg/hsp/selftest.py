"""
This module contains the registry of invariant checks run by the `selftest`
command. Each check raises AssertionError (or an HspError) on failure.
"""

import collections
import itertools
import logging
import math
from fractions import Fraction

import numpy as np

from . import borel, constants, gf, linalg, oracle, quantum, solver

logger = logging.getLogger(__name__)

CHECKS = collections.OrderedDict()

CheckResult = collections.namedtuple('CheckResult', ['name', 'passed', 'detail'])

SEED = 20100517


def check(name):
    def register(func):
        CHECKS[name] = func
        return func
    return register


def _rng(*salt):
    return np.random.default_rng([SEED] + list(salt))


@check('field_axioms')
def field_axioms():
    for q in (2, 3, 4, 5, 7, 8, 9):
        field = gf.field_from_order(q)
        x = field.elements()[:, None]
        y = field.elements()[None, :]
        assert np.array_equal(field.mul(x, y), field.mul(y, x))
        for z in field.elements():
            assert np.array_equal(field.mul(field.add(x, y), z),
                                  field.add(field.mul(x, z), field.mul(y, z)))
        units = field.nonzero_elements()
        assert np.all(field.mul(units, field.inv(units)) == 1)


@check('character_orthogonality')
def character_orthogonality():
    for q in (2, 3, 4, 5, 7, 8, 9):
        defect = quantum.qft_matrix(gf.field_from_order(q)).unitarity_defect()
        assert defect < constants.UNITARITY_TOLERANCE, (q, defect)


@check('linalg_properties')
def linalg_properties():
    field = gf.get_field(3, 2)
    rng = _rng(7)
    for _ in range(100):
        A = linalg.random_matrix(field, 3, rng)
        B = linalg.random_matrix(field, 3, rng)
        W = linalg.random_invertible(field, 3, rng)
        X = linalg.random_invertible(field, 3, rng)
        R, r, _ = linalg.rref(field, A)
        assert r == linalg.rank(field, linalg.transpose(field, A))
        assert np.array_equal(linalg.rref(field, R)[0], R)
        conjugated = linalg.conjugate(field, W, A)
        assert linalg.rank(field, conjugated) == r
        assert linalg.det(field, conjugated) == linalg.det(field, A)
        assert np.array_equal(
            linalg.conjugate(field, X, conjugated),
            linalg.conjugate(field, linalg.mat_mul(field, W, X), A))
        AB = linalg.mat_mul(field, A, B)
        assert np.array_equal(
            linalg.transpose(field, AB),
            linalg.mat_mul(field, linalg.transpose(field, B),
                           linalg.transpose(field, A)))
        assert linalg.mat_trace(field, AB) == \
            linalg.mat_trace(field, linalg.mat_mul(field, B, A))
        U = linalg.Subspace.span(field, field.random(rng, (2, 4)), 4)
        if U.dim:
            G = linalg.random_invertible(field, U.dim, rng)
            V = linalg.Subspace.span(field, linalg.mat_mul(field, G, U.basis),
                                     4)
            assert np.array_equal(U.basis, V.basis)


@check('borel_properties')
def borel_properties():
    for n, q in ((2, 2), (2, 3), (3, 2)):
        field = gf.field_from_order(q)
        rng = _rng(n, q, 8)
        X = linalg.random_invertible(field, n, rng)
        flag = borel.flag_from_conjugator(field, X)
        group = linalg.general_linear_group(field, n)
        stabilizer = {A.tobytes() for A in group
                      if borel.stabilizes(field, A, flag)}
        assert len(stabilizer) == (q - 1) ** n * q ** (n * (n - 1) // 2)
        assert stabilizer == {A.tobytes()
                              for A in borel.enumerate_borel(flag)}
        for L in borel.lower_triangular_elements(field, n):
            assert borel.flag_from_conjugator(
                field, linalg.mat_mul(field, L, X)) == flag
        W = linalg.random_invertible(field, n, rng)
        moved = borel.flag_from_conjugator(field, linalg.mat_mul(field, X, W))
        for A in group:
            assert borel.stabilizes(field, A, flag) == borel.stabilizes(
                field, linalg.conjugate(field, W, A), moved)


@check('closed_form_certification')
def closed_form_certification():
    for n, q in ((1, 2), (1, 3), (2, 2), (2, 3), (3, 2)):
        field = gf.field_from_order(q)
        rng = _rng(n, q)
        for _ in range(5):
            X = linalg.random_invertible(field, n, rng)
            B = linalg.random_invertible(field, n, rng)
            exact = quantum.exact_distribution(field, X, B)
            brute = quantum.brute_force_distribution(field, X, B)
            for Y, probability in brute.outcomes():
                assert abs(exact.probability(Y) - probability) < \
                    constants.PROBABILITY_TOLERANCE, (n, q)


@check('success_masses')
def success_masses():
    for n, q in ((1, 2), (1, 3), (2, 2), (2, 3), (3, 2)):
        field = gf.field_from_order(q)
        rng = _rng(n, q, 1)
        X = linalg.random_invertible(field, n, rng)
        B = linalg.random_invertible(field, n, rng)
        distribution = quantum.exact_distribution(field, X, B)
        masses = collections.Counter()
        for Y in linalg.all_matrices(field, n):
            numerator, denominator = distribution.exact_probability(Y)
            if not numerator:
                continue
            probability = Fraction(numerator, denominator)
            in_perp, r, kernel_ok = distribution.classify(Y)
            masses['total'] += probability
            masses['perp'] += probability if in_perp else 0
            masses['perp_rank'] += probability if in_perp and r == n - 1 else 0
            masses['kernel'] += probability if kernel_ok else 0
        unit = Fraction(q - 1, q)
        assert masses['total'] == 1
        assert masses['perp'] == unit ** n == distribution.perp_mass()
        assert masses['perp_rank'] == unit ** (2 * n - 1)
        assert masses['kernel'] == distribution.kernel_mass()


@check('rank_stratification')
def rank_stratification():
    for n in (1, 2, 3, 4):
        for q in (2, 3, 4):
            field = gf.field_from_order(q)
            assert (quantum.rank_stratification(field, n) ==
                    Fraction(q - 1, q) ** (n - 1)), (n, q)


@check('prep_probability')
def prep_probability():
    for n, q in ((1, 2), (2, 2), (2, 3), (3, 2)):
        field = gf.field_from_order(q)
        count = len(linalg.general_linear_group(field, n))
        assert (Fraction(count, q ** (n * n)) ==
                quantum.prep_success_probability(field, n))
    for n in (2, 3):
        for q in (2, 3, 5):
            field = gf.field_from_order(q)
            assert quantum.prep_success_probability(field, n) > Fraction(1, 4)


@check('prep_rate')
def prep_rate():
    draws = 100000
    for n in (2, 3):
        for q in (2, 3, 5):
            field = gf.field_from_order(q)
            rng = _rng(n, q, 9)
            hiding, _ = oracle.make_instance(field, n, rng)
            hits = sum(quantum.prep_coset_state(hiding, rng).is_coset
                       for _ in range(draws))
            p = float(quantum.prep_success_probability(field, n))
            sigma = math.sqrt(p * (1 - p) / draws)
            assert abs(hits / draws - p) < 4 * sigma, (n, q, hits / draws)


@check('kernel_theorem')
def kernel_theorem():
    for q in (2, 3):
        field = gf.field_from_order(q)
        rng = _rng(2, q, 2)
        X = linalg.random_invertible(field, 2, rng)
        B = linalg.random_invertible(field, 2, rng)
        distribution = quantum.exact_distribution(field, X, B)
        for Y, probability in distribution.outcomes():
            if not probability:
                continue
            in_perp, r, kernel_ok = distribution.classify(Y)
            if in_perp and r == 1:
                assert kernel_ok, Y.tolist()
        X = linalg.random_invertible(field, 3, rng)
        B = linalg.random_invertible(field, 3, rng)
        distribution = quantum.exact_distribution(field, X, B)
        for _ in range(10000):
            Y = distribution.sample(rng)
            in_perp, r, kernel_ok = distribution.classify(Y)
            if in_perp and r == 2:
                assert kernel_ok, Y.tolist()


@check('hiding_property')
def hiding_property():
    for n, q in ((2, 2), (2, 3), (3, 2)):
        field = gf.field_from_order(q)
        rng = _rng(n, q, 3)
        hiding, descriptor = oracle.make_instance(field, n, rng)
        members = {A.tobytes() for A in borel.enumerate_borel(descriptor.flag)}
        group = linalg.general_linear_group(field, n)
        labels = [hiding.query(A) for A in group]
        inverses = [linalg.inverse(field, B) for B in group]
        for (A, a), (B_inv, b) in itertools.product(zip(group, labels),
                                                    zip(inverses, labels)):
            quotient = linalg.mat_mul(field, A, B_inv)
            assert (a == b) == (quotient.tobytes() in members)


@check('root_independence')
def root_independence():
    for n, q in ((2, 3), (2, 5), (3, 7)):
        field = gf.field_from_order(q)
        rng = _rng(n, q, 4)
        hiding, _ = oracle.make_instance(field, n, rng, constants.MODE_SL)
        extended = oracle.sl_oracle(hiding)
        for _ in range(200):
            A = linalg.random_invertible(field, n, rng)
            determinant = linalg.det(field, A)
            if determinant not in extended.determinant_group:
                continue
            labels = {extended.query(A, root=int(z))
                      for z in field.nth_roots(determinant, n)}
            assert len(labels) == 1


@check('subspace_amplitudes')
def subspace_amplitudes():
    for q, m in ((2, 4), (3, 3)):
        field = gf.field_from_order(q)
        rng = _rng(q, m, 5)
        for dim in range(m + 1):
            W = linalg.Subspace.span(field, field.random(rng, (dim, m)), m)
            ys, amplitudes = quantum.subspace_hsp_amplitudes(
                field, W, field.random(rng, m))
            perp = W.perp()
            mass = np.abs(amplitudes) ** 2
            inside = np.array([perp.contains(y) for y in ys])
            assert abs(mass.sum() - 1) < constants.PROBABILITY_TOLERANCE
            assert np.all(mass[~inside] < constants.PROBABILITY_TOLERANCE)


@check('sampler_fidelity')
def sampler_fidelity():
    field = gf.get_field(3)
    rng = _rng(6)
    X = linalg.random_invertible(field, 2, rng)
    B = linalg.random_invertible(field, 2, rng)
    distribution = quantum.exact_distribution(field, X, B)
    draws = 100000
    counts = collections.Counter(
        linalg.matrix_index(field, distribution.sample(rng))
        for _ in range(draws))
    distance = 0.5 * sum(abs(counts[linalg.matrix_index(field, Y)] / draws -
                             probability)
                         for Y, probability in distribution.outcomes())
    assert distance < 0.01, distance


@check('mean_rounds')
def mean_rounds():
    trials = 200
    for n in (2, 3):
        for q in (2, 3, 4, 5):
            field = gf.field_from_order(q)
            reports = [solver.run_instance(field, n, constants.MODE_GL,
                                           [SEED, n, q, trial])
                       for trial in range(trials)]
            for report in reports:
                assert report.success, report.error
            p = float(solver.round_success_probability(field, n))
            mean = sum(report.top_level_rounds for report in reports) / trials
            sigma = math.sqrt((1 - p) / p ** 2 / trials)
            assert abs(mean - 1 / p) < 4 * sigma, (n, q, mean, 1 / p)


@check('end_to_end_sl')
def end_to_end_sl():
    for n in (2, 3):
        for q in (3, 5):
            field = gf.field_from_order(q)
            for trial in range(100):
                report = solver.run_instance(field, n, constants.MODE_SL,
                                             [SEED, n, q, trial])
                assert report.success, report.error


@check('determinism')
def determinism():
    field = gf.get_field(3)
    first = solver.run_instance(field, 3, constants.MODE_GL, SEED)
    second = solver.run_instance(field, 3, constants.MODE_GL, SEED)
    assert first.rounds_per_level == second.rounds_per_level
    assert first.queries == second.queries
    assert first.flag == second.flag


def run_checks(names=None):
    """
    Runs the named checks (all by default), in registry order.
    """
    results = []
    for name, func in CHECKS.items():
        if names and name not in names:
            continue
        try:
            func()
        except AssertionError as exc:
            results.append(CheckResult(name, False, str(exc) or 'assertion'))
        except Exception as exc:
            logger.exception('Check %s raised', name)
            results.append(CheckResult(name, False, repr(exc)))
        else:
            results.append(CheckResult(name, True, ''))
    return results
