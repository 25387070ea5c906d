"""
This module contains the hidden Borel subgroup algorithm.

Each recursion level repeats guess rounds (prepare a coset state, Fourier
sample, take the kernel of Y^T when Y has rank n - 1) until a guess for the
last flag member survives verification. The oracle is then conjugated so
that member becomes span(e_n), restricted to GL_{n-1}, and solved again; the
answers are lifted back into a flag of F_q^n.
"""

import logging
import math
import time

import numpy as np

from . import borel, constants, exceptions, linalg, oracle, quantum

logger = logging.getLogger(__name__)


class SolverConfig(object):
    """
    Solver settings. `max_rounds_per_level` of None uses `round_budget`.
    `seed` is anything `numpy.random.default_rng` accepts.
    """

    def __init__(self, max_rounds_per_level=None, seed=None,
                 backend=constants.BACKEND_EXACT, mode=constants.MODE_GL):
        if max_rounds_per_level is not None and max_rounds_per_level < 1:
            raise exceptions.HspError(
                detail='max_rounds_per_level must be at least 1.')
        if backend not in constants.BACKENDS:
            raise exceptions.HspError(
                detail='Unknown backend "{}".'.format(backend))
        if mode not in constants.MODES:
            raise exceptions.HspError(
                detail='Unknown mode "{}".'.format(mode))
        self.max_rounds_per_level = max_rounds_per_level
        self.seed = seed
        self.backend = backend
        self.mode = mode


class SolveReport(object):
    """
    Outcome and accounting of one solve. `oracle_queries` counts the
    algorithm's queries, `certification_queries` the final soundness check;
    together they equal the oracle's counter.
    """

    def __init__(self, n, p, r, mode, seed=None):
        self.n = n
        self.p = p
        self.r = r
        self.mode = mode
        self.seed = seed
        self.flag = None
        self.rounds_per_level = []
        self.oracle_queries = 0
        self.certification_queries = 0
        self.prep_failures = 0
        self.verify_failures = 0
        self.wall_time = None
        self.success = False
        self.error = None

    @property
    def rounds_total(self):
        return sum(self.rounds_per_level)

    @property
    def top_level_rounds(self):
        return self.rounds_per_level[0] if self.rounds_per_level else 0

    @property
    def queries(self):
        return self.oracle_queries + self.certification_queries


class RoundOutcome(object):
    """
    What one guess round produced: whether the preparation gave a coset
    state, the measured Y and the normalised kernel generator, if any.
    """

    def __init__(self, prepared, Y=None, guess=None):
        self.prepared = prepared
        self.Y = Y
        self.guess = guess


def normalize(field, u):
    """
    Scales u so that its first nonzero coordinate is 1.
    """
    nonzero = np.flatnonzero(u)
    if len(nonzero) == 0:
        return u
    return linalg.scalar_mul(field, field.inv(u[nonzero[0]]), u)


def play_round(view, rng, backend=constants.BACKEND_EXACT):
    field, n = view.field, view.n
    prep = quantum.prep_coset_state(view, rng)
    if not prep.is_coset:
        return RoundOutcome(False)
    Y = quantum.measure_coset_state(view, prep.representative, rng, backend)
    if linalg.rank(field, Y) != n - 1:
        return RoundOutcome(True, Y)
    kernel = linalg.kernel(field, linalg.transpose(field, Y))
    return RoundOutcome(True, Y, normalize(field, kernel.basis[0]))


def guess_round(view, rng, backend=constants.BACKEND_EXACT):
    """
    One guess for the last member of the hidden flag, or None.
    """
    return play_round(view, rng, backend).guess


def verification_matrices(field, n):
    """
    The identity and the n - 1 matrices I + E_{n,k}, k < n.
    """
    matrices = [linalg.identity(field, n)]
    for k in range(n - 1):
        A = linalg.identity(field, n)
        A[n - 1, k] = 1
        matrices.append(A)
    return matrices


def verify_guess(view, u):
    """
    Returns (accepted, Z) with Z an invertible completion of u. The guess is
    correct iff the conjugated oracle gives every verification matrix the
    label of the identity.
    """
    u = np.asarray(u, dtype=np.int64)
    if not np.any(u):
        raise exceptions.OutsideDomain(reason='the guessed vector is zero')
    Z = linalg.complete_to_invertible(view.field, u)
    conjugated = view.conjugated(Z)
    labels = [conjugated.query(A)
              for A in verification_matrices(view.field, view.n)]
    return all(label == labels[0] for label in labels), Z


def round_budget(q, n, determinant_group=None):
    """
    ceil(50 (q/(q-1))^{2n}) rounds, times n gcd(n', q-1) when the hidden
    group is restricted to determinants in (F_q^*)^{n'}.
    """
    budget = math.ceil(constants.ROUND_BUDGET_FACTOR *
                       (q / (q - 1)) ** (2 * n))
    if determinant_group is not None:
        budget *= n * ((q - 1) // len(determinant_group))
    return budget


def round_success_probability(field, n, determinant_group=None):
    """
    Probability that one round yields the correct guess: the coset
    preparation succeeds and Y has rank n - 1 with the right kernel.
    """
    law = quantum.torus_law(field, n, determinant_group)
    prep = quantum.prep_success_probability(field, n, determinant_group)
    return prep * law.kernel_probability()


def predicted_rounds(field, n, determinant_group=None):
    """
    Expected guess rounds at the top level; degree one needs none.
    """
    if n == 1:
        return 0.0
    return 1 / float(round_success_probability(field, n, determinant_group))


class _Solver(object):

    def __init__(self, config, report):
        self.config = config
        self.report = report
        self.rng = np.random.default_rng(config.seed)

    def solve(self, view):
        field, n = view.field, view.n
        if n == 1:
            return borel.Flag(field, 1, [])
        budget = self.config.max_rounds_per_level or round_budget(
            field.q, n, view.determinant_group)
        level = len(self.report.rounds_per_level)
        self.report.rounds_per_level.append(0)
        for rounds in range(1, budget + 1):
            self.report.rounds_per_level[level] = rounds
            outcome = play_round(view, self.rng, self.config.backend)
            if not outcome.prepared:
                self.report.prep_failures += 1
                continue
            if outcome.guess is None:
                continue
            accepted, Z = verify_guess(view, outcome.guess)
            if not accepted:
                self.report.verify_failures += 1
                continue
            logger.debug('Degree %d solved after %d rounds', n, rounds)
            sub = self.solve(view.conjugated(Z).restricted())
            return borel.lift_flag(sub, Z)
        raise exceptions.RoundBudgetExhausted(rounds=budget, n=n)


def certify(hiding_oracle, flag, special=False):
    """
    True if every stabilizer generator of `flag` gets the identity's label.
    """
    identity = hiding_oracle.query(linalg.identity(hiding_oracle.field,
                                                   hiding_oracle.n))
    return all(hiding_oracle.query(G) == identity
               for G in borel.stabilizer_generators(flag, special))


def _run(hiding_oracle, view, config, special):
    field = hiding_oracle.field
    report = SolveReport(hiding_oracle.n, field.p, field.r, hiding_oracle.mode,
                         config.seed if isinstance(config.seed, int) else None)
    start = time.perf_counter()
    before = hiding_oracle.query_count
    try:
        flag = _Solver(config, report).solve(view)
    except exceptions.RoundBudgetExhausted as exc:
        logger.warning('%s', exc.detail)
        report.error = str(exc.detail)
        flag = None
    report.oracle_queries = hiding_oracle.query_count - before
    if flag is not None:
        before = hiding_oracle.query_count
        certified = certify(hiding_oracle, flag, special)
        report.certification_queries = hiding_oracle.query_count - before
        if certified:
            report.flag = flag
            report.success = True
        else:
            report.error = 'The recovered flag failed certification.'
            logger.warning(report.error)
    report.wall_time = time.perf_counter() - start
    logger.debug('Solved degree %d over F_%d in %.3fs with %d queries',
                 report.n, field.q, report.wall_time, report.queries)
    return report


def solve_gl(hiding_oracle, config):
    if hiding_oracle.mode != constants.MODE_GL:
        raise exceptions.OutsideDomain(reason='solve_gl needs a GL oracle')
    return _run(hiding_oracle, hiding_oracle, config, special=False)


def solve_sl(hiding_oracle, config):
    """
    Runs the pipeline on the determinant-root extension of an SL oracle and
    certifies against the Borel subgroup of SL_n.
    """
    if hiding_oracle.mode != constants.MODE_SL:
        raise exceptions.OutsideDomain(reason='solve_sl needs an SL oracle')
    return _run(hiding_oracle, oracle.sl_oracle(hiding_oracle), config,
                special=True)


def solve(hiding_oracle, config):
    if hiding_oracle.mode == constants.MODE_SL:
        return solve_sl(hiding_oracle, config)
    return solve_gl(hiding_oracle, config)


def run_instance(field, n, mode, seed, config=None):
    """
    Generates an instance from `seed`, solves it and checks the answer
    against the hidden flag. The instance and the solver use independent
    streams spawned from the seed.
    """
    config = config or SolverConfig(mode=mode)
    instance_seed, solver_seed = np.random.SeedSequence(seed).spawn(2)
    hiding_oracle, descriptor = oracle.make_instance(
        field, n, np.random.default_rng(instance_seed), mode)
    report = solve(hiding_oracle, SolverConfig(config.max_rounds_per_level,
                                               solver_seed, config.backend,
                                               mode))
    report.seed = seed
    if report.success and report.flag != descriptor.flag:
        report.success = False
        report.error = 'The recovered flag differs from the hidden flag.'
        logger.warning(report.error)
    return report
