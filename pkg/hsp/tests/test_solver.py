"""
Statistical assertions use 4 sigma bounds under fixed seeds.
"""

import math

import numpy as np
from django.test import SimpleTestCase

from hsp import (borel, constants, exceptions, gf, linalg, oracle,
                 serializers, solver)
from hsp.linalg import Subspace


class GuessTests(SimpleTestCase):

    def setUp(self):
        self.field = gf.get_field(3)
        self.rng = np.random.default_rng(21)

    def test_verify_accepts_only_the_hidden_line(self):
        field = self.field
        for _ in range(5):
            hiding, descriptor = oracle.make_instance(field, 2, self.rng)
            accepted = []
            for u in ([0, 1], [1, 0], [1, 1], [1, 2]):
                before = hiding.query_count
                ok, Z = solver.verify_guess(hiding, u)
                self.assertEqual(hiding.query_count, before + 2)
                self.assertEqual(Z[:, -1].tolist(), u)
                if ok:
                    accepted.append(Subspace.span(field, u, 2))
            self.assertEqual(accepted, [descriptor.flag.last])

    def test_verify_true_generator_in_degree_four(self):
        field = self.field
        hiding, descriptor = oracle.make_instance(field, 4, self.rng)
        u = descriptor.flag.last.basis[0]
        ok, _ = solver.verify_guess(hiding, field.mul(u, 2))
        self.assertTrue(ok)
        self.assertEqual(hiding.query_count, 4)

    def test_verify_rejects_zero(self):
        hiding, _ = oracle.make_instance(self.field, 2, self.rng)
        with self.assertRaises(exceptions.OutsideDomain):
            solver.verify_guess(hiding, [0, 0])

    def test_guess_round(self):
        field = self.field
        hiding, _ = oracle.make_instance(field, 3, self.rng)
        guesses = 0
        for _ in range(300):
            outcome = solver.play_round(hiding, self.rng)
            if not outcome.prepared:
                self.assertIsNone(outcome.Y)
                continue
            if outcome.guess is None:
                self.assertNotEqual(linalg.rank(field, outcome.Y), 2)
                continue
            guesses += 1
            u = outcome.guess
            self.assertEqual(int(u[np.flatnonzero(u)[0]]), 1)
            self.assertEqual(linalg.rank(field, outcome.Y), 2)
            self.assertFalse(np.any(linalg.mat_mul(
                field, linalg.transpose(field, outcome.Y), u)))
        self.assertGreater(guesses, 0)

    def test_normalize(self):
        field = gf.get_field(5)
        self.assertEqual(solver.normalize(field, np.array([0, 3, 1])).tolist(),
                         [0, 1, 2])
        self.assertEqual(solver.normalize(field, np.array([0, 0])).tolist(),
                         [0, 0])

    def test_round_success_frequency(self):
        field = self.field
        hiding, descriptor = oracle.make_instance(field, 2, self.rng)
        draws = 10000
        hits = 0
        for _ in range(draws):
            u = solver.guess_round(hiding, self.rng)
            if u is not None and Subspace.span(field, u, 2) == \
                    descriptor.flag.last:
                hits += 1
        p = float(solver.round_success_probability(field, 2))
        self.assertAlmostEqual(p, 16 / 27 * 14 / 27)
        self.assertLess(abs(hits / draws - p),
                        4 * math.sqrt(p * (1 - p) / draws))


class BudgetTests(SimpleTestCase):

    def test_round_budget(self):
        self.assertEqual(solver.round_budget(3, 2), 254)
        self.assertEqual(solver.round_budget(2, 1), 200)
        field = gf.get_field(5)
        self.assertEqual(solver.round_budget(5, 2, field.nth_powers(2)),
                         4 * solver.round_budget(5, 2))

    def test_predicted_rounds(self):
        field = gf.get_field(3)
        self.assertEqual(solver.predicted_rounds(field, 1), 0.0)
        self.assertAlmostEqual(solver.predicted_rounds(field, 2),
                               27 * 27 / (16 * 14))
        self.assertGreater(solver.predicted_rounds(field, 3),
                           solver.predicted_rounds(field, 2))
        self.assertLess(solver.predicted_rounds(gf.get_field(5), 3),
                        solver.predicted_rounds(gf.get_field(2), 3))

    def test_sl_rounds_are_harder(self):
        field = gf.get_field(3)
        self.assertLess(
            solver.round_success_probability(field, 2, field.nth_powers(2)),
            solver.round_success_probability(field, 2))

    def test_config_validation(self):
        with self.assertRaises(exceptions.HspError):
            solver.SolverConfig(max_rounds_per_level=0)
        with self.assertRaises(exceptions.HspError):
            solver.SolverConfig(backend='statevector')
        with self.assertRaises(exceptions.HspError):
            solver.SolverConfig(mode='pgl')


class SolveGLTests(SimpleTestCase):

    def test_degree_one(self):
        field = gf.get_field(3)
        report = solver.run_instance(field, 1, constants.MODE_GL, 1)
        self.assertTrue(report.success)
        self.assertEqual(report.flag.members(), [])
        self.assertEqual(report.rounds_total, 0)
        self.assertEqual(report.oracle_queries, 0)

    def test_recovery(self):
        for n, q in ((2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)):
            field = gf.field_from_order(q)
            for trial in range(10):
                rng = np.random.default_rng([n, q, trial])
                hiding, descriptor = oracle.make_instance(field, n, rng)
                report = solver.solve_gl(hiding, solver.SolverConfig(
                    seed=trial))
                self.assertTrue(report.success, report.error)
                self.assertEqual(report.flag, descriptor.flag)
                self.assertEqual(len(report.rounds_per_level), n - 1)
                self.assertEqual(report.queries, hiding.query_count)
                self.assertTrue(solver.certify(hiding, report.flag))

    def test_query_accounting(self):
        field = gf.get_field(3)
        for seed in range(20):
            report = solver.run_instance(field, 2, constants.MODE_GL, seed)
            # One query per round plus two per verified guess.
            self.assertEqual(report.oracle_queries,
                             report.rounds_total +
                             2 * (report.verify_failures + 1))
        hiding, _ = oracle.make_instance(field, 3, np.random.default_rng(1))
        report = solver.solve_gl(hiding, solver.SolverConfig(seed=2))
        self.assertEqual(report.queries, hiding.query_count)
        verifications = report.oracle_queries - report.rounds_total - (3 + 2)
        self.assertGreaterEqual(verifications, 2 * report.verify_failures)
        self.assertLessEqual(verifications, 3 * report.verify_failures)
        self.assertEqual(report.certification_queries,
                         1 + len(borel.stabilizer_generators(report.flag)))

    def test_recovery_and_mean_rounds(self):
        trials = 200
        for n in (2, 3):
            for q in (2, 3, 4, 5):
                field = gf.field_from_order(q)
                reports = [solver.run_instance(field, n, constants.MODE_GL,
                                               [77, n, q, trial])
                           for trial in range(trials)]
                for report in reports:
                    self.assertTrue(report.success, report.error)
                p = float(solver.round_success_probability(field, n))
                mean = sum(report.top_level_rounds
                           for report in reports) / trials
                sigma = math.sqrt((1 - p) / p ** 2 / trials)
                self.assertLess(abs(mean - 1 / p), 4 * sigma, (n, q))

    def test_brute_backend(self):
        field = gf.get_field(2)
        config = solver.SolverConfig(backend=constants.BACKEND_BRUTE)
        for trial in range(5):
            report = solver.run_instance(field, 2, constants.MODE_GL, trial,
                                         config)
            self.assertTrue(report.success, report.error)

    def test_budget_exhaustion_is_reported(self):
        field = gf.get_field(2)
        config = solver.SolverConfig(max_rounds_per_level=1)
        reports = [solver.run_instance(field, 3, constants.MODE_GL, trial,
                                       config) for trial in range(10)]
        failures = [report for report in reports if not report.success]
        self.assertTrue(failures)
        for report in failures:
            self.assertIsNone(report.flag)
            self.assertIn('No verified guess', report.error)

    def test_certification_rejects_wrong_flag(self):
        field = gf.get_field(3)
        swap = linalg.as_matrix(field, [[0, 1], [1, 0]])
        hiding = oracle.HidingOracle(field, swap)
        self.assertFalse(solver.certify(hiding, borel.standard_flag(field, 2)))

    def test_mode_checks(self):
        field = gf.get_field(3)
        rng = np.random.default_rng(3)
        gl, _ = oracle.make_instance(field, 2, rng)
        sl, _ = oracle.make_instance(field, 2, rng, constants.MODE_SL)
        with self.assertRaises(exceptions.OutsideDomain):
            solver.solve_gl(sl, solver.SolverConfig())
        with self.assertRaises(exceptions.OutsideDomain):
            solver.solve_sl(gl, solver.SolverConfig())

    def test_determinism(self):
        field = gf.get_field(3)
        outputs = [
            serializers.render(serializers.SolveReportSerializer(
                solver.run_instance(field, 3, constants.MODE_GL, 99)).data)
            for _ in range(2)]
        self.assertEqual(outputs[0], outputs[1])


class SolveSLTests(SimpleTestCase):

    def test_recovery(self):
        for n, q in ((2, 3), (2, 5), (3, 3), (3, 5)):
            field = gf.get_field(q)
            for trial in range(100):
                rng = np.random.default_rng([n, q, trial])
                hiding, descriptor = oracle.make_instance(field, n, rng,
                                                          constants.MODE_SL)
                report = solver.solve_sl(hiding, solver.SolverConfig(
                    seed=trial, mode=constants.MODE_SL))
                self.assertTrue(report.success, report.error)
                self.assertEqual(report.flag, descriptor.flag)
                self.assertEqual(report.queries, hiding.query_count)
                self.assertTrue(solver.certify(hiding, report.flag,
                                               special=True))

    def test_dispatch(self):
        field = gf.get_field(5)
        report = solver.run_instance(field, 2, constants.MODE_SL, 4)
        self.assertTrue(report.success)
        self.assertEqual(report.mode, constants.MODE_SL)
