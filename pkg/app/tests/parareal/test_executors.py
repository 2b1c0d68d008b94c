from django.test import TestCase, override_settings
from unittest import mock

from app.fine.propagators import EXACT, FineMode
from app.kinetics.builtins import build_birth_death
from app.parareal.executors import CeleryExecutor, SerialExecutor, ThreadExecutor, make_executor
from app.parareal.jobs import FineJob, result_to_payload, run_job


def _jobs(mode=EXACT):
    return [FineJob(n, (float(n),), n - 1.0, 1.0, 3, mode) for n in range(1, 7)]


class TestExecutors(TestCase):
    """ Test the fine evaluation executors """

    def test_threads_match_serial(self):
        net = build_birth_death()

        actual = ThreadExecutor(3).map(net, _jobs(FineMode(0.5)))
        expected = SerialExecutor().map(net, _jobs(FineMode(0.5)))
        self.assertEqual(actual, expected)

    def test_celery_dispatches_one_group(self):
        net, jobs = build_birth_death(), _jobs()
        payloads = [result_to_payload(run_job(net, job)) for job in jobs]

        with mock.patch('app.parareal.executors.group') as group:
            group.return_value.apply_async.return_value.get.return_value = payloads
            actual = CeleryExecutor(timeout=5).map(net, jobs)

        expected = SerialExecutor().map(net, jobs)
        self.assertEqual(actual, expected)
        group.return_value.apply_async.return_value.get.assert_called_once_with(timeout=5)


class TestMakeExecutor(TestCase):
    """ Test the `make_executor` method """

    def test_names(self):
        self.assertIsInstance(make_executor('serial'), SerialExecutor)
        self.assertIsInstance(make_executor('celery'), CeleryExecutor)

        executor = make_executor('threads', 2)
        self.assertIsInstance(executor, ThreadExecutor)
        self.assertEqual(executor.threads, 2)

    @override_settings(SIMULATION={'EXECUTOR': 'threads', 'THREADS': 5, 'CELERY_TIMEOUT': 10})
    def test_settings_default(self):
        executor = make_executor()

        self.assertIsInstance(executor, ThreadExecutor)
        self.assertEqual(executor.threads, 5)

    def test_unknown_name(self):
        with self.assertRaises(ValueError):
            make_executor('mpi')


class TestFineJob(TestCase):
    """ Test the `FineJob` payloads """

    def test_payload(self):
        job = FineJob(2, (3.0, 4.0), 1.5, 1.5, 9, FineMode(0.25), 1000)

        actual = FineJob.from_payload(job.to_payload())
        expected = job
        self.assertEqual(actual, expected)
