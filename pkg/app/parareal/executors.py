"""
Fork-join executors for the fine evaluations of one parareal iteration.

All executors return results in job order; they differ only in where the jobs run, so a run
gives identical numbers with any of them.
"""

from celery import group
from concurrent.futures import ThreadPoolExecutor
from django.conf import settings
from typing import List, Optional, Sequence

from app.fine.propagators import FineResult
from app.kinetics.networks import ReactionNetwork
from app.parareal.jobs import FineJob, result_from_payload, run_job


EXECUTOR_SERIAL = 'serial'
EXECUTOR_THREADS = 'threads'
EXECUTOR_CELERY = 'celery'


class SerialExecutor:
    name = EXECUTOR_SERIAL

    def map(self, net: ReactionNetwork, jobs: Sequence[FineJob]) -> List[FineResult]:
        return [run_job(net, job) for job in jobs]


class ThreadExecutor:
    name = EXECUTOR_THREADS

    def __init__(self, threads: int):
        self.threads = max(1, int(threads))

    def map(self, net: ReactionNetwork, jobs: Sequence[FineJob]) -> List[FineResult]:
        if self.threads == 1 or len(jobs) <= 1:
            return [run_job(net, job) for job in jobs]

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda job: run_job(net, job), jobs))


class CeleryExecutor:
    """
    Fan the jobs out to the Celery workers as one group and wait for all of them.
    """
    name = EXECUTOR_CELERY

    def __init__(self, timeout: Optional[int] = None):
        self.timeout = timeout or settings.SIMULATION['CELERY_TIMEOUT']

    def map(self, net: ReactionNetwork, jobs: Sequence[FineJob]) -> List[FineResult]:
        from app.io.serializers import network_to_payload
        from app.tasks.simulations import propagate_interval

        network = network_to_payload(net)
        job_group = group(propagate_interval.s(network, job.to_payload()) for job in jobs)
        payloads = job_group.apply_async().get(timeout=self.timeout)

        return [result_from_payload(payload) for payload in payloads]


def make_executor(name: Optional[str] = None, threads: Optional[int] = None):
    """
    Build the executor named in the arguments or, by default, in `SIMULATION['EXECUTOR']`.
    """
    name = name or settings.SIMULATION['EXECUTOR']

    if name == EXECUTOR_SERIAL:
        return SerialExecutor()

    if name == EXECUTOR_THREADS:
        return ThreadExecutor(threads or settings.SIMULATION['THREADS'])

    if name == EXECUTOR_CELERY:
        return CeleryExecutor()

    raise ValueError(f'Executor {name} is not supported.')
