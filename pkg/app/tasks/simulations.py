from celery.utils.log import get_task_logger
from typing import Dict

from app.io.serializers import network_from_payload
from app.parareal.jobs import FineJob, result_to_payload, run_job
from core import celery_app


logger = get_task_logger(__name__)


@celery_app.task(name='app.tasks.simulations.propagate_interval')
def propagate_interval(network: Dict, job: Dict) -> Dict:
    """
    Task to run one fine evaluation of a parareal iteration on a worker.
    """
    logger.info(f'Propagating interval {job["interval"]}...')

    net = network_from_payload(network)
    result = run_job(net, FineJob.from_payload(job))

    logger.info(f'Interval {job["interval"]} finished after {result.event_count} events...')

    return result_to_payload(result)
