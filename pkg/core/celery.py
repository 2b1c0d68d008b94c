import os

from celery import Celery


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')

app = Celery('parareal')
app.config_from_object('django.conf:settings', namespace='CELERY')

# Fine evaluations are long; a worker process takes one interval at a time.
app.conf.worker_prefetch_multiplier = 1
app.conf.task_acks_late = True

app.autodiscover_tasks()
