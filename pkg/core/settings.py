"""
Django settings for the parareal simulation project.

The project has no web surface: Django provides configuration, the ORM for run
manifests and the management commands that drive the simulations.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os


ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-parareal-simulation-local-key')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'rest_framework',
    'app.apps.AppConfig',
]


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DB_ENGINE = os.environ.get('DB_ENGINE', 'django.db.backends.sqlite3')

if DB_ENGINE == 'django.db.backends.sqlite3':
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': os.environ.get('DB_NAME', os.path.join(ROOT_DIR, 'db.sqlite3')),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'HOST': os.environ.get('DB_HOST', 'postgres'),
            'NAME': os.environ.get('DB_NAME', 'parareal'),
            'USER': os.environ.get('DB_USER', 'parareal'),
            'PASSWORD': os.environ.get('DB_PASSWORD'),
            'PORT': os.environ.get('DB_PORT', '5432'),
        }
    }


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Default primary key field type
# https://docs.djangoproject.com/en/4.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# https://docs.djangoproject.com/en/4.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '[{asctime}] {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('SIMULATION_LOG_LEVEL', 'INFO'),
    },
}


# Simulation runtime
SIMULATION = {
    # Directory receiving CSV outputs and manifests when `--out` is not given.
    'OUTPUT_DIR': os.environ.get('SIMULATION_OUTPUT_DIR', os.path.join(ROOT_DIR, 'output')),

    # How fine evaluations of one parareal iteration are executed: `serial`, `threads` or `celery`.
    'EXECUTOR': os.environ.get('SIMULATION_EXECUTOR', 'serial'),
    'THREADS': int(os.environ.get('SIMULATION_THREADS', '4')),

    # Seconds to wait for a group of fine evaluations dispatched to the Celery workers.
    'CELERY_TIMEOUT': int(os.environ.get('SIMULATION_CELERY_TIMEOUT', '3600')),

    # Stiffness guard: maximum number of reaction events within one interval.
    'EVENT_CAP': 10 ** 8,

    # Largest truncated state space accepted by the master equation oracle.
    'STATE_SPACE_CAP': 10 ** 6,
}

PARAREAL_DEFAULTS = {
    'max_iterations': 20,
    'residual_tolerance': 1e-3,
    'coarse': 'be',
    'coarse_rtol': 1e-6,
    'coarse_atol': 1e-8,
    'seed': 0,
    'homogenize': None,
}

NEWTON_DEFAULTS = {
    'max_iterations': 25,
    'residual_tolerance': 1e-10,
    'damping': 'halving',
    'max_halvings': 10,
}


# Celery configurations
CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'redis://redis:6379')
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', 'redis://redis:6379')
CELERY_ACCEPT_CONTENT = ['application/json']
CELERY_IMPORTS = ['app.tasks.simulations']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
