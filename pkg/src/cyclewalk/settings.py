# src/cyclewalk/settings.py

import os
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Only used by Django internals; nothing here is served.
SECRET_KEY = config('SECRET_KEY', default='cyclewalk-local-only')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []

# Application definition
LOCAL_APPS = [
    'core',
    'graphs',
    'forests',
    'energy',
    'walks',
    'chains',
    'diagnostics',
    'enumerator',
]

INSTALLED_APPS = LOCAL_APPS

# Sampler settings
CYCLEWALK = {
    'ENUMERATION_GUARD': config('CYCLEWALK_ENUMERATION_GUARD', default=36, cast=int),
    'DEFAULT_BINS': config('CYCLEWALK_DEFAULT_BINS', default=200, cast=int),
    'MAX_SEED_RETRIES': config('CYCLEWALK_MAX_SEED_RETRIES', default=100, cast=int),
    'AUDIT_EVERY': config('CYCLEWALK_AUDIT_EVERY', default=0, cast=int),
    'WORKERS': config('CYCLEWALK_WORKERS', default=os.cpu_count() or 1, cast=int),
    'OUTPUT_DIR': config('CYCLEWALK_OUTPUT_DIR', default=str(BASE_DIR / 'runs')),
    'FIXTURES_DIR': BASE_DIR / 'fixtures',
    'CHECK_GRAPHS': config(
        'CYCLEWALK_CHECK_GRAPHS',
        default='',
        cast=lambda v: [s.strip() for s in v.split(',') if s.strip()],
    ),
}

# No database: every command works on files.
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LOG_LEVEL = config('CYCLEWALK_LOG_LEVEL', default='INFO')

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': BASE_DIR / 'logs' / 'cyclewalk.log',
            'formatter': 'verbose',
        },
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console', 'file'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'cyclewalk': {
            'handlers': ['console', 'file'],
            'level': 'DEBUG',
            'propagate': False,
        },
    },
}

# Create logs directory
os.makedirs(BASE_DIR / 'logs', exist_ok=True)
