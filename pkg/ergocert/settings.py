# ErgoCert ergocert/settings.py

import os

from django.core.exceptions import ImproperlyConfigured


# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

ERGOCERT_DEPLOYMENT = os.environ.get('ERGOCERT_DEPLOYMENT', 'development')

if ERGOCERT_DEPLOYMENT == 'development':

    DEBUG = True
    # local runs and the test suite never serve requests, a fixed key is fine here
    SECRET_KEY = os.environ.get('ERGOCERT_SECRET_KEY', 'ergocert-development-only-key')

elif ERGOCERT_DEPLOYMENT == 'production':

    DEBUG = False
    try:
        SECRET_KEY = os.environ['ERGOCERT_SECRET_KEY']
    except KeyError:
        raise ImproperlyConfigured('Environment does not contain ERGOCERT_SECRET_KEY')

else:
    raise ImproperlyConfigured("ERGOCERT_DEPLOYMENT must be one of 'development' or 'production'")

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',

    'markov',
]

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('ERGOCERT_DATABASE', os.path.join(BASE_DIR, 'db.sqlite3')),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging
# https://docs.djangoproject.com/en/4.2/topics/logging/

ERGOCERT_LOG_LEVEL = os.environ.get('ERGOCERT_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'markov': {
            'handlers': ['console'],
            'level': ERGOCERT_LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Numerical defaults of the scenario runner; command-line flags override them per run.

ERGOCERT = {
    'TOL': 1e-9,
    'SEED': 0,
    'CERT_MARGIN': 1e-6,
    'RHO_TOL': 1e-6,
    'CURVE_POINTS': 200,
    'RECORD_RUNS': True,
    'REPORT_DIR': os.environ.get('ERGOCERT_REPORT_DIR', os.path.join(BASE_DIR, 'reports')),
}
