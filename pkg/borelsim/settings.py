"""
Django settings for the borelsim project.

The project has no web surface: it only needs Django for its settings,
logging configuration, management commands and test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/3.1/ref/settings/
"""

import os

import borelsim.config as config

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Nothing is served or signed; the key only satisfies Django's checks.
SECRET_KEY = 'borelsim-offline-key'

DEBUG = False

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    # Rest framework apps
    'rest_framework',

    # Our apps
    'hsp.apps.HspConfig',
]

# No models, no database.
DATABASES = {}

# Internationalization
# https://docs.djangoproject.com/en/3.1/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_L10N = False

USE_TZ = True

# Rest framework settings
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'UNAUTHENTICATED_USER': None,
    'COMPACT_JSON': False,
}

# Logging: the only environment knob the tool reads.
HSP_LOG_LEVEL = os.environ.get('HSP_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'hsp': {
            'handlers': ['console'],
            'level': HSP_LOG_LEVEL,
            'propagate': False,
        },
    },
}

# Run-time knobs for the management commands
HSP_DEFAULT_SEED = config.DEFAULT_SEED
HSP_OUTPUT_DIR = os.path.join(BASE_DIR, config.OUTPUT_DIR)
HSP_WORKERS = config.WORKERS
