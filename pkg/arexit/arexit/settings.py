from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/4.2/howto/deployment/checklist/

# The project has no web surface; the key is only here because Django
# expects the setting to exist.
SECRET_KEY = 'django-insecure-arexit-command-line-only'

DEBUG = False

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'exitrates.apps.ExitratesConfig',
    'montecarlo.apps.MontecarloConfig',
    'experiments.apps.ExperimentsConfig',
]

# No models, no database.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging
# https://docs.djangoproject.com/en/4.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'exitrates': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
        'montecarlo': {
            'handlers': ['console'],
            'level': 'INFO',
        },
        'experiments': {
            'handlers': ['console'],
            'level': 'INFO',
        },
    },
}


# Exit-time computations
#
# Defaults for every command; a run config file overrides them and
# command-line flags override the config file.

AREXIT = {
    # Base key of the Philox generator; path i uses key (SEED, i).
    'SEED': 20100601,
    'N_PATHS': 1000,
    # Per-path step cap; a path reaching it is counted as censored.
    'MAX_STEPS': 10**9,
    # Worker threads for path simulation: 'auto' or a positive integer.
    'THREADS': 'auto',
    # Normal draws requested from the generator per kernel refill.
    'BLOCK_SIZE': 4096,
    'OUTPUT_FORMAT': 'csv',
    'SCHEMA_VERSION': '1',
    # Horizon search used to report the asymptotic regime.
    'ASYMPTOTIC_TOL': 1e-9,
    'ASYMPTOTIC_MAX_HORIZON': 100_000,
    # Finite-horizon exponents listed by `analyze`.
    'HORIZONS': [1, 2, 5, 10, 20, 50, 100],
    'VERIFY_TRIALS': 100,
    'VERIFY_SEED': 1213,
}
