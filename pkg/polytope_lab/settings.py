"""
Django settings for polytope_lab project.

The project has no web surface: it is driven through management commands
(``python manage.py polytope ...``). Database settings exist only so that
Django's test machinery can start.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    "DJANGO_SECRET_KEY",
    "django-insecure-polytope-lab-local-only",
)

DEBUG = os.environ.get("DJANGO_DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "rest_framework",
    "groups",
    "polytopes",
]

MIDDLEWARE = []

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": ":memory:",
    }
}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Computation caps
# Every cap converts a pathological input into a clean ResourceLimitError.

MAX_COSETS = int(os.environ.get("MAX_COSETS", 1_000_000))
MAX_ENUM = int(os.environ.get("MAX_ENUM", 1_000_000))
MAX_LATTICE = int(os.environ.get("MAX_LATTICE", 10_000))

# Explicit coset representatives are stored per chain level only while
# orbit size * degree stays under this many entries.
TRANSVERSAL_CACHE_LIMIT = int(os.environ.get("TRANSVERSAL_CACHE_LIMIT", 4_000_000))

# Bump when the JSON report layout changes.
REPORT_SCHEMA_VERSION = "1.0"


# Logging

LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "groups": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "polytopes": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
