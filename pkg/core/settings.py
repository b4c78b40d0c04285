import os
from pathlib import Path
import dj_database_url

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-default-key-for-dev')
DEBUG = os.environ.get('DEBUG', '0') == '1'

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Internal Apps
    'algebra',
    'verification',
]

# Database configuration
# SQLite unless DATABASE_URL points elsewhere; only `verify --save` writes to it
DATABASES = {
    'default': dj_database_url.config(
        default='sqlite:///' + os.path.join(BASE_DIR, 'db.sqlite3'),
        conn_max_age=600
    )
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Verification engine
VERIFIER = {
    'DEFAULT_ORDER': os.environ.get('VERIFIER_DEFAULT_ORDER', 'grevlex'),
    'DEFAULT_BOUND': int(os.environ.get('VERIFIER_DEFAULT_BOUND', '3')),
    'DEFAULT_SEED': int(os.environ.get('VERIFIER_DEFAULT_SEED', '0')),
    'SCENARIO_DIR': BASE_DIR / 'algebra' / 'data' / 'cycles',
    'MAX_PARSE_EXPONENT': 64,
    'MAX_PARSE_TERMS': int(os.environ.get('VERIFIER_MAX_PARSE_TERMS', '2000')),
    'MAX_PARSE_GENERATORS': int(os.environ.get('VERIFIER_MAX_PARSE_GENERATORS', '2000')),
    'MAX_SEARCH_CANDIDATES': int(os.environ.get('VERIFIER_MAX_SEARCH_CANDIDATES', '10000000')),
}

# Logging
LOG_LEVEL = os.environ.get('VERIFIER_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'algebra': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
        'verification': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
    },
}
