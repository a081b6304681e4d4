# Only the error types are re-exported here: validators and suites import
# qaff.models, which itself imports qaff.utils.errors.
from qaff.utils.errors import QaffError, ConfigError, CorruptCache

__all__ = [
    'QaffError',
    'ConfigError',
    'CorruptCache',
]
