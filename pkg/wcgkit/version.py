# GENERATED VERSION FILE
# TIME: Sat Oct 17 19:18:07 2026

__version__ = '0.1.0+unknown'
short_version = '0.1.0'
