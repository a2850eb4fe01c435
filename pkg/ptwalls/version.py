# GENERATED VERSION FILE
# TIME: Sat Oct 17 06:13:01 2026
__version__ = '0.1.0'
__gitsha__ = 'unknown'
version_info = (0, 1, 0)
