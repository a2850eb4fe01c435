# flake8: noqa
from .algebra import (CompatibilityError, ConfigError, DegenerateArrangementError, ModelError, PrimitiveSearchExhausted,
                      PtwallsError, RingMismatchError, ShapeMismatchError, TruncationTooSmall, UnsupportedChamberError,
                      WindowTooSmallError)
from .scenarios import *
from .version import __gitsha__, __version__
