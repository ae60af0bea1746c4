"""Exponential sums over sifted integer sequences."""

from .errors import CapError, DomainError, InvariantError
from .arithmetic import Angle, Phase, frac_nsq, nearest_int_distance, reduce_rational
from ._backend import available as available_backends

__version__ = "0.1.0"


def backend_name():
    from . import _backend

    return _backend.active().NAME
