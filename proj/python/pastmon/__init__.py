"""Online monitors for past-time temporal logic specifications."""

from ._core import (
    CapacityError,
    DecodeError,
    Error,
    Monitor,
    MonotonicityError,
    ParseError,
    TypeError,
)

__all__ = [
    "CapacityError",
    "DecodeError",
    "Error",
    "Monitor",
    "MonotonicityError",
    "ParseError",
    "TypeError",
    "discrete_timed_monitor",
    "dense_timed_monitor",
]


def _build(spec, dense, condense=True, timefield="time", semantics="boolean",
           bits=16, scale=1000, predicates=None):
    if semantics in ("bool", "boolean"):
        robust = False
    elif semantics == "robust":
        robust = True
    else:
        raise ValueError(f"unknown semantics {semantics!r}")
    return Monitor(spec, dense, robust, condense, timefield, int(scale), int(bits),
                   dict(predicates or {}))


def discrete_timed_monitor(spec, **options):
    """Monitor over message indices. update(dict) returns one verdict dict,
    or None when condensing suppresses an unchanged value."""
    return _build(spec, False, **options)


def dense_timed_monitor(spec, **options):
    """Monitor over real-valued timestamps read from `timefield`.
    update(dict) returns the list of verdicts covering the elapsed span."""
    return _build(spec, True, **options)
