"""Deliberate sign/projection faults for mutation testing of the suites.

Faults are scoped with :func:`inject` and read with :func:`active`; they are
stored in a context variable so concurrent evaluations do not interfere.
"""
from __future__ import annotations

import contextvars
from contextlib import contextmanager
from typing import FrozenSet, Iterator

MIDDLE_SIGN = "middle-sign"            # flip the sign of -del_+ del_- in m1
M2_NO_PROJECTION = "m2-no-projection"  # omit Pi^p in m2 for low total degree
G_THETA_SIGN = "G-theta-sign"          # flip the sign of the theta slot of G
PAIRING_SIGN = "pairing-sign"          # drop (-1)^k in the pairing

KNOWN_FAULTS = frozenset({MIDDLE_SIGN, M2_NO_PROJECTION, G_THETA_SIGN, PAIRING_SIGN})

_ACTIVE: contextvars.ContextVar[FrozenSet[str]] = contextvars.ContextVar("fpcone_faults", default=frozenset())


@contextmanager
def inject(*names: str) -> Iterator[None]:
    unknown = set(names) - KNOWN_FAULTS
    if unknown:
        raise ValueError(f"unknown fault(s): {sorted(unknown)}; known: {sorted(KNOWN_FAULTS)}")
    token = _ACTIVE.set(_ACTIVE.get() | frozenset(names))
    try:
        yield
    finally:
        _ACTIVE.reset(token)


def active(name: str) -> bool:
    return name in _ACTIVE.get()


def active_set() -> FrozenSet[str]:
    return _ACTIVE.get()
