"""Size guardrails shared by every construction.

Caps are read once from the environment and can be overridden in a
``with caps.override(...)`` block.  Exceeding one raises CapExceeded.
"""
from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass, replace


class CapExceeded(RuntimeError):
    """A fiber, family or enumeration outgrew its configured bound."""


@dataclass(frozen=True)
class Caps:
    fiber: int = 10**6      # any kernel fiber
    kappa: int = 10**4      # any type-family fiber
    count: int = 10**6      # structures / maps enumerated in one call


def _from_env() -> Caps:
    def read(name, default):
        raw = os.environ.get(name)
        return int(raw) if raw else default
    base = Caps()
    return Caps(
        fiber=read("KRIPKEJOYAL_FIBER_CAP", base.fiber),
        kappa=read("KRIPKEJOYAL_KAPPA", base.kappa),
        count=read("KRIPKEJOYAL_MAX_COUNT", base.count),
    )


_current = _from_env()


def current() -> Caps:
    return _current


@contextlib.contextmanager
def override(**changes):
    global _current
    saved = _current
    _current = replace(saved, **{k: v for k, v in changes.items() if v is not None})
    try:
        yield _current
    finally:
        _current = saved


def check_fiber(size: int, what: str = "fiber") -> None:
    if size > _current.fiber:
        raise CapExceeded(f"{what} has {size} elements, cap is {_current.fiber}")


def check_kappa(size: int, what: str = "type fiber") -> None:
    if size > _current.kappa:
        raise CapExceeded(f"{what} has {size} elements, kappa is {_current.kappa}")
