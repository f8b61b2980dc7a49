"""Cofibrations, the partial-element monad, trivial fibrations, intervals,
fibrations, Fill/Fib and path types."""
from .cofibrations import *  # noqa: F401,F403
from .fibrations import *  # noqa: F401,F403
from .filling import *  # noqa: F401,F403
from .interval import *  # noqa: F401,F403
from .partial import *  # noqa: F401,F403
from .paths import *  # noqa: F401,F403
from .trivial import *  # noqa: F401,F403
from . import cofibrations, fibrations, filling, interval, partial, paths, trivial

__all__ = [name for mod in (cofibrations, partial, trivial, interval, fibrations, filling, paths)
           for name in mod.__all__]
