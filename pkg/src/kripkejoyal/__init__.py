"""Finite presheaf toposes: classifiers, a type-theory checker, Kripke-Joyal
forcing and uniform fibrations, all computed exactly on finite sites."""
from .caps import CapExceeded
from .kernel import FinCat, NatTrans, Presheaf, SubPresheaf
from .classifiers import TypeFamily
from .sites import BUILTIN

__version__ = "0.1.0"
__all__ = ["CapExceeded", "FinCat", "NatTrans", "Presheaf", "SubPresheaf", "TypeFamily",
           "BUILTIN", "__version__"]
