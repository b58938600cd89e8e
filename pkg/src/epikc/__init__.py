"""Knowledge compilation for the multi-agent epistemic logics K_n and K45_n."""

from .formula import Formula, parse, to_nnf, to_str
from .sdnf import (
    Scl, Scnf, Sdnf, Ste, compile_scnf, compile_sdnf, conjoin, condition, disjoin,
    entails_scl, entails_scnf, forget, rename_vars, sat,
)

__all__ = [
    "Formula", "parse", "to_nnf", "to_str",
    "Scl", "Scnf", "Sdnf", "Ste", "compile_scnf", "compile_sdnf", "conjoin", "condition",
    "disjoin", "entails_scl", "entails_scnf", "forget", "rename_vars", "sat",
]
