"""Writing styles for problem descriptions.

Three Python styles (loop-based, vectorized, helper-decomposed) and
three LaTeX styles (canonical notation, commuted term order, factored
constants) stand in for the variety of ways people write down the same
optimization problem.
"""

from enum import Enum

__all__ = ["WritingStyle", "PY_STYLES", "TEX_STYLES"]


class WritingStyle(str, Enum):
    PY_LOOP = "py_loop"
    PY_VECTOR = "py_vector"
    PY_MODULAR = "py_modular"
    TEX_CANONICAL = "tex_canonical"
    TEX_COMMUTED = "tex_commuted"
    TEX_FACTORED = "tex_factored"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown writing style {value!r}; choose from "
                f"{[s.value for s in cls]}"
            ) from None


PY_STYLES = (WritingStyle.PY_LOOP, WritingStyle.PY_VECTOR, WritingStyle.PY_MODULAR)
TEX_STYLES = (WritingStyle.TEX_CANONICAL, WritingStyle.TEX_COMMUTED,
              WritingStyle.TEX_FACTORED)
