"""Prompt assembly: one natural-language task document per instance.

Every prompt follows the same section order regardless of style --
role header, problem statement, objective block, constraint block (when
present), search-space line, evaluation budget, output instruction --
so downstream consumers can rely on the layout while the objective
block varies across the six writing styles.
"""

from dataclasses import dataclass

import numpy as np

from ..problems.constraints import EPS_EQ
from .py_code import render_python_constraints, render_python_objective
from .styles import PY_STYLES, WritingStyle
from .tex_code import render_tex_constraints, render_tex_objective

__all__ = ["PromptDoc", "render_objective", "render_constraints", "render_prompt"]

_ROLE = "You are an expert in numerical optimization."
_TASK = "Minimize the objective function defined in the following block."
_OUTPUT = (
    "Reply with a single complete Python program that searches for the "
    "minimizer and reports the best solution found."
)


@dataclass(frozen=True)
class PromptDoc:
    """A rendered prompt plus the metadata needed to pair it later."""

    text: str
    style: str
    instance_id: str
    fe_budget: int


def render_objective(instance, style, seed=0):
    """Objective block text in the requested style (no fences)."""
    style = WritingStyle.parse(style)
    if style in PY_STYLES:
        return render_python_objective(instance, style)
    return render_tex_objective(instance, style, seed=seed)


def render_constraints(instance, style, seed=0):
    """Constraint block text, empty for unconstrained instances."""
    style = WritingStyle.parse(style)
    if style in PY_STYLES:
        return render_python_constraints(instance, style)
    return render_tex_constraints(instance, style, seed=seed)


def _fence(text, tag):
    return f"```{tag}\n{text.rstrip()}\n```"


def _bounds_line(instance):
    b = instance.bounds
    lo, hi = b[:, 0], b[:, 1]
    if np.all(lo == lo[0]) and np.all(hi == hi[0]):
        box = (f"{float(lo[0])!r} <= x_i <= {float(hi[0])!r} "
               "for every coordinate")
        return (f"The search space is {instance.d}-dimensional with "
                f"{box}.")
    per = ", ".join(f"x_{i + 1} in [{float(a)!r}, {float(b)!r}]"
                    for i, (a, b) in enumerate(zip(lo, hi)))
    return (f"The search space is {instance.d}-dimensional with "
            f"per-coordinate bounds {per}.")


def render_prompt(instance, style, seed=0):
    """Assemble the full prompt document for one instance and style."""
    style = WritingStyle.parse(style)
    tag = "python" if style in PY_STYLES else "latex"
    sections = [_ROLE, _TASK, _fence(render_objective(instance, style, seed), tag)]
    if instance.constrained:
        con = render_constraints(instance, style, seed)
        sections.append(
            "The solution must satisfy the following constraints "
            f"(inequalities g(x) <= 0; equalities |h(x)| <= {EPS_EQ!r}):"
        )
        sections.append(_fence(con, tag))
    sections.append(_bounds_line(instance))
    sections.append(
        f"You may use at most {instance.fe_budget} objective function "
        "evaluations."
    )
    sections.append(_OUTPUT)
    text = "\n\n".join(sections) + "\n"
    return PromptDoc(text=text, style=style.value, instance_id=instance.id,
                     fe_budget=instance.fe_budget)
