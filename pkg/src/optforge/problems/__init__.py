from .basic import BASIC_FUNCTIONS, BASIC_NAMES, BasicFunction
from .transforms import TransformSpec, make_rotation
from .constraints import (
    CONSTRAINT_TEMPLATES,
    ConstraintSpec,
    EPS_EQ,
    constraint_values,
)
from .instance import (
    ComponentSpec,
    Evaluation,
    ProblemInstance,
    evaluate,
    evaluate_batch,
    instance_from_dict,
    instance_to_dict,
    load_instances,
    save_instances,
)
from .synthesis import synthesize_instance, synthesize_set

__all__ = [
    "BASIC_FUNCTIONS",
    "BASIC_NAMES",
    "BasicFunction",
    "TransformSpec",
    "make_rotation",
    "CONSTRAINT_TEMPLATES",
    "ConstraintSpec",
    "EPS_EQ",
    "constraint_values",
    "ComponentSpec",
    "Evaluation",
    "ProblemInstance",
    "evaluate",
    "evaluate_batch",
    "instance_from_dict",
    "instance_to_dict",
    "load_instances",
    "save_instances",
    "synthesize_instance",
    "synthesize_set",
]
