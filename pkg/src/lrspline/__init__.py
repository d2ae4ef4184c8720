"""Exact analysis of LR-meshes and the B-spline collections they carry."""

from .bspline import (
    TensorBSpline,
    bernstein_on_element,
    eval_tensor,
    eval_univariate,
    insert_knot,
    insert_knot_tensor,
    restriction_to_split,
    support_status,
)
from .dependence import (
    INCONCLUSIVE,
    INDEPENDENT,
    assemble_element_matrix,
    extract_circuit,
    find_active_dependence,
    null_space,
    overload_counts,
    peel,
    verify_dependence_conditions,
)
from .errors import *  # noqa: F401,F403
from .io import load_mesh, parse_mesh_spec, serialize_mesh_spec
from .mesh import (
    HORIZONTAL,
    VERTICAL,
    LRMesh,
    SplitSpec,
    box_mesh,
    expanded_split,
    insert_split,
    new_tensor_mesh,
    validate_lr_rules,
)
from .scenarios import builtin_scenario, scenario
from .space import (
    collection,
    derive_lr,
    dim_increment,
    dim_lr,
    enumerate_ms,
    hand_in_hand,
)
from .cli import run_command

__version__ = "0.1.0"
