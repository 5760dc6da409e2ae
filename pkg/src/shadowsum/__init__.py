"""Shadow state sums in S^2 x S^1 and torus-gauge determinant kernels."""

__version__ = "0.1.0"

from .errors import OracleError, ParseError, PreconditionError, ShadowsumError
from .roots import (
    RootSystem,
    build_root_system,
    inner_product,
    is_regular,
    weyl_orbit,
)
from .reps import (
    LevelAlphabet,
    WeightSystem,
    character_eval,
    level_alphabet,
    weight_multiplicities,
    weyl_dimension,
)
from .fusion import (
    FusionTable,
    QuantumWeylGroup,
    build_fusion_table,
    fusion_coefficient,
    quantum_dimension,
    verlinde_oracle,
)
from .diagrams import (
    Circle,
    ShadowDiagram,
    StateSumResult,
    build_diagram,
    empty_link_value,
    gleam_of_face,
    state_sum,
)
from .determinants import (
    SphereMetricSample,
    SteppedField,
    det_half,
    det_k,
    det_rig_constant,
    det_rig_quadrature,
    det_rig_step,
    flat_torus_metric,
    round_sphere_metric,
)
from .regularize import det_rig_n, regularized_indicator
from .circleop import CircleOperatorData, apply_operator, circle_inverse_apply
from .holonomy import (
    VerticalRibbon,
    holonomy,
    ribbon_holonomy,
    scaled_ribbon,
    weight_rep_matrix,
    wilson_closed_form,
)
