"""sepcert - separability certificates for bipartite matrices and the SPA of positive maps."""

__version__ = "1.0.0"

from sepcert.bipartite import (
    BipartiteOperator, WernerForm, flip, max_entangled, necessary_separability_check,
    partial_transpose, ppt_check, s_functional, t_functional, twirl, twirl_monte_carlo,
    werner_separability,
)
from sepcert.choi import MatrixMap, choi, map_from_choi
from sepcert.hakye import counterexample
from sepcert.schema import HaKyeParams, export_json_schema
from sepcert.spa import spa, spa_entanglement_certificate

__all__ = [
    "BipartiteOperator",
    "WernerForm",
    "MatrixMap",
    "HaKyeParams",
    "flip",
    "max_entangled",
    "s_functional",
    "t_functional",
    "twirl",
    "twirl_monte_carlo",
    "partial_transpose",
    "ppt_check",
    "necessary_separability_check",
    "werner_separability",
    "choi",
    "map_from_choi",
    "spa",
    "spa_entanglement_certificate",
    "counterexample",
    "export_json_schema",
]
