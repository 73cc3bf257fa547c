"""Hand-built fixture states and maps."""

from typing import Callable, Dict, Union

import numpy as np

from sepcert.bipartite import (
    BipartiteOperator, flip, max_entangled, product_state, twirl_operator, unit,
)
from sepcert.choi import MatrixMap, identity_map, trace_map, transpose_map
from sepcert.hakye import counterexample_params, ha_kye_map

Preset = Union[BipartiteOperator, MatrixMap]


def get_max_entangled(n: int = 3) -> BipartiteOperator:
    """ê = (1/n) sum e_ij ⊗ e_ij."""
    return max_entangled(n)


def get_maximally_mixed(n: int = 3) -> BipartiteOperator:
    """(1⊗1)/n²."""
    return unit(n) * (1.0 / (n * n))


def get_pure_product(n: int = 3) -> BipartiteOperator:
    """e⊗e with e the projection onto the first basis vector."""
    e = np.zeros((n, n), dtype=np.complex128)
    e[0, 0] = 1.0
    return product_state(e, e)


def get_werner_symmetric(n: int = 3) -> BipartiteOperator:
    """P(e⊗e) = (1⊗1 + V) / (n(n+1))."""
    return twirl_operator(get_pure_product(n))


def get_flip(n: int = 3) -> BipartiteOperator:
    return flip(n)


def get_hakye_counterexample(epsilon: float = 0.1) -> MatrixMap:
    """The scalar-unital map phi(a,b,c,theta) of the counterexample (not normalized)."""
    params, _, _ = counterexample_params(epsilon)
    return ha_kye_map(params)


STATE_PRESETS: Dict[str, Callable[..., BipartiteOperator]] = {
    "max_entangled": get_max_entangled,
    "maximally_mixed": get_maximally_mixed,
    "pure_product": get_pure_product,
    "werner_symmetric": get_werner_symmetric,
    "flip": get_flip,
}

MAP_PRESETS: Dict[str, Callable[..., MatrixMap]] = {
    "identity": identity_map,
    "transpose": transpose_map,
    "trace": trace_map,
}


def get_all_presets(n: int = 3, epsilon: float = 0.1) -> Dict[str, Preset]:
    """Get every preset, keyed by name."""
    presets: Dict[str, Preset] = {name: fn(n) for name, fn in STATE_PRESETS.items()}
    presets.update({name: fn(n) for name, fn in MAP_PRESETS.items()})
    presets["hakye"] = get_hakye_counterexample(epsilon)
    return presets
