"""Phase-only compressed sensing laboratory: Python surface of the C++ core."""

from ._core import (
    build_linearized,
    draw_sensing_matrix,
    draw_sparse_signal,
    ground_truth,
    kappa,
    l1_concentration,
    lp_oracle,
    phase,
    phases,
    qcbp,
    recover_phases,
    rip_monte_carlo,
    sparsity_defect,
)

__all__ = [
    "build_linearized",
    "draw_sensing_matrix",
    "draw_sparse_signal",
    "ground_truth",
    "kappa",
    "l1_concentration",
    "lp_oracle",
    "phase",
    "phases",
    "qcbp",
    "recover_phases",
    "rip_monte_carlo",
    "sparsity_defect",
]

__version__ = "1.0.0"
