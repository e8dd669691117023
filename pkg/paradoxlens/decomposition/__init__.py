from .subgroups import (ConditionalEffect, Decomposition, SubgroupTable,
                        build_table, compute_a1, compute_a2,
                        conditional_effect_curve, weight_divergence)

__all__ = [
    "ConditionalEffect",
    "Decomposition",
    "SubgroupTable",
    "build_table",
    "compute_a1",
    "compute_a2",
    "conditional_effect_curve",
    "weight_divergence",
]
