"""Circuit builders for the fault-tolerance protocols under test."""

from .base import AncillaModel, Builder, GadgetCircuit, NoisePolicy, StepSpec
from .purification import purification_zero
from .analog import analog_ancilla_prep, steane_gadget
from .lobt import lobt_h, lobt_cz, lobt_rz, lobt_t
from .distill import distillation

REGISTRY = {
    "purification": purification_zero,
    "rz_prep": analog_ancilla_prep,
    "distill": distillation,
    "lobt_h": lobt_h,
    "lobt_cz": lobt_cz,
    "lobt_rz": lobt_rz,
    "lobt_t": lobt_t,
}

__all__ = [
    "AncillaModel", "Builder", "GadgetCircuit", "NoisePolicy", "StepSpec",
    "purification_zero", "analog_ancilla_prep", "steane_gadget",
    "lobt_h", "lobt_cz", "lobt_rz", "lobt_t", "distillation", "REGISTRY",
]
