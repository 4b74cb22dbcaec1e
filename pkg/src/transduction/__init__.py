"""Microwave-optical transduction as bosonic channels.

Direct conversion and teleportation-based transduction are reduced to
phase-insensitive Gaussian channels, from which capacity bounds, state
transfer fidelities and GKP success probabilities follow in closed form.
"""
from .capacity import CapacityBounds, dc_bounds, optimize_kappa, q_lower, q_upper, tp_bounds
from .channels import (AdditiveNoise, Amplifier, Attenuator, apply_to_gaussian, apply_to_wigner,
                       dc_channel, dc_threshold, reduce_to_additive, tp_channel)
from .device import DeviceParams, EntanglementCM, LangevinParams, entanglement_cm, langevin_cm
from .errors import ConsistencyError, DomainError
from .gaussian_core import GaussianState, SymplecticOp, WignerGrid
from .transfer import (GkpSpec, SchemeNoiseParams, additive_sigma_dc, additive_sigma_tp,
                       fidelity_cat, fidelity_coherent, gkp_success, squeezing_db,
                       tp_fidelity_cat, tp_fidelity_coherent)

__version__ = "0.1.0"
