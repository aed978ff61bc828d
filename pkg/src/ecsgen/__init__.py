"""Entangled coherent states from a driven V-type atom in a two-mode cavity."""

from .ecs import (ECSSpec, OverlapData, check_density, coherent_overlap, ecs_concurrence_closed_form,
                  qubit_map, wootters_concurrence)
from .errors import (DegenerateModeError, DegenerateStateError, DensityValidationError, DomainError,
                     ECSError, LosslessRegimeError, TruncationError, ZeroProbabilityError)
from .lossless import (CoherentPair, ProjectedPureECS, coherent_amplitudes, concurrence_lossless,
                       detection_probabilities, mean_photon_numbers, projected_state)
from .lossy import (DressedDensity, LossyFieldState, concurrence_lossy, decoherence_factor, dressed_density,
                    field_amplitudes, field_density_matrix, lossy_amplitudes, lossy_photon_numbers,
                    projected_mixed_state)
from .model import Branch, DressedFrame, ModelParams, atomic_in_dressed, dressed_frame, rabi_norm

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
