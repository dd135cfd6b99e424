"""Low-complexity opportunistic interference alignment for K-transmitter MIMO ICs."""

from .assignment import AssignmentResult, brute_force_assignment, hungarian_rectangular
from .channels import ChannelSet, Framework, NetworkConfig, draw_cscg_matrix, generate_channels
from .complexity import psi_max_snr_up, psi_min_inr_up, psi_oia_up, psi_oia_us, psi_op
from .grassmann import (chordal_distance_sq, hermitian_eigs, two_subspace_eigs, orthonormalize,
                        principal_angles, spread_approx, spread_exact, subspace_mean,
                        sum_projectors)
from .harness import ExperimentSpec, ResultRow, SweepKind, emit_csv, run_sweep
from .schemes import Scheme, SchemeId, run_scheme, sum_rate

__version__ = "0.1.0"
