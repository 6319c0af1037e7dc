"""Exact state evolution and energy spectra of solvable bosonic ladder models."""

__version__ = "0.1.0"

from .model import (LadderModel, ModelError, from_spec, make_custom, make_k_photon,
                    make_multi_mode, make_three_mode, make_two_mode)
from .gfactors import GFactorTable, expand_A_power, g_hessenberg, g_nested_sum, g_recursive
from .evolution import (AmplitudeResult, PropagatorMatrix, ToleranceUnreachable, evolve_state,
                        gamma, propagator, propagator_element)
from .spectrum import (CharPolynomial, char_poly, eigenvalues, eigenvector, minor_sequence,
                       ratio_continued_fraction, spectral_decomposition, stationary_state)
