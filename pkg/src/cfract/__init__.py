"""Continued fractions of sqrt(N): periods, norm sequences, reduced forms,
infrastructure distances and the class-number product h*R."""

__version__ = "0.1.0"

from .cf_expansion import Convergent, SurdExpansion, convergents, expand_sqrt  # noqa: E402
from .delta_omega import FormSequence, PellUnit, form_sequence, pell_unit  # noqa: E402
from .representations import SplitResult, SplitSource, midpoint_factor, sum_of_two_squares, unit_split  # noqa: E402
from .infrastructure import Distance, ReducedForm, compose, period_distance, rho_backward, rho_forward  # noqa: E402
from .analytic import HRProduct, hr_fast_series, hr_sine_sum  # noqa: E402
from .factoring import (FactorizationResult, factor_by_infrastructure, factor_by_period_walk,  # noqa: E402
                        full_factorization, navigate_to_distance)
