"""b-adic antithetic sampling for quasi-Monte Carlo digital nets."""

from ._validation import GuardError
from .digits import DigitVector, delta, mu_alpha, pi, pi_exact, sigma
from .hopl import (
    ErrorBoundParams,
    HoplSpec,
    bound_B,
    constant_A,
    constants_C_D,
    hopl_dual_contains,
    hopl_matrices,
    hopl_net,
    laurent,
    search_q,
)
from .net import DigitalNet, GeneratingMatrix, antithetic, read_net, symmetrize, write_net
from .poly import PolyZb, is_irreducible
from .qmc import F1, F2, F3, WalshPolynomial, convergence_study, integrate, signed_error_check
from .sobol import load_directions, sobol_net
from .sobolev import SobolevSpaceParams, bernoulli, kernel, worst_case_error
from .walsh import chi, wal
from .weights import Weights, parse_weights

__version__ = "0.1.0"
