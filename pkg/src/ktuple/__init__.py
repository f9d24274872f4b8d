"""Exact prime k-tuple counts and k-tuple Chebyshev functions.

Counts are evaluated as sums of the characteristic function
``(-1)^k prod mu(n+h) * prod Lambda(n+h)/log(n+h)`` over a segmented sieve,
with an independent brute-force oracle for verification.
"""

from ._accel import get_backend, set_backend
from .asymptotics import (
    AsymptoticRow, SingularSeriesEstimate, asymptotic_report, empirical_constant,
    singular_series,
)
from .chebyshev import (
    ChebyshevResult, averaged_doubles, averaged_pi2, averaged_theta2, chebyshev_series,
    lambda_k, log_geometric_mean, prime_power_tuple_weight_sum, psi_k, theta_k,
)
from .errors import (
    CapacityError, CoverageError, ExactnessError, InvalidArgumentError, InvalidRangeError,
    KTupleError, MalformedOffsetsError, OutOfRangeError,
)
from .sieve import SieveSegment, chi_prime, sieve_segment, von_mangoldt_ratio
from .summatory import TupleCountResult, chi_tuple, count_tuples, count_tuples_series
from .tuples import OffsetSet, is_admissible, parse_offsets, residue_coverage

__version__ = "0.1.0"
