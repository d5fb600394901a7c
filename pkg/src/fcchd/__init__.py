"""Function-correcting codes with homogeneous distance over Z_{2^l}."""
from .bounds import (BoundEntry, BoundReport, equal_upper_theorem, figure1_series, gv_upper,
                     hamming_based_upper, locally_binary_sandwich, minmax_bounds, rt_upper, table1_rows,
                     weight_function_lower)
from .channel import ErrorModel, TrialReport, run_experiment, sample_error
from .encoders import (FcchdEncoder, con1_encoder, con2_encoder, decode_function_value, generic_encoder,
                       locbin_decode, locbin_encoder, smod, verify_fcchd)
from .errors import BudgetExceeded, ParameterError
from .functions import FunctionSpec, function_ball, is_locally_binary, make_function, preimage
from .matrices import (DistanceMatrix, check_equality_condition, function_distance, function_distance_matrix,
                       requirement_matrix)
from .ring import Ring, WeightKind, ball_volume, distance, entropy_ball_bound, hom_weight_scalar, weight
from .search import (IrregularCode, SearchOutcome, equal_distance_code, exact_min_length, greedy_construct,
                     greedy_min_length, plotkin_lower, verify_irregular_code)

__version__ = "0.1.0"
