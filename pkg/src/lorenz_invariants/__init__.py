"""Complete invariants of expansive Lorenz maps via kneading theory and renormalization."""

from .classify import (Distance, InvariantSequence, ParamPoint, Region, RegionResult, classify_cells,
                       conjugate, distance, invariant_sequence, region_of)
from .errors import (AmbiguousItineraryError, DomainError, LorenzError, MalformedSequenceError, NoRootError,
                     NotRenormalizableError, ParseError, UnsupportedError)
from .kneading import (Admissibility, KneadingInvariant, LmoParams, Verdict, itinerary, kneading_from_params,
                       parse_invariant, validate)
from .param import (alpha_from_kminus, alpha_from_kplus, alpha_via_renorm, beta_star, kz_series, kz_value,
                    smallest_root, solve_beta, spectral_radius, transition_matrix)
from .renorm import (Factorization, Kind, RenormStep, factorize, find_minimal_renorm, is_prime, quotient,
                     recompose, star_product)
from .seqcore import EPSeq, canonicalize, common_prefix_len, lex_compare, one_frequency, parse_epseq, shift

__version__ = "0.1.0"
