"""Two-term transformations of the unit-shift 4F3(1) as an exact group."""

from .errors import HypError, DomainError, InputError
from .symbolic import RING, RationalFunction, AffineMap, Specialization, parse_rational
from .gammatype import Gamma, GammaType
from .group import Transformation, IDENTITY, compose, invert, equal, strict_equal, identity
from .generators import (
    builtin,
    from_token,
    synthesize,
    thomae_catalog,
    shift_transformation,
    s4_chain,
    GENERATOR_NAMES,
)
from .relations import three_term, decompose_unit_shift, contiguous, break_combination, summation_formula
from .numerics import eval_pfq, eval_gamma, verify_transformation, verify_relation, sample_point, HypPoint, EvalConfig
from . import serialize

__version__ = "0.1.0"
