"""Exact verification toolkit for commuting skew-symmetric matrix identities."""

from .rings import QQ, QI, GF, Gaussian, Fp, field_by_name
from .multipoly import PolyRing, MultiPoly
from .tseries import TSeries, SeriesRing
from .skewlin import RingMat, DualNumber, DualRing, block_det_commuting
from .cartan import GroupKind, LambdaMatrix, f_t_series, h_t_series, n_t_series
from .commfam import CommutingTuple, random_cartan_tuple, random_nilpotent_tuple
from .witness import solve_pfaffian_system, solve_vanishing_minor_point

__all__ = [
    "QQ",
    "QI",
    "GF",
    "Gaussian",
    "Fp",
    "field_by_name",
    "PolyRing",
    "MultiPoly",
    "TSeries",
    "SeriesRing",
    "RingMat",
    "DualNumber",
    "DualRing",
    "block_det_commuting",
    "GroupKind",
    "LambdaMatrix",
    "f_t_series",
    "h_t_series",
    "n_t_series",
    "CommutingTuple",
    "random_cartan_tuple",
    "random_nilpotent_tuple",
    "solve_pfaffian_system",
    "solve_vanishing_minor_point",
]
