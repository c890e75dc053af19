"""Length spectra and Ihara zeta functions of periodic graphs given by voltage graphs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    GraphFormatError,
    IntegralityError,
    PeriodicZetaError,
    QMismatchError,
    SpecMismatchError,
    StabilizerViolationError,
    UnsupportedPointError,
    ValidationError,
)
from .graph import VoltageGraph, adjacency_matrix, cover_ball, load_graph, validate  # noqa: E402
from .group_ring import GroupElement, GroupRingElement, GroupSpec  # noqa: E402
from .oracle import LengthSpectrum, census, rooted_count  # noqa: E402
from .zeta import (  # noqa: E402
    ZetaSeries,
    det_gamma_numeric,
    log_zeta_series,
    omega_q_contains,
    pl_from_series,
    xi_eval,
    zeta_series_from_pl,
)
