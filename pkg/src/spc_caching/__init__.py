"""Low-subpacketization coded caching from single parity check codes over Z_q."""

from .analysis import (
    ComparisonRow,
    MemShareRow,
    comparison_table,
    memshare_comparison,
    rate_ratio,
    subpack_exponent,
    subpack_limit,
)
from .delivery import (
    DeliverySchedule,
    XorEquation,
    build_schedule,
    schedule_mn,
    schedule_proposed,
    verify_schedule,
)
from .design import (
    ResolvableDesign,
    SchemeParams,
    SpcCodebook,
    build_design,
    enumerate_codewords,
    intersect_point,
)
from .errors import (
    CachingError,
    InconsistentInputError,
    InvalidParamsError,
    InvalidPicksError,
    SchemeFileError,
    SweepTooLargeError,
)
from .schemes import CachingScheme, DemandVector, build_mn_scheme, build_proposed_scheme
from .simulator import FileCorpus, SimulationRun, make_corpus, run_simulation

__version__ = "0.1.0"
