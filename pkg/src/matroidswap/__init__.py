"""Yankee Swap for fair allocation under matroid rank valuations."""
from ._backend import name as backend_name, use_backend
from .core import (
    Allocation,
    AugmentedUtility,
    Dominance,
    Instance,
    InstanceError,
    SortedUtilityVector,
    empty_allocation,
    is_clean,
    leximin_compare,
    lorenz_compare,
    nsw,
    sorted_utility_vector,
    usw,
    utility_vector,
)
from .exchange import (
    ExchangeGraph,
    StalePathError,
    TransferPath,
    build_exchange_graph,
    execute_path,
    find_transfer_path,
    gain_set,
)
from .solver import SolveTrace, select_agent, yankee_swap
from .valuations import (
    AdditiveOracle,
    ExplicitOracle,
    GraphicOracle,
    PartitionOracle,
    TransversalOracle,
    UniformOracle,
    ValuationOracle,
    augmented_value,
    check_mrf,
)

__version__ = "0.1.0"
