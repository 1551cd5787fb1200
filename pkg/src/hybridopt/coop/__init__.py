from .messages import (DE_TO_IBC, IBC_TO_DE, Certificate, Channel, Kind, Message, Status,
                       parse_message)
from .strategy import maxdist_priority, queue_hull, reduce_and_restart, reprioritize
from .orchestrate import SolverConfig, orchestrate

__all__ = [
    "DE_TO_IBC", "IBC_TO_DE", "Certificate", "Channel", "Kind", "Message", "Status",
    "parse_message", "maxdist_priority", "queue_hull", "reduce_and_restart", "reprioritize",
    "SolverConfig", "orchestrate",
]
