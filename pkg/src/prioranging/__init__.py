"""Priority-differentiated initial ranging for OFDMA IEEE 802.16 cells."""
from .core import (TABLE1, CodePartition, InvalidConfig, Priority, SimConfig, partition_codes,
                   validate)
from .engine import MetricsSeries, Replications, run, run_replications

__all__ = ["TABLE1", "CodePartition", "InvalidConfig", "MetricsSeries", "Priority",
           "Replications", "SimConfig", "partition_codes", "run", "run_replications", "validate"]
