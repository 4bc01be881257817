"""Persistency (partial optimality) for cubic correlation clustering."""

from .instance import (Instance, InstanceError, MulticutInstance, Partition, build_instance,
                       is_feasible, labeling_from_partition, objective,
                       partition_from_labeling, read_instance, to_cubic_multicut,
                       write_instance)

__version__ = "0.1.0"

__all__ = [
    "Instance", "InstanceError", "MulticutInstance", "Partition", "build_instance",
    "is_feasible", "labeling_from_partition", "objective", "partition_from_labeling",
    "read_instance", "to_cubic_multicut", "write_instance",
]
