"""Python front end for the biodiversity impact engine."""

import json as _json

from ._core import (  # noqa: F401
    Bundle,
    DatasetError,
    FabricError,
    InvariantError,
    ResolutionError,
    load_bundle,
    run_cli,
)
from . import _core

__all__ = [
    "Bundle",
    "DatasetError",
    "FabricError",
    "InvariantError",
    "ResolutionError",
    "load_bundle",
    "run_cli",
    "device_report",
    "system_report",
    "fleet_per_year",
    "compare_workloads",
]


def device_report(bundle, device, region=None, year=None, duty=None):
    return _json.loads(_core.device_report_json(bundle, device, region, year, duty))


def system_report(bundle, system, region=None, year=None, duty=None, years=None, pue=None):
    return _json.loads(_core.system_report_json(bundle, system, region, year, duty, years, pue))


def fleet_per_year(bundle, system, count, duty=None):
    return _core.fleet_per_year(bundle, system, count, duty)


def compare_workloads(bundle, scenario_path):
    return _json.loads(_core.workload_json(bundle, str(scenario_path)))
