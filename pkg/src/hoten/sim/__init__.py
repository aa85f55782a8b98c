"""Contact extraction, synthetic traces and the simulation loop."""

from .contacts import ContactEvent, extract_contacts
from .engine import (DEFAULT_TTLS, EVENT_COLUMNS, HotspotProfiles, SimConfig, SimMetrics,
                     TtlMetrics, generate_workload, hotspot_profiles, run, simulate)
from .synth import SynthSpec, synth_from_spec, synth_traces

__all__ = [
    "DEFAULT_TTLS", "EVENT_COLUMNS", "ContactEvent", "HotspotProfiles", "SimConfig",
    "SimMetrics", "SynthSpec", "TtlMetrics", "extract_contacts", "generate_workload",
    "hotspot_profiles", "run", "simulate", "synth_from_spec", "synth_traces",
]
