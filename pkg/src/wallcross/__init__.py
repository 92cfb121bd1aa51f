"""Wall-crossing of SU(2)/SO(3) Donaldson invariants on rational surfaces."""

__version__ = "0.1.0"
