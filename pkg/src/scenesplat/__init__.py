"""Driving-scenario editing engine.

Scene graph + vector map model, trajectory-language alignment with motion and
location codebooks, free-text object querying, structured edit commands with
asset retrieval and trajectory synthesis, and interaction-aware multi-agent
path refinement.  Exposed over a local HTTP service and a batch CLI.
"""

__version__ = "0.1.0"
