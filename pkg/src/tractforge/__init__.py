"""Glove-driven articulatory speech synthesis.

Hand-kinematic frames shape a tongue spline under a fixed palate; the
resulting area function drives a Kelly-Lochbaum waveguide excited by an
LF-model glottal source.
"""

__version__ = "0.1.0"

from .config import EngineConfig, VOWEL_PRESETS
from .engine import AudioBlock, ControlSnapshot, VoiceEngine
from .glottis import GlottalControls
from .kinematics import ArticulatoryState

__all__ = [
    "ArticulatoryState",
    "AudioBlock",
    "ControlSnapshot",
    "EngineConfig",
    "GlottalControls",
    "VOWEL_PRESETS",
    "VoiceEngine",
    "__version__",
]
