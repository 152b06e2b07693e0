"""Prompt-file embedding exporter for the hoihead matrix container format."""

from .encoders import EncoderUnavailable, HashingEncoder, resolve_encoder
from .exporter import ExportConfig, export, read_prompts

__version__ = "0.1.0"
