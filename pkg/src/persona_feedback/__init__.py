"""Persona-conditioned, on-demand feedback for writers.

Core modules: personas (reader persona definitions), prompting (message
assembly), engine (generation via pluggable providers), history (feedback
cards), analytics (interaction metrics), structure (feedback segmentation),
service (HTTP API).
"""

__version__ = "0.1.0"
