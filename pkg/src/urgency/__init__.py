"""Urgency games: terms, objectives, solvers, normal forms, deciders, encoders."""

__version__ = "0.1.0"
