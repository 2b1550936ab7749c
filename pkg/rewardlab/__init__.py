"""Reward estimation lab: TD learning and actor-critic under corrupted stochastic rewards."""

__version__ = "1.0.0"
