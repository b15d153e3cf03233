"""Termhood scoring methods, grouped by the information they use."""

from . import context, frequency, reference, topic, wiki  # noqa: F401
