"""Experiment layer: corpus, trajectory builders, sweeps, diagnostics, verification and CLI."""
