"""Synthetic labelled IMU exercise data."""

from repsense.synth.generator import (
    generate,
    generate_corpus,
    sample_profiles,
    write_manifest,
)

__all__ = ["generate", "generate_corpus", "sample_profiles", "write_manifest"]
