"""Dataset assembly, plotting and logging helpers."""
