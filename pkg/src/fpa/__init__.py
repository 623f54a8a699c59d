"""Frequency permutation arrays under the l-infinity metric."""
