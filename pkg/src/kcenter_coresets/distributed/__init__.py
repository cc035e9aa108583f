"""
k-center coresets distributed module.

This module provides the simulated MapReduce harness and the composable
coreset pipelines that run on it.
"""
