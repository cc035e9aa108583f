"""
k-center coresets CLI module.

This module provides command-line interface functionality for the k-center coresets toolkit.
"""
