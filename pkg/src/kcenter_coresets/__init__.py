"""
k-center coresets package.

This package provides sequential k-center solvers, composable coresets built
from dual clusterings, and a simulated MapReduce runtime for the distributed
k-center and DBSCAN pipelines that use them.
"""

__version__ = "0.1.0"
