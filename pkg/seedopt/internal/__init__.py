"""Internal utilities for seedopt.

This package contains internal implementation details that should not be used
directly by users of the seedopt package. These modules may change without
notice between versions.
"""
