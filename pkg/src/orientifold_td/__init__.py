"""Orientifold T-duality for circle bundles: exact cohomology, T-dual backgrounds, KR-groups and
symbolic checks of the conformal Courant algebroid identities."""

from .exact_linalg import AbelianGroup, IntMatrix, smith_normal_form

__all__ = ["AbelianGroup", "IntMatrix", "smith_normal_form"]
__version__ = "0.1.0"
