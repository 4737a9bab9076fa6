"""Perturbative solvers indexed by labelled planar rooted trees, with
the geometric invariant hierarchies they generate: the discrete BF
configuration invariant, Gauss linking numbers of polygonal links, and
winding-weighted overlap areas of immersed plane curves."""

__version__ = "0.1.0"
