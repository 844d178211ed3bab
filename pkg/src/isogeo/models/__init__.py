"""Isoparametric hypersurface models and their per-point geometry."""
from .geometry import (
    GreatOrSmallSphere,
    LevelSet,
    Polynomial,
    SphereProduct,
    Surface,
    SurfaceJet,
    SurfacePoint,
    jet,
    model_self_test,
    sample_points,
    tangent_basis,
)
from .registry import ModelSpec, data_hashes, list_models, load_model_file, model_names, registry_get

__all__ = [
    "GreatOrSmallSphere", "LevelSet", "ModelSpec", "Polynomial", "SphereProduct", "Surface",
    "SurfaceJet", "SurfacePoint", "data_hashes", "jet", "list_models", "load_model_file",
    "model_names", "model_self_test", "registry_get", "sample_points", "tangent_basis",
]
