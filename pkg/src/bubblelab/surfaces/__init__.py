"""Immersion models, frames and transforms."""

from .core import (
    GeometryFrame,
    ImmersionModel,
    Jet,
    Singularity,
    Topology,
    frame,
    frame_from_jet,
    support_function,
)
from .mesh import PolarGrid, export_mesh, mesh_vertices
from .minimal import (
    FourEndedFamilyParams,
    NormalizedBubbleData,
    NullCurveModel,
    WeierstrassData,
    chen_gackstatter_local,
    enneper,
    enneper_scaled,
    family_closed_form,
    family_pole_sum,
    family_psi_mu,
    lopez,
    plane,
    weierstrass_model,
)
from .transforms import (
    InvertedModel,
    InversionSpec,
    RigidMotion,
    RoundSphere,
    invert,
    invert_point,
    inverted_sphere_oracle,
    rotation_matrix,
)

__all__ = [
    "FourEndedFamilyParams",
    "GeometryFrame",
    "ImmersionModel",
    "InvertedModel",
    "InversionSpec",
    "Jet",
    "NormalizedBubbleData",
    "NullCurveModel",
    "PolarGrid",
    "RigidMotion",
    "RoundSphere",
    "Singularity",
    "Topology",
    "WeierstrassData",
    "chen_gackstatter_local",
    "enneper",
    "enneper_scaled",
    "export_mesh",
    "family_closed_form",
    "family_pole_sum",
    "family_psi_mu",
    "frame",
    "frame_from_jet",
    "invert",
    "invert_point",
    "inverted_sphere_oracle",
    "lopez",
    "mesh_vertices",
    "plane",
    "rotation_matrix",
    "support_function",
    "weierstrass_model",
]
