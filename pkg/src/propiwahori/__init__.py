"""Exact pro-p Iwahori Hecke algebra computations over small finite fields."""

from .gf import GF, get_field
from .hecke import HeckeAlgebra, HElt
from .laurent import Laurent, LaurentRing
from .levi import LeviAlgebra
from .presets import Preset, load_preset
from .propweyl import PPW, ProPDatum, Subsystem
from .rep import Representation, hom_space, is_isomorphic
from .roots import AffineRoot, RootDatum, WeylGroup
from .stdmod import StdModule, ThetaCharacter

__all__ = [
    "GF",
    "get_field",
    "HeckeAlgebra",
    "HElt",
    "Laurent",
    "LaurentRing",
    "LeviAlgebra",
    "Preset",
    "load_preset",
    "PPW",
    "ProPDatum",
    "Subsystem",
    "Representation",
    "hom_space",
    "is_isomorphic",
    "AffineRoot",
    "RootDatum",
    "WeylGroup",
    "StdModule",
    "ThetaCharacter",
]
