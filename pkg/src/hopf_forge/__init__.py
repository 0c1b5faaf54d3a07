"""Word problems in towers of HNN extensions and free products, and machine checks of
non-Hopfian witnesses built by image extension."""

from .cosets import FinitePresentation, MultiplicationTable, enumerate_group
from .dsl import parse, parse_word
from .morphism import Endomorphism, QuotientCertificate, verify_homomorphism
from .plan import RunOptions, load, resolve, run
from .recipe import RecipeInput, assemble_nonhopf, build_extension, check_hypotheses, elementary_search
from .report import Entry, VerificationReport
from .tower import (
    INFINITE,
    BaseAutomorphism,
    CyclicAssoc,
    FiniteNode,
    FreeAbelianNode,
    FreeNode,
    FreeProductNode,
    hnn,
)
from .words import GeneratorId, Word, commutator, cyclically_reduce, format_word, free_reduce

__version__ = "0.1.0"

__all__ = [
    "FinitePresentation",
    "MultiplicationTable",
    "enumerate_group",
    "parse",
    "parse_word",
    "Endomorphism",
    "QuotientCertificate",
    "verify_homomorphism",
    "RunOptions",
    "load",
    "resolve",
    "run",
    "RecipeInput",
    "assemble_nonhopf",
    "build_extension",
    "check_hypotheses",
    "elementary_search",
    "Entry",
    "VerificationReport",
    "INFINITE",
    "BaseAutomorphism",
    "CyclicAssoc",
    "FiniteNode",
    "FreeAbelianNode",
    "FreeNode",
    "FreeProductNode",
    "hnn",
    "GeneratorId",
    "Word",
    "commutator",
    "cyclically_reduce",
    "format_word",
    "free_reduce",
]
