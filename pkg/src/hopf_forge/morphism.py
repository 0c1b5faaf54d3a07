"""Endomorphisms given by generator images, and finite-quotient certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cosets import subgroup_closure
from .errors import HomomorphismCheckFailed, InvalidCertificate, UnmappedGenerator, Unverified
from .tower import FiniteNode, GroupNode
from .words import Word, format_word, substitute


def _check_total(domain: GroupNode, images: Mapping):
    missing = [g.name for g in domain.generators if g not in images]
    if missing:
        raise UnmappedGenerator(f"no image for {', '.join(missing)} in {domain.name}")


def verify_homomorphism(domain: GroupNode, images: Mapping, codomain: GroupNode | None = None):
    """Check every defining relator of ``domain`` maps to the identity.

    Returns ``(ok, failing_relators)``.  The codomain defaults to the domain.
    """
    codomain = domain if codomain is None else codomain
    _check_total(domain, images)
    for img in images.values():
        codomain.check(img)
    failing = [r for r in domain.relators if not codomain._is_identity(substitute(r, images))]
    return not failing, failing


def relator_results(domain: GroupNode, images: Mapping, codomain: GroupNode | None = None):
    """Per-relator ``(relator, image, passed)`` triples, for report evidence."""
    codomain = domain if codomain is None else codomain
    _check_total(domain, images)
    out = []
    for r in domain.relators:
        img = substitute(r, images)
        out.append((r, codomain._reduce(img), codomain._is_identity(img)))
    return out


@dataclass(frozen=True)
class Endomorphism:
    domain: GroupNode
    images: Mapping = field(hash=False)
    verified: bool = False

    @classmethod
    def build(cls, domain: GroupNode, images: Mapping) -> "Endomorphism":
        ok, failing = verify_homomorphism(domain, images)
        if not ok:
            listed = ", ".join(format_word(r) for r in failing)
            raise HomomorphismCheckFailed(f"relators not preserved: {listed}", failing)
        return cls(domain, dict(images), True)

    def apply(self, w: Word) -> Word:
        if not self.verified:
            raise Unverified("endomorphism has not passed verify_homomorphism")
        return substitute(self.domain.check(w), self.images)

    def to_json(self) -> dict:
        return {g.name: format_word(w) for g, w in self.images.items()}


def identity_endomorphism(domain: GroupNode) -> Endomorphism:
    return Endomorphism(domain, {g: Word.gen(g) for g in domain.generators}, True)


def apply(e: Endomorphism, w: Word) -> Word:
    return e.apply(w)


def in_kernel(e: Endomorphism, w: Word) -> bool:
    return e.domain.is_identity(e.apply(w))


def verify_preimage(e: Endomorphism, target: Word, witness: Word) -> bool:
    return e.domain.are_equal(e.apply(witness), target)


@dataclass(frozen=True)
class QuotientCertificate:
    """A homomorphism from ``domain`` onto a finite ``target`` group."""

    domain: GroupNode
    target: FiniteNode
    projection: Mapping = field(hash=False)

    def __post_init__(self):
        try:
            ok, failing = verify_homomorphism(self.domain, self.projection, self.target)
        except UnmappedGenerator as exc:
            raise InvalidCertificate(str(exc)) from None
        if not ok:
            listed = ", ".join(format_word(r) for r in failing)
            raise InvalidCertificate(f"projection does not respect {listed}")

    def project(self, w: Word) -> int:
        return self.target.index(substitute(self.domain.check(w), self.projection))

    def to_json(self) -> dict:
        return {"target": self.target.name, "order": self.target.table.order,
                "projection": {g.name: format_word(w) for g, w in self.projection.items()}}


def nonmembership_evidence(domain: GroupNode, subgroup_gens: Sequence[Word], element: Word,
                           cert: QuotientCertificate):
    """``(outside, element_index, closure)`` computed in the certificate's target."""
    if cert.domain is not domain:
        raise InvalidCertificate(f"certificate is for {cert.domain.name}, not {domain.name}")
    table = cert.target.table
    images = [substitute(domain.check(w), cert.projection) for w in subgroup_gens]
    closure = subgroup_closure(table, images)
    idx = cert.project(element)
    return idx not in closure, idx, closure


def verify_nonmembership(domain: GroupNode, subgroup_gens: Sequence[Word], element: Word,
                         cert: QuotientCertificate) -> bool:
    """True certifies ``element`` is outside the subgroup; False is inconclusive."""
    return nonmembership_evidence(domain, subgroup_gens, element, cert)[0]


def image_generators(e: Endomorphism) -> list:
    return [e.images[g] for g in e.domain.generators]

