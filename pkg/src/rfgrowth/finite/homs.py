from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..words import Presentation, Word
from .groups import TargetGroup


def evaluate_images(images, w: Word, identity):
    """Product of generator images along ``w``."""
    out = identity
    invs = {}
    for x in w:
        i = abs(x) - 1
        if x > 0:
            g = images[i]
        else:
            if i not in invs:
                invs[i] = images[i].inverse()
            g = invs[i]
        out = out * g
    return out


def is_homomorphism(p: Presentation, images, target: TargetGroup = None) -> bool:
    """True iff every relator of ``p`` evaluates to the identity."""
    images = tuple(images)
    if len(images) != p.rank:
        raise InputError(f"need {p.rank} images, got {len(images)}")
    if not p.relators:
        return True
    e = target.identity() if target is not None else images[0] * images[0].inverse()
    return all(evaluate_images(images, r, e).is_identity() for r in p.relators)


@dataclass(frozen=True)
class Homomorphism:
    source: Presentation
    target: TargetGroup
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if not all(self.target.contains(g) for g in self.images):
            raise InputError(f"generator images must lie in {self.target}")
        if not is_homomorphism(self.source, self.images, self.target):
            raise InputError("generator images do not satisfy the relators")

    def __call__(self, w: Word):
        return evaluate(self, w)

    def describe(self) -> dict:
        return {self.source.alphabet.names[i]: str(g) for i, g in enumerate(self.images)}


def evaluate(h: Homomorphism, w: Word):
    return evaluate_images(h.images, w, h.target.identity())
