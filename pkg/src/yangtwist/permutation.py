"""Site permutations and their words in adjacent transpositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class SitePermutation:
    """A permutation of ``{0, ..., n-1}`` in one-line notation: ``images[i] = sigma(i)``.

    Products compose right to left, ``(a * b)(i) = a(b(i))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> SitePermutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int) -> SitePermutation:
        """The adjacent transposition exchanging ``i`` and ``i + 1``."""
        if not 0 <= i < n - 1:
            raise ValueError(f"no adjacent transposition s_{i} in S_{n}")
        images = list(range(n))
        images[i], images[i + 1] = i + 1, i
        return cls(tuple(images))

    @classmethod
    def from_word(cls, n: int, word: Sequence[int]) -> SitePermutation:
        """The product ``s_{w[0]} s_{w[1]} ...`` of adjacent transpositions."""
        out = cls.identity(n)
        for i in word:
            out = out * cls.transposition(n, i)
        return out

    @classmethod
    def from_cycle_notation(cls, n: int, *cycles: Sequence[int]) -> SitePermutation:
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(tuple(images))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: SitePermutation) -> SitePermutation:
        if len(other) != len(self):
            raise ValueError("cannot compose permutations of different degree")
        return SitePermutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> SitePermutation:
        inv = [0] * len(self)
        for i, j in enumerate(self.images):
            inv[j] = i
        return SitePermutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(len(self)))

    def length(self) -> int:
        """Number of inversions."""
        im = self.images
        return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])

    def descents(self) -> list[int]:
        return [i for i in range(len(self) - 1) if self.images[i] > self.images[i + 1]]

    def reduced_word(self) -> list[int]:
        """A reduced word ``w`` with ``self == s_{w[0]} s_{w[1]} ...``."""
        word: list[int] = []
        perm = self
        while not perm.is_identity():
            i = perm.descents()[0]
            perm = perm * SitePermutation.transposition(len(self), i)
            word.append(i)
        return word[::-1]

    def reduced_words(self) -> list[list[int]]:
        """Every reduced word of the permutation, in lexicographic order."""
        if self.is_identity():
            return [[]]
        out = []
        for i in self.descents():
            shorter = self * SitePermutation.transposition(len(self), i)
            out.extend(w + [i] for w in shorter.reduced_words())
        return sorted(out)

    def __str__(self) -> str:
        return "[" + " ".join(str(i + 1) for i in self.images) + "]"


def all_permutations(n: int) -> Iterator[SitePermutation]:
    for images in itertools.permutations(range(n)):
        yield SitePermutation(images)


def as_permutation(perm, n: int) -> SitePermutation:
    if perm is None:
        return SitePermutation.identity(n)
    if not isinstance(perm, SitePermutation):
        perm = SitePermutation(tuple(perm))
    if len(perm) != n:
        raise ValueError(f"permutation of length {len(perm)} for {n} sites")
    return perm
