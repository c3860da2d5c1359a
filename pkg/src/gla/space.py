"""Graded vector spaces and their degree bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping


@dataclass(frozen=True, order=True)
class BasisIndex:
    degree: int
    offset: int


@dataclass(frozen=True)
class GradedVectorSpace:
    """v = v^min ⊕ ... ⊕ v^max with basis ordered by ascending degree."""

    min_degree: int
    max_degree: int
    dims: Mapping[int, int]

    def __post_init__(self) -> None:
        if self.min_degree > -1:
            raise ValueError(f"min_degree must be negative, got {self.min_degree}")
        if self.max_degree < -1:
            raise ValueError(f"max_degree must be >= -1, got {self.max_degree}")
        window = set(range(self.min_degree, self.max_degree + 1))
        if set(self.dims) != window:
            raise ValueError(
                f"dims must be given exactly on degrees {sorted(window)}, got {sorted(self.dims)}"
            )
        for degree, d in self.dims.items():
            if d < 0:
                raise ValueError(f"Negative dimension {d} in degree {degree}")
        object.__setattr__(self, "dims", dict(sorted(self.dims.items())))

    @classmethod
    def from_dims(cls, dims: Mapping[int, int]) -> GradedVectorSpace:
        """Window spans min(dims)..max(dims, -1); missing degrees are zero."""
        lo = min(dims)
        hi = max(max(dims), -1)
        return cls(lo, hi, {d: dims.get(d, 0) for d in range(lo, hi + 1)})

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def negative_dim(self) -> int:
        return sum(d for degree, d in self.dims.items() if degree < 0)

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def negative_degrees(self) -> range:
        return range(self.min_degree, min(self.max_degree, -1) + 1)

    def offset(self, degree: int) -> int:
        """Global index of the first basis vector of the given degree."""
        return sum(self.dims[d] for d in range(self.min_degree, degree) if d in self.dims)

    def index(self, b: BasisIndex) -> int:
        if not 0 <= b.offset < self.dim(b.degree):
            raise IndexError(f"No basis vector {b.offset} in degree {b.degree}")
        return self.offset(b.degree) + b.offset

    def basis_index(self, global_index: int) -> BasisIndex:
        start = 0
        for degree, d in self.dims.items():
            if global_index < start + d:
                return BasisIndex(degree, global_index - start)
            start += d
        raise IndexError(f"Global index {global_index} out of range {self.total_dim}")

    def degree_of(self, global_index: int) -> int:
        return self.basis_index(global_index).degree

    def basis(self) -> Iterator[BasisIndex]:
        for degree, d in self.dims.items():
            for offset in range(d):
                yield BasisIndex(degree, offset)

    def truncation(self, n: int) -> GradedVectorSpace:
        """v^{<n+1} = v^min ⊕ ... ⊕ v^n."""
        top = max(min(n, self.max_degree), -1)
        return GradedVectorSpace(
            self.min_degree, top, {d: self.dim(d) for d in range(self.min_degree, top + 1)}
        )


def hom_dim(source: GradedVectorSpace, target: GradedVectorSpace, shift: int) -> int:
    """dim Hom^shift(source, target): maps with h(v^i) ⊂ w^{i+shift}."""
    return sum(source.dim(i) * target.dim(i + shift) for i in source.degrees())


def gl_shape_dim(space: GradedVectorSpace, m: int) -> int:
    """dim gl^m(v)."""
    return hom_dim(space, space, m)


def gl_filtered_dim(space: GradedVectorSpace, m: int) -> int:
    """dim gl_m(v) = sum of dim gl^i(v) over i >= m."""
    span_ = space.max_degree - space.min_degree
    return sum(gl_shape_dim(space, i) for i in range(m, span_ + 1))
