"""Graded vector spaces, maps, pairings, chain complexes and cones."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .linalg import (
    Matrix,
    Quotient,
    Subspace,
    hstack,
    image_basis,
    kernel_basis,
    left_inverse,
    quotient,
    rank,
    solve,
    vstack,
    is_invertible,
)


@dataclass(frozen=True)
class GradedSpace:
    min_degree: int
    max_degree: int
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != self.max_degree - self.min_degree + 1:
            raise ValueError("dims must list one entry per degree in range")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")

    @classmethod
    def zero(cls, lo: int, hi: int) -> "GradedSpace":
        return cls(lo, hi, (0,) * (hi - lo + 1))

    @classmethod
    def from_function(cls, lo: int, hi: int, fn: Callable[[int], int]) -> "GradedSpace":
        return cls(lo, hi, tuple(fn(i) for i in range(lo, hi + 1)))

    def dim(self, i: int) -> int:
        if self.min_degree <= i <= self.max_degree:
            return self.dims[i - self.min_degree]
        return 0

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_list(self, lo: int, hi: int) -> list[int]:
        return [self.dim(i) for i in range(lo, hi + 1)]


def _freeze_blocks(blocks: Mapping[int, Matrix]) -> dict[int, Matrix]:
    return {int(k): v for k, v in sorted(blocks.items())}


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedSpace
    target: GradedSpace
    shift: int = 0
    blocks: Mapping[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "blocks", _freeze_blocks(self.blocks))
        for i, b in self.blocks.items():
            want = (self.target.dim(i + self.shift), self.source.dim(i))
            if b.shape != want:
                raise ValueError(f"block at degree {i} has shape {b.shape}, expected {want}")

    def block(self, i: int) -> Matrix:
        b = self.blocks.get(i)
        if b is None:
            return Matrix.zeros(self.target.dim(i + self.shift), self.source.dim(i))
        return b

    def degrees(self) -> range:
        return self.source.degrees()

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """self o other."""
        blocks = {i: self.block(i + other.shift) @ other.block(i) for i in other.source.degrees()}
        return GradedMap(other.source, self.target, self.shift + other.shift, blocks)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        assert self.shift == other.shift
        return GradedMap(self.source, self.target, self.shift,
                         {i: self.block(i) + other.block(i) for i in self.source.degrees()})

    def __neg__(self) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift, {i: -b for i, b in self.blocks.items()})

    def is_zero(self) -> bool:
        return all(self.block(i).is_zero() for i in self.source.degrees())

    def equals(self, other: "GradedMap") -> bool:
        return self.shift == other.shift and all(self.block(i) == other.block(i) for i in self.source.degrees())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.equals(other)

    __hash__ = None

    def ranks(self) -> dict[int, int]:
        return {i: rank(self.block(i)) for i in self.source.degrees()}

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedMap":
        return cls(space, space, 0, {i: Matrix.identity(space.dim(i)) for i in space.degrees()})

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, shift: int = 0) -> "GradedMap":
        return cls(source, target, shift, {})


@dataclass(frozen=True, eq=False)
class GradedPairing:
    """Bilinear pairing of left degree i with right degree total - i.

    The block at i is the Gram matrix: ``<x, y> = x^T @ block(i) @ y``.
    """

    left: GradedSpace
    right: GradedSpace
    total: int
    blocks: Mapping[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "blocks", _freeze_blocks(self.blocks))
        for i, b in self.blocks.items():
            want = (self.left.dim(i), self.right.dim(self.total - i))
            if b.shape != want:
                raise ValueError(f"pairing block at degree {i} has shape {b.shape}, expected {want}")

    def block(self, i: int) -> Matrix:
        b = self.blocks.get(i)
        if b is None:
            return Matrix.zeros(self.left.dim(i), self.right.dim(self.total - i))
        return b

    def degrees(self) -> range:
        return self.left.degrees()

    def degenerate_degrees(self) -> list[int]:
        lo = min(self.left.min_degree, self.total - self.right.max_degree)
        hi = max(self.left.max_degree, self.total - self.right.min_degree)
        return [i for i in range(lo, hi + 1) if not is_invertible(self.block(i))]

    def is_nondegenerate(self) -> bool:
        return not self.degenerate_degrees()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedPairing):
            return NotImplemented
        return (self.left == other.left and self.right == other.right and self.total == other.total
                and all(self.block(i) == other.block(i) for i in self.left.degrees()))

    __hash__ = None


@dataclass(frozen=True)
class ChainComplex:
    space: GradedSpace
    differential: GradedMap

    def __post_init__(self):
        d = self.differential
        if d.shift != -1 or d.source != self.space or d.target != self.space:
            raise ValueError("differential must be a degree -1 self-map of the space")
        bad = [i for i in self.space.degrees() if not (d.block(i - 1) @ d.block(i)).is_zero()]
        if bad:
            raise ValueError(f"d o d is nonzero in degrees {bad}")

    @classmethod
    def zero(cls, space: GradedSpace) -> "ChainComplex":
        return cls(space, GradedMap.zero(space, space, -1))

    @property
    def has_zero_differential(self) -> bool:
        return self.differential.is_zero()


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    map: GradedMap

    def __post_init__(self):
        f, da, db = self.map, self.source.differential, self.target.differential
        if f.shift != 0:
            raise ValueError("chain maps have degree 0")
        bad = [i for i in self.source.space.degrees()
               if db.block(i) @ f.block(i) != f.block(i - 1) @ da.block(i)]
        if bad:
            raise ValueError(f"map does not commute with differentials in degrees {bad}")


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone with C_i = B_i + A_{i-1} and d(b, a) = (d_B b + f a, -d_A a)."""
    a, b = f.source.space, f.target.space
    lo = min(a.min_degree + 1, b.min_degree)
    hi = max(a.max_degree + 1, b.max_degree)
    space = GradedSpace.from_function(lo, hi, lambda i: b.dim(i) + a.dim(i - 1))
    blocks = {}
    for i in range(lo, hi + 1):
        top = hstack(f.target.differential.block(i), f.map.block(i - 1))
        bottom = hstack(Matrix.zeros(a.dim(i - 2), b.dim(i)), -f.source.differential.block(i - 1))
        blocks[i] = vstack(top, bottom)
    return ChainComplex(space, GradedMap(space, space, -1, blocks))


@dataclass(frozen=True)
class Homology:
    """Homology with explicit coordinates.

    ``cycle_section`` sends a class to a representing cycle and
    ``projection[i]`` sends a cycle of degree i to its class, so that
    projection o section is the identity.
    """

    complex: ChainComplex
    space: GradedSpace
    cycle_section: GradedMap
    projection: Mapping[int, Matrix]

    def classify(self, i: int, cycles: Matrix) -> Matrix:
        return self.projection[i] @ cycles


def homology(c: ChainComplex) -> Homology:
    d = c.differential
    dims, sections, projections = [], {}, {}
    for i in c.space.degrees():
        cycles = kernel_basis(d.block(i)).basis
        bounds = solve(cycles, d.block(i + 1))
        assert bounds is not None, "boundaries must be cycles"
        q = quotient(Subspace.span(bounds))
        sections[i] = cycles @ q.section
        projections[i] = q.proj @ left_inverse(cycles)
        dims.append(q.dim)
    space = GradedSpace(c.space.min_degree, c.space.max_degree, tuple(dims))
    return Homology(c, space, GradedMap(space, c.space, 0, sections), projections)


def induced_on_homology(f: GradedMap, source: Homology, target: Homology) -> GradedMap:
    blocks = {i: target.projection[i + f.shift] @ f.block(i) @ source.cycle_section.block(i)
              for i in source.space.degrees() if target.space.min_degree <= i + f.shift <= target.space.max_degree}
    return GradedMap(source.space, target.space, f.shift, blocks)


@dataclass(frozen=True)
class ConeModel:
    """Homology of the cone of a degree-0 map phi: A -> M, both with zero differential.

    Degree i of the homology is coker(phi_i) + ker(phi_{i-1}), stacked in that
    order.  ``include`` is M -> H (m goes to ([m], 0)) and ``boundary`` is the
    connecting map H_i -> A_{i-1} reading off the kernel part.
    """

    phi: GradedMap
    space: GradedSpace
    coker: Mapping[int, Quotient]
    kernel: Mapping[int, Matrix]

    def split(self, i: int) -> tuple[int, int]:
        return self.coker[i].dim, self.kernel[i - 1].cols

    @property
    def include(self) -> GradedMap:
        blocks = {}
        for i in self.space.degrees():
            c, k = self.split(i)
            blocks[i] = vstack(self.coker[i].proj, Matrix.zeros(k, self.phi.target.dim(i)))
        return GradedMap(self.phi.target, self.space, 0, blocks)

    @property
    def boundary(self) -> GradedMap:
        blocks = {}
        for i in self.space.degrees():
            c, k = self.split(i)
            blocks[i] = hstack(Matrix.zeros(self.phi.source.dim(i - 1), c), self.kernel[i - 1])
        return GradedMap(self.space, self.phi.source, -1, blocks)

    def coker_embedding(self, i: int) -> Matrix:
        c, k = self.split(i)
        return vstack(Matrix.identity(c), Matrix.zeros(k, c))

    def map_to(self, other: "ConeModel", on_source: GradedMap, on_target: GradedMap) -> GradedMap:
        """Map of cones induced by a commuting square other.phi o on_source = on_target o phi."""
        blocks = {}
        for i in self.space.degrees():
            c1, k1 = self.split(i)
            c2, k2 = other.split(i)
            top = other.coker[i].proj @ on_target.block(i) @ self.coker[i].section
            image = on_source.block(i - 1) @ self.kernel[i - 1]
            coords = solve(other.kernel[i - 1], image)
            if coords is None:
                raise ValueError(f"square does not commute on kernels in degree {i - 1}")
            blocks[i] = vstack(hstack(top, Matrix.zeros(c2, k1)), hstack(Matrix.zeros(k2, c1), coords))
        return GradedMap(self.space, other.space, 0, blocks)


def cone_model(phi: GradedMap, lo: int | None = None, hi: int | None = None) -> ConeModel:
    if phi.shift != 0:
        raise ValueError("cone model needs a degree-0 map")
    lo = phi.target.min_degree if lo is None else lo
    hi = phi.target.max_degree if hi is None else hi
    coker, kernel, dims = {}, {}, []
    for i in range(lo - 1, hi + 1):
        kernel[i] = kernel_basis(phi.block(i)).basis
    for i in range(lo, hi + 1):
        coker[i] = quotient(image_basis(phi.block(i)))
        dims.append(coker[i].dim + kernel[i - 1].cols)
    return ConeModel(phi, GradedSpace(lo, hi, tuple(dims)), coker, kernel)


def exactness_failures(first: GradedMap, second: GradedMap) -> list[int]:
    """Degrees (of the middle space) where im(first) != ker(second)."""
    bad = []
    for i in second.source.degrees():
        f = first.block(i - first.shift)
        g = second.block(i)
        if not (g @ f).is_zero() or rank(f) + rank(g) != second.source.dim(i):
            bad.append(i)
    return bad
