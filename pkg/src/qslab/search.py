"""Admissible twist search over equivariant line bundles on a product.

Cohomology of a sheaf on the product modulo the diagonal action is
computed by the Kunneth formula at the level of characters: each factor
contributes a pair (h0 character, h1 character), the twist contributes a
linear character, and taking diagonal invariants is an inner product
with the trivial character.  A twist is admissible for a pair of
degree-2 bundle parameters when the h0 and h2 invariants both vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .characters import (
    CharacterTable,
    ClassFunction,
    ExactScalar,
    decompose,
    inner_product,
)


@dataclass(frozen=True)
class BundleCohomology:
    """Characters of the two cohomology spaces of a line bundle on a curve."""

    h0: ClassFunction
    h1: ClassFunction

    def __post_init__(self) -> None:
        self.h0._check_same_group(self.h1)
        for name, char in (("h0", self.h0), ("h1", self.h1)):
            value = char.at_identity()
            if not value.is_integer() or value.as_integer() < 0:
                raise ValueError(f"{name} identity value {value} is not a dimension")

    def euler(self) -> ClassFunction:
        return self.h0 - self.h1


def structure_sheaf(table: CharacterTable, canonical: ClassFunction) -> BundleCohomology:
    """Cohomology of the structure sheaf: constants in h0, 1-forms dual in h1."""
    return BundleCohomology(h0=table.trivial(), h1=canonical.conjugate())


def invariant_dimension(f: ClassFunction) -> int:
    """Multiplicity of the trivial character; errors when not integral."""
    group = f.group
    ones = ClassFunction(group, tuple(ExactScalar(1) for _ in f.values))
    m = inner_product(f, ones)
    if not m.is_integer():
        raise ValueError(f"invariant multiplicity {m} is not integral")
    return m.as_integer()


def cohomology_dims(
    factor_c: BundleCohomology,
    factor_d: BundleCohomology,
    twist: ClassFunction,
) -> tuple[int, int, int]:
    """Kunneth invariant dimensions (h0, h1, h2) of the twisted product bundle."""
    h0 = invariant_dimension(factor_c.h0 * factor_d.h0 * twist)
    h1 = invariant_dimension(
        (factor_c.h0 * factor_d.h1 + factor_c.h1 * factor_d.h0) * twist
    )
    h2 = invariant_dimension(factor_c.h1 * factor_d.h1 * twist)
    return h0, h1, h2


def kunneth_euler(
    virtual_c: ClassFunction, virtual_d: ClassFunction, twist: ClassFunction
) -> int:
    """Euler characteristic from the two factor Euler characters."""
    return invariant_dimension(virtual_c * virtual_d * twist)


@dataclass(frozen=True)
class PairResult:
    """Search outcome for one (A, B) pair of degree-2 parameters."""

    a_index: int
    b_index: int
    admissible: tuple[int, ...]
    dims: tuple[tuple[int, tuple[int, int, int]], ...]  # (twist row, (h0, h1, h2))
    eulers: tuple[tuple[int, int], ...]  # (twist row, euler characteristic)
    euler_flat: bool  # Euler characteristic vanishes for every twist


@dataclass(frozen=True)
class SearchReport:
    table: CharacterTable = field(repr=False)
    pairs: tuple[PairResult, ...]
    theorem_holds: bool
    trivial_admissible_anywhere: bool

    def pair(self, a_index: int, b_index: int) -> PairResult:
        for result in self.pairs:
            if result.a_index == a_index and result.b_index == b_index:
                return result
        raise KeyError(f"no pair ({a_index}, {b_index}) in this report")


def _linear_part(table: CharacterTable, f: ClassFunction) -> ClassFunction:
    mults = decompose(f, table)
    out = table.trivial() * 0
    for i in table.linear_indices():
        out = out + table.rows[i] * mults[i]
    return out


def search_all_pairs(
    table: CharacterTable,
    canonical_c: ClassFunction,
    canonical_d: ClassFunction,
) -> SearchReport:
    """Run the admissible twist search over all degree-2 parameter pairs.

    The first factor carries its structure sheaf.  The second factor
    ranges over bundles whose h0 is trivial plus a degree-2 row A and
    whose h1 is the linear part of the canonical character plus a
    degree-2 row B; twists range over all linear rows.
    """
    two_dim = table.indices_of_degree(2)
    linear = table.linear_indices()
    factor_c = structure_sheaf(table, canonical_c)
    base_d = _linear_part(table, canonical_d.conjugate())
    trivial_index = table.trivial_index()
    results = []
    trivial_anywhere = False
    for a in two_dim:
        for b in two_dim:
            factor_d = BundleCohomology(
                h0=table.trivial() + table.rows[a],
                h1=base_d + table.rows[b],
            )
            euler_c = factor_c.euler()
            euler_d = factor_d.euler()
            admissible = []
            dims = []
            eulers = []
            for t in linear:
                twist = table.rows[t]
                h0, h1, h2 = cohomology_dims(factor_c, factor_d, twist)
                dims.append((t, (h0, h1, h2)))
                eulers.append((t, kunneth_euler(euler_c, euler_d, twist)))
                if h0 == 0 and h2 == 0:
                    admissible.append(t)
                    if t == trivial_index:
                        trivial_anywhere = True
            results.append(
                PairResult(
                    a_index=a,
                    b_index=b,
                    admissible=tuple(admissible),
                    dims=tuple(dims),
                    eulers=tuple(eulers),
                    euler_flat=all(e == 0 for _, e in eulers),
                )
            )
    return SearchReport(
        table=table,
        pairs=tuple(results),
        theorem_holds=all(r.admissible for r in results),
        trivial_admissible_anywhere=trivial_anywhere,
    )
