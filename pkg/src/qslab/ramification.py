"""Spherical generating systems and the covering curves they define.

A spherical system on G is a tuple of nontrivial elements that generates
G and multiplies to the identity.  It encodes a Galois covering of the
projective line branched over one point per entry, with cyclic local
monodromy generated by that entry.  Everything downstream (fixed point
counts, quotient genera, fiber orbit shapes, the canonical-bundle
character) is derived from that combinatorial datum alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import CharacterTable, ClassFunction, ExactScalar
from .groups import FiniteGroup, GroupElement, Subgroup


class SphericalSystemError(ValueError):
    """A tuple of elements fails one of the spherical system conditions."""


class IdentityFixedPoints(ValueError):
    """Fixed points of the identity requested; it fixes the whole curve."""


@dataclass(frozen=True)
class SphericalSystem:
    group: FiniteGroup = field(repr=False)
    entries: tuple[GroupElement, ...]

    @property
    def signature(self) -> tuple[int, ...]:
        """Entry orders, in entry order."""
        return tuple(t.order() for t in self.entries)

    def __repr__(self) -> str:
        words = ", ".join(t.word() for t in self.entries)
        return f"SphericalSystem([{words}])"


def validate_spherical(group: FiniteGroup, entries) -> SphericalSystem:
    """Check the spherical system conditions, naming the one that fails."""
    entries = tuple(entries)
    if not entries:
        raise SphericalSystemError("empty system: at least one entry is required")
    for t in entries:
        group.index(t)
        if t.is_identity():
            raise SphericalSystemError("identity entry: every entry must be nontrivial")
    product = group.identity()
    for t in entries:
        product = product * t
    if not product.is_identity():
        raise SphericalSystemError(
            f"product-not-identity: entries multiply to {product.word()}"
        )
    if group.subgroup_closure(entries).order != group.order:
        raise SphericalSystemError("non-generating: entries span a proper subgroup")
    return SphericalSystem(group=group, entries=entries)


def stabilizer_set(system: SphericalSystem) -> frozenset[GroupElement]:
    """Union of all conjugates of all powers of the entries (identity included)."""
    group = system.group
    out: set[GroupElement] = set()
    for t in system.entries:
        power = group.identity()
        for _ in range(t.order()):
            out.update(group.class_of(power).elements)
            power = power * t
    return frozenset(out)


def is_disjoint(a: SphericalSystem, b: SphericalSystem) -> bool:
    """True when the stabilizer sets meet only in the identity."""
    if a.group is not b.group and a.group.spec != b.group.spec:
        raise ValueError("systems live on different groups")
    return stabilizer_set(a) & stabilizer_set(b) == {a.group.identity()}


def genus_from_type(group_order: int, signature) -> int:
    """Genus of the covering curve from the Riemann-Hurwitz relation.

    2g - 2 = n(-2 + sum(1 - 1/m)) over the signature entries m.
    """
    signature = tuple(signature)
    if group_order < 1:
        raise ValueError(f"group order must be positive, got {group_order}")
    for m in signature:
        if not isinstance(m, int) or m < 2:
            raise ValueError(f"signature entries must be integers >= 2, got {m!r}")
    rhs = group_order * (Fraction(-2) + sum(1 - Fraction(1, m) for m in signature))
    if rhs.denominator != 1:
        raise ValueError(f"Riemann-Hurwitz value 2g-2 = {rhs} is not an integer")
    if rhs.numerator % 2:
        raise ValueError(f"Riemann-Hurwitz value 2g-2 = {rhs} is odd")
    genus = (rhs.numerator + 2) // 2
    if genus < 0:
        raise ValueError(f"Riemann-Hurwitz genus {genus} is negative")
    return genus


def curve_genus(system: SphericalSystem) -> int:
    return genus_from_type(system.group.order, system.signature)


def _cyclic_entries(system: SphericalSystem) -> list[Subgroup]:
    group = system.group
    return [group.subgroup_closure([t]) for t in system.entries]


def fixed_point_count(system: SphericalSystem, g: GroupElement) -> int:
    """Fixed points of g on the covering curve, for nontrivial g.

    Counts pairs (entry i, right coset <t_i>t) with g in t^-1 <t_i> t,
    walking a right transversal of each cyclic entry subgroup.
    """
    group = system.group
    if g.is_identity():
        raise IdentityFixedPoints("the identity fixes the whole curve")
    count = 0
    for sub in _cyclic_entries(system):
        for t in group.right_transversal(sub):
            if t * g * t.inverse() in sub:
                count += 1
    return count


def fixed_point_count_by_membership(system: SphericalSystem, g: GroupElement) -> int:
    """Independent route: count all x with x g x^-1 in <t_i>, then divide.

    The membership predicate is constant on each right coset <t_i>x, so
    dividing the whole-group count by the subgroup order counts cosets.
    """
    group = system.group
    if g.is_identity():
        raise IdentityFixedPoints("the identity fixes the whole curve")
    count = 0
    for sub in _cyclic_entries(system):
        hits = sum(1 for x in group.elements if x * g * x.inverse() in sub)
        if hits % sub.order:
            raise RuntimeError("conjugation count not constant on cosets")
        count += hits // sub.order
    return count


def fixed_point_table(system: SphericalSystem) -> tuple[int | None, ...]:
    """Per-class fixed point counts in canonical class order; None marks
    the identity class (whole curve)."""
    group = system.group
    out: list[int | None] = []
    for cls in group.conjugacy_classes():
        if cls.representative.is_identity():
            out.append(None)
        else:
            out.append(fixed_point_count(system, cls.representative))
    return tuple(out)


def canonical_character(system: SphericalSystem, table: CharacterTable) -> ClassFunction:
    """Character of the canonical representation on holomorphic 1-forms.

    Requires every irreducible character of the group to be real valued;
    then the Lefschetz relation fix(g) = 2 - 2 chi(g) inverts to exact
    integer values, with chi(1) the curve genus.
    """
    if not table.is_real():
        raise ValueError(
            "canonical character requires a real character table; "
            "this table has nonreal values"
        )
    group = system.group
    genus = curve_genus(system)
    values = []
    for cls in group.conjugacy_classes():
        if cls.representative.is_identity():
            values.append(ExactScalar(Fraction(genus)))
            continue
        fix = fixed_point_count(system, cls.representative)
        if fix % 2:
            raise RuntimeError(
                f"odd fixed point count {fix} contradicts a real-valued action"
            )
        values.append(ExactScalar(Fraction(2 - fix, 2)))
    return ClassFunction(group, tuple(values))


@dataclass(frozen=True)
class CoveringCurve:
    """A covering curve bundled with its derived invariants."""

    system: SphericalSystem
    genus: int
    fixed_points: tuple[int | None, ...]
    canonical: ClassFunction

    @property
    def group(self) -> FiniteGroup:
        return self.system.group


def covering_curve(system: SphericalSystem, table: CharacterTable) -> CoveringCurve:
    genus = curve_genus(system)
    canonical = canonical_character(system, table)
    if canonical.at_identity() != ExactScalar(Fraction(genus)):
        raise RuntimeError("canonical character identity value disagrees with the genus")
    from .characters import inner_product

    if not inner_product(canonical, table.trivial()).is_zero():
        raise RuntimeError("canonical character has invariants on a spherical covering")
    return CoveringCurve(
        system=system,
        genus=genus,
        fixed_points=fixed_point_table(system),
        canonical=canonical,
    )


def _coset_action(group: FiniteGroup, sub: Subgroup):
    """Right-coset labels for H\\G and the right-multiplication action."""
    transversal = group.right_transversal(sub)
    coset_of = [0] * group.order
    for label, t in enumerate(transversal):
        for h in sub.elements:
            coset_of[group.index(h * t)] = label
    reps = [group.index(t) for t in transversal]
    return reps, coset_of


def quotient_genus(system: SphericalSystem, sub: Subgroup) -> int:
    """Genus of the quotient of the covering curve by a subgroup.

    2g - 2 = -2[G:H] + sum over entries and orbits O of <t_i> on H\\G of
    (|O| - 1); each orbit of length L contributes L - 1.
    """
    group = system.group
    group._check_subgroup(sub)
    reps, coset_of = _coset_action(group, sub)
    index = len(reps)
    correction = 0
    for t in system.entries:
        ti = group.index(t)
        seen = [False] * index
        for start in range(index):
            if seen[start]:
                continue
            length = 0
            label = start
            while not seen[label]:
                seen[label] = True
                length += 1
                label = coset_of[group._mul[reps[label]][ti]]
            correction += length - 1
    rhs = -2 * index + correction
    if rhs % 2:
        raise RuntimeError(f"quotient Riemann-Hurwitz value {rhs} is odd")
    genus = (rhs + 2) // 2
    if genus < 0:
        raise RuntimeError(f"quotient genus {genus} is negative")
    return genus


def quotient_genus_by_character(
    system: SphericalSystem, sub: Subgroup, table: CharacterTable
) -> int:
    """Independent route: average the canonical character over the subgroup."""
    canonical = canonical_character(system, table)
    total = ExactScalar()
    for h in sub.elements:
        total = total + canonical.value_at(h)
    avg = total / sub.order
    if not avg.is_integer() or avg.as_integer() < 0:
        raise RuntimeError(f"canonical character average {avg} is not a genus")
    return avg.as_integer()


@dataclass(frozen=True)
class FiberOrbits:
    """Orbit shape of a subgroup acting on one branch fiber."""

    branch_index: int
    fiber_size: int
    orbits: tuple[tuple[int, int], ...]  # (orbit size, stabilizer order), sorted

    @property
    def acts_freely(self) -> bool:
        return all(stab == 1 for _, stab in self.orbits)


def fiber_orbit_structure(
    system: SphericalSystem, branch_index: int, sub: Subgroup
) -> FiberOrbits:
    """Orbits of a subgroup on the fiber over one branch point.

    Fiber points are right cosets <t_i>x; the subgroup acts by right
    multiplication and the stabilizer of <t_i>x is H meet x^-1 <t_i> x.
    """
    group = system.group
    group._check_subgroup(sub)
    if not 1 <= branch_index <= len(system.entries):
        raise ValueError(
            f"branch index {branch_index} out of range 1..{len(system.entries)}"
        )
    cyclic = group.subgroup_closure([system.entries[branch_index - 1]])
    reps, coset_of = _coset_action(group, cyclic)
    hidx = [group.index(h) for h in sub.elements]
    seen = [False] * len(reps)
    orbits = []
    for start in range(len(reps)):
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            label = frontier.pop()
            seen[label] = True
            for h in hidx:
                nxt = coset_of[group._mul[reps[label]][h]]
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        x = group.elements[reps[start]]
        stab = sum(
            1
            for h in sub.elements
            if x * h * x.inverse() in cyclic
        )
        if len(orbit) * stab != sub.order:
            raise RuntimeError("orbit-stabilizer mismatch on a branch fiber")
        orbits.append((len(orbit), stab))
    orbits.sort()
    return FiberOrbits(
        branch_index=branch_index,
        fiber_size=len(reps),
        orbits=tuple(orbits),
    )
