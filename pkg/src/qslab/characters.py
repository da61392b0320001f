"""Exact character tables for the supported 2-group family.

Tables are computed by the class-matrix method: the central characters
are found as common eigenvectors of the class multiplication matrices
over a prime field F_p, degrees are recovered from the second
orthogonality relation, and values are lifted to exact cyclotomic
integers through root-of-unity multiplicities.  The lifted table is
certified by checking both orthogonality relations exactly.

Scalars live in Q(i): every group of the family has exponent dividing 4
(squares of all elements land in the elementary abelian normal part), so
Q(zeta_exponent) always embeds in Q(i).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .groups import FiniteGroup, GroupElement

REFERENCE_FORMAT = "qslab-chartable-ref/1"
CACHE_FORMAT = "qslab-chartable-cache/1"

_SCALAR_PATTERN = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)?"
    r"(?:(?P<sign>[+-]?)(?P<im>\d+(?:/\d+)?)?i)?$"
)


class CharacterTableError(RuntimeError):
    """The modular computation or its exact certification failed."""


class AlignmentError(ValueError):
    """A computed table cannot be matched to a reference fixture."""


def _coerce(value: "ExactScalar | Fraction | int") -> "ExactScalar":
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactScalar(Fraction(value), Fraction(0))
    raise TypeError(f"cannot coerce {type(value).__name__} to ExactScalar")


@dataclass(frozen=True)
class ExactScalar:
    """An exact element re + im*i of the Gaussian rationals."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: "ExactScalar | Fraction | int") -> "ExactScalar":
        o = _coerce(other)
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: "ExactScalar | Fraction | int") -> "ExactScalar":
        o = _coerce(other)
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: "ExactScalar | Fraction | int") -> "ExactScalar":
        return _coerce(other) - self

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __mul__(self, other: "ExactScalar | Fraction | int") -> "ExactScalar":
        o = _coerce(other)
        return ExactScalar(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "ExactScalar | Fraction | int") -> "ExactScalar":
        o = _coerce(other)
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero ExactScalar")
        return ExactScalar(
            (self.re * o.re + self.im * o.im) / norm,
            (self.im * o.re - self.re * o.im) / norm,
        )

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def as_integer(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.re.numerator

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{self.im}i"
        if self.re == 0:
            return imag
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{imag}"

    def to_json(self) -> int | str:
        if self.is_integer():
            return self.re.numerator
        return str(self)

    @classmethod
    def from_json(cls, data: int | str) -> "ExactScalar":
        if isinstance(data, bool) or not isinstance(data, (int, str)):
            raise ValueError(f"cannot parse scalar from {data!r}")
        if isinstance(data, int):
            return cls(Fraction(data), Fraction(0))
        text = data.strip()
        match = _SCALAR_PATTERN.match(text)
        if not match or not text:
            raise ValueError(f"cannot parse scalar from {data!r}")
        re_part, sign, im_part = match.group("re"), match.group("sign"), match.group("im")
        has_i = text.endswith("i")
        if not has_i:
            if re_part is None:
                raise ValueError(f"cannot parse scalar from {data!r}")
            return cls(Fraction(re_part), Fraction(0))
        if re_part is not None and sign == "" and im_part is None:
            # A bare form like "3i": the regex puts the digits in re_part.
            return cls(Fraction(0), Fraction(re_part))
        imag = Fraction(im_part) if im_part else Fraction(1)
        if sign == "-":
            imag = -imag
        real = Fraction(re_part) if re_part is not None else Fraction(0)
        return cls(real, imag)


ZERO = ExactScalar()
ONE = ExactScalar(Fraction(1))
I_UNIT = ExactScalar(Fraction(0), Fraction(1))


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """A function constant on conjugacy classes, in canonical class order.

    Arithmetic is pointwise, so products of characters are characters of
    tensor products and integer combinations stay inside the ring of
    virtual characters.
    """

    group: FiniteGroup = field(repr=False)
    values: tuple[ExactScalar, ...]

    def __post_init__(self) -> None:
        k = len(self.group.conjugacy_classes())
        vals = tuple(_coerce(v) for v in self.values)
        if len(vals) != k:
            raise ValueError(f"expected {k} class values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.values == other.values and self.group.spec == other.group.spec

    def __hash__(self) -> int:
        return hash(self.values)

    def _check_same_group(self, other: "ClassFunction") -> None:
        if self.group is not other.group and self.group.spec != other.group.spec:
            raise ValueError("class functions on different groups")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check_same_group(other)
        return ClassFunction(
            self.group, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._check_same_group(other)
        return ClassFunction(
            self.group, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def __mul__(self, other: "ClassFunction | ExactScalar | Fraction | int"):
        if isinstance(other, ClassFunction):
            self._check_same_group(other)
            return ClassFunction(
                self.group, tuple(a * b for a, b in zip(self.values, other.values))
            )
        c = _coerce(other)
        return ClassFunction(self.group, tuple(a * c for a in self.values))

    def __rmul__(self, other: "ExactScalar | Fraction | int") -> "ClassFunction":
        return self * other

    def __neg__(self) -> "ClassFunction":
        return self * -1

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.group, tuple(v.conjugate() for v in self.values))

    def value_at(self, g: GroupElement) -> ExactScalar:
        return self.values[self.group.class_index_of(g)]

    def at_identity(self) -> ExactScalar:
        return self.values[0]

    def is_real(self) -> bool:
        return all(v.is_real() for v in self.values)


def inner_product(f: ClassFunction, h: ClassFunction) -> ExactScalar:
    """<f, h> = (1/|G|) sum over classes of |K| f(K) conj(h(K))."""
    f._check_same_group(h)
    total = ZERO
    for cls, a, b in zip(f.group.conjugacy_classes(), f.values, h.values):
        total = total + a * b.conjugate() * cls.size
    return total / f.group.order


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters in canonical row order (degree, then values)."""

    group: FiniteGroup = field(repr=False)
    rows: tuple[ClassFunction, ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.at_identity().as_integer() for row in self.rows)

    def trivial_index(self) -> int:
        for i, row in enumerate(self.rows):
            if all(v == ONE for v in row.values):
                return i
        raise CharacterTableError("table has no trivial character row")

    def trivial(self) -> ClassFunction:
        return self.rows[self.trivial_index()]

    def is_real(self) -> bool:
        return all(row.is_real() for row in self.rows)

    def linear_indices(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degrees) if d == 1)

    def indices_of_degree(self, d: int) -> tuple[int, ...]:
        return tuple(i for i, deg in enumerate(self.degrees) if deg == d)

    def verify_orthogonality(self) -> bool:
        """Both orthogonality relations, checked exactly."""
        rows, group = self.rows, self.group
        for i, a in enumerate(rows):
            for j, b in enumerate(rows):
                expected = ONE if i == j else ZERO
                if inner_product(a, b) != expected:
                    return False
        classes = group.conjugacy_classes()
        for i in range(len(classes)):
            for j in range(len(classes)):
                total = ZERO
                for row in rows:
                    total = total + row.values[i] * row.values[j].conjugate()
                expected = (
                    ExactScalar(Fraction(group.order, classes[i].size))
                    if i == j
                    else ZERO
                )
                if total != expected:
                    return False
        return True


def class_mult_coefficient(group: FiniteGroup, i: int, j: int, k: int) -> int:
    """Number of pairs (x, y) in K_i x K_j with x*y = z, for a fixed z in K_k.

    The count is independent of the choice of z; the class representative
    is used.
    """
    classes = group.conjugacy_classes()
    z = group.index(classes[k].representative)
    inv, mul = group._inv, group._mul
    count = 0
    for x in classes[i].elements:
        xi = group.index(x)
        y = mul[inv[xi]][z]
        if group._class_of[y] == j:
            count += 1
    return count


# -- modular linear algebra helpers ------------------------------------


def _rref(matrix: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Row-reduce a matrix over F_p; returns (rows, pivot column list)."""
    rows = [row[:] for row in matrix]
    pivots: list[int] = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                factor = rows[i][c]
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _nullspace(matrix: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right nullspace over F_p, one vector per free column."""
    ncols = len(matrix[0])
    rows, pivots = _rref(matrix, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-rows[r][fc]) % p
        basis.append(vec)
    return basis


def _solve_in_span(basis: list[list[int]], targets: list[list[int]], p: int) -> list[list[int]]:
    """Coordinates of each target vector in the span of ``basis``.

    ``basis`` holds d independent vectors of length k; each target must
    lie in their span.  Returns the d x t coordinate matrix X with
    B X = T columnwise.
    """
    d, k, t = len(basis), len(basis[0]), len(targets)
    aug = [[basis[j][r] for j in range(d)] + [tg[r] for tg in targets] for r in range(k)]
    rows, pivots = _rref(aug, p)
    if pivots != list(range(d)):
        raise CharacterTableError("basis vectors are not independent")
    if len(rows) > d and any(any(row[d:]) for row in rows[d:]):
        raise CharacterTableError("target outside invariant subspace")
    coords = [[0] * t for _ in range(d)]
    for r in range(d):
        for c in range(t):
            coords[r][c] = rows[r][d + c]
    return coords


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _choose_prime(order: int, exponent: int) -> int:
    """Smallest p = 1 mod exponent with p > 2 * ceil(sqrt(order))^2."""
    bound = 1
    while bound * bound < order:
        bound += 1
    p = 2 * bound * bound + 1
    while not (_is_prime(p) and p % exponent == 1):
        p += 1
    return p


def _primitive_root_of_unity(p: int, e: int) -> int:
    if e == 1:
        return 1
    proper = {e // r for r in (2, 3, 5, 7) if e % r == 0}
    for x in range(2, p):
        if pow(x, e, p) == 1 and all(pow(x, d, p) != 1 for d in proper):
            return x
    raise CharacterTableError(f"no primitive {e}-th root of unity mod {p}")


def compute_character_table(group: FiniteGroup) -> CharacterTable:
    """The full irreducible character table, computed and certified exactly."""
    if group._char_table_cache is not None:
        return group._char_table_cache

    classes = group.conjugacy_classes()
    k = len(classes)
    order = group.order
    e = group.exponent()
    p = _choose_prime(order, e)
    omega = _primitive_root_of_unity(p, e)
    omega_inv = pow(omega, p - 2, p)

    reps = [group.index(cls.representative) for cls in classes]
    sizes = [cls.size for cls in classes]
    mul, inv = group._mul, group._inv
    class_of = [group.class_index_of(g) for g in group.elements]

    # Class multiplication tensor, with the fixed-z convention z = rep(l).
    a = [[[0] * k for _ in range(k)] for _ in range(k)]
    for l in range(k):
        z = reps[l]
        for i in range(k):
            for x in classes[i].elements:
                y = mul[inv[group.index(x)]][z]
                a[i][class_of[y]][l] += 1

    matrices = [[[a[i][j][l] % p for l in range(k)] for j in range(k)] for i in range(k)]

    # Split the common eigenspaces; subspace bases are rows in RREF so the
    # whole walk is deterministic.
    spaces: list[list[list[int]]] = [
        [[1 if c == r else 0 for c in range(k)] for r in range(k)]
    ]
    for i in range(1, k):
        mat = matrices[i]
        next_spaces: list[list[list[int]]] = []
        for basis in spaces:
            if len(basis) == 1:
                next_spaces.append(basis)
                continue
            images = [
                [sum(mat[r][c] * vec[c] for c in range(k)) % p for r in range(k)]
                for vec in basis
            ]
            restriction = _solve_in_span(basis, images, p)
            d = len(basis)
            for lam in range(p):
                shifted = [
                    [(restriction[r][c] - (lam if r == c else 0)) % p for c in range(d)]
                    for r in range(d)
                ]
                null = _nullspace(shifted, p)
                if not null:
                    continue
                sub = [
                    [
                        sum(coeff[j] * basis[j][c] for j in range(d)) % p
                        for c in range(k)
                    ]
                    for coeff in null
                ]
                reduced, _ = _rref(sub, p)
                next_spaces.append(reduced)
        if sum(len(b) for b in next_spaces) != k:
            raise CharacterTableError("eigenspace split lost dimensions")
        spaces = next_spaces
    if any(len(b) != 1 for b in spaces):
        raise CharacterTableError("class matrices failed to separate characters")

    inverse_class = [class_of[inv[r]] for r in reps]
    inv_sizes = [pow(s, p - 2, p) for s in sizes]

    # Power-map classes for the root-of-unity lift.
    power_class = []
    for r in reps:
        row, acc = [], 0
        for _ in range(e):
            row.append(class_of[acc])
            acc = mul[acc][r]
        power_class.append(row)

    zeta = {1: ONE, 2: -ONE, 4: I_UNIT}[e]
    zeta_pow = [ONE]
    for _ in range(1, e):
        zeta_pow.append(zeta_pow[-1] * zeta)

    e_inv = pow(e, p - 2, p)
    rows = []
    for basis in spaces:
        w = basis[0]
        if w[0] == 0:
            raise CharacterTableError("central character vanishes on the identity class")
        scale = pow(w[0], p - 2, p)
        w = [(v * scale) % p for v in w]
        s = sum(w[l] * w[inverse_class[l]] * inv_sizes[l] for l in range(k)) % p
        if s == 0:
            raise CharacterTableError("degree recovery hit a zero denominator")
        d_squared = (order * pow(s, p - 2, p)) % p
        degree = next(
            (d for d in range(1, int(order) + 1) if d * d <= order and (d * d) % p == d_squared),
            None,
        )
        if degree is None:
            raise CharacterTableError("no admissible degree for a central character")
        chi_bar = [(degree * w[l] * inv_sizes[l]) % p for l in range(k)]
        values = []
        for l in range(k):
            mults = []
            for t in range(e):
                acc = 0
                for j in range(e):
                    acc += chi_bar[power_class[l][j]] * pow(omega_inv, (j * t) % e, p)
                mults.append((acc * e_inv) % p)
            if sum(mults) != degree:
                raise CharacterTableError("root-of-unity multiplicities do not sum to the degree")
            val = ZERO
            for t, m in enumerate(mults):
                val = val + zeta_pow[t] * m
            values.append(val)
        if values[0] != ExactScalar(Fraction(degree)):
            raise CharacterTableError("lifted identity value disagrees with the degree")
        rows.append(ClassFunction(group, tuple(values)))

    rows.sort(key=lambda row: (row.at_identity().sort_key(), [v.sort_key() for v in row.values]))
    table = CharacterTable(group=group, rows=tuple(rows))
    if sum(d * d for d in table.degrees) != order:
        raise CharacterTableError("degree squares do not sum to the group order")
    if not table.verify_orthogonality():
        raise CharacterTableError("lifted table fails orthogonality")
    group._char_table_cache = table
    return table


def decompose(f: ClassFunction, table: CharacterTable) -> tuple[int, ...]:
    """Multiplicities of ``f`` against the irreducible rows.

    Raises if any multiplicity is not a rational integer, which means
    ``f`` is not a virtual character.
    """
    mults = []
    for row in table.rows:
        m = inner_product(f, row)
        if not m.is_integer():
            raise ValueError(
                f"multiplicity {m} against degree-{row.at_identity()} row is not integral"
            )
        mults.append(m.as_integer())
    return tuple(mults)


def linear_combination(table: CharacterTable, mults: Sequence[int]) -> ClassFunction:
    if len(mults) != len(table.rows):
        raise ValueError("one multiplicity per irreducible row required")
    out = ClassFunction(table.group, tuple(ZERO for _ in table.rows[0].values))
    for m, row in zip(mults, table.rows):
        out = out + row * m
    return out


# -- reference fixtures and alignment ----------------------------------


@dataclass(frozen=True)
class ReferenceTable:
    """A published character table: class words, sizes, and a value grid."""

    group_name: str
    class_reps: tuple[str, ...]
    class_members: tuple[tuple[str, ...], ...]
    class_sizes: tuple[int, ...]
    matrix: tuple[tuple[ExactScalar, ...], ...]


def _split_word(word: str) -> tuple[str, ...]:
    word = word.strip()
    if word == "1":
        return ()
    return tuple(part.strip() for part in word.split("*"))


def load_reference_table(path: str | Path | None = None) -> ReferenceTable:
    """Load a reference fixture; the packaged table is the default."""
    if path is None:
        text = (resources.files("qslab") / "data" / "g32_27_chartable.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    if data.get("format") != REFERENCE_FORMAT:
        raise ValueError(f"unsupported reference fixture format {data.get('format')!r}")
    classes = data["classes"]
    return ReferenceTable(
        group_name=data["group"],
        class_reps=tuple(c["rep"] for c in classes),
        class_members=tuple(tuple(c["members"]) for c in classes),
        class_sizes=tuple(int(c["size"]) for c in classes),
        matrix=tuple(
            tuple(ExactScalar.from_json(v) for v in row) for row in data["rows"]
        ),
    )


def reference_column_map(group: FiniteGroup, ref: ReferenceTable) -> tuple[int, ...]:
    """Canonical class index shown at each reference column.

    Resolves every listed member word and checks that each reference
    class is exactly one full computed class.
    """
    classes = group.conjugacy_classes()
    k = len(classes)
    if len(ref.class_members) != k:
        raise AlignmentError(
            f"reference lists {len(ref.class_members)} classes, computed {k}"
        )
    col_perm = []
    for j, members in enumerate(ref.class_members):
        elems = [group.evaluate_word(_split_word(w)) for w in members]
        indices = {group.class_index_of(g) for g in elems}
        if len(indices) != 1:
            raise AlignmentError(f"reference class {j} words span several classes")
        ci = indices.pop()
        if len(set(elems)) != classes[ci].size or len(members) != ref.class_sizes[j]:
            raise AlignmentError(
                f"reference class {j} lists {len(members)} members, computed size is "
                f"{classes[ci].size}"
            )
        col_perm.append(ci)
    if len(set(col_perm)) != k:
        raise AlignmentError("reference classes do not cover every computed class")
    return tuple(col_perm)


def align_to_reference(
    table: CharacterTable, ref: ReferenceTable
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Match a computed table to a reference fixture.

    Returns (row_perm, col_perm) with
    ``table.rows[row_perm[i]].values[col_perm[j]] == ref.matrix[i][j]``.
    Raises AlignmentError when class resolution or row matching fails.
    """
    group = table.group
    k = len(group.conjugacy_classes())
    if len(ref.matrix) != len(table.rows):
        raise AlignmentError(
            f"reference has {len(ref.matrix)} rows, computed table {len(table.rows)}"
        )
    col_perm = reference_column_map(group, ref)

    used: set[int] = set()
    row_perm = []
    for i, ref_row in enumerate(ref.matrix):
        target = [ZERO] * k
        for j, value in enumerate(ref_row):
            target[col_perm[j]] = value
        matches = [
            r
            for r, row in enumerate(table.rows)
            if r not in used and list(row.values) == target
        ]
        if len(matches) != 1:
            raise AlignmentError(
                f"no aligning permutation: reference row {i} has {len(matches)} matches"
            )
        used.add(matches[0])
        row_perm.append(matches[0])
    return tuple(row_perm), tuple(col_perm)


# -- cache serialization ------------------------------------------------


def table_to_cache_dict(table: CharacterTable) -> dict:
    return {
        "format": CACHE_FORMAT,
        "spec_hash": table.group.spec.content_hash(),
        "rows": [[v.to_json() for v in row.values] for row in table.rows],
    }


def table_from_cache_dict(group: FiniteGroup, data: dict) -> CharacterTable:
    """Rebuild a cached table; the caller must revalidate orthogonality."""
    if data.get("format") != CACHE_FORMAT:
        raise ValueError(f"unsupported cache format {data.get('format')!r}")
    if data.get("spec_hash") != group.spec.content_hash():
        raise ValueError("cached table belongs to a different group spec")
    rows = tuple(
        ClassFunction(group, tuple(ExactScalar.from_json(v) for v in row))
        for row in data["rows"]
    )
    return CharacterTable(group=group, rows=rows)
