"""Exact arithmetic in Z^r x Z_{n_1} x ... x Z_{n_k} and its rational group ring.

Group elements are stored additively as integer vectors (free part first,
then torsion residues).  Text rendering is multiplicative, in the
generators ``t`` (free) and ``s`` (torsion)::

    element  := "0" | term (("+" | "-") term)*
    term     := coeff | [coeff "*"] monomial
    coeff    := integer | integer "/" integer
    monomial := factor ("*" factor)*
    factor   := gen ["^" ["-"] integer]
    gen      := "t" | "t" index | "s" | "s" index

Generators are unindexed when there is only one of their kind (``t``,
``s``) and 1-indexed otherwise (``t1``, ``t2``, ``s1``).  Terms are
printed in descending lexicographic order of exponent vectors, so
``t + t^-1`` and ``t^2 + 2 + t^-2``.
"""

from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .errors import GraphFormatError, SpecMismatchError

Key = tuple  # flat exponent vector: free part then reduced torsion part


@dataclass(frozen=True)
class GroupSpec:
    """The abelian group Z^free_rank x Z_{torsion[0]} x ..."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        if any(n < 2 for n in self.torsion):
            raise ValueError(f"torsion orders must be >= 2, got {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion orders must form a divisibility chain, got {self.torsion}")

    @property
    def rank(self) -> int:
        """Length of the flat exponent vector."""
        return self.free_rank + len(self.torsion)

    @property
    def torsion_size(self) -> int:
        return math.prod(self.torsion)

    @property
    def identity_key(self) -> Key:
        return (0,) * self.rank

    def normalize(self, values: Sequence[int]) -> Key:
        r = self.free_rank
        if len(values) != self.rank:
            raise SpecMismatchError(f"expected {self.rank} exponents, got {len(values)}")
        return tuple(int(v) for v in values[:r]) + tuple(
            int(v) % n for v, n in zip(values[r:], self.torsion)
        )

    def add(self, a: Key, b: Key) -> Key:
        if not self.torsion:
            return tuple(x + y for x, y in zip(a, b))
        r = self.free_rank
        return tuple(x + y for x, y in zip(a[:r], b[:r])) + tuple(
            (x + y) % n for x, y, n in zip(a[r:], b[r:], self.torsion)
        )

    def neg(self, a: Key) -> Key:
        r = self.free_rank
        return tuple(-x for x in a[:r]) + tuple((-x) % n for x, n in zip(a[r:], self.torsion))

    def order(self, a: Key):
        """Order of the element, or None when it is infinite."""
        r = self.free_rank
        if any(a[:r]):
            return None
        out = 1
        for w, n in zip(a[r:], self.torsion):
            out = math.lcm(out, n // math.gcd(w, n))
        return out

    def element(self, free=(), torsion=()) -> "GroupElement":
        free = tuple(free) or (0,) * self.free_rank
        torsion = tuple(torsion) or (0,) * len(self.torsion)
        return GroupElement(self, self.normalize(free + torsion))

    def identity(self) -> "GroupElement":
        return GroupElement(self, self.identity_key)

    def generators(self) -> list:
        out = []
        for j in range(self.rank):
            key = [0] * self.rank
            key[j] = 1
            out.append(GroupElement(self, tuple(key)))
        return out

    def generator_names(self) -> list:
        r, k = self.free_rank, len(self.torsion)
        tnames = ["t"] if r == 1 else [f"t{j + 1}" for j in range(r)]
        snames = ["s"] if k == 1 else [f"s{j + 1}" for j in range(k)]
        return tnames + snames

    def render_key(self, key: Key) -> str:
        parts = []
        for name, e in zip(self.generator_names(), key):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class GroupElement:
    """A group element; arithmetic is written additively."""

    group: GroupSpec = field(repr=False)
    key: Key

    @property
    def free(self) -> tuple:
        return self.key[: self.group.free_rank]

    @property
    def torsion(self) -> tuple:
        return self.key[self.group.free_rank:]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _check_same(self.group, other.group)
        return GroupElement(self.group, self.group.add(self.key, other.key))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, self.group.neg(self.key))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        key = self.group.normalize([k * x for x in self.key])
        return GroupElement(self.group, key)

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return not any(self.key)

    def order(self):
        return self.group.order(self.key)

    def __str__(self):
        return self.group.render_key(self.key)


def _check_same(g1: GroupSpec, g2: GroupSpec):
    if g1 != g2:
        raise SpecMismatchError(f"group mismatch: {g1} vs {g2}")


def _as_key(group: GroupSpec, x) -> Key:
    if isinstance(x, GroupElement):
        _check_same(group, x.group)
        return x.key
    return group.normalize(tuple(x))


class GroupRingElement:
    """Finite formal sum of group elements with exact rational coefficients.

    Instances are treated as immutable.  Coefficients are kept as ``int``
    whenever possible and as ``Fraction`` otherwise.
    """

    __slots__ = ("group", "_terms", "_hash")

    def __init__(self, group: GroupSpec, terms: Mapping = ()):
        self.group = group
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            k = _as_key(group, k)
            c = _coerce(c)
            clean[k] = clean.get(k, 0) + c
        self._terms = {k: c for k, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, group, terms):
        obj = cls.__new__(cls)
        obj.group = group
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, group):
        return cls._raw(group, {})

    @classmethod
    def one(cls, group):
        return cls._raw(group, {group.identity_key: 1})

    @classmethod
    def monomial(cls, element: GroupElement, coeff=1):
        return cls(element.group, {element.key: coeff})

    @classmethod
    def parse(cls, text: str, group: GroupSpec) -> "GroupRingElement":
        return parse_element(text, group)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list:
        return [GroupElement(self.group, k) for k in self._terms]

    def coefficient(self, element) -> Rational:
        return self._terms.get(_as_key(self.group, element), 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _lift(self, other) -> "GroupRingElement":
        if isinstance(other, GroupRingElement):
            _check_same(self.group, other.group)
            return other
        if isinstance(other, GroupElement):
            return GroupRingElement.monomial(other)
        if isinstance(other, (int, Fraction, Rational)):
            return GroupRingElement(self.group, {self.group.identity_key: other})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return GroupRingElement._raw(self.group, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement._raw(self.group, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for units")
        out = GroupRingElement.one(self.group)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroupRingElement(self.group, {self.group.identity_key: other})
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, frozenset(self._terms.items())))
        return self._hash

    def star(self):
        return star(self)

    def constant_term(self):
        return constant_term(self)

    def evaluate(self, point: "TorusCharacterPoint") -> complex:
        return evaluate(self, point)

    def sorted_items(self):
        return sorted(self._terms.items(), reverse=True)

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"GroupRingElement({render_element(self)!r})"


def _coerce(c):
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _coerce(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return _coerce(Fraction(c))
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Distributive product, combining exponents by the group law."""
    _check_same(a.group, b.group)
    add = a.group.add
    out = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            k = add(ka, kb)
            out[k] = out.get(k, 0) + ca * cb
    return GroupRingElement._raw(a.group, {k: c for k, c in out.items() if c != 0})


def star(a: GroupRingElement) -> GroupRingElement:
    """The involution sum c_g g -> sum c_g g^-1."""
    neg = a.group.neg
    return GroupRingElement._raw(a.group, {neg(k): c for k, c in a._terms.items()})


def constant_term(a: GroupRingElement):
    """Coefficient of the identity element (the von Neumann trace)."""
    return a._terms.get(a.group.identity_key, 0)


@dataclass(frozen=True)
class TorusCharacterPoint:
    """Angles for the free generators and character indices for the torsion ones."""

    angles: tuple = ()
    character_indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(x) for x in self.angles))
        object.__setattr__(self, "character_indices", tuple(int(m) for m in self.character_indices))


def evaluate(a: GroupRingElement, p: TorusCharacterPoint) -> complex:
    """Substitute t_j -> exp(i theta_j) and s_i -> exp(2 pi i m_i / n_i)."""
    g = a.group
    if len(p.angles) != g.free_rank or len(p.character_indices) != len(g.torsion):
        raise SpecMismatchError("evaluation point does not match the group")
    r = g.free_rank
    total = 0j
    for k, c in a._terms.items():
        phase = sum(e * th for e, th in zip(k[:r], p.angles))
        phase += sum(2 * math.pi * w * m / n for w, m, n in zip(k[r:], p.character_indices, g.torsion))
        total += float(c) * cmath.exp(1j * phase)
    return total


def evaluate_on_grid(a: GroupRingElement, thetas: Sequence[np.ndarray], chars: Sequence[int]) -> np.ndarray:
    """Vectorised ``evaluate`` over arrays of angles for one torsion character."""
    g = a.group
    r = g.free_rank
    shape = np.shape(thetas[0]) if thetas else ()
    out = np.zeros(shape, dtype=complex)
    for k, c in a._terms.items():
        phase = np.zeros(shape)
        for e, th in zip(k[:r], thetas):
            if e:
                phase = phase + e * th
        tors = sum(w * m / n for w, m, n in zip(k[r:], chars, g.torsion))
        out += float(c) * np.exp(1j * (phase + 2 * math.pi * tors))
    return out


def character_average(
    func: Callable[[list, tuple], np.ndarray],
    group: GroupSpec,
    nodes: int,
    chunk: int = 1 << 20,
) -> complex:
    """Normalised Haar average over the dual group, by tensor trapezoid rule.

    ``func(thetas, chars)`` receives one flat angle array per free
    generator and a tuple of character indices, and returns an array of
    integrand values.  The torus part uses ``nodes`` equispaced points per
    axis; the torsion part is an exact average over all characters.
    Summation order is fixed so results are reproducible.
    """
    r = group.free_rank
    grid = -math.pi + 2 * math.pi * np.arange(nodes) / nodes
    characters = list(itertools.product(*(range(n) for n in group.torsion)))
    total = 0j
    for chars in characters:
        if r == 0:
            total += complex(np.sum(func([], chars)))
            continue
        # chunk over the leading axes so memory stays bounded
        rest = nodes ** (r - 1)
        step = max(1, chunk // max(rest, 1))
        acc = 0j
        for start in range(0, nodes, step):
            lead = grid[start:start + step]
            mesh = np.meshgrid(lead, *([grid] * (r - 1)), indexing="ij")
            acc += complex(np.sum(func([m.ravel() for m in mesh], chars)))
        total += acc / nodes**r
    return total / len(characters)


def constant_term_by_quadrature(a: GroupRingElement, nodes: int) -> complex:
    return character_average(lambda th, ch: evaluate_on_grid(a, th, ch), a.group, nodes)


@dataclass(frozen=True)
class SubgroupReport:
    """Outcome of ``subgroup_generated``.

    ``quotient`` lists the invariant factors of Gamma / H, with 0 standing
    for a copy of Z.  The subgroup is everything iff ``quotient`` is empty.
    """

    full: bool
    quotient: tuple

    @property
    def index(self):
        if any(d == 0 for d in self.quotient):
            return None
        return math.prod(self.quotient)


def subgroup_generated(group: GroupSpec, elements: Iterable) -> SubgroupReport:
    """Decide whether ``elements`` generate the whole group.

    Uses the Smith normal form of the presentation matrix whose columns are
    the elements (torsion parts lifted to integers) together with the
    relations n_i * s_i.
    """
    keys = [_as_key(group, e) for e in elements]
    dim = group.rank
    if dim == 0:
        return SubgroupReport(True, ())
    cols = [list(k) for k in keys]
    for i, n in enumerate(group.torsion):
        col = [0] * dim
        col[group.free_rank + i] = n
        cols.append(col)
    if not cols:
        return SubgroupReport(False, (0,) * dim)
    m = Matrix(dim, len(cols), lambda i, j: cols[j][i])
    factors = [abs(int(d)) for d in invariant_factors(m, domain=ZZ)]
    nonzero = [d for d in factors if d != 0]
    quotient = tuple(d for d in nonzero if d != 1) + (0,) * (dim - len(nonzero))
    return SubgroupReport(not quotient, quotient)


# -- text rendering and parsing -------------------------------------------------


def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def render_element(a: GroupRingElement) -> str:
    if not a._terms:
        return "0"
    pieces = []
    for k, c in a.sorted_items():
        mono = a.group.render_key(k)
        if mono == "1":
            body = _format_coeff(c)
        elif c == 1:
            body = mono
        elif c == -1:
            body = "-" + mono
        else:
            body = f"{_format_coeff(c)}*{mono}"
        pieces.append(body)
    out = pieces[0]
    for p in pieces[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


_COEFF = re.compile(r"^\d+(?:/\d+)?$")
_FACTOR = re.compile(r"^([ts])(\d*)(?:\^(~?\d+))?$")


def parse_element(text: str, group: GroupSpec) -> GroupRingElement:
    """Inverse of ``render_element``; raises ``GraphFormatError`` on bad input."""
    src = text.replace(" ", "").replace("^-", "^~")
    if not src:
        raise GraphFormatError("empty group-ring expression")
    if src == "0":
        return GroupRingElement.zero(group)
    names = group.generator_names()
    index = {name: i for i, name in enumerate(names)}
    # accept t1 / s1 as aliases when there is a single generator of that kind
    if group.free_rank == 1:
        index.setdefault("t1", index["t"])
    if len(group.torsion) == 1:
        index.setdefault("s1", index["s"])
    tokens = re.findall(r"[+-]?[^+-]+", src)
    if "".join(tokens) != src:
        raise GraphFormatError(f"cannot parse {text!r}")
    terms = {}
    for tok in tokens:
        sign = -1 if tok.startswith("-") else 1
        body = tok.lstrip("+-")
        coeff = Fraction(1)
        key = [0] * group.rank
        for factor in body.split("*"):
            if _COEFF.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m or (m.group(1) + m.group(2)) not in index:
                raise GraphFormatError(f"unknown factor {factor!r} in {text!r}")
            exp = m.group(3)
            e = 1 if exp is None else int(exp.replace("~", "-"))
            key[index[m.group(1) + m.group(2)]] += e
        k = group.normalize(key)
        terms[k] = terms.get(k, 0) + sign * coeff
    return GroupRingElement(group, terms)


# -- matrices over the group ring ------------------------------------------------


class GroupRingMatrix:
    """Square matrix with group-ring entries."""

    __slots__ = ("group", "rows")

    def __init__(self, group: GroupSpec, rows):
        self.group = group
        self.rows = tuple(tuple(e for e in row) for row in rows)
        n = len(self.rows)
        if any(len(row) != n for row in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, group, n):
        one, zero = GroupRingElement.one(group), GroupRingElement.zero(group)
        return cls(group, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        _check_same(self.group, other.group)
        n = self.n
        zero = GroupRingElement.zero(self.group)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GroupRingMatrix(self.group, out)

    def __add__(self, other):
        return GroupRingMatrix(
            self.group, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def scale(self, c) -> "GroupRingMatrix":
        return GroupRingMatrix(self.group, [[e * c for e in row] for row in self.rows])

    def star_transpose(self) -> "GroupRingMatrix":
        n = self.n
        return GroupRingMatrix(self.group, [[star(self.rows[j][i]) for j in range(n)] for i in range(n)])

    def trace(self):
        """Von Neumann trace: identity coefficients summed along the diagonal."""
        return sum((constant_term(self.rows[i][i]) for i in range(self.n)), 0)

    def evaluate_on_grid(self, thetas, chars) -> np.ndarray:
        n = self.n
        shape = np.shape(thetas[0]) if thetas else ()
        out = np.zeros(shape + (n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                if self.rows[i][j]:
                    out[..., i, j] = evaluate_on_grid(self.rows[i][j], thetas, chars)
        return out

    def __eq__(self, other):
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return self.group == other.group and self.rows == other.rows

    def __hash__(self):
        return hash((self.group, self.rows))

    def to_strings(self) -> list:
        return [[str(e) for e in row] for row in self.rows]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"

    def __repr__(self):
        return f"GroupRingMatrix({self})"
