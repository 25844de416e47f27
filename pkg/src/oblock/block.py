"""Blocks of category O given by a wall set, with graded Verma data.

A block is described by its Weyl group and the set ``S`` of simple
reflections fixing the dominant weight.  Its simples are indexed by ``X``, the
elements that are longest in their coset ``W_S x`` (all ``s`` in ``S`` are
left descents).  The grading convention is

    [Delta(x) : L(y)<k>] = coefficient of v^k in v^(l(y) - l(x)) P_{x,y}(v^-2),

so Verma modules have their head in degree 0 and their socle ``L(w0)`` in
degree ``l(w0) - l(x)``.  Singular blocks reuse the regular values on ``X``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .coxeter import (
    CartanDatum, GroupTable, WeylElem, build_group, cartan_type,
    coset_reps_longest, format_word, parabolic_longest,
)
from .errors import NotInBlockError
from .kl import engine
from .polynomials import LaurentV, PolynomialQ

__all__ = [
    "BlockDescriptor", "LayeredCharacter", "GradedFlag",
    "get_group", "make_block", "graded_verma_multiplicity", "verma_layers",
    "projective_flag", "dim_end_projective", "flag_character",
]

_GROUPS: dict[CartanDatum, GroupTable] = {}


def get_group(cartan: CartanDatum | str) -> GroupTable:
    """Shared group table per Cartan datum, so KL memo tables are reused."""
    if isinstance(cartan, str):
        cartan = cartan_type(cartan)
    g = _GROUPS.get(cartan)
    if g is None:
        g = _GROUPS.setdefault(cartan, build_group(cartan))
    return g


@dataclass(frozen=True, eq=False)
class BlockDescriptor:
    group: GroupTable
    walls: frozenset[int]
    w0_lambda: WeylElem
    reps: tuple[WeylElem, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def regular(self) -> bool:
        return not self.walls

    @property
    def stabilizer_order(self) -> int:
        return len(self.group) // len(self.reps)

    @property
    def label(self) -> str:
        walls = ",".join(map(str, sorted(self.walls)))
        return f"{self.group.label}[{walls}]" if walls else self.group.label

    def __eq__(self, other) -> bool:
        return (isinstance(other, BlockDescriptor) and self.group.cartan == other.group.cartan
                and self.walls == other.walls)

    def __hash__(self) -> int:
        return hash((self.group.cartan, self.walls))

    def __contains__(self, x: WeylElem) -> bool:
        return self.walls <= self.group.left_desc[x.index]

    def __iter__(self) -> Iterator[WeylElem]:
        return iter(self.reps)

    def __len__(self) -> int:
        return len(self.reps)

    def representative(self, x: WeylElem) -> WeylElem:
        """Longest element of ``W_S x``."""
        g = self.group
        while True:
            up = [s for s in sorted(self.walls) if s not in g.left_desc[x.index]]
            if not up:
                return x
            x = g.lmul(up[0], x)

    def check(self, x: WeylElem) -> WeylElem:
        if x not in self:
            raise NotInBlockError(x, self.representative(x), self.walls)
        return x

    def ringel(self, x: WeylElem) -> WeylElem:
        """The Ringel partner ``w0_S x w0`` of ``x``; an involution on ``X``."""
        return self.group.mul(self.w0_lambda, x, self.group.w0)

    def regular_block(self) -> BlockDescriptor:
        return make_block(self.group, ())

    def to_json(self) -> dict:
        return {"type": self.group.label, "walls": sorted(self.walls)}

    @classmethod
    def from_json(cls, doc: Mapping) -> BlockDescriptor:
        return make_block(doc["type"], doc.get("walls", ()))


def make_block(cartan: CartanDatum | GroupTable | str, walls: Iterable[int] = ()) -> BlockDescriptor:
    """The block with the given wall set; ``walls`` empty means the regular block."""
    g = cartan if isinstance(cartan, GroupTable) else get_group(cartan)
    walls = frozenset(int(s) for s in walls)
    key = ("block", walls)
    b = g._cache.get(key)
    if b is None:
        b = BlockDescriptor(g, walls, parabolic_longest(g, walls), tuple(coset_reps_longest(g, walls)))
        b = g._cache.setdefault(key, b)
    return b


def _elem_json(x: WeylElem) -> str:
    return format_word(x)


class LayeredCharacter:
    """Graded composition multiplicities: degree -> {simple L(z): multiplicity}."""

    def __init__(self, block: BlockDescriptor, counts: Mapping[tuple[WeylElem, int], int] = ()):
        self.block = block
        layers: dict[int, dict[WeylElem, int]] = {}
        for (z, k), m in dict(counts).items():
            if m:
                layers.setdefault(k, {})[z] = m
        self._layers = {k: dict(sorted(layers[k].items())) for k in sorted(layers)}

    @classmethod
    def from_layers(cls, block: BlockDescriptor, layers: Mapping[int, Mapping[WeylElem, int]]) -> LayeredCharacter:
        return cls(block, {(z, k): m for k, layer in layers.items() for z, m in layer.items()})

    @property
    def layers(self) -> dict[int, dict[WeylElem, int]]:
        return self._layers

    def degrees(self) -> list[int]:
        return list(self._layers)

    @property
    def n_layers(self) -> int:
        """Number of nonzero degrees, i.e. the graded length."""
        return len(self._layers)

    def count(self, z: WeylElem, k: int) -> int:
        return self._layers.get(k, {}).get(z, 0)

    def layer(self, k: int) -> dict[WeylElem, int]:
        return dict(self._layers.get(k, {}))

    def items(self) -> Iterator[tuple[WeylElem, int, int]]:
        """``(z, degree, multiplicity)`` triples."""
        for k, layer in self._layers.items():
            for z, m in layer.items():
                yield z, k, m

    def ungraded(self) -> Counter:
        out: Counter = Counter()
        for z, _, m in self.items():
            out[z] += m
        return out

    def shifted(self, k: int) -> LayeredCharacter:
        return LayeredCharacter(self.block, {(z, d + k): m for z, d, m in self.items()})

    def is_symmetric(self) -> bool:
        return all(self.count(z, -k) == m for z, k, m in self.items())

    def __eq__(self, other) -> bool:
        return (isinstance(other, LayeredCharacter) and self.block == other.block
                and self._layers == other._layers)

    def __repr__(self) -> str:
        body = "; ".join(f"{k}: " + ", ".join(f"{m}L({z})" if m > 1 else f"L({z})" for z, m in layer.items())
                         for k, layer in self._layers.items())
        return f"LayeredCharacter({self.block.label}; {body})"

    def to_json(self) -> list[dict]:
        return [
            {"degree": k, "simples": [{"element": _elem_json(z), "mult": m} for z, m in layer.items()]}
            for k, layer in self._layers.items()
        ]

    @classmethod
    def from_json(cls, block: BlockDescriptor, doc: list[dict]) -> LayeredCharacter:
        g = block.group
        return cls(block, {(g.parse(s["element"]), int(row["degree"])): int(s["mult"])
                           for row in doc for s in row["simples"]})


class GradedFlag:
    """A graded (dual) Verma flag: multiset of ``(element, shift)`` meaning ``Delta(element)<shift>``."""

    def __init__(self, block: BlockDescriptor, entries: Mapping[tuple[WeylElem, int], int] | Iterable = ()):
        self.block = block
        counts = Counter()
        items = entries.items() if isinstance(entries, Mapping) else ((e, 1) for e in entries)
        for (z, j), m in items:
            counts[(z, int(j))] += m
        self.entries = Counter({k: v for k, v in sorted(counts.items(), key=lambda kv: (kv[0][0].index, kv[0][1])) if v})

    def multiplicity(self, z: WeylElem, shift: int | None = None) -> int:
        if shift is None:
            return sum(m for (y, _), m in self.entries.items() if y == z)
        return self.entries.get((z, shift), 0)

    def ungraded(self) -> Counter:
        out: Counter = Counter()
        for (z, _), m in self.entries.items():
            out[z] += m
        return out

    def elements(self) -> list[WeylElem]:
        return sorted({z for z, _ in self.entries})

    def total(self) -> int:
        return sum(self.entries.values())

    def is_multiplicity_free(self) -> bool:
        return all(m <= 1 for m in self.ungraded().values())

    def shifted(self, k: int) -> GradedFlag:
        return GradedFlag(self.block, {(z, j + k): m for (z, j), m in self.entries.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedFlag) and self.block == other.block and self.entries == other.entries

    def __repr__(self) -> str:
        body = ", ".join(f"({z},{j})" + (f"x{m}" if m > 1 else "") for (z, j), m in self.entries.items())
        return f"GradedFlag({self.block.label}; {body})"

    def to_json(self) -> list[dict]:
        return [{"element": _elem_json(z), "shift": j, "mult": m} for (z, j), m in self.entries.items()]

    @classmethod
    def from_json(cls, block: BlockDescriptor, doc: list[dict]) -> GradedFlag:
        g = block.group
        return cls(block, {(g.parse(r["element"]), int(r["shift"])): int(r["mult"]) for r in doc})


def _row(b: BlockDescriptor, x: WeylElem) -> dict[WeylElem, LaurentV]:
    """``{y: d_{x,y}}`` over ``y`` in X with ``x <= y``; memoized per block."""
    key = ("row", x.index)
    row = b._cache.get(key)
    if row is None:
        eng = engine(b.group)
        row = {}
        for y in b.reps:
            p = eng.coeffs(x.index, y.index)
            if p:
                row[y] = LaurentV.from_kl(PolynomialQ(p), y.length - x.length)
        row = b._cache.setdefault(key, row)
    return row


def graded_verma_multiplicity(b: BlockDescriptor, x: WeylElem, y: WeylElem) -> LaurentV:
    """``sum_k [Delta(x) : L(y)<k>] v^k``."""
    b.check(x)
    b.check(y)
    return _row(b, x).get(y, LaurentV())


def verma_layers(b: BlockDescriptor, x: WeylElem) -> LayeredCharacter:
    """Grading layers of ``Delta(x)``: degree ``k`` holds ``L(y)`` with the ``v^k`` coefficient of ``d_{x,y}``."""
    b.check(x)
    return LayeredCharacter(b, {(y, k): c for y, d in _row(b, x).items() for k, c in d.terms()})


def projective_flag(b: BlockDescriptor, y: WeylElem) -> GradedFlag:
    """Graded Verma flag of ``P(y)`` by graded BGG reciprocity."""
    b.check(y)
    eng = engine(b.group)
    col = eng.column(y.index)
    entries = {}
    for z in b.reps:
        p = col.get(z.index)
        if p:
            for k, c in LaurentV.from_kl(PolynomialQ(p), y.length - z.length).terms():
                entries[(z, k)] = c
    return GradedFlag(b, entries)


def dim_end_projective(b: BlockDescriptor, y: WeylElem) -> int:
    """``dim End(P(y)) = sum_z [Delta(z) : L(y)]^2``."""
    return sum(m * m for m in projective_flag(b, y).ungraded().values())


def flag_character(flag: GradedFlag) -> LayeredCharacter:
    """Graded character of a module with the given Verma flag."""
    b = flag.block
    counts: Counter = Counter()
    for (y, j), m in flag.entries.items():
        for z, d in _row(b, y).items():
            for k, c in d.terms():
                counts[(z, k + j)] += m * c
    return LayeredCharacter(b, counts)
