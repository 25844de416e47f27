"""Tilting modules: graded Verma flags, characters, Loewy lengths and rigidity.

Flags come from graded Ringel duality,

    (T(x) : Delta(y)<-j>) = (P(x') : Delta(y')<j>),   x' = w0_S x w0,

and, for singular blocks, are re-derived by translating out of the wall into
the regular block: ``T(x)`` there corresponds to ``T(w0_S x)<l(w0_S)>``, and
each ``Delta(y)`` to the Vermas ``Delta(u y)<l(u)>`` for ``u`` in ``W_S``.  The
two derivations must agree; a disagreement is raised, never reconciled.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .block import (
    BlockDescriptor, GradedFlag, LayeredCharacter, dim_end_projective, flag_character,
    graded_verma_multiplicity, projective_flag, verma_layers,
)
from .coxeter import WeylElem, format_word
from .errors import InvariantViolation

__all__ = [
    "RigidityReport", "HaziStep", "HaziTrace",
    "tilting_flag", "translation_flag", "tilting_character", "loewy_length_tilting",
    "socle_multiplicity", "rigidity_report", "dim_end_tilting", "hazi_layers",
    "projective_character", "graded_domination",
]


def _ringel_flag(b: BlockDescriptor, x: WeylElem) -> GradedFlag:
    key = ("ringel", x.index)
    hit = b._cache.get(key)
    if hit is None:
        proj = projective_flag(b, b.ringel(x))
        hit = GradedFlag(b, {(b.ringel(z), -j): m for (z, j), m in proj.entries.items()})
        b._cache[key] = hit
    return hit


def translation_flag(b: BlockDescriptor, x: WeylElem) -> GradedFlag:
    """The flag of ``T(x)`` read off the regular block through translation out of the wall.

    Also checks that the whole regular flag of ``T(w0_S x)`` is the translate
    of the result, not only its restriction to ``X``.
    """
    b.check(x)
    g = b.group
    reg = b.regular_block()
    shift = b.w0_lambda.length
    regular = _ringel_flag(reg, g.mul(b.w0_lambda, x))
    singular = GradedFlag(b, {(y, l + shift): m for (y, l), m in regular.entries.items() if y in b})
    stabilizer = [g[i] for i in sorted(g.lower_interval(b.w0_lambda))]
    translated = GradedFlag(reg, {
        (g.mul(u, y), l + u.length - shift): m
        for (y, l), m in singular.entries.items() for u in stabilizer
    })
    if translated != regular:
        raise InvariantViolation(
            f"{b.label}: translating the flag of T({x}) out of the wall gives {translated}, "
            f"but the regular tilting flag is {regular}")
    return singular


def tilting_flag(b: BlockDescriptor, x: WeylElem, verify: bool = True) -> GradedFlag:
    """Graded Verma flag of ``T(x)``, with ``Delta(x)`` at shift 0.

    With ``verify`` the translation route is computed as well and compared.
    """
    b.check(x)
    flag = _ringel_flag(b, x)
    if verify and ("tilt-verified", x.index) not in b._cache:
        other = translation_flag(b, x)
        if other != flag:
            raise InvariantViolation(
                f"{b.label}: tilting flag of T({x}) differs between Ringel duality ({flag}) "
                f"and translation ({other})")
        b._cache[("tilt-verified", x.index)] = True
    return flag


def tilting_character(b: BlockDescriptor, x: WeylElem, verify: bool = True) -> LayeredCharacter:
    """Graded composition multiplicities of ``T(x)``; the head of ``Delta(x)`` sits in degree 0."""
    return flag_character(tilting_flag(b, x, verify))


def loewy_length_tilting(b: BlockDescriptor, x: WeylElem, verify: bool = True) -> int:
    n = tilting_character(b, x, verify).n_layers
    expected = 2 * (b.group.w0.length - x.length) + 1
    if n != expected:
        raise InvariantViolation(f"{b.label}: T({x}) has {n} layers, expected 2 l(w0 x) + 1 = {expected}")
    return n


def socle_multiplicity(b: BlockDescriptor, x: WeylElem, verify: bool = True) -> int:
    """Copies of ``L(w0)`` in the socle of ``T(x)``, i.e. ``(T(x) : Delta(w0))``."""
    return tilting_flag(b, x, verify).multiplicity(b.group.w0)


def dim_end_tilting(b: BlockDescriptor, x: WeylElem, verify: bool = True) -> int:
    """``dim End(T(x)) = sum_y (T(x) : Delta(y))^2``, checked against the Ringel partner."""
    dim = sum(m * m for m in tilting_flag(b, x, verify).ungraded().values())
    partner = dim_end_projective(b, b.ringel(x))
    if dim != partner:
        raise InvariantViolation(f"{b.label}: dim End T({x}) = {dim} but dim End P({b.ringel(x)}) = {partner}")
    return dim


def projective_character(b: BlockDescriptor, y: WeylElem) -> LayeredCharacter:
    return flag_character(projective_flag(b, y))


def graded_domination(b: BlockDescriptor, x: WeylElem) -> bool:
    """Whether ``T(x)``, shifted so its socle meets the bottom of ``P(x')``, sits inside it degreewise.

    Observational only; nothing downstream depends on the answer.
    """
    t = tilting_character(b, x)
    p = projective_character(b, b.ringel(x))
    t = t.shifted(max(p.degrees()) - max(t.degrees()))
    return all(m <= p.count(z, k) for z, k, m in t.items())


@dataclass
class RigidityReport:
    x: WeylElem
    y: WeylElem
    cond_socle: bool
    cond_multfree: bool
    cond_dominant: bool
    socle_multiplicity: int
    max_flag_multiplicity: int
    dominant_multiplicity: int
    block: BlockDescriptor | None = field(default=None, repr=False, compare=False)

    @property
    def agreement(self) -> bool:
        return self.cond_socle == self.cond_multfree == self.cond_dominant

    @property
    def verdict(self) -> bool | None:
        """Rigidity of ``T(x)`` and ``P(y)``; ``None`` when the conditions disagree."""
        return self.cond_socle if self.agreement else None

    def to_json(self) -> dict:
        return {
            "x": format_word(self.x),
            "y": format_word(self.y),
            "cond_socle": self.cond_socle,
            "cond_multfree": self.cond_multfree,
            "cond_dominant": self.cond_dominant,
            "socle_multiplicity": self.socle_multiplicity,
            "max_flag_multiplicity": self.max_flag_multiplicity,
            "dominant_multiplicity": self.dominant_multiplicity,
            "agreement": self.agreement,
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, block: BlockDescriptor, doc: dict) -> RigidityReport:
        g = block.group
        return cls(g.parse(doc["x"]), g.parse(doc["y"]), doc["cond_socle"], doc["cond_multfree"],
                   doc["cond_dominant"], doc["socle_multiplicity"], doc["max_flag_multiplicity"],
                   doc["dominant_multiplicity"], block)


def rigidity_report(b: BlockDescriptor, x: WeylElem, verify: bool = True) -> RigidityReport:
    """Evaluate simple socle, multiplicity-free flag and ``[Delta(lambda) : L(y)] = 1`` separately."""
    b.check(x)
    y = b.ringel(x)
    flag = tilting_flag(b, x, verify)
    soc = flag.multiplicity(b.group.w0)
    top = max(flag.ungraded().values())
    dom = graded_verma_multiplicity(b, b.w0_lambda, y)(1)
    report = RigidityReport(x, y, soc == 1, top <= 1, dom == 1, soc, top, dom, b)
    if not report.agreement:
        raise InvariantViolation(
            f"{b.label}: rigidity conditions disagree for T({x}): socle multiplicity {soc}, "
            f"largest flag multiplicity {top}, [Delta(lambda) : L({y})] = {dom}")
    return report


@dataclass(frozen=True)
class HaziStep:
    element: WeylElem
    shift: int
    copies: int
    witness_degree: int

    def to_json(self) -> dict:
        return {"element": format_word(self.element), "shift": self.shift,
                "copies": self.copies, "witness_degree": self.witness_degree}


@dataclass
class HaziTrace:
    steps: list[HaziStep]
    character: LayeredCharacter
    flag: GradedFlag

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps], "layers": self.character.to_json(),
                "flag": self.flag.to_json()}

    @classmethod
    def from_json(cls, block: BlockDescriptor, doc: dict) -> HaziTrace:
        g = block.group
        steps = [HaziStep(g.parse(s["element"]), s["shift"], s["copies"], s["witness_degree"])
                 for s in doc["steps"]]
        return cls(steps, LayeredCharacter.from_json(block, doc["layers"]),
                   GradedFlag.from_json(block, doc["flag"]))


def hazi_layers(b: BlockDescriptor, x: WeylElem, reverse: bool = False) -> HaziTrace:
    """Grow the grading filtration of ``T(x)`` from that of ``Delta(x)`` by reflecting layers.

    Repeatedly take the unbalanced simple of highest weight (shortest element;
    ShortLex among equal lengths, or reverse ShortLex with ``reverse``) whose
    count in some degree ``m > 0`` exceeds its count in degree ``-m``, and add
    enough copies of its Verma with head in degree ``-m`` to balance it.
    """
    b.check(x)
    g = b.group
    counts: Counter = Counter()
    for z, k, m in verma_layers(b, x).items():
        counts[(z, k)] += m
    added: Counter = Counter({(x, 0): 1})
    steps: list[HaziStep] = []
    rank = (lambda z: (z.length, -z.index)) if reverse else (lambda z: (z.length, z.index))
    bound = sum(g.w0.length - y.length for y in b.reps) * len(g)
    while True:
        deficits: dict[WeylElem, list[tuple[int, int]]] = {}
        for (z, k), m in counts.items():
            if k > 0 and m > counts.get((z, -k), 0):
                deficits.setdefault(z, []).append((k, m - counts.get((z, -k), 0)))
        if not deficits:
            break
        if len(steps) >= bound:
            raise InvariantViolation(f"{b.label}: balancing T({x}) did not terminate after {bound} steps")
        z = min(deficits, key=rank)
        k, copies = max(deficits[z])
        for w, d, m in verma_layers(b, z).items():
            counts[(w, d - k)] += copies * m
        added[(z, -k)] += copies
        steps.append(HaziStep(z, -k, copies, k))
    excess = [(z, k) for (z, k), m in counts.items() if m and m != counts.get((z, -k), 0)]
    if excess:
        z, k = min(excess, key=lambda e: (e[0].index, e[1]))
        raise InvariantViolation(f"{b.label}: balancing T({x}) stopped unbalanced at L({z}) in degree {k}")
    return HaziTrace(steps, LayeredCharacter(b, counts), GradedFlag(b, added))
