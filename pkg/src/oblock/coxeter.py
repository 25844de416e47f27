"""Finite Weyl groups enumerated in their reflection representation.

Elements are integer matrices acting on the simple-root basis; the matrix is
the hash key.  Enumeration is breadth first by length, and inside one length
by the ShortLex-least reduced word, so element indices are reproducible.

Simple reflections are numbered from 1 (Bourbaki labels) everywhere in the
public API: words, wall sets and descent sets.

>>> g = build_group(cartan_type("A2"))
>>> len(g), g.w0.length
(6, 3)
>>> str(normalize_word(g, [2, 1, 2]))
's1s2s1'
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import GroupTooLargeError, InfiniteGroupError

__all__ = [
    "CartanDatum", "WeylElem", "GroupTable",
    "cartan_type", "build_group", "normalize_word", "bruhat_leq",
    "parabolic_longest", "coset_reps_longest", "parse_word", "format_word",
    "positive_roots", "all_subsets", "DEFAULT_MAX_ELEMENTS",
]

DEFAULT_MAX_ELEMENTS = 60_000

# product a_ij * a_ji of Cartan entries -> Coxeter exponent m(i, j)
_M_FROM_PRODUCT = {0: 2, 1: 3, 2: 4, 3: 6}


Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CartanDatum:
    """A Cartan type: label, rank, Coxeter matrix and (if crystallographic) Cartan matrix."""

    label: str
    rank: int
    coxeter_matrix: Matrix
    cartan_matrix: Matrix | None = None

    def __post_init__(self):
        m = self.coxeter_matrix
        if len(m) != self.rank or any(len(row) != self.rank for row in m):
            raise ValueError(f"{self.label}: Coxeter matrix must be {self.rank}x{self.rank}")
        for i in range(self.rank):
            if m[i][i] != 1:
                raise ValueError(f"{self.label}: m({i + 1},{i + 1}) must be 1")
            for j in range(self.rank):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"{self.label}: Coxeter matrix is not symmetric")
                if i != j and m[i][j] != 0 and m[i][j] < 2:
                    raise ValueError(f"{self.label}: m({i + 1},{j + 1}) must be >= 2 or 0 (infinity)")
        if self.cartan_matrix is not None:
            for i in range(self.rank):
                for j in range(i + 1, self.rank):
                    prod = self.cartan_matrix[i][j] * self.cartan_matrix[j][i]
                    if _M_FROM_PRODUCT.get(prod) != m[i][j]:
                        raise ValueError(f"{self.label}: Cartan and Coxeter matrices disagree at ({i + 1},{j + 1})")

    @classmethod
    def from_coxeter_matrix(cls, matrix: Sequence[Sequence[int]], label: str | None = None) -> CartanDatum:
        """Build a datum from a Coxeter matrix; ``0`` encodes ``m = infinity``.

        A Cartan matrix is attached when every ``m(i, j)`` lies in {2, 3, 4, 6}
        (long root on the lower index for double and triple bonds).
        """
        m = tuple(tuple(int(v) for v in row) for row in matrix)
        rank = len(m)
        cartan = None
        if all(m[i][j] in (2, 3, 4, 6) for i in range(rank) for j in range(rank) if i != j):
            off = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3)}
            a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
            for i in range(rank):
                for j in range(i + 1, rank):
                    a[i][j], a[j][i] = off[m[i][j]]
            cartan = tuple(tuple(r) for r in a)
        return cls(label or "custom", rank, m, cartan)

    def gram_matrix(self) -> np.ndarray:
        """The symmetric form ``-cos(pi/m_ij)``; positive definite exactly for finite groups."""
        r = self.rank
        b = np.empty((r, r))
        for i in range(r):
            for j in range(r):
                mij = self.coxeter_matrix[i][j]
                b[i, j] = -1.0 if mij == 0 else -math.cos(math.pi / mij)
        return b

    def is_finite(self) -> bool:
        if self.rank == 0:
            return True
        return bool(np.linalg.eigvalsh(self.gram_matrix()).min() > 1e-9)

    def components(self) -> list[list[int]]:
        """Connected components of the Coxeter graph, as sorted lists of 1-based indices."""
        seen: set[int] = set()
        comps = []
        for start in range(self.rank):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i + 1)
                for j in range(self.rank):
                    if j not in seen and self.coxeter_matrix[i][j] != 2:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps


def _cartan_simple(kind: str, n: int) -> list[list[int]]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        a[i - 1][j - 1], a[j - 1][i - 1] = aij, aji

    if kind == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        for i in range(1, n):
            bond(i, i + 1)
    elif kind in "BC":
        if n < 2:
            raise ValueError(f"{kind}_n needs n >= 2")
        for i in range(1, n - 1):
            bond(i, i + 1)
        # B: alpha_n short; C: alpha_n long
        bond(n - 1, n, -1, -2) if kind == "B" else bond(n - 1, n, -2, -1)
    elif kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        for i in range(1, n - 1):
            bond(i, i + 1)
        bond(n - 2, n)
    elif kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")
        bond(1, 3)
        bond(2, 4)
        for i in range(3, n):
            bond(i, i + 1)
    elif kind == "F":
        if n != 4:
            raise ValueError("F_n needs n = 4")
        bond(1, 2)
        bond(2, 3, -2, -1)
        bond(3, 4)
    elif kind == "G":
        if n != 2:
            raise ValueError("G_n needs n = 2")
        bond(1, 2, -1, -3)
    else:
        raise ValueError(f"unknown Cartan type letter {kind!r}")
    return a


_TYPE_RE = re.compile(r"([A-Ga-g])(\d+)")


def cartan_type(label: str) -> CartanDatum:
    """Parse a label like ``"A3"``, ``"G2"`` or a product ``"A1xA1"`` / ``"A1×B2"``.

    Factors are laid out block diagonally, numbering simple reflections
    consecutively from the first factor.
    """
    text = label.strip().replace(" ", "")
    parts = re.split(r"[x×+]", text) if text else []
    if not parts or any(not _TYPE_RE.fullmatch(p) for p in parts):
        raise ValueError(f"cannot parse Cartan type {label!r}")
    blocks = []
    for p in parts:
        kind, n = _TYPE_RE.fullmatch(p).groups()
        blocks.append(_cartan_simple(kind.upper(), int(n)))
    rank = sum(len(b) for b in blocks)
    a = [[0] * rank for _ in range(rank)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            a[off + i][off:off + len(b)] = row
        off += len(b)
    cox = [[1 if i == j else _M_FROM_PRODUCT[a[i][j] * a[j][i]] for j in range(rank)] for i in range(rank)]
    canonical = "x".join(p[0].upper() + p[1:] for p in parts)
    return CartanDatum(canonical, rank, tuple(map(tuple, cox)), tuple(map(tuple, a)))


def _known_order(label: str) -> int | None:
    total = 1
    for part in label.split("x"):
        m = _TYPE_RE.fullmatch(part)
        if m is None:
            return None
        kind, n = m.group(1), int(m.group(2))
        total *= {
            "A": lambda: math.factorial(n + 1),
            "B": lambda: 2**n * math.factorial(n),
            "C": lambda: 2**n * math.factorial(n),
            "D": lambda: 2 ** (n - 1) * math.factorial(n),
            "E": lambda: {6: 51840, 7: 2903040, 8: 696729600}[n],
            "F": lambda: 1152,
            "G": lambda: 12,
        }[kind]()
    return total


@dataclass(frozen=True, eq=False)
class WeylElem:
    """One group element.  Equality and hashing go through the canonical matrix."""

    index: int
    canonical: tuple
    word: tuple[int, ...]
    length: int

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElem) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __lt__(self, other: WeylElem) -> bool:
        return self.index < other.index

    def __str__(self) -> str:
        return "".join(f"s{i}" for i in self.word) or "e"

    def __repr__(self) -> str:
        return f"WeylElem({self})"


def parse_word(text: str | Sequence[int]) -> list[int]:
    """Read a word: ``"1,2,1"``, ``"1*2*1"``, ``"s1s2s1"``; ``""`` or ``"e"`` is the identity."""
    if not isinstance(text, str):
        return [int(i) for i in text]
    t = text.strip().replace(" ", "")
    if t in ("", "e"):
        return []
    if re.fullmatch(r"(s\d+)+", t):
        return [int(i) for i in re.findall(r"s(\d+)", t)]
    if re.fullmatch(r"\d+([,*]\d+)*", t):
        return [int(i) for i in re.split(r"[,*]", t)]
    raise ValueError(f"cannot parse word {text!r}")


def format_word(x: WeylElem) -> str:
    """Machine-readable word, the inverse of :func:`parse_word`."""
    return ",".join(map(str, x.word)) or "e"


def _generators(cartan: CartanDatum) -> tuple[list[np.ndarray], bool]:
    r = cartan.rank
    if cartan.cartan_matrix is not None:
        a = np.array(cartan.cartan_matrix, dtype=np.int64)
        gens = []
        for i in range(r):
            s = np.eye(r, dtype=np.int64)
            # s_i(alpha_j) = alpha_j - a_ij alpha_i, columns are images
            s[i, :] -= a[i, :]
            gens.append(s)
        return gens, True
    b = cartan.gram_matrix()
    gens = []
    for i in range(r):
        s = np.eye(r)
        s[i, :] -= 2 * b[i, :]
        gens.append(s)
    return gens, False


def _key(m: np.ndarray, exact: bool) -> tuple:
    if exact:
        return tuple(m.ravel().tolist())
    return tuple((np.round(m, 6) + 0.0).ravel().tolist())


class GroupTable:
    """A fully enumerated finite Weyl group.  Immutable apart from internal memo tables."""

    def __init__(self, cartan: CartanDatum, elements: list[WeylElem],
                 right: list[list[int]], left: list[list[int]], matrices: list[np.ndarray]):
        self.cartan = cartan
        self.rank = cartan.rank
        self.elements = elements
        self._right = right  # _right[s-1][i] = index of w_i * s
        self._left = left    # _left[s-1][i]  = index of s * w_i
        self._matrices = matrices
        self._by_key = {x.canonical: x for x in elements}
        n = range(1, self.rank + 1)
        self.left_desc = [frozenset(s for s in n if elements[left[s - 1][i]].length < x.length)
                          for i, x in enumerate(elements)]
        self.right_desc = [frozenset(s for s in n if elements[right[s - 1][i]].length < x.length)
                           for i, x in enumerate(elements)]
        self.w0 = max(elements, key=lambda x: x.length)
        self._bruhat: dict[tuple[int, int], bool] = {}
        self._lower: dict[int, frozenset[int]] = {0: frozenset((0,))}
        self._cache: dict = {}  # attachment point for engines built on top of the group

    # basic access

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> WeylElem:
        return self.elements[i]

    def __repr__(self) -> str:
        return f"GroupTable({self.cartan.label}, order={len(self)})"

    @property
    def e(self) -> WeylElem:
        return self.elements[0]

    @property
    def label(self) -> str:
        return self.cartan.label

    def matrix(self, x: WeylElem) -> np.ndarray:
        return self._matrices[x.index]

    def lookup(self, m: np.ndarray) -> WeylElem:
        return self._by_key[_key(m, self.cartan.cartan_matrix is not None)]

    def simple(self, s: int) -> WeylElem:
        self._check_gen(s)
        return self.elements[self._left[s - 1][0]]

    def _check_gen(self, s: int) -> None:
        if not 1 <= s <= self.rank:
            raise ValueError(f"simple reflection index {s} out of range 1..{self.rank} for {self.label}")

    # multiplication

    def rmul(self, x: WeylElem, s: int) -> WeylElem:
        """``x * s_s``."""
        return self.elements[self._right[s - 1][x.index]]

    def lmul(self, s: int, x: WeylElem) -> WeylElem:
        """``s_s * x``."""
        return self.elements[self._left[s - 1][x.index]]

    def mul(self, *factors: WeylElem) -> WeylElem:
        def two(x, y):
            i = x.index
            for s in y.word:
                i = self._right[s - 1][i]
            return self.elements[i]
        return reduce(two, factors, self.e)

    def inverse(self, x: WeylElem) -> WeylElem:
        return self.word(reversed(x.word))

    def word(self, letters: Iterable[int]) -> WeylElem:
        i = 0
        for s in letters:
            self._check_gen(s)
            i = self._right[s - 1][i]
        return self.elements[i]

    def parse(self, text: str | Sequence[int]) -> WeylElem:
        return self.word(parse_word(text))

    def is_left_descent(self, s: int, x: WeylElem) -> bool:
        return s in self.left_desc[x.index]

    def is_right_descent(self, x: WeylElem, s: int) -> bool:
        return s in self.right_desc[x.index]

    # Bruhat order

    def bruhat_leq(self, x: WeylElem, y: WeylElem) -> bool:
        return self._leq(x.index, y.index)

    def _leq(self, xi: int, yi: int) -> bool:
        els = self.elements
        if els[xi].length > els[yi].length:
            return False
        if xi == yi or xi == 0:
            return True
        key = (xi, yi)
        hit = self._bruhat.get(key)
        if hit is not None:
            return hit
        s = min(self.left_desc[yi])
        sy = self._left[s - 1][yi]
        if s in self.left_desc[xi]:
            result = self._leq(self._left[s - 1][xi], sy)
        else:
            result = self._leq(xi, sy)
        self._bruhat[key] = result
        return result

    def lower_interval(self, y: WeylElem | int) -> frozenset[int]:
        """Indices of all ``x <= y``; built from ``[e, s v] = [e, v] u s[e, v]`` for ``s v > v``."""
        yi = y if isinstance(y, int) else y.index
        hit = self._lower.get(yi)
        if hit is not None:
            return hit
        s = min(self.left_desc[yi])
        below = self.lower_interval(self._left[s - 1][yi])
        table = self._left[s - 1]
        result = below | frozenset(table[i] for i in below)
        self._lower[yi] = result
        return result

    # bookkeeping

    def enumeration_hash(self) -> str:
        h = hashlib.sha256(self.label.encode())
        for x in self.elements:
            h.update(b"|" + format_word(x).encode())
        return h.hexdigest()


def build_group(cartan: CartanDatum, max_elements: int = DEFAULT_MAX_ELEMENTS) -> GroupTable:
    """Enumerate the Weyl group of ``cartan``."""
    if not cartan.is_finite():
        raise InfiniteGroupError(
            f"{cartan.label}: Coxeter matrix {cartan.coxeter_matrix} defines an infinite group "
            "(the Tits form -cos(pi/m) is not positive definite)")
    known = _known_order(cartan.label)
    if known is not None and known > max_elements:
        raise GroupTooLargeError(f"{cartan.label} has {known} elements, above the cap {max_elements}")
    gens, exact = _generators(cartan)
    r = cartan.rank
    ident = np.eye(r, dtype=np.int64 if exact else float)
    matrices = [ident]
    words: list[tuple[int, ...]] = [()]
    lengths = [0]
    index = {_key(ident, exact): 0}
    right: list[list[int]] = [[] for _ in range(r)]
    level = [0]
    while level:
        nxt = []
        for i in level:
            for s in range(r):
                m = matrices[i] @ gens[s]
                k = _key(m, exact)
                j = index.get(k)
                if j is None:
                    j = len(matrices)
                    if j >= max_elements:
                        raise GroupTooLargeError(f"{cartan.label}: more than {max_elements} elements")
                    index[k] = j
                    matrices.append(m)
                    words.append(words[i] + (s + 1,))
                    lengths.append(lengths[i] + 1)
                    nxt.append(j)
                row = right[s]
                row.extend([-1] * (i + 1 - len(row)))
                row[i] = j
        level = nxt
    n = len(matrices)
    for row in right:
        row.extend([-1] * (n - len(row)))
    left = [[index[_key(gens[s] @ matrices[i], exact)] for i in range(n)] for s in range(r)]
    elements = [WeylElem(i, k, words[i], lengths[i]) for k, i in sorted(index.items(), key=lambda kv: kv[1])]
    return GroupTable(cartan, elements, right, left, matrices)


def normalize_word(g: GroupTable, word: Sequence[int]) -> WeylElem:
    """The element equal to the product of ``word``; the word need not be reduced."""
    return g.word(word)


def bruhat_leq(g: GroupTable, x: WeylElem, y: WeylElem) -> bool:
    return g.bruhat_leq(x, y)


def _check_walls(g: GroupTable, S: Iterable[int]) -> frozenset[int]:
    walls = frozenset(int(s) for s in S)
    for s in walls:
        g._check_gen(s)
    return walls


def parabolic_longest(g: GroupTable, S: Iterable[int]) -> WeylElem:
    """Longest element of the standard parabolic subgroup generated by ``S``."""
    walls = _check_walls(g, S)
    x = g.e
    while True:
        up = [s for s in sorted(walls) if s not in g.right_desc[x.index]]
        if not up:
            return x
        x = g.rmul(x, up[0])


def coset_reps_longest(g: GroupTable, S: Iterable[int]) -> list[WeylElem]:
    """Longest representatives of the cosets ``W_S x``, in (length, ShortLex) order.

    ``x`` is longest in ``W_S x`` exactly when every ``s`` in ``S`` is a left descent.
    """
    walls = _check_walls(g, S)
    return [x for x in g.elements if walls <= g.left_desc[x.index]]


def positive_roots(cartan: CartanDatum) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates (crystallographic types only)."""
    if cartan.cartan_matrix is None:
        raise ValueError("positive roots need an integral Cartan matrix")
    gens, _ = _generators(cartan)
    r = cartan.rank
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for s in gens:
                img = tuple((s @ np.array(root)).tolist())
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(r for r in seen if all(c >= 0 for c in r))


def all_subsets(rank: int) -> list[frozenset[int]]:
    """Every wall set for a group of the given rank, smallest first."""
    return [frozenset(c) for k in range(rank + 1) for c in combinations(range(1, rank + 1), k)]
