"""Kazhdan-Lusztig polynomials with a per-column memo and a JSON table cache.

Polynomials are computed one column ``y`` at a time: the column holds
``P_{x,y}`` for every ``x`` in the Bruhat interval below ``y``.  For a left
descent ``s`` of ``y`` with ``v = s y``,

    P_{x,y} = q^(1-c) P_{sx,v} + q^c P_{x,v}
              - sum_{z : sz < z, x <= z < v} mu(z, v) q^((l(y) - l(z))/2) P_{x,z}

with ``c = 1`` when ``sx < x``.  Columns are stable under left and right
descents of ``y`` (``P_{x,y} = P_{sx,y}``), which the fill uses to skip most
of the recursive evaluations.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .coxeter import GroupTable, WeylElem, format_word
from .errors import CacheError
from .polynomials import PolynomialQ

__all__ = ["KLEngine", "KLTable", "engine", "kl_polynomial", "mu_coefficient", "kl_table"]

log = logging.getLogger(__name__)

Coeffs = tuple[int, ...]
_ONE: Coeffs = (1,)
_ZERO: Coeffs = ()


def _combine(terms: list[tuple[int, int, Coeffs]]) -> Coeffs:
    """Sum of ``c * q^shift * p`` over ``(c, shift, p)``, trimmed."""
    size = max((shift + len(p) for _, shift, p in terms), default=0)
    out = [0] * size
    for c, shift, p in terms:
        for k, a in enumerate(p):
            out[shift + k] += c * a
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class KLEngine:
    """Lazily filled KL columns for one group.  Safe for concurrent readers."""

    def __init__(self, g: GroupTable):
        self.g = g
        self._cols: dict[int, dict[int, Coeffs]] = {0: {0: _ONE}}
        self._mu: dict[int, list[tuple[int, int]]] = {0: []}
        self._lock = threading.Lock()

    def column(self, yi: int) -> dict[int, Coeffs]:
        """``{x index: coefficients of P_{x,y}}`` over ``x <= y``."""
        col = self._cols.get(yi)
        if col is None:
            col = self._fill(yi)
        return col

    def mu_list(self, yi: int) -> list[tuple[int, int]]:
        """``(z, mu(z, y))`` for every ``z < y`` with nonzero mu."""
        self.column(yi)
        return self._mu[yi]

    def _fill(self, yi: int) -> dict[int, Coeffs]:
        g = self.g
        els = g.elements
        ly = els[yi].length
        s = min(g.left_desc[yi])
        left_s = g._left[s - 1]
        vi = left_s[yi]
        col_v = self.column(vi)
        mus = [(z, m) for z, m in self.mu_list(vi) if s in g.left_desc[z]]
        for z, _ in mus:
            self.column(z)
        dl = sorted(g.left_desc[yi])
        dr = sorted(g.right_desc[yi])
        col: dict[int, Coeffs] = {}
        for xi in sorted(g.lower_interval(yi), key=lambda i: -els[i].length):
            lx = els[xi].length
            if ly - lx <= 2:
                col[xi] = _ONE
                continue
            p = None
            for t in dl:
                txi = g._left[t - 1][xi]
                if els[txi].length > lx:
                    p = col[txi]
                    break
            if p is None:
                for t in dr:
                    xti = g._right[t - 1][xi]
                    if els[xti].length > lx:
                        p = col[xti]
                        break
            if p is None:
                # every left descent of y is one of x, so c = 1
                terms = [(1, 0, col_v.get(left_s[xi], _ZERO)), (1, 1, col_v.get(xi, _ZERO))]
                for z, m in mus:
                    pz = self._cols[z].get(xi)
                    if pz is not None:
                        terms.append((-m, (ly - els[z].length) // 2, pz))
                p = _combine(terms)
            col[xi] = p
        mu = []
        for xi, p in col.items():
            gap = ly - els[xi].length
            if gap % 2 == 1:
                k = (gap - 1) // 2
                if k < len(p) and p[k]:
                    mu.append((xi, p[k]))
        mu.sort()
        with self._lock:
            if yi not in self._cols:
                self._mu[yi] = mu
                self._cols[yi] = col
            return self._cols[yi]

    def install(self, yi: int, col: dict[int, Coeffs]) -> None:
        """Seed a column from a trusted source (the cache)."""
        ly = self.g.elements[yi].length
        mu = []
        for xi, p in col.items():
            gap = ly - self.g.elements[xi].length
            if gap % 2 == 1 and (gap - 1) // 2 < len(p) and p[(gap - 1) // 2]:
                mu.append((xi, p[(gap - 1) // 2]))
        with self._lock:
            self._mu[yi] = sorted(mu)
            self._cols[yi] = col

    def coeffs(self, xi: int, yi: int) -> Coeffs:
        return self.column(yi).get(xi, _ZERO)

    def poly(self, x: WeylElem, y: WeylElem) -> PolynomialQ:
        return PolynomialQ(self.coeffs(x.index, y.index))


def engine(g: GroupTable) -> KLEngine:
    """The shared engine attached to ``g``."""
    eng = g._cache.get("kl")
    if eng is None:
        eng = g._cache.setdefault("kl", KLEngine(g))
    return eng


def kl_polynomial(g: GroupTable, x: WeylElem, y: WeylElem) -> PolynomialQ:
    """``P_{x,y}``; the zero polynomial unless ``x <= y``."""
    return engine(g).poly(x, y)


def mu_coefficient(g: GroupTable, x: WeylElem, y: WeylElem) -> int:
    gap = y.length - x.length
    if gap <= 0 or gap % 2 == 0:
        return 0
    return engine(g).poly(x, y)[(gap - 1) // 2]


@dataclass
class KLTable:
    """Every nonzero ``P_{x,y}`` of a group, keyed by element indices."""

    group: str
    enumeration_hash: str
    entries: dict[tuple[int, int], PolynomialQ]
    tool_version: str = __version__
    meta: dict = field(default_factory=dict)

    def __getitem__(self, key: tuple[WeylElem, WeylElem]) -> PolynomialQ:
        x, y = key
        return self.entries.get((x.index, y.index), PolynomialQ())

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self, g: GroupTable) -> dict:
        """Cache document: only pairs ``x <= y`` whose polynomial is not 1."""
        rows = [
            {"x": format_word(g[xi]), "y": format_word(g[yi]), "coeffs": list(p.coeffs)}
            for (xi, yi), p in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            if p.coeffs != _ONE
        ]
        return {
            "group": self.group,
            "enumeration_hash": self.enumeration_hash,
            "tool_version": self.tool_version,
            "entries": rows,
        }

    @classmethod
    def from_json(cls, g: GroupTable, doc: dict) -> KLTable:
        """Rebuild the full table; pairs absent from the document are 1 below ``y`` and 0 elsewhere."""
        special = {(g.parse(r["x"]).index, g.parse(r["y"]).index): tuple(int(c) for c in r["coeffs"])
                   for r in doc["entries"]}
        entries = {}
        for y in g:
            for xi in sorted(g.lower_interval(y)):
                entries[(xi, y.index)] = PolynomialQ(special.get((xi, y.index), _ONE))
        return cls(doc["group"], doc["enumeration_hash"], entries, doc.get("tool_version", __version__))


def _compute_table(g: GroupTable) -> KLTable:
    eng = engine(g)
    entries = {}
    for y in g:
        for xi, p in eng.column(y.index).items():
            entries[(xi, y.index)] = PolynomialQ(p)
    return KLTable(g.label, g.enumeration_hash(), entries)


def _read_cache(path: Path) -> dict:
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise CacheError(path, exc) from exc
    if not isinstance(doc, dict) or not {"group", "enumeration_hash", "entries"} <= doc.keys():
        raise CacheError(path, "missing group/enumeration_hash/entries")
    if not isinstance(doc["entries"], list):
        raise CacheError(path, "entries is not a list")
    for row in doc["entries"]:
        if (not isinstance(row, dict) or not {"x", "y", "coeffs"} <= row.keys()
                or not isinstance(row["coeffs"], list)
                or not all(isinstance(c, int) for c in row["coeffs"])):
            raise CacheError(path, f"malformed entry {row!r}")
    return doc


def kl_table(g: GroupTable, cache_path: str | os.PathLike | None = None) -> KLTable:
    """All KL polynomials of ``g``, optionally backed by a JSON cache file.

    A cache whose group label, enumeration hash or tool version differs from
    the current build is ignored (with a warning) and overwritten.
    """
    path = Path(cache_path) if cache_path is not None else None
    if path is not None and path.exists():
        doc = _read_cache(path)
        stamp = (doc["group"], doc["enumeration_hash"], doc.get("tool_version"))
        if stamp == (g.label, g.enumeration_hash(), __version__):
            try:
                table = KLTable.from_json(g, doc)
            except (ValueError, KeyError, TypeError) as exc:
                raise CacheError(path, exc) from exc
            eng = engine(g)
            cols: dict[int, dict[int, Coeffs]] = {}
            for (xi, yi), p in table.entries.items():
                cols.setdefault(yi, {})[xi] = p.coeffs
            for yi, col in cols.items():
                eng.install(yi, col)
            return table
        log.warning("KL cache %s is stale (%s, hash %s..., version %s); recomputing",
                    path, doc["group"], str(doc["enumeration_hash"])[:12], doc.get("tool_version"))
    table = _compute_table(g)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(table.to_json(g), indent=1) + "\n")
        os.replace(tmp, path)
    return table

