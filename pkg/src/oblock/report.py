"""JSON payloads for every CLI command and their Markdown / TeX renderings.

Renderers only read the JSON payload, and every number in the payload shows
up in each rendering, so the three formats carry the same numeric content.
Header text avoids digits for the same reason (``w₀`` in Markdown,
``w_\\circ`` in TeX).
"""

from __future__ import annotations

import json

from .block import (
    BlockDescriptor, GradedFlag, LayeredCharacter, dim_end_projective, projective_flag, verma_layers,
)
from .coxeter import format_word, parse_word
from .kl import KLTable, engine, kl_table
from .oracles import VerificationReport
from .polynomials import PolynomialQ
from .tilting import (
    HaziTrace, RigidityReport, dim_end_tilting, hazi_layers, loewy_length_tilting,
    rigidity_report, socle_multiplicity, tilting_character, tilting_flag,
)

__all__ = ["payload_group", "payload_kl", "payload_kl_table", "payload_verma", "payload_projective",
           "payload_tilting", "payload_hazi", "payload_rigidity", "payload_verify",
           "render", "parse_payload"]


# payloads

def payload_group(b: BlockDescriptor) -> dict:
    g = b.group
    return {
        "command": "group",
        "block": b.to_json(),
        "order": len(g),
        "w0": format_word(g.w0),
        "w0_length": g.w0.length,
        "w0_lambda": format_word(b.w0_lambda),
        "stabilizer_order": b.stabilizer_order,
        "reps": [{"element": format_word(x), "length": x.length} for x in b],
    }


def payload_kl(b: BlockDescriptor, x, y) -> dict:
    p = PolynomialQ(engine(b.group).coeffs(x.index, y.index))
    gap = y.length - x.length
    mu = p[(gap - 1) // 2] if gap > 0 and gap % 2 else 0
    return {"command": "kl", "type": b.group.label, "x": format_word(x), "y": format_word(y),
            "coeffs": list(p.coeffs), "polynomial": str(p), "mu": mu}


def payload_kl_table(b: BlockDescriptor, cache_path=None) -> dict:
    doc = kl_table(b.group, cache_path).to_json(b.group)
    return {"command": "kl", **doc}


def payload_verma(b: BlockDescriptor, x) -> dict:
    lay = verma_layers(b, x)
    return {"command": "verma", "block": b.to_json(), "x": format_word(x),
            "graded_length": lay.n_layers, "layers": lay.to_json()}


def payload_projective(b: BlockDescriptor, y) -> dict:
    return {"command": "projective", "block": b.to_json(), "y": format_word(y),
            "dim_end": dim_end_projective(b, y), "flag": projective_flag(b, y).to_json()}


def _tilting_row(b: BlockDescriptor, x, verify: bool) -> dict:
    return {
        "x": format_word(x),
        "w0x_length": b.group.w0.length - x.length,
        "loewy_length": loewy_length_tilting(b, x, verify),
        "socle_multiplicity": socle_multiplicity(b, x, verify),
        "dim_end": dim_end_tilting(b, x, verify),
        "flag": tilting_flag(b, x, verify).to_json(),
        "layers": tilting_character(b, x, verify).to_json(),
    }


def payload_tilting(b: BlockDescriptor, xs, verify: bool = True) -> dict:
    return {"command": "tilting", "block": b.to_json(), "modules": [_tilting_row(b, x, verify) for x in xs]}


def payload_hazi(b: BlockDescriptor, x, reverse: bool = False) -> dict:
    return {"command": "hazi", "block": b.to_json(), "x": format_word(x), "reverse": reverse,
            **hazi_layers(b, x, reverse).to_json()}


def payload_rigidity(b: BlockDescriptor, xs, verify: bool = True) -> dict:
    rows = []
    for x in xs:
        r = rigidity_report(b, x, verify).to_json()
        r["w0x_length"] = b.group.w0.length - x.length
        r["loewy_length"] = loewy_length_tilting(b, x, verify)
        r["flag"] = tilting_flag(b, x, verify).to_json()
        rows.append(r)
    return {"command": "rigidity", "block": b.to_json(), "rows": rows}


def payload_verify(reports: list[VerificationReport]) -> dict:
    return {"command": "verify", "passed": all(r.passed for r in reports),
            "reports": [r.to_json() for r in reports]}


def parse_payload(doc: dict):
    """Rebuild the record objects a JSON payload was emitted from."""
    cmd = doc["command"]
    if cmd == "kl":
        if "entries" in doc:
            b = BlockDescriptor.from_json({"type": doc["group"]})
            return KLTable.from_json(b.group, doc)
        return PolynomialQ(doc["coeffs"])
    if cmd == "verify":
        return [VerificationReport.from_json(r) for r in doc["reports"]]
    b = BlockDescriptor.from_json(doc["block"])
    if cmd == "group":
        return b
    if cmd == "verma":
        return LayeredCharacter.from_json(b, doc["layers"])
    if cmd == "projective":
        return GradedFlag.from_json(b, doc["flag"])
    if cmd == "tilting":
        return [(GradedFlag.from_json(b, m["flag"]), LayeredCharacter.from_json(b, m["layers"]))
                for m in doc["modules"]]
    if cmd == "hazi":
        return HaziTrace.from_json(b, doc)
    if cmd == "rigidity":
        return [RigidityReport.from_json(b, r) for r in doc["rows"]]
    raise ValueError(f"unknown command {cmd!r}")


# element and block text

def _md_elem(word: str) -> str:
    return "".join(f"s{i}" for i in parse_word(word)) or "e"


def _tex_elem(word: str) -> str:
    return "".join(f"s_{{{i}}}" for i in parse_word(word)) or "e"


def _md_block(doc: dict) -> str:
    return f"{doc['type']}, walls {{{', '.join(map(str, doc['walls']))}}}"


def _tex_block(doc: dict) -> str:
    walls = ", ".join(map(str, doc["walls"]))
    return f"{doc['type']}, $S=\\{{{walls}\\}}$"


def _md_flag(flag: list[dict], letter: str = "Δ") -> str:
    return ", ".join(f"{letter}({_md_elem(r['element'])})⟨{r['shift']}⟩×{r['mult']}" for r in flag) or "-"


def _tex_flag(flag: list[dict]) -> str:
    return ", ".join(f"$\\Delta_{{{_tex_elem(r['element'])}}}\\langle {r['shift']}\\rangle^{{{r['mult']}}}$"
                     for r in flag) or "--"


def _md_simples(simples: list[dict]) -> str:
    return ", ".join(f"L({_md_elem(s['element'])})×{s['mult']}" for s in simples)


def _tex_simples(simples: list[dict]) -> str:
    return ", ".join(f"$L_{{{_tex_elem(s['element'])}}}^{{{s['mult']}}}$" for s in simples)


def _md_bool(v) -> str:
    return "n/a" if v is None else ("yes" if v else "no")


def _tex_bool(v) -> str:
    return "--" if v is None else ("\\checkmark" if v else "$\\times$")


def _md_table(headers: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    out += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return out


def _tex_table(headers: list[str], rows: list[list], spec: str | None = None) -> list[str]:
    spec = spec or "l" * len(headers)
    out = [f"\\begin{{tabular}}{{{spec}}}", "\\toprule", " & ".join(headers) + " \\\\", "\\midrule"]
    out += [" & ".join(str(c) for c in row) + " \\\\" for row in rows]
    out += ["\\bottomrule", "\\end{tabular}"]
    return out


def _layers_rows(layers: list[dict], fmt) -> list[list]:
    return [[layer["degree"], fmt(layer["simples"])] for layer in layers]


# markdown

def _md(doc: dict) -> list[str]:
    cmd = doc["command"]
    if cmd == "group":
        out = [f"# Block {_md_block(doc['block'])}", "",
               f"- order of W: {doc['order']}",
               f"- w₀ = {_md_elem(doc['w0'])}, ℓ(w₀) = {doc['w0_length']}",
               f"- w₀^λ = {_md_elem(doc['w0_lambda'])}, |W_λ| = {doc['stabilizer_order']}", ""]
        return out + _md_table(["element", "length"], [[_md_elem(r["element"]), r["length"]] for r in doc["reps"]])
    if cmd == "kl":
        if "entries" in doc:
            out = [f"# KL polynomials of {doc['group']}", "",
                   f"- enumeration hash: {doc['enumeration_hash']}",
                   f"- tool version: {doc['tool_version']}",
                   "- pairs x ≤ y not listed have the constant polynomial one", ""]
            return out + _md_table(["x", "y", "coefficients"],
                                   [[_md_elem(r["x"]), _md_elem(r["y"]), r["coeffs"]] for r in doc["entries"]])
        return [f"# P(x, y) in {doc['type']}", "",
                f"- x = {_md_elem(doc['x'])}, y = {_md_elem(doc['y'])}",
                f"- P = {doc['polynomial']}", f"- coefficients: {doc['coeffs']}", f"- mu = {doc['mu']}"]
    if cmd == "verma":
        out = [f"# Δ({_md_elem(doc['x'])}) in {_md_block(doc['block'])}", "",
               f"- graded length: {doc['graded_length']}", ""]
        return out + _md_table(["degree", "simples"], _layers_rows(doc["layers"], _md_simples))
    if cmd == "projective":
        out = [f"# P({_md_elem(doc['y'])}) in {_md_block(doc['block'])}", "",
               f"- dim End: {doc['dim_end']}", ""]
        return out + _md_table(["Verma", "shift", "mult"],
                               [[f"Δ({_md_elem(r['element'])})", r["shift"], r["mult"]] for r in doc["flag"]])
    if cmd == "tilting":
        out = [f"# Tilting modules in {_md_block(doc['block'])}"]
        for m in doc["modules"]:
            out += ["", f"## T({_md_elem(m['x'])})", "",
                    f"- ℓ(w₀x): {m['w0x_length']}", f"- Loewy length: {m['loewy_length']}",
                    f"- socle multiplicity: {m['socle_multiplicity']}", f"- dim End: {m['dim_end']}",
                    f"- Verma flag: {_md_flag(m['flag'])}", ""]
            out += _md_table(["degree", "simples"], _layers_rows(m["layers"], _md_simples))
        return out
    if cmd == "hazi":
        order = "reverse ShortLex" if doc["reverse"] else "ShortLex"
        out = [f"# Balancing T({_md_elem(doc['x'])}) in {_md_block(doc['block'])}", "",
               f"- tie-break: {order}", ""]
        out += _md_table(["Verma", "shift", "copies", "unbalanced degree"],
                         [[f"Δ({_md_elem(s['element'])})", s["shift"], s["copies"], s["witness_degree"]]
                          for s in doc["steps"]])
        out += ["", f"- resulting flag: {_md_flag(doc['flag'])}", ""]
        return out + _md_table(["degree", "simples"], _layers_rows(doc["layers"], _md_simples))
    if cmd == "rigidity":
        rows = [[_md_elem(r["x"]), _md_elem(r["y"]), r["w0x_length"], r["loewy_length"], _md_flag(r["flag"]),
                 r["socle_multiplicity"], r["max_flag_multiplicity"], r["dominant_multiplicity"],
                 _md_bool(r["cond_socle"]), _md_bool(r["cond_multfree"]), _md_bool(r["cond_dominant"]),
                 _md_bool(r["agreement"]), _md_bool(r["verdict"])] for r in doc["rows"]]
        headers = ["x", "y", "ℓ(w₀x)", "Loewy length", "Verma flag", "socle mult", "max flag mult",
                   "[Δ(λ):L(y)]", "simple socle", "mult. free", "dominant mult one", "agree", "rigid"]
        return [f"# Rigidity in {_md_block(doc['block'])}", ""] + _md_table(headers, rows)
    if cmd == "verify":
        out = [f"# Verification: {'PASS' if doc['passed'] else 'FAIL'}"]
        for rep in doc["reports"]:
            out += ["", f"## {_md_block(rep['block'])}: {'PASS' if rep['passed'] else 'FAIL'}", "",
                    f"- duration: {rep['duration_s']} s"]
            for key, val in rep["observations"].items():
                out.append(f"- {key.replace('_', ' ')}: {json.dumps(val, sort_keys=True)}")
            out.append("")
            out += _md_table(["check", "status", "cases", "witness"],
                             [[r["id"], "pass" if r["passed"] else "FAIL", r["checked"],
                               json.dumps(r["witness"], sort_keys=True) if r["witness"] else ""]
                              for r in rep["results"]])
        return out
    raise ValueError(cmd)


# tex

def _tex(doc: dict) -> list[str]:
    cmd = doc["command"]
    if cmd == "group":
        out = [f"% Block {_tex_block(doc['block'])}",
               f"% order {doc['order']}; $w_\\circ = {_tex_elem(doc['w0'])}$, length {doc['w0_length']}; "
               f"$w_\\circ^\\lambda = {_tex_elem(doc['w0_lambda'])}$, $|W_\\lambda| = {doc['stabilizer_order']}$"]
        return out + _tex_table(["$x \\in X_\\lambda$", "$\\ell(x)$"],
                                [[f"${_tex_elem(r['element'])}$", r["length"]] for r in doc["reps"]])
    if cmd == "kl":
        if "entries" in doc:
            out = [f"% KL polynomials of {doc['group']}, enumeration hash {doc['enumeration_hash']}, "
                   f"tool version {doc['tool_version']}; unlisted pairs $x \\le y$ have constant polynomial one"]
            return out + _tex_table(["$x$", "$y$", "coefficients"],
                                    [[f"${_tex_elem(r['x'])}$", f"${_tex_elem(r['y'])}$",
                                      ", ".join(map(str, r["coeffs"]))] for r in doc["entries"]])
        return [f"% {doc['type']}",
                f"$P_{{{_tex_elem(doc['x'])},{_tex_elem(doc['y'])}}} = {doc['polynomial']}$ "
                f"% coefficients {', '.join(map(str, doc['coeffs']))}; $\\mu = {doc['mu']}$"]
    if cmd == "verma":
        out = [f"% $\\Delta_{{{_tex_elem(doc['x'])}}}$ in {_tex_block(doc['block'])}; "
               f"graded length {doc['graded_length']}"]
        return out + _tex_table(["degree", "simples"], _layers_rows(doc["layers"], _tex_simples))
    if cmd == "projective":
        out = [f"% $P_{{{_tex_elem(doc['y'])}}}$ in {_tex_block(doc['block'])}; "
               f"$\\dim \\mathrm{{End}} = {doc['dim_end']}$"]
        return out + _tex_table(["Verma", "shift", "mult"],
                                [[f"$\\Delta_{{{_tex_elem(r['element'])}}}$", r["shift"], r["mult"]]
                                 for r in doc["flag"]])
    if cmd == "tilting":
        out = [f"% Tilting modules in {_tex_block(doc['block'])}"]
        out += _tex_table(["$x$", "$\\ell(w_\\circ x)$", "Loewy length", "socle mult",
                           "$\\dim\\mathrm{End}$", "Verma flag"],
                          [[f"${_tex_elem(m['x'])}$", m["w0x_length"], m["loewy_length"],
                            m["socle_multiplicity"], m["dim_end"], _tex_flag(m["flag"])] for m in doc["modules"]])
        out.append("% grading layers, one tabular per module in row order")
        for m in doc["modules"]:
            out += _tex_table(["degree", "simples"], _layers_rows(m["layers"], _tex_simples))
        return out
    if cmd == "hazi":
        order = "reverse ShortLex" if doc["reverse"] else "ShortLex"
        out = [f"% Balancing $T_{{{_tex_elem(doc['x'])}}}$ in {_tex_block(doc['block'])}, tie-break {order}"]
        out += _tex_table(["Verma", "shift", "copies", "unbalanced degree"],
                          [[f"$\\Delta_{{{_tex_elem(s['element'])}}}$", s["shift"], s["copies"],
                            s["witness_degree"]] for s in doc["steps"]])
        out.append(f"% resulting flag: {_tex_flag(doc['flag'])}")
        return out + _tex_table(["degree", "simples"], _layers_rows(doc["layers"], _tex_simples))
    if cmd == "rigidity":
        rows = [[f"${_tex_elem(r['x'])}$", f"${_tex_elem(r['y'])}$", r["w0x_length"], r["loewy_length"],
                 _tex_flag(r["flag"]), r["socle_multiplicity"], r["max_flag_multiplicity"],
                 r["dominant_multiplicity"], _tex_bool(r["cond_socle"]), _tex_bool(r["cond_multfree"]),
                 _tex_bool(r["cond_dominant"]), _tex_bool(r["agreement"]), _tex_bool(r["verdict"])]
                for r in doc["rows"]]
        headers = ["$x$", "$y$", "$\\ell(w_\\circ x)$", "Loewy length", "Verma flag", "socle",
                   "max mult", "$[\\Delta_\\lambda : L_y]$", "simple socle", "mult.\\ free",
                   "dominant", "agree", "rigid"]
        return [f"% Rigidity in {_tex_block(doc['block'])}"] + _tex_table(headers, rows)
    if cmd == "verify":
        out = [f"% Verification: {'PASS' if doc['passed'] else 'FAIL'}"]
        for rep in doc["reports"]:
            out.append(f"% {_tex_block(rep['block'])}: {'PASS' if rep['passed'] else 'FAIL'}, "
                       f"duration {rep['duration_s']} s")
            for key, val in rep["observations"].items():
                out.append(f"% {key.replace('_', ' ')}: {json.dumps(val, sort_keys=True)}")
            out += _tex_table(["check", "status", "cases", "witness"],
                              [[f"\\texttt{{{r['id'].replace('_', chr(92) + '_')}}}",
                                "pass" if r["passed"] else "FAIL", r["checked"],
                                f"\\verb|{json.dumps(r['witness'], sort_keys=True)}|" if r["witness"] else ""]
                               for r in rep["results"]])
        return out
    raise ValueError(cmd)


def render(doc: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False)
    if fmt == "md":
        return "\n".join(_md(doc))
    if fmt == "tex":
        return "\n".join(_tex(doc))
    raise ValueError(f"unknown format {fmt!r}")
