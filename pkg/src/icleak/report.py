"""Analysis reports: orchestration, JSON serialization and the human table.

Exact rationals serialize as ``{"num": "...", "den": "..."}``; reals are
rounded to 12 significant digits.  Serialization uses sorted keys so that
parsing a report and dumping it again reproduces the same bytes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from ._kernels import BACKEND
from .bounds import beta_value, mais_bound
from .confusion import DEFAULT_VERTEX_CAP
from .fitting import SearchLimits, extract_encoder, pareto_sweep, pattern_from_instance, search_min
from .gf import MatrixGF
from .instance import AdversarySplit, Instance, instance_to_dict, sequence_labels
from .leakage import (EncoderTable, exhaustive_min_det_leakage_t1, linear_leakage,
                      mutual_info_leakage, theorem2_lower_bound)

SCHEMA_VERSION = "icleak.report/1"
TIGHT_TOL = 1e-9


def rational(x: Fraction | int) -> dict[str, str]:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def parse_rational(doc: dict[str, str]) -> Fraction:
    return Fraction(int(doc["num"]), int(doc["den"]))


def real(x: float) -> float:
    if x == 0:
        return 0.0
    return float(f"{x:.12g}")


_RAT = {"type": "object", "required": ["num", "den"], "additionalProperties": False,
        "properties": {"num": {"type": "string", "pattern": "^-?[0-9]+$"},
                       "den": {"type": "string", "pattern": "^[1-9][0-9]*$"}}}
_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_NUM = {"type": "number"}
_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}


def _obj(props: dict, nullable: bool = False, optional: tuple = ()) -> dict:
    schema = {"type": "object", "properties": props, "additionalProperties": False,
              "required": [k for k in props if k not in optional]}
    return {"anyOf": [schema, {"type": "null"}]} if nullable else schema


REPORT_SCHEMA: dict[str, Any] = _obj({
    "schema": {"const": SCHEMA_VERSION},
    "tool": _obj({"name": {"type": "string"}, "version": {"type": "string"},
                  "backend": {"type": "string"}}),
    "instance": {"type": "object"},
    "limits": _obj({"max_free_cells": _INT, "mode": {"enum": ["exhaustive", "randomized"]},
                    "seed": _INT, "iterations": _INT, "vertex_cap": _INT}),
    "units": {"enum": ["q-ary", "bits"]},
    "rate": _obj({
        "beta": _obj({"value": _NUM, "n": _INT, "alpha": _INT,
                      "exact": {"type": ["integer", "null"]}, "certified": _BOOL}, nullable=True),
        "mais": _obj({"value": _INT, "order": {"type": "array", "items": _INT}}),
        "minrank": _obj({"value": _INT, "witness": _MATRIX, "certified": _BOOL}),
        "notes": {"type": "array", "items": {"type": "string"}},
    }),
    "leakage": _obj({
        "linear_min": _obj({"value": _INT, "L": _NUM, "qL": _RAT, "witness": _MATRIX,
                            "encoder": _MATRIX, "certified": _BOOL}),
        "theorem2_lower": _obj({"value": _NUM, "qL_floor": _RAT, "exact": {"type": ["integer", "null"]},
                                "alpha": {"type": ["integer", "null"]}, "subproblem_size": _INT,
                                "u": _INT, "mais": _INT, "method": {"enum": ["confusion-graph", "mais"]},
                                "beta_certified": _BOOL}),
        "exhaustive_t1": _obj({"value": _NUM, "qL": _RAT, "codewords": {"type": "array", "items": _INT},
                               "certified": _BOOL}, nullable=True),
        "mutual_info": _obj({"value": _NUM}, nullable=True),
        "pareto": {"anyOf": [{"type": "array", "items": {"type": "array", "items": _INT,
                                                          "minItems": 2, "maxItems": 2}},
                             {"type": "null"}]},
        "interval": _obj({"lower": _NUM, "upper": _NUM, "tight": _BOOL}),
    }, nullable=True),
    "timing": {"type": "object", "additionalProperties": _NUM},
})


@dataclass
class AnalysisReport:
    doc: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls(json.loads(text))

    def __getitem__(self, key: str) -> Any:
        return self.doc[key]


def _rows(m: MatrixGF) -> list[list[int]]:
    return m.to_rows()


def analyze(inst: Instance, split: AdversarySplit | None,
            limits: SearchLimits = SearchLimits(), vertex_cap: int = DEFAULT_VERTEX_CAP,
            exhaustive_t1: bool = False, pareto: bool = False, mutual_info: bool = False,
            bits: bool = False) -> AnalysisReport:
    """Run every analysis stage and collect the results with their witnesses.

    Raises the library's limit errors unchanged so the caller can map them to
    exit codes.
    """
    timing: dict[str, float] = {}
    scale = math.log2(inst.q) if bits else 1.0

    def stage(name: str, fn):
        t0 = time.perf_counter()
        out = fn()
        timing[name] = real(time.perf_counter() - t0)
        return out

    notes: list[str] = []
    mais, order = stage("mais", lambda: mais_bound(inst))
    beta = None
    if inst.q ** inst.n <= vertex_cap:
        beta = stage("beta", lambda: beta_value(inst, vertex_cap))
    else:
        notes.append("beta skipped: q^n exceeds the vertex cap")
    pattern = pattern_from_instance(inst)
    floor = mais if limits.mode == "exhaustive" else None
    mr = stage("minrank", lambda: search_min(pattern, "rank", limits, floor=floor))
    if not mr.certified:
        notes.append("minrank from randomized search: an upper bound only")
    certified = beta is not None and beta.exact is not None and beta.exact == mais
    if beta is not None and not certified:
        notes.append("beta is the block-length-1 rate; longer blocks may do better")
    rate = {
        "beta": None if beta is None else {
            "value": real(beta.value * scale), "n": beta.n, "alpha": beta.alpha,
            "exact": beta.exact, "certified": certified},
        "mais": {"value": mais, "order": sequence_labels(order)},
        "minrank": {"value": mr.value, "witness": _rows(mr.witness), "certified": mr.certified},
        "notes": notes,
    }

    leak = None
    if split is not None:
        split.check_partition(inst.n)
        lin = stage("linear_min", lambda: search_min(pattern, split, limits))
        E = extract_encoder(lin.witness)
        lin_res = linear_leakage(E, split)
        if lin_res.qL != inst.q ** lin.value:
            raise AssertionError("closed form disagrees with the search objective")
        tb = stage("theorem2", lambda: theorem2_lower_bound(inst, split, vertex_cap))
        upper = float(lin.value)
        ex_doc = None
        if exhaustive_t1:
            ex = stage("exhaustive_t1", lambda: exhaustive_min_det_leakage_t1(inst, split))
            ex_doc = {"value": real(ex.L * scale), "qL": rational(ex.qL),
                      "codewords": [int(c) for c in ex.witness.codewords], "certified": True}
            upper = min(upper, ex.L)
        mi_doc = None
        if mutual_info:
            enc = EncoderTable.from_linear(E)
            mi_doc = {"value": real(stage("mutual_info", lambda: mutual_info_leakage(enc, split)) * scale)}
        par = None
        if pareto:
            par = [list(p) for p in stage("pareto", lambda: pareto_sweep(pattern, split, limits))]
        lower = tb.value
        leak = {
            "linear_min": {"value": lin.value, "L": real(lin.value * scale), "qL": rational(lin_res.qL),
                           "witness": _rows(lin.witness), "encoder": _rows(E),
                           "certified": lin.certified},
            "theorem2_lower": {"value": real(tb.value * scale), "qL_floor": rational(tb.qL_floor),
                               "exact": tb.exact, "alpha": tb.alpha,
                               "subproblem_size": split.s + split.u, "u": split.u, "mais": tb.mais,
                               "method": tb.method, "beta_certified": tb.beta_certified},
            "exhaustive_t1": ex_doc,
            "mutual_info": mi_doc,
            "pareto": par,
            "interval": {"lower": real(lower * scale), "upper": real(upper * scale),
                         "tight": lin.certified and abs(upper - lower) <= TIGHT_TOL},
        }

    doc = {
        "schema": SCHEMA_VERSION,
        "tool": {"name": "icleak", "version": __version__, "backend": BACKEND},
        "instance": instance_to_dict(inst, split),
        "limits": {"max_free_cells": limits.free_cell_limit(inst.q), "mode": limits.mode,
                   "seed": limits.seed, "iterations": limits.iterations, "vertex_cap": vertex_cap},
        "units": "bits" if bits else "q-ary",
        "rate": rate,
        "leakage": leak,
        "timing": timing,
    }
    return AnalysisReport(doc)


def _fmt(x: Any) -> str:
    if isinstance(x, dict) and set(x) == {"num", "den"}:
        return x["num"] if x["den"] == "1" else f"{x['num']}/{x['den']}"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def render_table(report: AnalysisReport) -> str:
    """Human-readable summary carrying the same numbers as the JSON."""
    d = report.doc
    inst = d["instance"]
    unit = "bits" if d["units"] == "bits" else f"{inst['q']}-ary symbols"
    lines = [f"instance: n={inst['n']} q={inst['q']} receivers={len(inst['receivers'])}"]
    r = d["rate"]
    if r["beta"] is not None:
        b = r["beta"]
        cert = "certified" if b["certified"] else "block length 1"
        lines.append(f"beta        {_fmt(b['value'])}  (n={b['n']}, alpha={b['alpha']}; {cert})")
    lines.append(f"mais        {r['mais']['value']}  order {r['mais']['order']}")
    mr = r["minrank"]
    lines.append(f"minrank     {mr['value']}" + ("" if mr["certified"] else "  (non-certified)"))
    for row in mr["witness"]:
        lines.append("            " + " ".join(map(str, row)))
    for note in r["notes"]:
        lines.append(f"note: {note}")
    lk = d["leakage"]
    if lk is not None:
        lm = lk["linear_min"]
        lines.append(f"linear_min  {_fmt(lm['L'])} {unit}  (q^L = {_fmt(lm['qL'])})"
                     + ("" if lm["certified"] else "  (non-certified)"))
        for row in lm["encoder"]:
            lines.append("            " + " ".join(map(str, row)))
        tb = lk["theorem2_lower"]
        lines.append(f"converse    {_fmt(tb['value'])} {unit}  (q^L >= {_fmt(tb['qL_floor'])}, "
                     f"method {tb['method']}, alpha={tb['alpha']}, mais={tb['mais']})")
        if lk["exhaustive_t1"] is not None:
            ex = lk["exhaustive_t1"]
            lines.append(f"exhaustive  {_fmt(ex['value'])} {unit}  (q^L = {_fmt(ex['qL'])})")
        if lk["mutual_info"] is not None:
            lines.append(f"mutual_info {_fmt(lk['mutual_info']['value'])} {unit}")
        if lk["pareto"] is not None:
            lines.append("pareto      " + ", ".join(f"({a}, {b})" for a, b in lk["pareto"]))
        iv = lk["interval"]
        lines.append(f"interval    [{_fmt(iv['lower'])}, {_fmt(iv['upper'])}]"
                     + ("  tight" if iv["tight"] else ""))
    return "\n".join(lines) + "\n"
