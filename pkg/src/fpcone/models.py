"""Builtin models and the JSON model-file format.

A model file looks like::

    {"name": "kt4", "dim": 4,
     "d": {"4": [{"coeff": "1", "indices": [2, 3]}]},
     "omega": [{"coeff": "1", "indices": [1, 2]}, {"coeff": "1", "indices": [3, 4]}]}

Coefficients are rationals written as strings ``"p/q"`` or ``"p"``; indices
are 1-based and strictly increasing.  An element file for the potential is
``{"terms": [{"side": "plain", "form": [...term list...]}, ...]}``.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Dict, List

from .exterior import Form, LieModel, e, make_model, validate
from .filtered import BARRED, PLAIN, FilteredElement, filtered_element


class ModelFileError(ValueError):
    """Malformed or invalid model/element file; ``where`` names the field or line."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def builtin_models() -> Dict[str, LieModel]:
    return {
        # Kodaira-Thurston: e4 = dx4 + x2 dx3, so d e4 = e23
        "kt4": make_model("kt4", 4, {4: e(2, 3)}, e(1, 2) + e(3, 4)),
        "t4": make_model("t4", 4, {}, e(1, 2) + e(3, 4)),
        "t6": make_model("t6", 6, {}, e(1, 2) + e(3, 4) + e(5, 6)),
        # 6-dimensional nilmanifold on which del_+ del_- is not identically zero
        "nil6": make_model("nil6", 6, {3: e(1, 2), 5: e(1, 3), 6: e(1, 5)}, e(1, 4) - e(2, 6) + e(3, 5)),
    }


def format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(text, where: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ModelFileError(f"coefficient must be a string like \"p/q\", got {text!r}", where)
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ModelFileError(f"malformed rational {text!r}", where) from None
    if "." in str(text) or "e" in str(text).lower():
        raise ModelFileError(f"rational {text!r} must be written as p/q, not as a decimal", where)
    return value


def parse_terms(raw, dim: int, where: str) -> Form:
    if not isinstance(raw, list):
        raise ModelFileError("expected a list of terms", where)
    terms: Dict[tuple, Fraction] = {}
    for t, term in enumerate(raw):
        at = f"{where}[{t}]"
        if not isinstance(term, dict) or set(term) != {"coeff", "indices"}:
            raise ModelFileError("term must have exactly the keys 'coeff' and 'indices'", at)
        idx = term["indices"]
        if not isinstance(idx, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise ModelFileError(f"indices must be a list of integers, got {idx!r}", at)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ModelFileError(f"indices {idx} are not strictly increasing", at)
        if any(not 1 <= i <= dim for i in idx):
            raise ModelFileError(f"indices {idx} outside 1..{dim}", at)
        key = tuple(idx)
        if key in terms:
            raise ModelFileError(f"indices {idx} repeated", at)
        terms[key] = parse_rational(term["coeff"], f"{at}.coeff")
    return Form(terms)


def emit_terms(a: Form) -> List[dict]:
    return [{"coeff": format_rational(c), "indices": list(key)} for key, c in sorted(a.terms.items())]


def model_from_dict(data, source: str = "<model>", check: bool = True) -> LieModel:
    if not isinstance(data, dict):
        raise ModelFileError("top level must be an object", source)
    missing = {"name", "dim", "d", "omega"} - set(data)
    if missing:
        raise ModelFileError(f"missing field(s) {sorted(missing)}", source)
    extra = set(data) - {"name", "dim", "d", "omega"}
    if extra:
        raise ModelFileError(f"unknown field(s) {sorted(extra)}", source)
    name, dim = data["name"], data["dim"]
    if not isinstance(name, str) or not name:
        raise ModelFileError("name must be a non-empty string", f"{source}: name")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0 or dim % 2:
        raise ModelFileError(f"dim must be an even positive integer, got {dim!r}", f"{source}: dim")
    if not isinstance(data["d"], dict):
        raise ModelFileError("d must be an object mapping generator index to a term list", f"{source}: d")
    structure = {}
    for key, raw in data["d"].items():
        where = f"{source}: d.{key}"
        try:
            i = int(key)
        except ValueError:
            raise ModelFileError(f"generator key {key!r} is not an integer", where) from None
        if not 1 <= i <= dim:
            raise ModelFileError(f"generator {i} outside 1..{dim}", where)
        form = parse_terms(raw, dim, where)
        if form and form.degree != 2:
            raise ModelFileError(f"d e{i} must be a 2-form, got {form}", where)
        structure[i] = form
    omega = parse_terms(data["omega"], dim, f"{source}: omega")
    if omega.degree != 2:
        raise ModelFileError(f"omega must be a nonzero 2-form, got {omega}", f"{source}: omega")
    m = make_model(name, dim, structure, omega)
    if check:
        rep = validate(m)
        if not rep.passed:
            detail = "; ".join(f"{c.name}: {c.detail}" for c in rep.failures())
            raise ModelFileError(f"model fails validation ({detail})", source)
    return m


def parse_model_text(text: str, source: str = "<model>", check: bool = True) -> LieModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(exc.msg, f"{source}: line {exc.lineno} column {exc.colno}") from None
    return model_from_dict(data, source, check)


def parse_model(path: str, check: bool = True) -> LieModel:
    """Parse a model file; with ``check`` the model must also pass :func:`validate`."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelFileError(f"cannot read model file ({exc.strerror})", path) from None
    return parse_model_text(text, path, check)


def model_to_dict(m: LieModel) -> dict:
    return {"name": m.name, "dim": m.dim,
            "d": {str(i): emit_terms(f) for i, f in enumerate(m.structure, start=1) if f},
            "omega": emit_terms(m.omega)}


def emit_model(m: LieModel) -> str:
    return json.dumps(model_to_dict(m), indent=2) + "\n"


def load_model(spec: str, check: bool = True) -> LieModel:
    """A builtin name, or a path to a model file."""
    builtins = builtin_models()
    if spec in builtins:
        return builtins[spec]
    if os.path.exists(spec):
        return parse_model(spec, check)
    raise ModelFileError(f"unknown model {spec!r}; builtins: {', '.join(sorted(builtins))}, or a file path")


def parse_element_text(text: str, m: LieModel, p: int, source: str = "<element>") -> List[FilteredElement]:
    """Homogeneous components of a formal sum in F_p; each must be a ``p``-filtered form."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(exc.msg, f"{source}: line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
        raise ModelFileError("expected an object with a 'terms' list", source)
    out = []
    for t, term in enumerate(data["terms"]):
        at = f"{source}: terms[{t}]"
        if not isinstance(term, dict) or "form" not in term:
            raise ModelFileError("component must be an object with 'form' and optional 'side'", at)
        side = term.get("side", PLAIN)
        if side not in (PLAIN, BARRED):
            raise ModelFileError(f"side must be {PLAIN!r} or {BARRED!r}", at)
        form = parse_terms(term["form"], m.dim, f"{at}.form")
        if not form:
            continue
        if form.degree is None:
            raise ModelFileError(f"component {form} is not homogeneous", at)
        try:
            out.append(filtered_element(m, p, form, side))
        except ValueError as exc:
            raise ModelFileError(str(exc), at) from None
    return out


def parse_element(path: str, m: LieModel, p: int) -> List[FilteredElement]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelFileError(f"cannot read element file ({exc.strerror})", path) from None
    return parse_element_text(text, m, p, path)
