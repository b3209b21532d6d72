"""JSON instance documents.

Every number is an integer or a ``"p/q"`` string.  Finite documents::

    {"schema_version": 1, "kind": "finite", "name": ..., "seed": ..., "info": {...},
     "n_y": 3, "t": 7,
     "y_space": {"lower": [...], "upper": [...],
                 "constraints": [{"row": [...], "sense": ">=", "rhs": r}],
                 "explicit": [[...], ...]},          # optional
     "scenarios": [{"objective": [...], "constraints": [...]}]}

Affine documents carry ``n_x, n_y, n_xi, m, X, y_space, A, Ai, B, Bi, H, h,
U_box {lower, upper, constraints}, cost, cost_xi``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InstanceFormatError
from .model import AffineInstance, Constraint, FiniteInstance, Scenario, UBox, YSpace
from .rational import format_rational, parse_rational

SCHEMA_VERSION = 1


def _num(v):
    return format_rational(v)


def _vec(vs):
    return [_num(v) for v in vs]


def _mat(M):
    return [_vec(r) for r in M]


def _rows(cs):
    return [{"row": _vec(c.row), "sense": c.sense, "rhs": _num(c.rhs)} for c in cs]


def _plain(value):
    """Make ``info`` payloads JSON-safe (Fractions become "p/q")."""
    if isinstance(value, Fraction):
        return _num(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _yspace_doc(ys: YSpace) -> dict:
    doc = {"lower": list(ys.lower), "upper": list(ys.upper), "constraints": _rows(ys.constraints)}
    if ys.explicit is not None:
        doc["explicit"] = [list(p) for p in ys.explicit]
    return doc


def to_dict(instance) -> dict:
    if isinstance(instance, FiniteInstance):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "finite",
            "name": instance.name,
            "seed": instance.seed,
            "info": _plain(instance.info),
            "n_y": instance.n_y,
            "t": instance.t,
            "y_space": _yspace_doc(instance.y_space),
            "scenarios": [
                {"objective": _vec(s.objective), "constraints": _rows(s.constraints)}
                for s in instance.scenarios
            ],
        }
    if isinstance(instance, AffineInstance):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "affine",
            "name": instance.name,
            "n_x": instance.n_x,
            "n_y": instance.n_y,
            "n_xi": instance.n_xi,
            "m": instance.m,
            "X": [list(x) for x in instance.X],
            "y_space": _yspace_doc(instance.y_space),
            "A": _mat(instance.A),
            "Ai": [_mat(M) for M in instance.Ai],
            "B": _mat(instance.B),
            "Bi": [_mat(M) for M in instance.Bi],
            "H": _mat(instance.H),
            "h": _vec(instance.h),
            "U_box": {
                "lower": _vec(instance.U.lower),
                "upper": _vec(instance.U.upper),
                "constraints": _rows(instance.U.constraints),
            },
            "cost": _vec(instance.cost),
            "cost_xi": _mat(instance.cost_xi),
        }
    raise TypeError(f"not an instance: {type(instance).__name__}")


def _get(doc: dict, key: str, path: str):
    if not isinstance(doc, dict):
        raise InstanceFormatError(path or "<root>", "expected an object")
    if key not in doc:
        raise InstanceFormatError(f"{path}.{key}" if path else key, "missing field")
    return doc[key]


def _parse_vec(v, path):
    if not isinstance(v, list):
        raise InstanceFormatError(path, "expected a list")
    try:
        return [parse_rational(x, f"{path}[{i}]") for i, x in enumerate(v)]
    except ValueError as exc:
        raise InstanceFormatError(path, str(exc)) from None


def _parse_mat(M, path):
    if not isinstance(M, list):
        raise InstanceFormatError(path, "expected a list of rows")
    return [_parse_vec(r, f"{path}[{i}]") for i, r in enumerate(M)]


def _parse_int_vec(v, path):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InstanceFormatError(path, "expected a list of integers")
    return v


def _parse_rows(rows, path):
    if not isinstance(rows, list):
        raise InstanceFormatError(path, "expected a list")
    out = []
    for i, r in enumerate(rows):
        p = f"{path}[{i}]"
        sense = _get(r, "sense", p)
        if sense not in (">=", "<=", "="):
            raise InstanceFormatError(f"{p}.sense", f"unknown sense {sense!r}")
        row = _parse_vec(_get(r, "row", p), f"{p}.row")
        try:
            rhs = parse_rational(_get(r, "rhs", p), f"{p}.rhs")
        except ValueError as exc:
            raise InstanceFormatError(f"{p}.rhs", str(exc)) from None
        out.append(Constraint(row, sense, rhs))
    return out


def _parse_yspace(doc, path="y_space") -> YSpace:
    lower = _parse_int_vec(_get(doc, "lower", path), f"{path}.lower")
    upper = _parse_int_vec(_get(doc, "upper", path), f"{path}.upper")
    rows = _parse_rows(doc.get("constraints", []), f"{path}.constraints")
    explicit = doc.get("explicit")
    if explicit is not None:
        if not isinstance(explicit, list):
            raise InstanceFormatError(f"{path}.explicit", "expected a list of points")
        explicit = [_parse_int_vec(p, f"{path}.explicit[{i}]") for i, p in enumerate(explicit)]
    return YSpace(lower, upper, rows, explicit)


def from_dict(doc: dict):
    kind = _get(doc, "kind", "")
    if kind == "finite":
        ys = _parse_yspace(_get(doc, "y_space", ""))
        raw = _get(doc, "scenarios", "")
        if not isinstance(raw, list):
            raise InstanceFormatError("scenarios", "expected a list")
        scenarios = []
        for j, s in enumerate(raw):
            p = f"scenarios[{j}]"
            scenarios.append(
                Scenario(
                    _parse_vec(_get(s, "objective", p), f"{p}.objective"),
                    _parse_rows(s.get("constraints", []), f"{p}.constraints"),
                )
            )
        if "t" in doc and doc["t"] != len(scenarios):
            raise InstanceFormatError("t", f"declares {doc['t']} scenarios, found {len(scenarios)}")
        if "n_y" in doc and doc["n_y"] != ys.n:
            raise InstanceFormatError("n_y", f"declares {doc['n_y']}, y_space has {ys.n}")
        return FiniteInstance(ys, scenarios, name=doc.get("name", ""), seed=doc.get("seed"),
                              info=_revive_info(doc.get("info", {})))
    if kind == "affine":
        ub = _get(doc, "U_box", "")
        U = UBox(
            _parse_vec(_get(ub, "lower", "U_box"), "U_box.lower"),
            _parse_vec(_get(ub, "upper", "U_box"), "U_box.upper"),
            _parse_rows(ub.get("constraints", []), "U_box.constraints"),
        )
        X = _get(doc, "X", "")
        if not isinstance(X, list):
            raise InstanceFormatError("X", "expected a list of points")
        return AffineInstance(
            X=[_parse_int_vec(x, f"X[{i}]") for i, x in enumerate(X)],
            y_space=_parse_yspace(_get(doc, "y_space", "")),
            A=_parse_mat(_get(doc, "A", ""), "A"),
            Ai=[_parse_mat(M, f"Ai[{i}]") for i, M in enumerate(_get(doc, "Ai", ""))],
            B=_parse_mat(_get(doc, "B", ""), "B"),
            Bi=[_parse_mat(M, f"Bi[{i}]") for i, M in enumerate(_get(doc, "Bi", ""))],
            H=_parse_mat(_get(doc, "H", ""), "H"),
            h=_parse_vec(_get(doc, "h", ""), "h"),
            U=U,
            cost=_parse_vec(doc.get("cost", []), "cost"),
            cost_xi=_parse_mat(doc.get("cost_xi", []), "cost_xi"),
            name=doc.get("name", ""),
        )
    raise InstanceFormatError("kind", f"expected 'finite' or 'affine', got {kind!r}")


def _revive_info(info):
    # "b" is the only rational metadata the generators emit.
    if isinstance(info, dict) and "b" in info:
        info = dict(info)
        info["b"] = parse_rational(info["b"], "info.b")
    return info


def dumps(instance) -> str:
    return json.dumps(to_dict(instance), indent=1)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("<document>", f"invalid JSON: {exc}") from None
    return from_dict(doc)


def save(instance, path) -> None:
    Path(path).write_text(dumps(instance))


def load(path):
    return loads(Path(path).read_text())
