"""Finite polygroupoids, binding groups and their homology.

Instances, reports and towers are plain dicts in the same JSON layout the
``polyhom`` command line reads and writes.
"""

import json

from . import _polyhom
from ._polyhom import ExtractionError, FormatError, ParseError

__all__ = [
    "ExtractionError",
    "FormatError",
    "ParseError",
    "check_associativity",
    "check_axioms",
    "check_tower",
    "count_horn_fillers",
    "extract",
    "group",
    "homology",
    "inverse_limit",
    "iso_check",
    "plant",
    "scramble",
    "selftest",
    "smith_normal_form",
    "standard",
    "standard_tower",
    "verdict",
    "verify_action",
]


def _orders(group):
    if isinstance(group, int):
        return [group]
    if isinstance(group, str):
        return [int(p) for p in group.split(",")]
    return list(group)


def _dump(value):
    return value if isinstance(value, str) else json.dumps(value)


def _matrix(rows):
    """Nested lists to the {rows, cols, data} layout."""
    if isinstance(rows, dict):
        return rows
    rows = [list(r) for r in rows]
    cols = len(rows[0]) if rows else 0
    return {"rows": len(rows), "cols": cols, "data": [x for r in rows for x in r]}


def _nested(m):
    data = [int(x) for x in m["data"]]
    return [data[i * m["cols"] : (i + 1) * m["cols"]] for i in range(m["rows"])]


def standard(group, vertices, arity):
    return json.loads(_polyhom.standard(_orders(group), vertices, arity))


def scramble(instance, seed):
    return json.loads(_polyhom.scramble(_dump(instance), seed))


def plant(instance, kind, group=()):
    """kind is "horn-duplicate" or "non-associative" (the latter needs group)."""
    return json.loads(_polyhom.plant(_dump(instance), kind, _orders(group)))


def check_axioms(instance):
    return json.loads(_polyhom.check_axioms(_dump(instance)))


def check_associativity(instance):
    return json.loads(_polyhom.check_associativity(_dump(instance)))


def count_horn_fillers(instance):
    """(horns, horns with exactly one filler)."""
    return _polyhom.count_horn_fillers(_dump(instance))


def extract(instance, base=None):
    """Binding group and its action; base is an n-configuration like (0, 1)."""
    key = "" if base is None else ",".join(str(v) for v in base)
    return json.loads(_polyhom.extract(_dump(instance), key))


def verify_action(instance, action):
    return json.loads(_polyhom.verify_action(_dump(instance), _dump(action)))


def verdict(instance, seed=1):
    return json.loads(_polyhom.verdict(_dump(instance), seed))


def homology(d_n, d_np1):
    return json.loads(_polyhom.homology(json.dumps(_matrix(d_n)), json.dumps(_matrix(d_np1))))


def smith_normal_form(a):
    """U, D, V as nested lists with U A V = D."""
    r = json.loads(_polyhom.smith_normal_form(json.dumps(_matrix(a))))
    return {"U": _nested(r["U"]), "D": _nested(r["D"]), "V": _nested(r["V"]), "rank": r["rank"]}


def iso_check(a, b):
    return _polyhom.iso_check(_orders(a), _orders(b))


def group(orders):
    return json.loads(_polyhom.group(_orders(orders)))


def standard_tower(orders, vertices, arity):
    return json.loads(_polyhom.standard_tower(_orders(orders), vertices, arity))


def check_tower(tower):
    return json.loads(_polyhom.check_tower(_dump(tower)))


def inverse_limit(tower):
    return json.loads(_polyhom.inverse_limit(_dump(tower)))


def selftest(quick=True, only=()):
    return json.loads(_polyhom.selftest(quick, list(only)))
