"""JSON documents for ellipsoids, pairs, cover problems and disturbed systems.

Formats::

    ellipsoid: {"center": [c1, ..., cn], "shape": [[P11, ...], ...]}
    pair:      {"E": <ellipsoid>, "E0": <ellipsoid>}
    batch:     [<pair>, ...]
    cover:     {"template": <ellipsoid>, "ellipsoids": [<ellipsoid>, ...]}
    system:    {"A": [[..]], "B": [[..]], "H": [[..]], "P": [[..]], "K": [[..]],
                "W_vertices": [[w1, ...], ...]}

NaN and infinities are rejected.
"""
import json

import numpy as np

from .ellipsoid import Ellipsoid
from .invariant import DisturbedSystem


class ParseError(ValueError):
    pass


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} is not allowed")


def loads(text):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _numbers(value, what, ndim):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{what} must be numeric") from None
    if arr.ndim != ndim:
        raise ParseError(f"{what} must be a {'vector' if ndim == 1 else 'matrix'}")
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{what} has non-finite entries")
    return arr


def ellipsoid_from_doc(doc):
    if not isinstance(doc, dict) or "center" not in doc or "shape" not in doc:
        raise ParseError('an ellipsoid needs "center" and "shape"')
    center = _numbers(doc["center"], "center", 1)
    shape = _numbers(doc["shape"], "shape", 2)
    return Ellipsoid(center, shape)


def ellipsoid_to_doc(E):
    return {"center": E.center.tolist(), "shape": E.shape.tolist()}


def pair_from_doc(doc):
    if not isinstance(doc, dict) or "E" not in doc or "E0" not in doc:
        raise ParseError('a pair needs "E" and "E0"')
    return ellipsoid_from_doc(doc["E"]), ellipsoid_from_doc(doc["E0"])


def pair_to_doc(E, E0):
    return {"E": ellipsoid_to_doc(E), "E0": ellipsoid_to_doc(E0)}


def pairs_from_doc(doc):
    """A single pair or a batch (list of pairs)."""
    if isinstance(doc, list):
        return [pair_from_doc(d) for d in doc]
    return [pair_from_doc(doc)]


def cover_from_doc(doc):
    if not isinstance(doc, dict) or "template" not in doc or "ellipsoids" not in doc:
        raise ParseError('a cover problem needs "template" and "ellipsoids"')
    if not isinstance(doc["ellipsoids"], list) or not doc["ellipsoids"]:
        raise ParseError('"ellipsoids" must be a non-empty list')
    return ellipsoid_from_doc(doc["template"]), [ellipsoid_from_doc(d) for d in doc["ellipsoids"]]


def system_from_doc(doc):
    keys = ("A", "B", "H", "P", "K", "W_vertices")
    if not isinstance(doc, dict) or any(k not in doc for k in keys):
        raise ParseError(f"a system needs keys {', '.join(keys)}")
    mats = {k: _numbers(doc[k], k, 2) for k in keys[:-1]}
    W = _numbers(doc["W_vertices"], "W_vertices", 2)
    return DisturbedSystem(W_vertices=list(W), **mats)


def system_to_doc(sys):
    return {
        "A": sys.A.tolist(),
        "B": sys.B.tolist(),
        "H": sys.H.tolist(),
        "P": sys.P.tolist(),
        "K": sys.K.tolist(),
        "W_vertices": [w.tolist() for w in sys.W_vertices],
    }


def sig15(x):
    """Round to 15 significant digits for display."""
    return float(f"{x:.15g}")
