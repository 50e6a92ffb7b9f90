"""Generator files, perimeter JSON and the fixed-format JSON writer.

Rationals travel as ``[numerator, denominator]`` integer pairs.  Floats are
written with 17 significant digits, which round-trips every IEEE double, so
the same report always serializes to the same bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import InvalidInput
from .exact import as_pair, from_pair, to_q
from .geometry import GeneratorSet, Perimeter

# -- generating sets -------------------------------------------------------


def parse_gens(text: str):
    """Parse a generating-set file; return ``(GeneratorSet, warnings)``.

    One vector per line, whitespace-separated integers, ``#`` starts a
    comment.  Missing negatives are added with a warning.
    """
    vectors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vectors.append(tuple(int(tok) for tok in line.split()))
        except ValueError:
            raise InvalidInput(f"line {lineno}: expected integers, got {raw.strip()!r}") from None
    if not vectors:
        raise InvalidInput("generating set is empty")
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise InvalidInput(f"vectors have mixed dimensions {sorted(dims)}")
    if any(not any(v) for v in vectors):
        raise InvalidInput("the zero vector is not a generator")
    given = set(vectors)
    added = sorted({tuple(-c for c in v) for v in given} - given)
    warnings = []
    if added:
        warnings.append(f"generating set was not symmetric; added {len(added)} negatives")
    return GeneratorSet.from_vectors(vectors, symmetrize=True), warnings


def read_gens(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    return parse_gens(text)


def format_gens(gens: GeneratorSet) -> str:
    return "".join(" ".join(str(int(c)) for c in v) + "\n" for v in gens.vectors)


# -- perimeter JSON --------------------------------------------------------


def _points(points):
    return [[as_pair(c) for c in p] for p in points]


def perimeter_to_dict(L: Perimeter) -> dict:
    return {
        "dimension": L.dimension,
        "vertices": _points(L.vertices),
        "functionals": _points(L.functionals),
        "weights": [as_pair(w) for w in L.weights],
    }


def perimeter_from_dict(data: dict) -> Perimeter:
    try:
        d = int(data["dimension"])
        verts = [tuple(from_pair(c) for c in p) for p in data["vertices"]]
        funcs = [tuple(from_pair(c) for c in a) for a in data["functionals"]]
        weights = [from_pair(w) for w in data["weights"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed perimeter JSON: {exc}") from None
    L = Perimeter.from_incidence(d, verts, funcs)
    if list(L.vertices) != verts or list(L.weights) != weights:
        raise InvalidInput("perimeter JSON is not in canonical form or its weights are inconsistent")
    return L


def dumps_perimeter(L: Perimeter) -> str:
    return dumps(perimeter_to_dict(L))


def loads_perimeter(text: str) -> Perimeter:
    return perimeter_from_dict(json.loads(text))


# -- deterministic JSON ----------------------------------------------------


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise InvalidInput(f"cannot serialize non-finite float {x}")
    return format(x, ".17g")


def _is_scalar(v):
    return v is None or isinstance(v, (bool, int, float, str))


def _flat(v):
    return _is_scalar(v) or (isinstance(v, list) and all(_flat(x) for x in v))


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits; lists of numbers stay on one line."""
    return _dump(obj, indent, 0) + "\n"


def _dump(v, indent, level):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, tuple):
        v = list(v)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, list):
        if not v:
            return "[]"
        if _flat(v):
            return "[" + ", ".join(_dump(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _dump(x, indent, level + 1) for x in v) + "\n" + end + "]"
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = (pad + json.dumps(str(k)) + ": " + _dump(x, indent, level + 1) for k, x in v.items())
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return _dump(as_pair(to_q(v)), indent, level)
    raise InvalidInput(f"cannot serialize {type(v).__name__}")
