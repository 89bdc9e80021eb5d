"""Reading groups and models from files; canonical JSON output."""

import json
import os
from fractions import Fraction

from .fans import Fan
from .groups import AffineGroup
from .models import ToricModel, build_model, model_from_fan, model_names


def load_group(path, cap=None):
    with open(path) as fh:
        data = json.load(fh)
    return group_from_json(data, cap=cap)


def group_from_json(data, cap=None):
    if "generators" not in data:
        raise ValueError("group JSON needs a 'generators' list")
    n = data.get("n")
    if n is None:
        if not data["generators"]:
            raise ValueError("dimension missing for an empty generator list")
        n = len(data["generators"][0]["matrix"])
    for g in data["generators"]:
        if len(g["torus"]) != n or len(g["matrix"]) != n or any(len(r) != n for r in g["matrix"]):
            raise ValueError("generator of wrong dimension")
    return AffineGroup.from_json({"n": n, "generators": data["generators"]}, cap=cap)


def model_from_json(data):
    fan = Fan(data["fan"]["n"], data["fan"]["rays"], data["fan"]["cones"], data.get("name", ""))
    return ToricModel(data.get("name", ""), fan, data["embedding"], data["section"])


def load_model(spec):
    """A catalogue name, a model JSON file (as written by model-build) or a fan text file."""
    if spec in model_names() or spec in ("C",):
        return build_model(spec)
    if not os.path.exists(spec):
        raise KeyError(f"unknown model {spec!r}")
    with open(spec) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return model_from_json(json.loads(text))
    name = os.path.splitext(os.path.basename(spec))[0]
    return model_from_fan(Fan.from_text(text, name), name)


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def dumps(obj):
    """Byte-stable JSON: sorted keys, fractions as strings."""
    return json.dumps(obj, sort_keys=True, default=_default, indent=1)
