"""Deterministic JSON and CSV formatting for the command-line surface.

Identical inputs must serialize to identical bytes, so the encoder sorts all
object keys and prints floats through a fixed 17-significant-digit format
(enough to round-trip any double).  Complex numbers become {"im": ..,
"re": ..} objects.  CSV cells use the shortest representation that
round-trips, which is what repr() gives for Python floats.
"""

import json
import math

import numpy as np


def format_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite number cannot be serialized")
    return "%.17g" % x


def csv_cell(x):
    """Shortest round-trip decimal form of a float for CSV output."""
    return repr(float(x))


def _emit(o, out):
    if isinstance(o, str):
        out.append(json.dumps(o))
    elif isinstance(o, bool):
        out.append("true" if o else "false")
    elif o is None:
        out.append("null")
    elif isinstance(o, (int, np.integer)):
        out.append(str(int(o)))
    elif isinstance(o, (float, np.floating)):
        out.append(format_float(o))
    elif isinstance(o, (complex, np.complexfloating)):
        _emit({"re": float(o.real), "im": float(o.imag)}, out)
    elif isinstance(o, dict):
        out.append("{")
        first = True
        for key in sorted(o):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(key))
            out.append(":")
            _emit(o[key], out)
        out.append("}")
    elif isinstance(o, (list, tuple, np.ndarray)):
        seq = o.tolist() if isinstance(o, np.ndarray) else o
        out.append("[")
        for i, item in enumerate(seq):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj):
    """Serialize to a deterministic single-line JSON string."""
    out = []
    _emit(obj, out)
    return "".join(out)


def complex_to_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(obj):
    """Accept a plain number, an [re, im] pair or an {re, im} object."""
    if isinstance(obj, bool):
        raise ValueError("booleans are not amplitudes")
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, dict) and set(obj) == {"re", "im"}:
        return complex(float(obj["re"]), float(obj["im"]))
    raise ValueError(f"cannot read {obj!r} as a complex amplitude")
