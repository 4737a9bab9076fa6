"""Input file formats.

Curves and charges are JSON; numbers may be plain (decimal) or exact
"p/q" strings and are parsed into Fractions without rounding.  Graded
complexes use a line-oriented text format: dimensions, then each
differential as a dense matrix, then optional inner products and
product structure constants.
"""

import json
from fractions import Fraction

from .errors import InputError
from .geom2d import PolyCurve2
from .geom3d import ChargeSystem, PolyCurve3
from .hodge import GradedComplex


def parse_number(x):
    """Exact rational from an int, float, 'p/q' string or decimal string."""
    if isinstance(x, bool):
        raise InputError("expected a number, got %r" % (x,))
    if isinstance(x, (int, float, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError("bad number %r: %s" % (x, e))
    if isinstance(x, Fraction):
        return x
    raise InputError("expected a number, got %r" % (x,))


def _load_json(path):
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e))
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise InputError(
            "%s: parse error at byte offset %d: %s" % (path, e.pos, e.msg)
        )


def _curve_entries(path, dim):
    doc = _load_json(path)
    if not isinstance(doc, dict) or "curves" not in doc:
        raise InputError("%s: expected an object with a 'curves' array" % path)
    entries = []
    for k, entry in enumerate(doc["curves"]):
        if not isinstance(entry, dict) or "vertices" not in entry:
            raise InputError("%s: curve %d lacks 'vertices'" % (path, k))
        cid = str(entry.get("id", k))
        verts = []
        for v in entry["vertices"]:
            if len(v) != dim:
                raise InputError(
                    "%s: curve %s has a vertex with %d components, expected %d"
                    % (path, cid, len(v), dim)
                )
            verts.append([parse_number(x) for x in v])
        entries.append((cid, verts))
    return entries


def load_curves3(path):
    """[(id, PolyCurve3)] from a curves file with 3-component vertices."""
    return [
        (cid, PolyCurve3([[float(x) for x in v] for v in verts]))
        for cid, verts in _curve_entries(path, 3)
    ]


def load_curves2(path):
    """[(id, PolyCurve2)] from a curves file with 2-component vertices."""
    return [(cid, PolyCurve2(verts)) for cid, verts in _curve_entries(path, 2)]


def pick_curve(entries, key):
    """Select a curve by its id, falling back to positional index."""
    for cid, c in entries:
        if cid == str(key):
            return c
    try:
        return entries[int(key)][1]
    except (ValueError, IndexError):
        raise InputError("no curve with id or index %r" % (key,))


def load_charges(path):
    doc = _load_json(path)
    try:
        dim = int(doc["dim"])
        tr = [[parse_number(x) for x in row] for row in doc["tr"]]
        charges = [[parse_number(x) for x in c] for c in doc["charges"]]
    except (KeyError, TypeError) as e:
        raise InputError("%s: charges file needs dim, tr, charges (%s)" % (path, e))
    if len(tr) != dim:
        raise InputError("%s: tr must be %d x %d" % (path, dim, dim))
    return ChargeSystem(charges, tr)


def load_complex(path):
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e))
    return parse_complex_text(text, name=path)


def parse_complex_text(text, name="<complex>"):
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or not lines[0].startswith("dims"):
        raise InputError("%s: first line must be 'dims d0 d1 ...'" % name)
    try:
        dims = [int(t) for t in lines[0].split()[1:]]
    except ValueError:
        raise InputError("%s: bad dims line" % name)
    if not dims:
        raise InputError("%s: empty dims" % name)
    diffs = {}
    inners = {}
    products = {}
    i = 1

    def read_matrix(start, rows, cols, what):
        out = []
        for r in range(rows):
            if start + r >= len(lines):
                raise InputError("%s: truncated %s" % (name, what))
            entries = lines[start + r].split()
            if len(entries) != cols:
                raise InputError(
                    "%s: %s row %d has %d entries, expected %d"
                    % (name, what, r, len(entries), cols)
                )
            out.append([parse_number(x) for x in entries])
        return out, start + rows

    while i < len(lines):
        head = lines[i].split()
        if head[0] == "d" and len(head) == 2:
            k = int(head[1])
            if not 0 <= k < len(dims) - 1:
                raise InputError("%s: differential index %d out of range" % (name, k))
            diffs[k], i = read_matrix(i + 1, dims[k + 1], dims[k], "d %d" % k)
        elif head[0] == "inner" and len(head) == 2:
            k = int(head[1])
            inners[k], i = read_matrix(i + 1, dims[k], dims[k], "inner %d" % k)
        elif head[0] == "product" and len(head) == 3:
            p, q = int(head[1]), int(head[2])
            if p + q >= len(dims):
                raise InputError("%s: product (%d,%d) out of range" % (name, p, q))
            flat, i = read_matrix(i + 1, dims[p + q], dims[p] * dims[q],
                                  "product %d %d" % (p, q))
            products[(p, q)] = [
                [row[a * dims[q]:(a + 1) * dims[q]] for a in range(dims[p])]
                for row in flat
            ]
        else:
            raise InputError("%s: unrecognized section %r" % (name, lines[i]))
    missing = [k for k in range(len(dims) - 1) if k not in diffs]
    if missing:
        raise InputError("%s: missing differentials %s" % (name, missing))
    inner_list = None
    if inners:
        from .ratlin import identity

        inner_list = [inners.get(k, identity(dims[k])) for k in range(len(dims))]
    return GradedComplex(
        dims,
        [diffs[k] for k in range(len(dims) - 1)],
        inners=inner_list,
        products=products or None,
    )


def complex_to_text(cx):
    out = ["dims " + " ".join(str(d) for d in cx.dims)]
    for k, d in enumerate(cx.diffs):
        out.append("d %d" % k)
        for row in d:
            out.append(" ".join(str(x) for x in row))
    for (p, q), c in sorted(cx.products.items()):
        out.append("product %d %d" % (p, q))
        for r in range(len(c)):
            flat = [str(c[r][a][b]) for a in range(cx.dims[p]) for b in range(cx.dims[q])]
            out.append(" ".join(flat))
    return "\n".join(out) + "\n"
