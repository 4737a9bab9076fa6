"""Single command-line entry point.

Exit codes: 0 success, 2 input or parse errors, 3 geometric or
genericity violations, 4 solvability or consistency failures.  Machine
mode (--machine) prints one key=value pair per line with exact
rationals rendered p/q; output is byte-stable for identical inputs.

PERTINV_THREADS is accepted as an upper bound on internal parallelism;
the current implementation is deterministic and sequential, which is a
valid schedule under that bound.
"""

import argparse
import os
import random
import sys
from fractions import Fraction

from . import bf_config, fileio, geom2d, geom3d, hodge, solver, trees
from .errors import ConsistencyError, GeometryError, InputError


def thread_cap():
    raw = os.environ.get("PERTINV_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InputError("PERTINV_THREADS must be an integer, got %r" % raw)
    if value < 1:
        raise InputError("PERTINV_THREADS must be positive")
    return value


class Emitter:
    def __init__(self, machine):
        self.machine = machine

    def kv(self, key, value, human=None):
        if self.machine:
            print("%s=%s" % (key, value))
        else:
            print(human if human is not None else "%s = %s" % (key, value))

    def line(self, text):
        if not self.machine:
            print(text)


def _parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError("bad rational %r" % text)


def _parse_fraction_list(text):
    return [_parse_fraction(t) for t in text.split(",") if t != ""]


# ---------------------------------------------------------------- trees

def _tree_policy(args):
    if args.labels == "zero":
        return dict(label_min=0, label_cap=0, arity_cap=args.arity_cap)
    if args.labels == "min0":
        return dict(label_min=0, label_cap=args.label_cap, arity_cap=args.arity_cap)
    return dict(label_min=1, label_cap=args.label_cap, arity_cap=args.arity_cap)


def cmd_trees_count(args, em):
    count = len(trees.enumerate_T(args.n, **_tree_policy(args)))
    em.kv("count", count, human=str(count))
    return 0


def cmd_trees_list(args, em):
    for k, t in enumerate(trees.enumerate_T(args.n, **_tree_policy(args))):
        if em.machine:
            print("tree_%d=%s" % (k, trees.tree_to_text(t)))
        else:
            print(trees.tree_to_text(t))
    return 0


def cmd_trees_verify_gf(args, em):
    entries = trees.literal_equation_audit(args.n_max)
    for e in entries:
        counts = ",".join(str(c) for c in e.counts)
        if em.machine:
            print("label_min_%d_counts=%s" % (e.label_min, counts))
            print("label_min_%d_matches=%s" % (e.label_min, str(e.matches).lower()))
        else:
            print(
                "labels >= %d: counts %s; matches literal equation: %s"
                % (e.label_min, counts, "yes" if e.matches else "no")
            )
    if not em.machine:
        lits = ",".join(str(c) for c in entries[0].literal_coeffs)
        print("literal equation coefficients: %s" % lits)
    else:
        print("literal_coeffs=%s" % ",".join(str(c) for c in entries[0].literal_coeffs))
    return 0


# ---------------------------------------------------------------- solver

def cmd_solve_poly(args, em):
    coeffs = _parse_fraction_list(args.coeffs)
    s = solver.solve_polynomial(coeffs, _parse_fraction(args.y), args.order)
    for n, c in enumerate(s.coeffs):
        if em.machine:
            print("x_%d=%s" % (n, c))
        else:
            print(str(c))
    return 0


def toy_action(kappa, g, j):
    """One-dimensional cubic model: quadratic term kappa, cubic coupling
    g at series order 1, source j."""
    space = solver.RationalSpace(1)
    forms = {
        (0, 2): lambda a: kappa * a[0][0] * a[1][0],
        (1, 3): lambda a: g * a[0][0] * a[1][0] * a[2][0],
    }
    return solver.ActionSpec(space, [[1]], (j,), forms)


def cmd_hierarchy_toy(args, em):
    act = toy_action(
        _parse_fraction(args.kappa), _parse_fraction(args.g), _parse_fraction(args.j)
    )
    mode = "with-1k" if args.weight_mode == "with-1k" else "literal"
    res = solver.onshell_hierarchy(act, args.order, mode)
    for n, c in enumerate(res.tree):
        if em.machine:
            print("S_%d=%s" % (n, c))
        else:
            print(str(c))
    em.kv(
        "matches_direct",
        str(res.matches).lower(),
        human="tree formula matches direct substitution: %s"
        % ("yes" if res.matches else "no"),
    )
    return 0


# ---------------------------------------------------------------- hodge

def cmd_hodge_check(args, em):
    cx = fileio.load_complex(args.complex)
    h = hodge.build_hodge(cx)
    em.kv("dims", ",".join(str(d) for d in cx.dims),
          human="degrees: %s" % (list(cx.dims),))
    hs = [h.harmonic_dims[i] for i in range(len(cx.dims))]
    em.kv("harmonic_dims", ",".join(str(x) for x in hs),
          human="harmonic dimensions: %s" % hs)
    checks = h.check_identities()
    em.kv("identities_ok", str(all(checks.values())).lower(),
          human="all Hodge identities hold exactly: %s"
          % ("yes" if all(checks.values()) else "no"))
    return 0


def _hodge_ops(cx):
    if cx.products:
        cup = hodge.cup_operator(cx)
        return {(0, 2): lambda a: cup(a)}
    return {}


def cmd_hodge_solve_laplace(args, em):
    cx = fileio.load_complex(args.complex)
    b = _parse_fraction_list(args.b)
    sol, _ = hodge.solve_laplace(cx, {}, b, args.order)
    for n in range(args.order + 1):
        comp = cx.component(sol[n], 1)
        em.kv("a_%d" % n, ",".join(str(x) for x in comp),
              human="order %d: %s" % (n, [str(x) for x in comp]))
    return 0


def cmd_hodge_solve_d(args, em):
    cx = fileio.load_complex(args.complex)
    b = _parse_fraction_list(args.b)
    sol, _ = hodge.solve_d(cx, _hodge_ops(cx), b, args.order)
    for n in range(args.order + 1):
        comp = cx.component(sol[n], 1)
        em.kv("a_%d" % n, ",".join(str(x) for x in comp),
              human="order %d: %s" % (n, [str(x) for x in comp]))
    return 0


# ---------------------------------------------------------------- bf

def cmd_bf_config(args, em):
    points = _parse_fraction_list(args.points)
    config = bf_config.Configuration(points)
    value = bf_config.s_os_closed(config, args.theta_jump)
    em.kv("s_os", value, human="on-shell value: %s" % value)
    sol = bf_config.solve_eom(config)
    em.kv("eom_residual_zero", str(sol.residual_zero).lower(),
          human="equation of motion solvable exactly: %s"
          % ("yes" if sol.residual_zero else "no (odd point count)"))
    rng = random.Random(0)
    maps = [bf_config.random_increasing_map(rng) for _ in range(args.maps)]
    rep = bf_config.invariance_test(config, maps, args.theta_jump)
    em.kv("invariance_ok", str(rep.all_ok).lower(),
          human="invariant under %d random increasing maps: %s"
          % (args.maps, "yes" if rep.all_ok else "no"))
    return 0


# ---------------------------------------------------------------- link

def cmd_link_lk(args, em):
    entries = fileio.load_curves3(args.curves)
    c1 = fileio.pick_curve(entries, args.i)
    c2 = fileio.pick_curve(entries, args.j)
    if args.method == "exact":
        value = geom3d.linking_number_exact(c1, c2)
    else:
        value = geom3d.linking_number_quadrature(c1, c2, args.samples)
    em.kv("lk", value, human=str(value))
    return 0


def cmd_link_s0(args, em):
    entries = fileio.load_curves3(args.curves)
    charges = fileio.load_charges(args.charges)
    value = geom3d.cs_s0([c for _, c in entries], charges)
    em.kv("s0", value, human=str(value))
    return 0


# ---------------------------------------------------------------- planar

def cmd_planar_j(args, em):
    entries = fileio.load_curves2(args.curves)
    arr = geom2d.build_arrangement([c for _, c in entries])
    ids = [cid for cid, _ in entries]
    i = ids.index(str(args.i)) if str(args.i) in ids else int(args.i)
    j = ids.index(str(args.j)) if str(args.j) in ids else int(args.j)
    value = geom2d.j_invariant(arr, i, j)
    em.kv("j", value, human=str(value))
    return 0


def cmd_planar_s0(args, em):
    entries = fileio.load_curves2(args.curves)
    charges = fileio.load_charges(args.charges)
    arr = geom2d.build_arrangement([c for _, c in entries])
    value = geom2d.ym_s0(arr, charges)
    em.kv("s0", value, human=str(value))
    return 0


def _parse_map(spec):
    kind, _, param = spec.partition(":")
    if not param:
        raise InputError("map spec needs a parameter, e.g. shear:1")
    if kind == "shear":
        return geom2d.shear_map(_parse_fraction(param)), False
    if kind in ("rot", "rotation"):
        return geom2d.rotation_map(_parse_fraction(param)), False
    if kind in ("nlshear", "nonlinear-shear"):
        return geom2d.nonlinear_shear_map(_parse_fraction(param)), True
    raise InputError("unknown map kind %r" % kind)


def cmd_planar_transform(args, em):
    entries = fileio.load_curves2(args.curves)
    mapping, needs_resample = _parse_map(args.map)
    if needs_resample and args.resample < 2:
        raise InputError("nonlinear maps require --resample >= 2")
    out = []
    for cid, c in entries:
        img = geom2d.apply_area_preserving(c, mapping, args.resample)
        verts = [[_num_str(x), _num_str(y)] for (x, y) in img.vertices]
        out.append('{"id": "%s", "vertices": [%s]}' % (
            cid, ", ".join("[%s, %s]" % (x, y) for x, y in verts)))
    print('{"curves": [%s]}' % ", ".join(out))
    return 0


def _num_str(x):
    if isinstance(x, Fraction):
        return '"%s"' % x
    return repr(float(x))


# ---------------------------------------------------------------- wiring

def build_parser():
    p = argparse.ArgumentParser(
        prog="pertinv",
        description="Tree-indexed perturbative solvers and geometric invariants",
    )
    p.add_argument("--machine", action="store_true",
                   help="machine-readable key=value output")
    sub = p.add_subparsers(dest="command")

    tp = sub.add_parser("trees", help="labelled planar rooted trees")
    tsub = tp.add_subparsers(dest="sub")
    for name, fn in (("count", cmd_trees_count), ("list", cmd_trees_list)):
        q = tsub.add_parser(name)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--labels", choices=("zero", "min0", "min1"), default="zero")
        q.add_argument("--label-cap", type=int, default=None)
        q.add_argument("--arity-cap", type=int, default=None)
        q.set_defaults(func=fn)
    q = tsub.add_parser("verify-gf")
    q.add_argument("--n-max", type=int, default=8)
    q.set_defaults(func=cmd_trees_verify_gf)

    sp = sub.add_parser("solve", help="perturbative solvers")
    ssub = sp.add_subparsers(dest="sub")
    q = ssub.add_parser("poly")
    q.add_argument("--coeffs", required=True, help="a1,a2,... (a1 nonzero)")
    q.add_argument("--y", required=True)
    q.add_argument("--order", type=int, required=True)
    q.set_defaults(func=cmd_solve_poly)

    hp = sub.add_parser("hierarchy", help="on-shell invariant hierarchy")
    hsub = hp.add_subparsers(dest="sub")
    q = hsub.add_parser("toy")
    q.add_argument("--kappa", default="1")
    q.add_argument("--g", default="1")
    q.add_argument("--j", default="1")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--weight-mode", choices=("with-1k", "literal"), default="with-1k")
    q.set_defaults(func=cmd_hierarchy_toy)

    gp = sub.add_parser("hodge", help="Hodge machinery on graded complexes")
    gsub = gp.add_subparsers(dest="sub")
    q = gsub.add_parser("check")
    q.add_argument("--complex", required=True)
    q.set_defaults(func=cmd_hodge_check)
    q = gsub.add_parser("solve-laplace")
    q.add_argument("--complex", required=True)
    q.add_argument("--b", required=True, help="degree-1 coefficients q1,q2,...")
    q.add_argument("--order", type=int, default=4)
    q.set_defaults(func=cmd_hodge_solve_laplace)
    q = gsub.add_parser("solve-d")
    q.add_argument("--complex", required=True)
    q.add_argument("--b", required=True, help="degree-2 coefficients q1,q2,...")
    q.add_argument("--order", type=int, default=4)
    q.set_defaults(func=cmd_hodge_solve_d)

    bp = sub.add_parser("bf", help="discrete BF configuration invariant")
    bsub = bp.add_subparsers(dest="sub")
    q = bsub.add_parser("config")
    q.add_argument("--points", required=True, help="q1,q2,...")
    q.add_argument("--theta-jump", choices=("half", "zero", "one"), default="half")
    q.add_argument("--maps", type=int, default=20)
    q.set_defaults(func=cmd_bf_config)

    lp = sub.add_parser("link", help="linking numbers of space curves")
    lsub = lp.add_subparsers(dest="sub")
    q = lsub.add_parser("lk")
    q.add_argument("--curves", required=True)
    q.add_argument("--i", required=True)
    q.add_argument("--j", required=True)
    q.add_argument("--method", choices=("exact", "quad"), default="exact")
    q.add_argument("--samples", type=int, default=64)
    q.set_defaults(func=cmd_link_lk)
    q = lsub.add_parser("s0")
    q.add_argument("--curves", required=True)
    q.add_argument("--charges", required=True)
    q.set_defaults(func=cmd_link_s0)

    pp = sub.add_parser("planar", help="planar winding-area invariants")
    psub = pp.add_subparsers(dest="sub")
    q = psub.add_parser("j")
    q.add_argument("--curves", required=True)
    q.add_argument("--i", required=True)
    q.add_argument("--j", required=True)
    q.set_defaults(func=cmd_planar_j)
    q = psub.add_parser("s0")
    q.add_argument("--curves", required=True)
    q.add_argument("--charges", required=True)
    q.set_defaults(func=cmd_planar_s0)
    q = psub.add_parser("transform")
    q.add_argument("--curves", required=True)
    q.add_argument("--map", required=True, help="shear:s | rot:turns | nlshear:c")
    q.add_argument("--resample", type=int, default=0)
    q.set_defaults(func=cmd_planar_transform)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    em = Emitter(args.machine)
    try:
        thread_cap()
        return args.func(args, em)
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except GeometryError as e:
        print("geometry error: %s" % e, file=sys.stderr)
        return 3
    except ConsistencyError as e:
        print("consistency error: %s" % e, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
