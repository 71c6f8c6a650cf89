"""Command-line front end.

Subcommands: gen, profile, decompose, graph, verify, render.  Exit codes:
0 success (all inequalities pass), 2 an inequality check FAILed, 1 usage or
I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import covering as cov
from . import gallery, graph_ineq, verify
from .errors import PilabError
from .space import ahlfors_fit, doubling_profile, reverse_doubling_fit
from .errors import NotAhlfors


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PILAB_SEED")
    return int(env) if env else 0


def _positive_kappa(text):
    if text == "auto":
        return "auto"
    try:
        k = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad kappa {text!r}") from exc
    if k <= 1:
        raise argparse.ArgumentTypeError("kappa must be > 1")
    return k


def _resolve_kappa(args, space, o):
    if args.kappa != "auto":
        return args.kappa
    prof = doubling_profile(space)
    eta = verify.eta_fit(space, o)
    C_o = reverse_doubling_fit(space, o, eta)
    C_P = verify.measure_poincare(space, 1.0)
    try:
        k = graph_ineq.rca_kappa(max(prof.Q, 1.0), 1.0, 2.0, C_P, eta, max(C_o, 1e-9))
    except PilabError:
        k = 2.0
    cap = max(2.0, space.diameter() / 4.0)
    if k > cap:
        print(f"warning: rca kappa {k:.6g} capped at diameter/4 = {cap:.6g}", file=sys.stderr)
        k = cap
    return k


def _cmd_gen(args):
    spec = gallery.GallerySpec(
        kind=args.kind,
        size=args.n,
        eta=args.eta,
        resolution=args.resolution,
        r_max=args.r_max,
    )
    space = gallery.generate(spec)
    gallery.save_space(space, args.out)
    print(f"wrote {args.out}: {space.n} vertices, {len(space.edges)} edges")
    return 0


def _cmd_profile(args):
    space = gallery.load_space(args.space)
    prof = doubling_profile(space)
    print(f"C_D {prof.C_D:.6g}")
    print(f"Q {prof.Q:.6g}")
    eta = verify.eta_fit(space, args.o)
    print(f"eta {eta:.6g}")
    print(f"C_o {reverse_doubling_fit(space, args.o, eta):.6g}")
    try:
        ah = ahlfors_fit(space)
        print(f"ahlfors_Q {ah.Q:.6g}")
        print(f"ahlfors_C_A {ah.C_A:.6g}")
    except NotAhlfors as exc:
        print(f"ahlfors not_regular ({exc})")
    return 0


def _cmd_decompose(args):
    space = gallery.load_space(args.space)
    kappa = _resolve_kappa(args, space, args.o)
    decomp = cov.kappa_decomposition(space, args.o, kappa)
    covering = cov.expand_covering(space, decomp)
    val = cov.validate_covering(covering, space)
    print(f"kappa {kappa:.6g}")
    print(f"pieces {len(decomp.pieces)}")
    print(f"levels {len(set(decomp.levels))}")
    print(f"truncated {len(decomp.truncated)}")
    print(f"Q1_emp {val.Q1_emp}")
    print(f"Q2_emp {val.Q2_emp:.6g}")
    for name, ok in val.axioms_pass.items():
        print(f"{name} {'pass' if ok else 'FAIL'}")
    return 0 if val.all_pass else 2


def _cmd_graph(args):
    space = gallery.load_space(args.space)
    kappa = _resolve_kappa(args, space, args.o)
    decomp = cov.kappa_decomposition(space, args.o, kappa)
    covering = cov.expand_covering(space, decomp)
    graph = graph_ineq.build_covering_graph(space, covering)
    iso = graph_ineq.isoperimetric_constant(graph, seed=_seed(args))
    print(f"vertices {graph.n}")
    print(f"edges {len(graph.edges)}")
    print(f"isoperimetric {iso.I:.6g} ({iso.method})")
    print(f"poincare_1 {1.0 / iso.I:.6g}")
    print(f"poincare_2 {graph_ineq.poincare_constant(graph, 2):.6g}")
    if args.out:
        _write_dot(graph, args.out)
        print(f"wrote {args.out}")
    return 0


def _write_dot(graph, path):
    lines = ["graph covering {"]
    for i in range(graph.n):
        shape = "box" if graph.boundary[i] else "ellipse"
        lines.append(
            f'  v{i} [label="L{graph.levels[i]} m={graph.vmass[i]:.3g}", shape={shape}];'
        )
    for (a, b), w in zip(graph.edges, graph.emass):
        lines.append(f'  v{a} -- v{b} [label="{w:.3g}"];')
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_verify(args):
    space = gallery.load_space(args.space)
    seed = _seed(args)
    family = verify.make_family(space, args.o, seed, count=args.count)
    kappa = _resolve_kappa(args, space, args.o)
    if args.ineq == "weighted-sobolev":
        rep = verify.weighted_sobolev_check(space, args.o, args.s, args.t, family, kappa=kappa)
    elif args.ineq == "hardy":
        rep = verify.hardy_check(space, args.o, args.s, family, kappa=kappa)
    elif args.ineq == "ahlfors":
        rep = verify.ahlfors_sobolev_check(space, args.o, args.s, args.t, family, kappa=kappa)
    elif args.ineq == "local-sobolev":
        R = max(space.diameter() / 4.0, 2 * space.resolution)
        rep = verify.local_sobolev_check(space, args.o, R, args.s, args.t, family)
    else:  # annulus
        R = max(space.diameter() / 8.0, 4 * space.resolution)
        A = _largest_annulus_component(space, args.o, R, 2.0)
        rep = verify.annulus_piece_check(
            space, args.o, R, 2.0, 0.5, A, args.s, args.t, family, flavor="poincare"
        )
    reports = [rep]
    if args.out:
        prov = {
            "seed": seed,
            "space": verify.space_hash(space),
            "o": args.o,
            "s": args.s,
            "t": args.t,
            "kappa": kappa,
            "count": args.count,
        }
        if args.format == "json":
            verify.write_reports_json(reports, args.out, prov, zero_seconds=args.deterministic_output)
        else:
            verify.write_reports_csv(reports, args.out, zero_seconds=args.deterministic_output)
        print(f"wrote {args.out}")
    verdict = "pass" if rep.passed else "FAIL"
    print(
        f"{rep.inequality} s={rep.s:g} t={rep.t:g} empirical={rep.empirical_best:.6g} "
        f"theoretical={rep.theoretical:.6g} {verdict}"
    )
    return 0 if rep.passed else 2


def _largest_annulus_component(space, o, R, alpha):
    from scipy.sparse import csgraph

    d = space.dist_from(o)
    ann = np.flatnonzero((d >= R) & (d < alpha * R))
    sub = space.adjacency[np.ix_(ann, ann)]
    n, labels = csgraph.connected_components(sub, directed=False)
    sizes = [(labels == k).sum() for k in range(n)]
    return ann[labels == int(np.argmax(sizes))]


_PALETTE = [
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
    "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd",
]


def _cmd_render(args):
    space = gallery.load_space(args.space)
    if space.coords is None:
        print("render: space has no 2D coords", file=sys.stderr)
        return 1
    color = ["#333333"] * space.n
    if args.kappa is not None:
        kappa = _resolve_kappa(args, space, args.o)
        decomp = cov.kappa_decomposition(space, args.o, kappa)
        for idx, piece in enumerate(decomp.pieces):
            for v in piece.members:
                color[int(v)] = _PALETTE[idx % len(_PALETTE)]
    xy = space.coords
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    size = 800.0
    pad = 20.0

    def pt(p):
        q = (p - lo) / span * (size - 2 * pad) + pad
        return q[0], size - q[1]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}">'
    ]
    for (u, v), _l in zip(space.edges, space.lengths):
        x1, y1 = pt(xy[u])
        x2, y2 = pt(xy[v])
        parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            'stroke="#bbbbbb" stroke-width="0.5"/>'
        )
    r = max(1.0, (size - 2 * pad) / (4.0 * math.sqrt(space.n)))
    for i in range(space.n):
        x, y = pt(xy[i])
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="{color[i]}"/>')
    parts.append("</svg>")
    with open(args.out, "w") as fh:
        fh.write("\n".join(parts) + "\n")
    print(f"wrote {args.out}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="pilab")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a benchmark space")
    g.add_argument("--kind", required=True, choices=gallery.GALLERY_KINDS)
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--eta", type=float, default=2.0)
    g.add_argument("--resolution", type=float, default=0.25)
    g.add_argument("--r-max", type=float, default=40.0)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(fn=_cmd_gen)

    pr = sub.add_parser("profile", help="doubling / reverse-doubling / Ahlfors fits")
    pr.add_argument("--space", required=True)
    pr.add_argument("--o", type=int, default=0)
    pr.set_defaults(fn=_cmd_profile)

    de = sub.add_parser("decompose", help="kappa-decomposition and covering validation")
    de.add_argument("--space", required=True)
    de.add_argument("--o", type=int, default=0)
    de.add_argument("--kappa", type=_positive_kappa, default=2.0)
    de.set_defaults(fn=_cmd_decompose)

    gr = sub.add_parser("graph", help="covering graph constants")
    gr.add_argument("--space", required=True)
    gr.add_argument("--o", type=int, default=0)
    gr.add_argument("--kappa", type=_positive_kappa, default=2.0)
    gr.add_argument("--seed", type=int, default=None)
    gr.add_argument("-o", "--out", default=None, help="optional DOT output")
    gr.set_defaults(fn=_cmd_graph)

    ve = sub.add_parser("verify", help="run an inequality check")
    ve.add_argument("--space", required=True)
    ve.add_argument(
        "--ineq",
        required=True,
        choices=["weighted-sobolev", "hardy", "local-sobolev", "ahlfors", "annulus"],
    )
    ve.add_argument("--o", type=int, default=0)
    ve.add_argument("--s", type=float, default=1.0)
    ve.add_argument("--t", type=float, default=None)
    ve.add_argument("--kappa", type=_positive_kappa, default=2.0)
    ve.add_argument("--seed", type=int, default=None)
    ve.add_argument("--count", type=int, default=200)
    ve.add_argument("--format", choices=["csv", "json"], default="csv")
    ve.add_argument("--deterministic-output", action="store_true")
    ve.add_argument("--threads", type=int, default=0, help="worker cap (0 = auto)")
    ve.add_argument("-o", "--out", dest="out", default=None)
    ve.set_defaults(fn=_cmd_verify)

    re = sub.add_parser("render", help="SVG rendering of a 2D space")
    re.add_argument("--space", required=True)
    re.add_argument("--o", type=int, default=0)
    re.add_argument("--kappa", type=_positive_kappa, default=None)
    re.add_argument("-o", "--out", dest="out", required=True)
    re.set_defaults(fn=_cmd_render)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if getattr(args, "t", None) is None and hasattr(args, "s"):
        args.t = args.s
    try:
        return args.fn(args)
    except (PilabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
