"""Command-line front end.

Subcommands: census, walk, quotient, sieve, sample, zariski, density, and
replay.  Every artifact embeds the schema version and the fully resolved
config, so ``genlab replay <file>`` can re-run it and reproduce the bytes;
floating-point values are formatted at 12 significant digits and exact
rationals as "p/q" strings to keep that reproducible.  ``--out`` writes are
atomic (temp file + rename); ``--plot`` renders a matplotlib figure next to
the delimited output.  GENLAB_THREADS overrides the worker-pool size for the
shardable enumerations; the merge order is canonical, so the numeric output
never depends on it.

Exit codes: 0 success, 2 validation error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import genericity, quotients, sampler, sieve, walks, zariski
from .algebra import GEN_L, GEN_S, GEN_T, GEN_U, IntMatrix
from .census import census as compute_census
from .errors import BudgetExceededError, RejectionRateError

SCHEMA_VERSION = 1

GENERATOR_NAMES = {"L": GEN_L, "U": GEN_U, "S": GEN_S, "T": GEN_T}


def fmt_real(x) -> str:
    return f"{float(x):.12g}"


def fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def workers_from_env() -> int:
    raw = os.environ.get("GENLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"GENLAB_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError("GENLAB_THREADS must be >= 1")
    return n


# ---------------------------------------------------------------------------
# artifact assembly
# ---------------------------------------------------------------------------

def _config_header(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def render_csv(config: dict, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# genlab schema_version={SCHEMA_VERSION} config={_config_header(config)}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def render_json(config: dict, results) -> str:
    record = {"schema_version": SCHEMA_VERSION, "config": config, "results": results}
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def render_summary(config: dict, lines) -> str:
    head = f"# genlab schema_version={SCHEMA_VERSION} config={_config_header(config)}"
    return "\n".join([head] + list(lines)) + "\n"


def write_artifact(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    tmp = os.path.join(directory, f".{os.path.basename(out_path)}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, out_path)


def load_matrix_file(path) -> IntMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return IntMatrix(data)


def load_matrix_list_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return [IntMatrix(rows) for rows in data]


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (artifact_text, plot_callback_or_None)
# ---------------------------------------------------------------------------

def _handle_census(args):
    if args.k < 1:
        raise ValueError("--k must be >= 1")
    config = {"subcommand": "census", "k": args.k, "emit": args.emit}
    workers = workers_from_env()
    rec = compute_census(args.k, workers=workers)
    ratio = rec.parabolic_ratio if rec.total else Fraction(0)
    if args.emit == "csv":
        text = render_csv(config, ["k", "total", "parabolic", "ratio"],
                          [[rec.k, rec.total, rec.parabolic, fmt_rational(ratio)]])
    elif args.emit == "json":
        text = render_json(config, {
            "k": rec.k, "total": rec.total, "parabolic": rec.parabolic,
            "reducible": rec.reducible, "ratio": fmt_rational(ratio)})
    else:
        text = render_summary(config, [
            f"norm ball k = {rec.k}: total = {rec.total}",
            f"parabolic (= reducible char poly) = {rec.parabolic}",
            f"parabolic ratio = {fmt_rational(ratio)} ~ {fmt_real(float(ratio))}",
            f"total / 6k^2 = {fmt_real(rec.total / (6 * rec.k * rec.k))}",
        ])

    def plot(path):
        from . import plots
        ks = sorted({max(1, args.k * i // 8) for i in range(1, 9)})
        rows = []
        for k in ks:
            r = compute_census(k, workers=workers)
            rows.append((k, r.total, r.parabolic))
        plots.save_census_figure(rows, path)

    return text, plot


def _builtin_graph(spec: str, tokens):
    if spec == "builtin:freemonoid":
        return walks.build_free_monoid_graph(tokens)
    if spec == "builtin:freegroup":
        return walks.build_free_group_graph(2)
    if spec.startswith("builtin:freeproduct-"):
        parts = spec.split("-")
        if len(parts) != 4 or parts[3] not in ("naive", "improved"):
            raise ValueError(
                "free product graph spec is builtin:freeproduct-P-Q-{naive|improved}")
        p, q = int(parts[1]), int(parts[2])
        naive, improved = walks.build_free_product_graph(p, q)
        return naive if parts[3] == "naive" else improved
    if spec.startswith("builtin:"):
        raise ValueError(f"unknown builtin graph {spec!r}")
    with open(spec, "r", encoding="utf-8") as fh:
        return walks.WalkGraph.from_json(fh.read())


def _handle_walk(args):
    import random

    tokens = tuple(args.tokens.split(","))
    graph = _builtin_graph(args.graph, tokens)
    if args.len < 1:
        raise ValueError("--len must be >= 1")
    if args.samples < 1:
        raise ValueError("--samples must be >= 1")
    config = {"subcommand": "walk", "graph": args.graph, "tokens": args.tokens,
              "len": args.len, "samples": args.samples, "seed": args.seed,
              "emit": args.emit}
    rng = random.Random(args.seed)
    words = [walks.sample_walk(graph, args.len, rng) for _ in range(args.samples)]
    verdict = walks.check_property_R(graph)
    if args.emit == "csv":
        rows = [[i, " ".join(w.tokens)] for i, w in enumerate(words)]
        text = render_csv(config, ["index", "word"], rows)
    elif args.emit == "json":
        text = render_json(config, {
            "property_R": verdict,
            "vertices": list(graph.vertices),
            "words": [list(w.tokens) for w in words]})
    else:
        freq = {}
        for w in words:
            for t in w.tokens:
                freq[t] = freq.get(t, 0) + 1
        text = render_summary(config, [
            f"graph: {args.graph} ({len(graph.vertices)} vertices), property R: {verdict}",
            f"sampled {args.samples} walks of length {args.len}",
            "token frequencies: " + ", ".join(
                f"{t}={freq.get(t, 0)}" for t in graph.vertices),
        ])

    def plot(path):
        from . import plots
        freq = {}
        for w in words:
            for t in w.tokens:
                freq[t] = freq.get(t, 0) + 1
        rows = [(i, freq.get(t, 0), 0) for i, t in enumerate(graph.vertices)]
        plots.save_census_figure(rows, path, title="token visit counts")

    return text, plot


def _symmetrized_labeling(gen_names, p):
    """Tokens G, G^-1 for each named generator, labeled mod p."""
    group = quotients.FiniteMatrixGroup.sl2(p)
    tokens = []
    labeling = {}
    for name in gen_names:
        if name not in GENERATOR_NAMES:
            raise ValueError(f"unknown generator {name!r}; choose from {sorted(GENERATOR_NAMES)}")
        g = GENERATOR_NAMES[name]
        for tok, mat in ((name, g), (f"{name}^-1", g.inverse_unimodular())):
            if tok not in labeling:
                tokens.append(tok)
                labeling[tok] = group.reduce(mat)
    return group, tuple(tokens), labeling


def _handle_quotient(args):
    if not quotients.is_prime(args.p):
        raise ValueError("--p must be prime")
    if args.kmax < 1:
        raise ValueError("--kmax must be >= 1")
    gen_names = [s for s in args.gens.split(",") if s]
    config = {"subcommand": "quotient", "p": args.p, "graph": args.graph,
              "gens": args.gens, "kmax": args.kmax, "emit": args.emit}
    group, tokens, labeling = _symmetrized_labeling(gen_names, args.p)
    if args.graph != "builtin:freemonoid":
        raise ValueError("quotient currently supports builtin:freemonoid")
    graph = walks.build_free_monoid_graph(tokens)
    rows = []
    for k in range(1, args.kmax + 1):
        dist = quotients.exact_walk_distribution(graph, labeling, k, group)
        tv = quotients.tv_distance(dist, group)
        rows.append((k, tv))
    obstructed = quotients.onedim_obstruction(group, [labeling[t] for t in tokens])
    if args.emit == "csv":
        text = render_csv(config, ["k", "tv"],
                          [[k, fmt_rational(tv)] for k, tv in rows])
    elif args.emit == "json":
        text = render_json(config, {
            "group_order": group.order,
            "obstructed": obstructed,
            "tv": [[k, fmt_rational(tv)] for k, tv in rows]})
    else:
        lines = [f"SL(2,Z/{args.p}): order {group.order}, "
                 f"character obstruction: {obstructed}"]
        lines += [f"k={k:3d}  tv={fmt_real(float(tv))}" for k, tv in rows]
        text = render_summary(config, lines)

    def plot(path):
        from . import plots
        plots.save_tv_figure([(k, float(tv)) for k, tv in rows], path)

    return text, plot


def _handle_sieve(args):
    m = load_matrix_file(args.matrix)
    config = {"subcommand": "sieve", "matrix": args.matrix,
              "budget": args.budget, "emit": args.emit}
    casson = sieve.casson_certificate(m, args.budget)
    chi = casson.char_polynomial
    irred = sieve.certify_irreducible(chi, args.budget)
    galois = None
    if sieve.is_squarefree_over_z(chi):
        galois = sieve.galois_full_symmetric_certificate(chi, args.budget)
    results = {
        "char_poly_coeffs": list(chi.coeffs),
        "char_poly": str(chi),
        "irreducibility": {
            "status": irred.status,
            "witness_prime": irred.witness_prime,
            "root": irred.root,
        },
        "casson": {
            "verdict": casson.verdict,
            "reason": casson.reason,
            "irreducible_witness": casson.irreducible_witness,
            "noncyclotomic_evidence": list(casson.noncyclotomic_evidence),
            "nonpower_evidence": list(casson.nonpower_evidence),
        },
        "galois": None if galois is None else {
            "verdict": galois.verdict,
            "witnesses": [
                {"p": w.p, "degrees": list(w.degrees), "role": w.role}
                for w in galois.witnesses],
        },
    }
    if args.emit == "json":
        text = render_json(config, results)
    elif args.emit == "csv":
        text = render_csv(config, ["item", "value"], [
            ["char_poly", str(chi)],
            ["irreducibility", irred.status],
            ["casson", casson.verdict],
            ["galois", "-" if galois is None else galois.verdict],
        ])
    else:
        text = render_summary(config, [
            f"char poly: {chi}",
            f"irreducibility: {irred.status} (witness p={irred.witness_prime})",
            f"casson: {casson.verdict} {casson.reason}".rstrip(),
            f"galois: {'-' if galois is None else galois.verdict}",
        ])
    return text, None


def _handle_sample(args):
    import random

    if args.count < 1:
        raise ValueError("--count must be >= 1")
    if args.norm < 2:
        raise ValueError("--norm must be >= 2")
    config = {"subcommand": "sample", "norm": args.norm, "count": args.count,
              "slack": args.slack, "seed": args.seed, "emit": args.emit}
    if args.emit == "matrices":
        rng = random.Random(args.seed)
        mats = [sampler.sample_uniform_norm_ball(args.norm, rng, args.slack)
                for _ in range(args.count)]
        text = render_json(config, {"matrices": [list(map(list, m.rows)) for m in mats]})
        plot = None
    else:
        report = sampler.uniformity_report(args.norm, args.count, args.slack, args.seed)
        results = {
            "n_cells": report.n_cells,
            "samples": report.samples,
            "acceptance_rate": fmt_real(report.acceptance_rate),
            "tv_distance": fmt_real(report.tv_distance),
            "chi_square": fmt_real(report.chi_square),
            "counts": {" ".join(map(str, k)): v
                       for k, v in sorted(report.counts.items())},
        }
        text = render_json(config, results)

        def plot(path):
            from . import plots
            plots.save_sampler_figure(report.counts, report.n_cells,
                                      report.samples, path)

    return text, plot


def _handle_zariski(args):
    gens = load_matrix_list_file(args.gens)
    if args.p <= 3 or not quotients.is_prime(args.p):
        raise ValueError("--p must be a prime > 3")
    config = {"subcommand": "zariski", "gens": args.gens, "p": args.p,
              "emit": args.emit}
    verdict = zariski.zariski_verdict(gens, prime=args.p)
    results = {
        "verdict": verdict.verdict,
        "lie_dimension": verdict.lie_dimension,
        "lie_full": verdict.lie_full,
        "modp": [{"p": p, "surjective": s, "order": o}
                 for p, s, o in verdict.modp_results],
        "witness": None if verdict.witness is None else list(verdict.witness),
        "note": verdict.note,
    }
    if args.emit == "json":
        text = render_json(config, results)
    elif args.emit == "csv":
        text = render_csv(config, ["item", "value"], [
            ["verdict", verdict.verdict],
            ["lie_dimension", verdict.lie_dimension],
            ["modp", ";".join(f"p={p} surjective={s} order={o}"
                              for p, s, o in verdict.modp_results)],
            ["witness", "" if verdict.witness is None else " ".join(map(str, verdict.witness))],
        ])
    else:
        text = render_summary(config, [
            f"verdict: {verdict.verdict}",
            f"lie dimension: {verdict.lie_dimension} (full = {verdict.lie_full})",
            "modp: " + "; ".join(f"p={p} surjective={s} order={o}"
                                 for p, s, o in verdict.modp_results),
            f"witness: {verdict.witness}",
            f"note: {verdict.note}",
        ])
    return text, None


def _handle_density(args):
    config = {"subcommand": "density", "experiment": args.experiment,
              "tmax": args.tmax, "emit": args.emit}
    if args.experiment in ("visible-square", "visible-disk"):
        region = "square" if args.experiment.endswith("square") else "disk"
        if args.tmax < 2:
            raise ValueError("--tmax must be >= 2")
        shells = genericity.visible_shell_series(region, args.tmax)
        series = genericity.visible_series(region, args.tmax)
    elif args.experiment == "f2":
        if args.tmax < 2:
            raise ValueError("--tmax must be >= 2")
        shells = genericity.free_group_abelianization_experiment(args.tmax)
        pts = []
        hits = total = 0
        for k, x, s in shells.points:
            hits += x
            total += s
            pts.append((k, hits, total))
        series = genericity.DensitySeries(tuple(pts))
    else:
        raise ValueError(f"unknown experiment {args.experiment!r}")
    ratios = genericity.density_ratios(series)
    rhos = dict(genericity.annular_density(shells))
    rows = []
    for (k, h, t), ratio in zip(series.points, ratios):
        rho = rhos.get(k)
        rows.append([k, h, t, fmt_rational(ratio),
                     "" if rho is None else fmt_rational(rho)])
    if args.emit == "csv":
        text = render_csv(config, ["k", "hits", "total", "ratio", "rho_k"], rows)
    elif args.emit == "json":
        text = render_json(config, {"rows": rows})
    else:
        est = genericity.strict_annular_estimate(shells)
        text = render_summary(config, [
            f"experiment {args.experiment}, up to {args.tmax}",
            f"final ratio = {fmt_real(float(ratios[-1]))}",
            f"annular tail mean = {fmt_real(float(est.value))} "
            f"(oscillation {fmt_real(float(est.oscillation))}, converged={est.converged})",
        ])

    def plot(path):
        from . import plots
        shell_ratio = {k: Fraction(x, s) for k, x, s in shells.points if s}
        prows = [(k, float(shell_ratio[k]), float(rhos[k]) if k in rhos else None)
                 for k, _, _ in shells.points if k in shell_ratio]
        plots.save_density_figure(prows, path, title=f"density: {args.experiment}")

    return text, plot


def _handle_replay(args):
    with open(args.record, "r", encoding="utf-8") as fh:
        text = fh.read()
    config = _extract_config(text)
    sub_argv = _argv_from_config(config)
    parser = build_parser()
    sub_args = parser.parse_args(sub_argv)
    handler = _HANDLERS[config["subcommand"]]
    artifact, _ = handler(sub_args)
    write_artifact(artifact, args.out)
    return 0


def _extract_config(text: str) -> dict:
    if text.startswith("# genlab "):
        head = text.splitlines()[0]
        marker = f"schema_version={SCHEMA_VERSION} config="
        idx = head.find(marker)
        if idx < 0:
            raise ValueError("record schema version mismatch")
        return json.loads(head[idx + len(marker):])
    record = json.loads(text)
    if record.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("record schema version mismatch")
    return record["config"]


_CONFIG_FLAGS = {
    "census": {"k": "--k", "emit": "--emit"},
    "walk": {"graph": "--graph", "tokens": "--tokens", "len": "--len",
             "samples": "--samples", "seed": "--seed", "emit": "--emit"},
    "quotient": {"p": "--p", "graph": "--graph", "gens": "--gens",
                 "kmax": "--kmax", "emit": "--emit"},
    "sieve": {"matrix": "--matrix", "budget": "--budget", "emit": "--emit"},
    "sample": {"norm": "--norm", "count": "--count", "slack": "--slack",
               "seed": "--seed", "emit": "--emit"},
    "zariski": {"gens": "--gens", "p": "--p", "emit": "--emit"},
    "density": {"experiment": "--experiment", "tmax": "--tmax", "emit": "--emit"},
}


def _argv_from_config(config: dict):
    sub = config.get("subcommand")
    if sub not in _CONFIG_FLAGS:
        raise ValueError(f"record has unknown subcommand {sub!r}")
    flags = _CONFIG_FLAGS[sub]
    argv = [sub]
    for key, value in config.items():
        if key == "subcommand":
            continue
        if key not in flags:
            raise ValueError(f"record has unknown config field {key!r}")
        argv += [flags[key], str(value)]
    return argv


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genlab",
        description="exact experiments on arithmetic groups")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, emits=("summary", "csv", "json"), default_emit="summary"):
        sp.add_argument("--emit", choices=emits, default=default_emit)
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--plot", default=None, help="render a figure to this path")

    sp = subs.add_parser("census", help="norm-ball census of SL(2,Z)")
    sp.add_argument("--k", type=int, required=True)
    common(sp)

    sp = subs.add_parser("walk", help="sample walks on a recognizing graph")
    sp.add_argument("--graph", default="builtin:freemonoid")
    sp.add_argument("--tokens", default="a,A,b,B")
    sp.add_argument("--len", type=int, required=True)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = subs.add_parser("quotient", help="exact walk distribution in SL(2,Z/p)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--graph", default="builtin:freemonoid")
    sp.add_argument("--gens", default="L,U")
    sp.add_argument("--kmax", type=int, required=True)
    common(sp, default_emit="csv")

    sp = subs.add_parser("sieve", help="certificates for an integer matrix")
    sp.add_argument("--matrix", required=True, help="JSON file, row-major array of arrays")
    sp.add_argument("--budget", type=int, default=sieve.DEFAULT_PRIME_BUDGET)
    common(sp, default_emit="json")

    sp = subs.add_parser("sample", help="uniform-by-norm PSL(2,Z) sampling")
    sp.add_argument("--norm", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--slack", type=float, default=1.0)
    sp.add_argument("--seed", type=int, default=0)
    common(sp, emits=("matrices", "report"), default_emit="report")

    sp = subs.add_parser("zariski", help="Zariski-density probe for generators")
    sp.add_argument("--gens", required=True, help="JSON file, list of matrices")
    sp.add_argument("--p", type=int, default=5)
    common(sp, default_emit="json")

    sp = subs.add_parser("density", help="visible points and F2 abelianization densities")
    sp.add_argument("--experiment", default="visible-square",
                    choices=("visible-square", "visible-disk", "f2"))
    sp.add_argument("--tmax", type=int, required=True)
    common(sp, default_emit="csv")

    sp = subs.add_parser("replay", help="re-run an emitted record")
    sp.add_argument("record")
    sp.add_argument("--out", default=None)

    return parser


_HANDLERS = {
    "census": _handle_census,
    "walk": _handle_walk,
    "quotient": _handle_quotient,
    "sieve": _handle_sieve,
    "sample": _handle_sample,
    "zariski": _handle_zariski,
    "density": _handle_density,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.subcommand == "replay":
            return _handle_replay(args)
        handler = _HANDLERS[args.subcommand]
        text, plot = handler(args)
        write_artifact(text, args.out)
        if args.plot is not None:
            if plot is None:
                raise ValueError(f"{args.subcommand} has no figure to render")
            plot(args.plot)
        return 0
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ValueError, RejectionRateError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
