"""Command-line interface.

Exit status is 0 on success, 1 on a domain error (message on stderr) and 2
on a usage error.  All randomness comes from ``--seed`` (default 42).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from . import frontend, metrics, projection, zeroshot
from .chart import DEFAULT_CHART
from .errors import PhonofeatError
from .ipa import analyze, encode, load_overrides, parse_segment, tokenize
from .schema import load_schema

DEFAULT_SEED = 42
BUILTIN_PREFIX = "builtin:"


def _common(fmt_default):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--schema", help="schema JSON file (default: built-in 60-bit schema)")
    p.add_argument("--pf-overrides", help="IPA -> feature override TSV")
    p.add_argument("--format", choices=("csv", "json", "table"), default=fmt_default)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phonofeat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schema", parents=[_common("table")], help="show or validate a schema")
    p.add_argument("action", choices=("show", "validate"))

    p = sub.add_parser("encode", parents=[_common("csv")], help="IPA string -> PF matrix")
    p.add_argument("--ipa", required=True)

    p = sub.add_parser("analyze", parents=[_common("table")], help="categorical features of one segment")
    p.add_argument("--ipa", required=True)

    p = sub.add_parser("frontend", parents=[_common("csv")], help="text -> segments -> PF matrix")
    p.add_argument("--lexicon", required=True, help="lexicon TSV, or builtin:en / builtin:de")
    p.add_argument("--mapping", required=True, help="mapping TSV, or builtin:en / builtin:de")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--input", help="UTF-8 file, one sentence per line")

    p = sub.add_parser("inventory", parents=[_common("table")], help="phoneme inventory of IPA lines")
    p.add_argument("--segments", required=True, help="IPA file, any number of segments per line")
    p.add_argument("--count-stress-variants", action="store_true")

    p = sub.add_parser("oos", parents=[_common("table")], help="out-of-sample phonemes of a target")
    p.add_argument("--inventory", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--count-stress-variants", action="store_true")

    p = sub.add_parser("upr", parents=[_common("json")], help="unseen phoneme rate per utterance")
    p.add_argument("--inventory", required=True)
    p.add_argument("--utterances", required=True, help="IPA file, one utterance per line")
    p.add_argument("--types", action="store_true", help="count phoneme types, not tokens")
    p.add_argument("--count-stress-variants", action="store_true")

    p = sub.add_parser("nearest", parents=[_common("table")], help="closest inventory phonemes")
    p.add_argument("--inventory", required=True)
    p.add_argument("--phoneme", required=True)
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--embedding", action="store_true",
                   help="rank by projected-embedding distance instead of feature distance")
    p.add_argument("--metric", choices=("euclidean", "cosine"), default="euclidean")
    p.add_argument("--dim", type=int, default=512)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--weights")

    p = sub.add_parser("plan", parents=[_common("json")], help="resolve OOS phonemes")
    p.add_argument("--strategy", required=True, choices=zeroshot.STRATEGIES)
    p.add_argument("--inventory", required=True)
    p.add_argument("--target", required=True, help="IPA file of target-language material")
    p.add_argument("--overrides", help="manual mapping TSV: oos<TAB>target")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--dim", type=int, default=zeroshot.DEFAULT_EMBEDDING_DIM)
    p.add_argument("--count-stress-variants", action="store_true")

    p = sub.add_parser("project", parents=[_common("table")], help="export projected embeddings")
    p.add_argument("--dim", type=int, default=512)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--weights", help="import weights CSV instead of initializing")
    p.add_argument("--segments", required=True, help="IPA file")
    p.add_argument("--out", required=True)
    p.add_argument("--save-weights")
    return parser


class _Ctx:
    def __init__(self, args):
        self.args = args
        self.schema = load_schema(args.schema)
        self.chart = DEFAULT_CHART
        self.overrides = (
            load_overrides(args.pf_overrides, self.schema, self.chart) if args.pf_overrides else None
        )

    def inventory(self, path, name=None):
        return zeroshot.load_inventory(
            path, name, getattr(self.args, "count_stress_variants", False), self.chart, self.overrides
        )

    def segments_of_file(self, path):
        segs = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.startswith("# "):
                segs.extend(tokenize(line, self.chart, overrides=self.overrides))
        return segs


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def cmd_schema(ctx, out):
    schema = ctx.schema
    if ctx.args.action == "validate":
        if ctx.args.format == "json":
            out.write(_dump({"valid": True, "features": len(schema.features),
                             "total_bits": schema.total_bits}))
        else:
            out.write(f"ok: {len(schema.features)} features, {schema.total_bits} bits\n")
        return
    if ctx.args.format == "json":
        data = schema.to_json()
        for entry, f in zip(data["features"], schema.features):
            entry["bit_offset"] = f.bit_offset
        data["total_bits"] = schema.total_bits
        out.write(_dump(data))
    elif ctx.args.format == "csv":
        out.write("name,bit_offset,width,nullable,values\n")
        for f in schema.features:
            out.write(f"{f.name},{f.bit_offset},{f.width},{str(f.nullable).lower()},{' '.join(f.values)}\n")
    else:
        w = max(len(f.name) for f in schema.features)
        for f in schema.features:
            null = "nullable" if f.nullable else "required"
            out.write(f"{f.name.ljust(w)}  {f.bit_offset:>3}  {f.width:>2}  {null:8}  {', '.join(f.values)}\n")
        out.write(f"total_bits: {schema.total_bits}\n")


def cmd_encode(ctx, out):
    segs = tokenize(ctx.args.ipa, ctx.chart, overrides=ctx.overrides)
    matrix = encode(segs, ctx.schema, ctx.chart, ctx.overrides)
    if ctx.args.format == "json":
        out.write(_dump({"segments": [s.render() for s in segs],
                         "columns": ctx.schema.bit_labels(), "pf_matrix": matrix.tolist()}))
    elif ctx.args.format == "table":
        for s, row in zip(segs, matrix):
            out.write(f"{s.render()}\t{''.join(str(int(b)) for b in row)}\n")
    else:
        out.write(frontend.segments_to_csv(segs, matrix, ctx.schema))


def cmd_analyze(ctx, out):
    seg = parse_segment(ctx.args.ipa, ctx.chart, ctx.overrides)
    vec = analyze(seg, ctx.schema, ctx.chart, ctx.overrides)
    if ctx.args.format == "json":
        out.write(_dump({"ipa": seg.render(), "features": vec.categorical,
                         "bits": [int(b) for b in vec.bits]}))
    elif ctx.args.format == "csv":
        out.write("feature,value\n")
        for k, v in vec.categorical.items():
            out.write(f"{k},{'NULL' if v is None else v}\n")
    else:
        w = max(len(k) for k in vec.categorical)
        for k, v in vec.categorical.items():
            out.write(f"{k.ljust(w)}  {'NULL' if v is None else v}\n")


def _resource(value, loader, bundled):
    if value.startswith(BUILTIN_PREFIX):
        return bundled(value[len(BUILTIN_PREFIX):])
    return loader(value)


def cmd_frontend(ctx, out):
    args = ctx.args
    lex = _resource(args.lexicon, frontend.load_lexicon, frontend.bundled_lexicon)
    table = _resource(args.mapping, frontend.load_mapping, frontend.bundled_mapping)

    def lines():
        if args.text is not None:
            yield args.text
        else:
            with open(args.input, encoding="utf-8") as fh:
                yield from fh

    utts = frontend.iter_utterances(lines(), lex, table, ctx.schema, ctx.chart, ctx.overrides)
    if args.format == "json":
        out.write("[\n")
        for i, utt in enumerate(utts):
            out.write((",\n" if i else "") + json.dumps(utt.to_json(ctx.schema), ensure_ascii=False))
        out.write("\n]\n")
    elif args.format == "table":
        for utt in utts:
            out.write(" ".join(s.render() for s in utt.segments) + "\n")
    else:
        out.write(",".join(["utt", "symbol", "kind", *ctx.schema.bit_labels()]) + "\n")
        for i, utt in enumerate(utts):
            body = utt.to_csv(ctx.schema).split("\n", 1)[1]
            for line in body.splitlines():
                out.write(f"{i},{line}\n")


def cmd_inventory(ctx, out):
    inv = ctx.inventory(ctx.args.segments)
    members = [s.render() for s in inv.sorted()]
    if ctx.args.format == "json":
        out.write(_dump({"name": inv.name, "size": len(inv), "members": members}))
    elif ctx.args.format == "csv":
        out.write("ipa\n" + "".join(m + "\n" for m in members))
    else:
        out.write("".join(m + "\n" for m in members))
        out.write(f"# {len(inv)} phonemes\n")


def cmd_oos(ctx, out):
    corpus = ctx.inventory(ctx.args.inventory)
    target = ctx.inventory(ctx.args.target)
    unique, n_oos = metrics.inventory_stats(corpus, target)
    oos = sorted(target.members - corpus.members, key=lambda s: s.sort_key())
    names = [s.render() for s in oos]
    if ctx.args.format == "json":
        out.write(_dump({"corpus": corpus.name, "phonemes": unique, "oos_count": n_oos, "oos": names}))
    elif ctx.args.format == "csv":
        out.write("corpus,phonemes,oos,oos_phonemes\n")
        out.write(f"{corpus.name},{unique},{n_oos},{' '.join(names)}\n")
    else:
        out.write(metrics.format_inventory_table([(corpus.name, unique, n_oos)]))
        out.write("OOS: " + " ".join(names) + "\n")


def cmd_upr(ctx, out):
    inv = ctx.inventory(ctx.args.inventory)
    fmt = ctx.args.format
    n, lo_len, hi_len, lo, hi, total = 0, math.inf, -math.inf, math.inf, -math.inf, 0.0
    if fmt == "json":
        out.write('{\n  "utterances": [')
    elif fmt == "csv":
        out.write("line,words,phonemes,oos,upr_percent\n")
    with open(ctx.args.utterances, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("# "):
                continue
            segs = tokenize(line, ctx.chart, overrides=ctx.overrides)
            st = metrics.upr(segs, inv, ctx.args.types)
            if fmt == "json":
                row = {"line": lineno, "words": st.word_count, "phonemes": st.phoneme_count,
                       "oos": st.oos_count, "upr_percent": st.upr_percent}
                out.write(("," if n else "") + "\n    " + json.dumps(row))
            elif fmt == "csv":
                out.write(f"{lineno},{st.word_count},{st.phoneme_count},{st.oos_count},{st.upr_percent!r}\n")
            n += 1
            lo_len, hi_len = min(lo_len, st.word_count), max(hi_len, st.word_count)
            lo, hi, total = min(lo, st.upr_percent), max(hi, st.upr_percent), total + st.upr_percent
    if n == 0:
        raise PhonofeatError(f"no utterances in {ctx.args.utterances}")
    summary = metrics.TestSetStats(n, lo_len, hi_len, lo, hi, total / n)
    if fmt == "json":
        out.write('\n  ],\n  "summary": ' + json.dumps(dataclasses.asdict(summary)) + "\n}\n")
    elif fmt == "table":
        out.write(metrics.format_testset_table([(Path(ctx.args.utterances).stem, summary)]))


def cmd_nearest(ctx, out):
    args = ctx.args
    inv = ctx.inventory(args.inventory)
    query = parse_segment(args.phoneme, ctx.chart, ctx.overrides)
    if args.embedding:
        if args.weights:
            layer = projection.load_weights(args.weights)
        else:
            layer = projection.init_projection(args.dim, ctx.schema.total_bits, args.seed)
        ranked = projection.nearest_in_embedding(layer, query, inv, args.k, args.metric,
                                                 ctx.schema, ctx.chart, ctx.overrides)
    else:
        ranked = zeroshot.suggest_nearest(query, inv, args.k, ctx.schema, ctx.chart, ctx.overrides)
    rows = [(seg.render(), dist) for seg, dist in ranked]
    if args.format == "json":
        out.write(_dump({"query": query.render(),
                         "neighbors": [{"ipa": s, "distance": d} for s, d in rows]}))
    elif args.format == "csv":
        out.write("rank,ipa,distance\n")
        for i, (s, d) in enumerate(rows, 1):
            out.write(f"{i},{s},{d!r}\n")
    else:
        for i, (s, d) in enumerate(rows, 1):
            out.write(f"{i}\t{s}\t{d}\n")


def cmd_plan(ctx, out):
    args = ctx.args
    inv = ctx.inventory(args.inventory)
    target = ctx.segments_of_file(args.target)
    oos = zeroshot.detect_oos(target, inv)
    manual = zeroshot.load_manual_overrides(args.overrides) if args.overrides else None
    plan = zeroshot.build_plan(args.strategy, oos, inv, manual, args.seed, args.dim,
                               ctx.schema, ctx.chart, ctx.overrides)
    data = plan.to_json()
    if args.format == "json":
        out.write(_dump(data))
    else:
        sep = "," if args.format == "csv" else "\t"
        cols = ["oos", "target", "distance", "overridden", "vector_id"]
        out.write(sep.join(cols) + "\n")
        for row in data["resolutions"]:
            out.write(sep.join("" if row.get(c) is None else str(row[c]) for c in cols) + "\n")


def cmd_project(ctx, out):
    args = ctx.args
    segs = ctx.segments_of_file(args.segments)
    if args.weights:
        layer = projection.load_weights(args.weights)
    else:
        probe = projection.chart_bit_matrix(ctx.schema, ctx.chart)
        layer = projection.init_projection(args.dim, ctx.schema.total_bits, args.seed, probe)
    projection.export_embeddings(layer, segs, args.out, ctx.schema, ctx.chart, ctx.overrides)
    if args.save_weights:
        projection.save_weights(layer, args.save_weights)
    info = {"rows": len(segs), "embedding_dim": layer.embedding_dim,
            "total_bits": layer.total_bits, "params": layer.n_params,
            "seed": layer.seed, "sub_seed": layer.sub_seed, "out": args.out}
    if args.format == "json":
        out.write(_dump(info))
    else:
        out.write("".join(f"{k}: {v}\n" for k, v in info.items()))


COMMANDS = {
    "schema": cmd_schema, "encode": cmd_encode, "analyze": cmd_analyze,
    "frontend": cmd_frontend, "inventory": cmd_inventory, "oos": cmd_oos,
    "upr": cmd_upr, "nearest": cmd_nearest, "plan": cmd_plan, "project": cmd_project,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](_Ctx(args), out)
    except (PhonofeatError, OSError) as exc:
        print(exc, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
