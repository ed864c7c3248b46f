"""Command-line front end.

Every command prints one JSON object (sorted keys) on stdout. Exit codes:
0 success, 1 usage or parse error, 2 mathematical or precondition error,
3 a predicate command evaluated to false.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import __version__
from .cohlat import (
    CohClass,
    NSClass,
    SurfaceData,
    euler_form,
    expected_dim,
    from_gamma,
    mukai_pairing,
)
from .errors import MukaiError, ValidationError
from .serial import (
    dump_coh,
    dump_matrix,
    dump_ns,
    dump_wall,
    dump_word,
    dumps,
    is_coh,
    load_json,
    parse_coh,
    parse_fmiso,
    parse_gamma,
    parse_int,
    parse_ns,
    parse_rational,
    parse_surface,
    parse_walls,
    rat,
)

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_FALSE = 0, 1, 2, 3


class UsageError(Exception):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)

    def exit(self, status: int = 0, message: str | None = None):
        if status:
            raise UsageError(message or "invalid arguments")
        raise _HelpExit(message)


class _HelpExit(Exception):
    pass


@dataclass
class Ctx:
    base_dir: str | None = None

    def load(self, ref: str) -> Any:
        return load_json(ref, self.base_dir)

    def surface(self, ref: str) -> SurfaceData:
        S = parse_surface(self.load(ref))
        S.validate()
        return S

    def coh(self, ref: str, S: SurfaceData) -> CohClass:
        return parse_coh(self.load(ref), S.rank)

    def ns(self, ref: str, S: SurfaceData) -> NSClass:
        return parse_ns(self.load(ref), S.rank)


Result = tuple[int, Any]


def _error(kind: str, detail: str) -> dict:
    return {"error": {"kind": kind, "detail": detail}}


# -- handlers --------------------------------------------------------------

def cmd_validate(a, ctx: Ctx) -> Result:
    S = ctx.surface(a.surface)
    return EXIT_OK, {"k3_type": S.k3_type, "rank": S.rank, "signature": [1, S.rank - 1]}


def cmd_pair(a, ctx: Ctx) -> Result:
    S = ctx.surface(a.surface)
    x, y = ctx.coh(a.x, S), ctx.coh(a.y, S)
    return EXIT_OK, {"value": rat(mukai_pairing(x, y, S))}


def cmd_euler(a, ctx: Ctx) -> Result:
    S = ctx.surface(a.surface)
    if a.gamma:
        x = from_gamma(parse_gamma(ctx.load(a.x), S.rank), S)
        y = from_gamma(parse_gamma(ctx.load(a.y), S.rank), S)
    else:
        x, y = ctx.coh(a.x, S), ctx.coh(a.y, S)
    return EXIT_OK, {"value": rat(euler_form(x, y, S))}


def cmd_dim(a, ctx: Ctx) -> Result:
    S = ctx.surface(a.surface)
    return EXIT_OK, {"value": rat(expected_dim(ctx.coh(a.v, S), S))}


def cmd_roots(a, ctx: Ctx) -> Result:
    from .fmcoh import delta
    from .roots import enumerate_roots, perp_sublattice, quotient_mod

    S = ctx.surface(a.surface)
    docs = [ctx.load(ref) for ref in a.perp]
    classes = [parse_coh(d, S.rank) if is_coh(d) else parse_ns(d, S.rank) for d in docs]
    norm = parse_int(a.norm, "--norm")
    anchor = next((c for c in classes if isinstance(c, CohClass) and c.r != 0), None)
    vs = []
    for c in classes:
        if isinstance(c, NSClass):
            c = delta(c, anchor, S) if anchor is not None else CohClass.divisor(c)
        vs.append(c)
    L = perp_sublattice(vs, S)
    sub, modulus = L, None
    # Quotient by an isotropic generator of the radical when one was supplied.
    radical = [c for c in vs if c.is_integral() and mukai_pairing(c, c, S) == 0 and c in L]
    if radical and not L.is_negative_definite():
        modulus = radical[0]
        sub = quotient_mod(L, modulus)
    rs = enumerate_roots(sub, norm)
    return EXIT_OK, {
        "basis": [dump_coh(CohClass.from_coords(b)) for b in sub.basis],
        "gram": dump_matrix(sub.gram),
        "norm": norm,
        "count": len(rs),
        "roots": [list(r) for r in rs],
        "vectors": [dump_coh(CohClass.from_coords(v)) for v in rs.vectors(sub)],
        "quotient_by": dump_coh(modulus) if modulus is not None else None,
    }


def _report_json(rep) -> dict:
    comps = []
    for c in rep.components:
        comps.append({
            "label": c.label,
            "simple_roots": [list(x) for x in c.simple_roots],
            "affine_label": c.affine_label,
            "affine_nodes": [dump_coh(n) for n in c.affine_nodes],
            "marks": list(c.marks),
            "flags": c.flags,
        })
    return {"components": comps}


def cmd_singularities(a, ctx: Ctx) -> Result:
    from .dynkin import singularity_report

    S = ctx.surface(a.surface)
    v0, H = ctx.coh(a.v0, S), ctx.ns(a.H, S)
    return EXIT_OK, _report_json(singularity_report(v0, H, S))


def cmd_classify(a, ctx: Ctx) -> Result:
    from .dynkin import classify_affine_cartan, classify_cartan_finite

    if a.cartan:
        c = [[parse_int(x, "cartan") for x in row] for row in ctx.load(a.cartan)]
        if a.affine:
            res = classify_affine_cartan(c)
            return EXIT_OK, {"label": res.label, "marks": list(res.marks)}
        return EXIT_OK, {"components": [{"label": lab, "nodes": idx}
                                        for idx, lab in classify_cartan_finite(c)]}
    if not (a.surface and a.v0 and a.H):
        raise UsageError("classify needs --cartan, or --surface with --v0 and --H")
    return cmd_singularities(a, ctx)


def cmd_tilting(a, ctx: Ctx) -> Result:
    from .dynkin import tilting_witnesses

    S = ctx.surface(a.surface)
    xi, H = ctx.ns(a.xi, S), ctx.ns(a.H, S)
    wit = tilting_witnesses(parse_int(a.r, "--r"), xi, H, S)
    return (EXIT_OK if not wit else EXIT_FALSE), {"value": not wit, "witnesses": [list(w) for w in wit]}


def _box(a, rho: int) -> list[tuple]:
    if a.box:
        doc = load_json(a.box) if a.box.strip()[:1] == "[" else None
        if doc is None:
            raise UsageError("--box must be inline JSON [[lo, hi], ...]")
        box = [(parse_rational(lo, "box"), parse_rational(hi, "box")) for lo, hi in doc]
        if len(box) != rho:
            raise ValidationError("--box has wrong length")
        return box
    return [(-1, 1)] * rho


def cmd_walls(a, ctx: Ctx) -> Result:
    from .walls import sample_generic, walls_two_dim, walls_zero_dim

    S = ctx.surface(a.surface)
    if a.mode == "zero":
        if not (a.v and a.vG and a.roots):
            raise UsageError("--mode zero needs --v, --vG and --roots")
        v, vG = ctx.coh(a.v, S), ctx.coh(a.vG, S)
        doc = ctx.load(a.roots)
        roots = [parse_coh(d, S.rank, f"roots[{i}]") for i, d in enumerate(doc if isinstance(doc, list) else [])]
        walls = walls_zero_dim(v, vG, roots, S)
    else:
        if not (a.v0 and a.H):
            raise UsageError("--mode two needs --v0 and --H")
        walls = walls_two_dim(ctx.coh(a.v0, S), ctx.ns(a.H, S), S)
    out = {"walls": [dump_wall(w) for w in walls]}
    if a.sample:
        out["generic_point"] = dump_ns(sample_generic(walls, _box(a, S.rank), a.seed))
    return EXIT_OK, out


def cmd_path(a, ctx: Ctx) -> Result:
    from .walls import crossing_path, walls_two_dim

    if a.walls:
        walls = parse_walls(ctx.load(a.walls))
        rho = len(walls[0].normal) if walls else None
    elif a.surface and a.v0 and a.H:
        S = ctx.surface(a.surface)
        walls = walls_two_dim(ctx.coh(a.v0, S), ctx.ns(a.H, S), S)
        rho = S.rank
    else:
        raise UsageError("path needs --walls, or --surface with --v0 and --H")
    a1 = parse_ns(ctx.load(a.start), rho, "--from")
    a2 = parse_ns(ctx.load(a.end), len(a1), "--to")
    p = crossing_path(a1, a2, walls)
    return EXIT_OK, {
        "start": dump_ns(p.start),
        "end": dump_ns(p.end),
        "crossings": [{"t": rat(t), "wall": dump_wall(w)} for w, t in p.crossings],
        "groups": [{"t": rat(t), "size": len(ws)} for t, ws in p.groups],
    }


def cmd_reflect(a, ctx: Ctx) -> Result:
    from .weyl import reflect

    S = ctx.surface(a.surface)
    return EXIT_OK, {"image": dump_coh(reflect(ctx.coh(a.v, S), ctx.coh(a.u, S), S))}


def cmd_translate(a, ctx: Ctx) -> Result:
    from .weyl import translate

    S = ctx.surface(a.surface)
    return EXIT_OK, {"image": dump_coh(translate(ctx.coh(a.v, S), ctx.ns(a.D, S), S))}


def _blocks(doc: Any, S: SurfaceData):
    from .dynkin import connected_components
    from .weyl import Block, _cartan_ns, make_block

    if isinstance(doc, dict) and "blocks" in doc:
        out = []
        for i, b in enumerate(doc["blocks"]):
            simples = [parse_ns(x, S.rank, f"blocks[{i}].simples") for x in b["simples"]]
            if "marks" in b:
                out.append(Block(tuple(simples), tuple(parse_int(m, "marks") for m in b["marks"])))
            else:
                out.append(make_block(simples, S))
        return out
    if not isinstance(doc, list):
        raise ValidationError("simples: expected a list of NS classes or {'blocks': [...]}")
    simples = [parse_ns(x, S.rank, "simples") for x in doc]
    comps = connected_components(_cartan_ns(simples, S))
    return [make_block([simples[i] for i in comp], S) for comp in comps]


def cmd_alcove(a, ctx: Ctx) -> Result:
    from .weyl import alcove_reduce

    S = ctx.surface(a.surface)
    alpha = ctx.ns(a.alpha, S)
    blocks = _blocks(ctx.load(a.simples), S)
    word, alpha0 = alcove_reduce(alpha, blocks, S, a.max_length)
    return EXIT_OK, {"word": dump_word(word.gens), "alpha0": dump_ns(alpha0), "length": len(word)}


def cmd_fm_apply(a, ctx: Ctx) -> Result:
    from .fmcoh import fm_apply, fm_decompose

    iso = parse_fmiso(ctx.load(a.iso))
    iso.source.validate()
    iso.target.validate()
    v = parse_coh(ctx.load(a.v), iso.source.rank)
    dec = fm_decompose(v, iso)
    return EXIT_OK, {
        "image": dump_coh(fm_apply(v, iso)),
        "decomposition": {"l": rat(dec.l), "a": rat(dec.a), "d": rat(dec.d), "D": dump_ns(dec.D)},
    }


def cmd_fm_validate(a, ctx: Ctx) -> Result:
    from .fmcoh import fm_validate

    iso = parse_fmiso(ctx.load(a.iso))
    iso.source.validate()
    iso.target.validate()
    rep = fm_validate(iso)
    return (EXIT_OK if rep.ok else EXIT_FALSE), {
        "ok": rep.ok,
        "checks": [{"name": n, "ok": ok} for n, ok in rep.checks],
        "first_failure": rep.first_failure,
        "integral": rep.integral,
        "degree_gcds": list(rep.degree_gcds),
    }


def _job_argv(job: Any) -> list[str]:
    if not isinstance(job, dict) or "command" not in job:
        raise ValidationError("job: expected an object with 'command'")
    argv = [str(job["command"])]
    args = job.get("args", [])
    if isinstance(args, dict):
        for k, v in args.items():
            values = v if isinstance(v, list) else [v]
            argv.append(f"--{k}")
            argv.extend(str(x) for x in values if x is not True)
    elif isinstance(args, list):
        argv.extend(str(x) for x in args)
    else:
        raise ValidationError("job: 'args' must be a list or an object")
    return argv


def cmd_batch(a, ctx: Ctx) -> Result:
    manifest = ctx.load(a.manifest)
    if not isinstance(manifest, dict) or not isinstance(manifest.get("jobs", []), list):
        raise ValidationError("manifest: expected {'jobs': [...]}")
    base = os.path.dirname(os.path.abspath(os.path.join(ctx.base_dir or "", a.manifest)))
    jobs = manifest.get("jobs", [])
    argvs: list[list[str] | Exception] = []
    for job in jobs:
        try:
            argv = _job_argv(job)
            if argv[0] == "batch":
                raise ValidationError("nested batch jobs are not allowed")
            argvs.append(argv)
        except ValidationError as exc:
            argvs.append(exc)

    def work(item) -> Result:
        if isinstance(item, Exception):
            return EXIT_USAGE, _error(getattr(item, "kind", "validation"), str(item))
        return run(item, Ctx(base))

    with ThreadPoolExecutor(max_workers=max(1, a.jobs)) as pool:
        results = list(pool.map(work, argvs))
    entries = []
    failed = 0
    for job, (code, payload) in zip(jobs, results):
        if code in (EXIT_USAGE, EXIT_MATH):
            failed += 1
        entries.append({"command": job.get("command") if isinstance(job, dict) else None,
                        "exit": code, "result": payload})
    return (EXIT_MATH if failed else EXIT_OK), {"jobs": entries, "count": len(entries), "failed": failed}


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mukai-kit", description="Exact Mukai-lattice computations.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "check a surface file")
    sp.add_argument("--surface", required=True)

    for name, fn, h in (("pair", cmd_pair, "Mukai pairing <x, y>"),
                        ("euler", cmd_euler, "Euler form chi(x, y) of ch-vectors")):
        sp = add(name, fn, h)
        sp.add_argument("--surface", required=True)
        sp.add_argument("--x", required=True)
        sp.add_argument("--y", required=True)
        if name == "euler":
            sp.add_argument("--gamma", action="store_true", help="read (rk, c1, chi) triples")

    sp = add("dim", cmd_dim, "expected dimension <v^2> + 2")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--v", required=True)

    sp = add("roots", cmd_roots, "(-2)-vectors of an orthogonal complement")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--perp", nargs="+", required=True)
    sp.add_argument("--norm", default="-2")

    for name, fn in (("classify", cmd_classify), ("singularities", cmd_singularities)):
        sp = add(name, fn, "ADE classification" if name == "classify" else "singularity report")
        req = name == "singularities"
        sp.add_argument("--surface", required=req)
        sp.add_argument("--v0", required=req)
        sp.add_argument("--H", required=req)
        if name == "classify":
            sp.add_argument("--cartan")
            sp.add_argument("--affine", action="store_true")

    sp = add("tilting-check", cmd_tilting, "r does not divide (xi, D) for all (-2)-classes D in H^perp")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--xi", required=True)
    sp.add_argument("--H", required=True)

    sp = add("walls", cmd_walls, "wall sets")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--mode", choices=["zero", "two"], required=True)
    sp.add_argument("--v")
    sp.add_argument("--vG")
    sp.add_argument("--roots")
    sp.add_argument("--v0")
    sp.add_argument("--H")
    sp.add_argument("--sample", action="store_true", help="also return a generic point")
    sp.add_argument("--box")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("path", cmd_path, "walls crossed by a segment")
    sp.add_argument("--from", dest="start", required=True)
    sp.add_argument("--to", dest="end", required=True)
    sp.add_argument("--walls")
    sp.add_argument("--surface")
    sp.add_argument("--v0")
    sp.add_argument("--H")

    sp = add("reflect", cmd_reflect, "v + <v, u> u")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--v", required=True)
    sp.add_argument("--u", required=True)

    sp = add("translate", cmd_translate, "v . e^D")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--v", required=True)
    sp.add_argument("--D", required=True)

    sp = add("alcove", cmd_alcove, "reduce alpha into the fundamental alcove")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--simples", required=True)
    sp.add_argument("--max-length", type=int, default=None)

    sp = add("fm-apply", cmd_fm_apply, "apply a cohomological FM isometry")
    sp.add_argument("--iso", required=True)
    sp.add_argument("--v", required=True)

    sp = add("fm-validate", cmd_fm_validate, "validate FM isometry data")
    sp.add_argument("--iso", required=True)

    sp = add("batch", cmd_batch, "run a manifest of jobs")
    sp.add_argument("manifest")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def _normalize(argv: Sequence[str]) -> list[str]:
    argv = list(argv)
    if len(argv) >= 2 and argv[0] == "fm" and argv[1] in ("apply", "validate"):
        argv = [f"fm-{argv[1]}"] + argv[2:]
    return argv


def run(argv: Sequence[str], ctx: Ctx | None = None) -> Result:
    """Run one command; returns (exit code, JSON-ready payload)."""
    ctx = ctx or Ctx()
    try:
        args = build_parser().parse_args(_normalize(argv))
        if not getattr(args, "fn", None):
            raise UsageError("no command given")
        return args.fn(args, ctx)
    except _HelpExit as exc:
        return EXIT_OK, {"help": str(exc.args[0] or "") if exc.args else ""}
    except (UsageError, ValidationError) as exc:
        return EXIT_USAGE, _error(getattr(exc, "kind", "usage"), str(exc))
    except MukaiError as exc:
        return EXIT_MATH, _error(exc.kind, str(exc))
    except KeyError as exc:
        return EXIT_USAGE, _error("validation", f"missing field {exc}")
    except (ZeroDivisionError, ValueError, TypeError) as exc:
        return EXIT_MATH, _error(type(exc).__name__, str(exc))


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(x in ("-h", "--help") for x in argv):
        try:
            build_parser().parse_args(_normalize(argv))
        except _HelpExit:
            pass
        return EXIT_OK
    code, payload = run(argv)
    sys.stdout.write(dumps(payload) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
