"""JSON schemas for surfaces, classes, words, walls and isometries.

Rationals are read from integers or strings ``"p/q"`` and written as
strings in lowest terms. Floats are rejected.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any, Sequence

from .cohlat import CohClass, GammaClass, NSClass, SurfaceData
from .errors import ValidationError


def parse_rational(x: Any, what: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise ValidationError(f"{what}: booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            q = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"{what}: cannot parse {x!r} as a rational") from None
        if "." in x or "e" in x.lower():
            raise ValidationError(f"{what}: decimal notation is not exact; use p/q")
        return q
    raise ValidationError(f"{what}: expected an integer or a 'p/q' string, got {type(x).__name__}")


def parse_int(x: Any, what: str = "value") -> int:
    q = parse_rational(x, what)
    if q.denominator != 1:
        raise ValidationError(f"{what}: expected an integer")
    return int(q)


def rat(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _list(x: Any, what: str) -> list:
    if not isinstance(x, list):
        raise ValidationError(f"{what}: expected a list")
    return x


def _obj(x: Any, what: str) -> dict:
    if not isinstance(x, dict):
        raise ValidationError(f"{what}: expected an object")
    return x


# -- surface ---------------------------------------------------------------

def parse_surface(doc: Any) -> SurfaceData:
    doc = _obj(doc, "surface")
    if "gram" not in doc:
        raise ValidationError("surface: missing 'gram'")
    gram = [[parse_int(x, "surface.gram") for x in _list(row, "surface.gram")]
            for row in _list(doc["gram"], "surface.gram")]
    rho = len(gram)
    if "rank" in doc and parse_int(doc["rank"], "surface.rank") != rho:
        raise ValidationError("surface: 'rank' does not match the Gram matrix")
    if any(len(row) != rho for row in gram):
        raise ValidationError("surface: Gram matrix is not square")
    canonical = [parse_int(x, "surface.canonical") for x in _list(doc.get("canonical", [0] * rho),
                                                                  "surface.canonical")]
    if len(canonical) != rho:
        raise ValidationError("surface: canonical class has wrong length")
    chi = parse_int(doc.get("chiO", 2), "surface.chiO")
    # Structural checks here; the signature is a mathematical precondition.
    return SurfaceData(gram, canonical, chi, check=False)


def dump_surface(S: SurfaceData) -> dict:
    return {"rank": S.rank, "gram": [list(r) for r in S.gram],
            "canonical": list(S.canonical), "chiO": S.chiO}


# -- classes ---------------------------------------------------------------

def parse_ns(doc: Any, rho: int | None = None, what: str = "nsclass") -> NSClass:
    if isinstance(doc, dict):
        if "coords" not in doc:
            raise ValidationError(f"{what}: missing 'coords'")
        doc = doc["coords"]
    coords = [parse_rational(x, what) for x in _list(doc, what)]
    if rho is not None and len(coords) != rho:
        raise ValidationError(f"{what}: expected {rho} coordinates, got {len(coords)}")
    return NSClass(coords)


def dump_ns(x: NSClass | Sequence) -> list[str]:
    coords = x.coords if isinstance(x, NSClass) else x
    return [rat(c) for c in coords]


def parse_coh(doc: Any, rho: int | None = None, what: str = "cohclass") -> CohClass:
    doc = _obj(doc, what)
    for key in ("r", "c1", "s"):
        if key not in doc:
            raise ValidationError(f"{what}: missing '{key}'")
    return CohClass(parse_rational(doc["r"], what + ".r"), parse_ns(doc["c1"], rho, what + ".c1"),
                    parse_rational(doc["s"], what + ".s"))


def dump_coh(x: CohClass) -> dict:
    return {"r": rat(x.r), "c1": dump_ns(x.c1), "s": rat(x.s)}


def parse_gamma(doc: Any, rho: int | None = None) -> GammaClass:
    doc = _obj(doc, "gamma")
    for key in ("rk", "c1", "chi"):
        if key not in doc:
            raise ValidationError(f"gamma: missing '{key}'")
    c1 = parse_ns(doc["c1"], rho, "gamma.c1")
    if not c1.is_integral():
        raise ValidationError("gamma: c1 must be integral")
    return GammaClass(parse_int(doc["rk"], "gamma.rk"), c1, parse_int(doc["chi"], "gamma.chi"))


def is_coh(doc: Any) -> bool:
    return isinstance(doc, dict) and {"r", "c1", "s"} <= set(doc)


def parse_matrix(doc: Any, what: str = "matrix") -> list[list[Fraction]]:
    return [[parse_rational(x, what) for x in _list(row, what)] for row in _list(doc, what)]


def dump_matrix(m) -> list[list[str]]:
    return [[rat(x) for x in row] for row in m]


# -- words -----------------------------------------------------------------

def parse_word(doc: Any, rho: int):
    from .weyl import Refl, Trans

    gens = []
    for i, g in enumerate(_list(doc, "word")):
        g = _obj(g, f"word[{i}]")
        if set(g) == {"refl"}:
            gens.append(Refl(parse_coh(g["refl"], rho, f"word[{i}].refl")))
        elif set(g) == {"trans"}:
            gens.append(Trans(parse_ns(g["trans"], rho, f"word[{i}].trans")))
        else:
            raise ValidationError(f"word[{i}]: expected exactly one of 'refl' or 'trans'")
    return gens


def dump_word(gens) -> list[dict]:
    from .weyl import Refl

    return [{"refl": dump_coh(g.u)} if isinstance(g, Refl) else {"trans": dump_ns(g.D)} for g in gens]


# -- walls -------------------------------------------------------------------

def dump_wall(w) -> dict:
    return {"normal": [rat(x) for x in w.normal], "offset": rat(w.offset),
            "tag": dump_coh(w.tag), "degenerate": w.degenerate}


def parse_walls(doc: Any, rho: int | None = None):
    from .walls import Wall

    if isinstance(doc, dict):
        doc = doc.get("walls")
    out = []
    for i, w in enumerate(_list(doc, "walls")):
        w = _obj(w, f"walls[{i}]")
        normal = tuple(parse_rational(x, f"walls[{i}].normal") for x in _list(w.get("normal"), "normal"))
        if rho is not None and len(normal) != rho:
            raise ValidationError(f"walls[{i}]: normal has wrong length")
        tag = parse_coh(w["tag"], len(normal), f"walls[{i}].tag") if "tag" in w else \
            CohClass(0, [0] * len(normal), 0)
        out.append(Wall(normal, parse_rational(w.get("offset", 0), "offset"), tag,
                        bool(w.get("degenerate", False))))
    return out


# -- isometries ------------------------------------------------------------

def _side(doc: Any, what: str, vec_key: str, h_key: str):
    doc = _obj(doc, what)
    surf = parse_surface(doc["surface"] if "surface" in doc else doc)
    rho = surf.rank
    if vec_key not in doc or h_key not in doc:
        raise ValidationError(f"{what}: needs '{vec_key}' and '{h_key}'")
    return surf, parse_coh(doc[vec_key], rho, f"{what}.{vec_key}"), parse_ns(doc[h_key], rho, f"{what}.{h_key}")


def parse_fmiso(doc: Any):
    from .fmcoh import FMIsometry

    doc = _obj(doc, "fmiso")
    for key in ("source", "target", "theta"):
        if key not in doc:
            raise ValidationError(f"fmiso: missing '{key}'")
    S, v0, H = _side(doc["source"], "fmiso.source", "v0", "H")
    tdoc = _obj(doc["target"], "fmiso.target")
    T = parse_surface(tdoc["surface"] if "surface" in tdoc else tdoc)
    Hh = parse_ns(tdoc.get("Hhat"), T.rank, "fmiso.target.Hhat")
    wdoc = _obj(tdoc.get("w0"), "fmiso.target.w0")
    xi = parse_ns(wdoc.get("c1"), T.rank, "fmiso.target.w0.c1")
    r = parse_rational(wdoc["r"], "fmiso.target.w0.r") if "r" in wdoc else v0.r
    s = parse_rational(wdoc["s"], "w0.s") if "s" in wdoc else T.pair(xi, xi) / (2 * r)
    theta = parse_matrix(doc["theta"], "fmiso.theta")
    if len(theta) != T.rank or any(len(row) != S.rank for row in theta):
        raise ValidationError("fmiso: theta must be a rho' x rho matrix")
    twist = parse_ns(doc["post_twist"], T.rank, "fmiso.post_twist") if doc.get("post_twist") else None
    return FMIsometry(S, v0, H, T, CohClass(r, xi, s), Hh, tuple(tuple(r_) for r_ in theta), twist)


def dump_fmiso(iso) -> dict:
    out = {
        "source": {"surface": dump_surface(iso.source), "v0": dump_coh(iso.v0), "H": dump_ns(iso.H)},
        "target": {"surface": dump_surface(iso.target), "w0": dump_coh(iso.w0), "Hhat": dump_ns(iso.Hhat)},
        "theta": dump_matrix(iso.theta),
    }
    if iso.post_twist is not None:
        out["post_twist"] = dump_ns(iso.post_twist)
    return out


# -- files -----------------------------------------------------------------

def load_json(ref: str, base_dir: str | None = None) -> Any:
    """Parse inline JSON (starting with '{' or '[') or read the referenced file."""
    text = ref.strip()
    if text[:1] in "{[":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"inline JSON: {exc}") from None
    path = ref if base_dir is None or os.path.isabs(ref) else os.path.join(base_dir, ref)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{ref}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{ref}: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=True)
