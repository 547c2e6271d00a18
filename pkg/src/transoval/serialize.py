"""JSON documents exchanged by the command-line tool.

Every document carries ``"schema": 1`` and a ``"kind"``.  Keys are emitted
in a fixed order so equal geometry produces identical bytes.  The optional
``"manifest"`` entry (hash of the producing run) is excluded from
:func:`payload_digest`.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass

from .bruckbose import Spread, is_regular
from .errors import DomainError, FormatError, GeometryError
from .field import PRIMITIVE_POLYS, standard_config
from .ovals import Configuration
from .projective import Subspace, normalize, subspace

SCHEMA = 1


def dumps(doc):
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def canonical_bytes(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def payload_digest(doc):
    """sha256 of a document without its manifest reference."""
    body = {k: v for k, v in doc.items() if k != "manifest"}
    return hashlib.sha256(canonical_bytes(body)).hexdigest()


def write_atomic(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def header(kind):
    return {"schema": SCHEMA, "kind": kind}


def check_header(doc, kind):
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    if doc.get("schema") != SCHEMA:
        raise FormatError(f"unsupported schema {doc.get('schema')!r}, expected {SCHEMA}")
    if doc.get("kind") != kind:
        raise FormatError(f"expected a {kind!r} document, got {doc.get('kind')!r}")


# -- field block --------------------------------------------------------------

def field_from_json(block):
    """The standard Fq2Config matching a field block; any mismatch is a format error."""
    try:
        h = block["h"]
        poly, t1, t0 = block["gf_poly"], block["t1"], block["t0"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"incomplete field block: {block!r}") from exc
    if not isinstance(h, int) or h not in PRIMITIVE_POLYS:
        raise FormatError(f"unsupported field degree h={h!r}")
    cfg = standard_config(h)
    if (poly, t1, t0) != (cfg.base.poly, cfg.t1, cfg.t0):
        raise FormatError(
            f"field block {block!r} does not match the built-in field {cfg.to_json()!r}"
        )
    return cfg


def _vector(F, v, ncols, what):
    if (not isinstance(v, list) or len(v) != ncols
            or not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < F.q
                       for x in v)):
        raise FormatError(f"{what} must be a list of {ncols} field elements, got {v!r}")
    if not any(v):
        raise FormatError(f"{what} is the zero vector")
    return tuple(v)


def subspace_from_json(F, rows, dim, ncols, what):
    if not isinstance(rows, list) or len(rows) != dim + 1:
        raise FormatError(f"{what} must have {dim + 1} basis rows")
    vecs = [_vector(F, r, ncols, what) for r in rows]
    s = subspace(F, vecs, ncols)
    if s.dim != dim:
        raise FormatError(f"{what} has dependent basis rows")
    return s


def point_from_json(F, v, ncols, what="point"):
    return normalize(F, _vector(F, v, ncols, what))


def _subspaces(F, items, dim, what):
    if not isinstance(items, list):
        raise FormatError(f"{what} must be a list")
    return [subspace_from_json(F, rows, dim, 5, f"{what}[{i}]") for i, rows in enumerate(items)]


# -- configuration ------------------------------------------------------------

def configuration_to_json(c: Configuration, generator=None):
    doc = header("configuration")
    doc["q"] = c.q
    doc["field"] = c.cfg.to_json()
    if generator is not None:
        doc["generator"] = generator
    doc["c_points"] = [list(p) for p in c.c_points]
    doc["c_planes"] = [pl.to_json() for pl in c.c_planes]
    return doc


def configuration_from_json(doc):
    check_header(doc, "configuration")
    cfg = field_from_json(doc.get("field"))
    if doc.get("q") != cfg.q:
        raise FormatError(f"q={doc.get('q')!r} does not match the field block")
    F = cfg.base
    pts = doc.get("c_points")
    if not isinstance(pts, list):
        raise FormatError("c_points must be a list")
    points = []
    for i, p in enumerate(pts):
        P = point_from_json(F, p, 5, f"c_points[{i}]")
        if P[4] == 0:
            raise FormatError(f"c_points[{i}] lies at infinity")
        points.append(P)
    if len(set(points)) != len(points):
        raise FormatError("c_points contains repeated points")
    planes = _subspaces(F, doc.get("c_planes"), 2, "c_planes")
    return Configuration(cfg, tuple(points), tuple(planes))


# -- spreads ------------------------------------------------------------------

def spread_to_json(s: Spread, cfg):
    doc = header("spread")
    doc["field"] = cfg.to_json()
    doc["regular"] = is_regular(s)
    doc["lines"] = s.to_json()
    return doc


def spread_from_json(doc, cfg=None):
    """Spread from a spread document or a bare list of lines; 'regular' is ignored."""
    if isinstance(doc, dict):
        check_header(doc, "spread")
        got = field_from_json(doc.get("field"))
        if cfg is not None and got != cfg:
            raise FormatError("spread field differs from the configuration field")
        cfg = got
        lines = doc.get("lines")
    else:
        lines = doc
    if cfg is None:
        raise FormatError("a bare line list needs a field")
    s = Spread(tuple(_subspaces(cfg.base, lines, 1, "lines")))
    bad = s.problems()
    if bad:
        raise FormatError("not a spread: " + "; ".join(bad[:3]))
    return s


# -- reconstruction results ---------------------------------------------------

def result_to_json(res, c: Configuration):
    doc = header("reconstruction")
    doc["q"] = c.q
    doc["field"] = c.cfg.to_json()
    doc["roles"] = res.roles
    doc["n_mod_h"] = res.n_mod_h
    doc["n_lift"] = res.n_lift
    doc["fit_constant"] = res.fit_constant
    doc["t_n"] = res.t_n.to_json()
    doc["t_inf"] = res.t_inf.to_json()
    doc["plus_points"] = [list(p) for p in res.special.plus_points]
    doc["c_lines"] = [ln.to_json() for ln in res.c_lines]
    doc["homography"] = res.homography.to_json()
    doc["spread"] = {"regular": is_regular(res.spread), "lines": res.spread.to_json()}
    doc["c_points"] = [list(p) for p in c.c_points]
    doc["transcript"] = res.transcript
    return doc


@dataclass(frozen=True)
class RecoveredStructure:
    """What a reconstruction document provides to the spread experiments."""

    cfg: object
    c_points: tuple
    c_lines: tuple
    t_n: Subspace
    t_inf: Subspace
    spread: Spread
    n_mod_h: int
    n_lift: int

    def configuration(self):
        return Configuration(self.cfg, self.c_points, ())


def result_from_json(doc):
    check_header(doc, "reconstruction")
    cfg = field_from_json(doc.get("field"))
    F = cfg.base
    try:
        t_n = subspace_from_json(F, doc["t_n"], 1, 5, "t_n")
        t_inf = subspace_from_json(F, doc["t_inf"], 1, 5, "t_inf")
        c_lines = tuple(_subspaces(F, doc["c_lines"], 1, "c_lines"))
        pts = tuple(point_from_json(F, p, 5, "c_points") for p in doc["c_points"])
        spread = spread_from_json(doc["spread"]["lines"], cfg)
        n_mod_h, n_lift = int(doc["n_mod_h"]), int(doc["n_lift"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"incomplete reconstruction document: missing {exc}") from exc
    if t_n not in spread or t_inf not in spread:
        raise FormatError("special lines are not lines of the stored spread")
    return RecoveredStructure(cfg, pts, c_lines, t_n, t_inf, spread, n_mod_h, n_lift)


def load(path, kind):
    """Read and parse a document of the given kind from ``path``."""
    doc = read_json(path)
    parsers = {
        "configuration": configuration_from_json,
        "reconstruction": result_from_json,
        "spread": spread_from_json,
    }
    try:
        return parsers[kind](doc)
    except FormatError:
        raise
    except (GeometryError, DomainError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
