"""Command-line front end: transoval {gen,verify,reconstruct,derive,check-spread,pipeline}.

Exit codes: 0 success, 1 verdict failure, 2 parameter-domain error,
3 I/O or format error.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import random
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .axioms import AXIOMS, check_spread_condition, verify_axioms
from .bruckbose import conjugate_derivation_regulus, is_regular, reguli_of, reverse_regulus
from .derivation import derivation_experiment
from .errors import DomainError, FormatError, GeometryError, ReconstructionFailed
from .field import config_for_q
from .ovals import OvalSpec, forward_construct
from .reconstruct import reconstruct_spread
from . import serialize as io

EXIT_OK, EXIT_VERDICT, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3
SUPPORTED_Q = (4, 8, 16)
DEFAULT_SEED = 0


@dataclass
class RunManifest:
    command: str
    parameters: dict
    inputs: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0
    started_at: str = ""
    tool_version: str = __version__

    def to_json(self):
        return {
            "schema": io.SCHEMA,
            "kind": "manifest",
            "command": self.command,
            "tool_version": self.tool_version,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "verdicts": self.verdicts,
            "started_at": self.started_at,
            "wall_clock_s": round(self.wall_clock_s, 3),
        }

    def digest(self):
        return hashlib.sha256(io.canonical_bytes(self.to_json())).hexdigest()


class Run:
    """Collects documents of one command and writes them with their manifest."""

    def __init__(self, command, parameters):
        self.t0 = time.perf_counter()
        self.manifest = RunManifest(
            command, parameters,
            started_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        self.docs = []

    def add_input(self, path):
        entry = {"path": os.fspath(path), "sha256": None}
        try:
            with open(path, "rb") as fh:
                entry["sha256"] = hashlib.sha256(fh.read()).hexdigest()
        except OSError:
            pass  # reported by the reader
        self.manifest.inputs.append(entry)

    def add(self, path, doc):
        self.docs.append((os.fspath(path), doc))
        self.manifest.outputs[os.fspath(path)] = io.payload_digest(doc)

    def verdict(self, name, value):
        self.manifest.verdicts[name] = value

    def commit(self, manifest_path=None):
        if not self.docs:
            return None
        self.manifest.wall_clock_s = time.perf_counter() - self.t0
        h = self.manifest.digest()
        for path, doc in self.docs:
            io.write_atomic(path, io.dumps({**doc, "manifest": h}))
        if manifest_path is None:
            manifest_path = self.docs[0][0] + ".manifest.json"
        io.write_atomic(manifest_path, io.dumps({**self.manifest.to_json(), "hash": h}))
        return h


def _say(msg):
    print(msg, flush=True)


def _axiom_list(text):
    names = [a.strip().upper() for a in text.split(",") if a.strip()]
    bad = [a for a in names if a not in AXIOMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"axioms must be a subset of {','.join(AXIOMS)}")
    return names


# -- commands -----------------------------------------------------------------

def _generate(q, n, scale, threads):
    if q not in SUPPORTED_Q:
        raise DomainError(f"q must be one of {SUPPORTED_Q}, got {q}")
    cfg = config_for_q(q)
    spec = OvalSpec(cfg, n, scale)
    return forward_construct(spec, threads=threads)


def cmd_gen(args):
    run = Run("gen", {"q": args.q, "n": args.n, "scale": args.scale, "seed": args.seed})
    c = _generate(args.q, args.n, args.scale, args.threads)
    doc = io.configuration_to_json(c, {"n": args.n, "scale": args.scale})
    run.add(args.out, doc)
    run.verdict("c_points", len(c.c_points))
    run.verdict("c_planes", len(c.c_planes))
    run.commit()
    _say(f"q={c.q} n={args.n}: {len(c.c_points)} C-points, {len(c.c_planes)} C-planes -> {args.out}")
    return EXIT_OK


def _verify(c, axioms, threads):
    report = verify_axioms(c, axioms, threads=threads)
    doc = io.header("axiom_report")
    doc.update(report.to_json())
    return report, doc


def cmd_verify(args):
    run = Run("verify", {"axioms": args.axioms, "seed": args.seed})
    run.add_input(args.input)
    c = io.load(args.input, "configuration")
    report, doc = _verify(c, args.axioms, args.threads)
    run.verdict("passed", report.passed)
    if args.out:
        run.add(args.out, doc)
        run.commit()
    for name, ok in report.summary().items():
        _say(f"{name}: {'pass' if ok else 'FAIL'}")
    if not report.passed:
        for frag in report.fragments.values():
            for w in frag.witnesses[:3]:
                _say(f"  {frag.name} witness: {w}")
    return EXIT_OK if report.passed else EXIT_VERDICT


def _reconstruct(c, skip_verify, threads):
    res = reconstruct_spread(c, check_axioms=not skip_verify, threads=threads)
    return res, io.result_to_json(res, c)


def _failure_doc(exc):
    doc = io.header("reconstruction_failure")
    doc["stage"] = exc.stage
    doc["message"] = str(exc)
    doc["detail"] = exc.detail
    return doc


def cmd_reconstruct(args):
    run = Run("reconstruct", {"skip_verify": args.skip_verify, "seed": args.seed})
    run.add_input(args.input)
    c = io.load(args.input, "configuration")
    try:
        res, doc = _reconstruct(c, args.skip_verify, args.threads)
    except ReconstructionFailed as exc:
        run.verdict("passed", False)
        run.verdict("stage", exc.stage)
        run.add(args.out, _failure_doc(exc))
        run.commit()
        _say(f"reconstruction failed at stage {exc.stage}: {exc}")
        return EXIT_VERDICT
    run.add(args.out, doc)
    run.verdict("passed", True)
    run.verdict("n_mod_h", res.n_mod_h)
    run.commit()
    _say(f"n_mod_h={res.n_mod_h} n_lift={res.n_lift} roles={res.roles} "
         f"spread lines={len(res.spread)} -> {args.out}")
    return EXIT_OK


def _derive(rec, survey, seed):
    c = rec.configuration()
    rep = derivation_experiment(c, rec.spread, rec.t_n, rec.t_inf, rec.c_lines,
                                survey=survey, seed=seed)
    doc = io.header("derivation")
    doc["field"] = rec.cfg.to_json()
    doc["seed"] = seed
    doc.update(rep.to_json())
    ok = rep.confirmed and all(ctl["biconditional_holds"] for ctl in rep.controls)
    if rep.survey is not None:
        ok = ok and rep.survey["biconditional_violations"] == 0
    return rep, doc, ok


def cmd_derive(args):
    run = Run("derive", {"survey": args.survey, "seed": args.seed})
    run.add_input(args.input)
    rec = io.load(args.input, "reconstruction")
    rep, doc, ok = _derive(rec, args.survey, args.seed)
    run.add(args.out, doc)
    run.verdict("passed", ok)
    run.commit()
    chk = rep.check
    _say(f"derived spread regular={rep.derived_regular} side_a={chk.side_a} "
         f"side_b={chk.side_b} -> {args.out}")
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_check_spread(args):
    run = Run("check-spread", {"reverse": args.reverse, "seed": args.seed})
    run.add_input(args.input)
    rec = io.load(args.input, "reconstruction")
    c = rec.configuration()
    if args.spread:
        run.add_input(args.spread)
        s = io.load(args.spread, "spread")
        if s.F != rec.cfg.base:
            raise FormatError("spread and reconstruction use different fields")
        how = "file"
    else:
        s = rec.spread
        how = args.reverse
        if args.reverse == "conjugate":
            s = reverse_regulus(s, conjugate_derivation_regulus(s, rec.cfg, rec.t_n, rec.t_inf))
        elif args.reverse == "random":
            reg = list(reguli_of(s, avoid=(rec.t_n, rec.t_inf)))
            s = reverse_regulus(s, random.Random(args.seed).choice(reg))
    chk = check_spread_condition(c, s, rec.t_n, rec.t_inf, rec.c_lines)
    doc = io.header("spread_check")
    doc["source"] = how
    doc["seed"] = args.seed
    doc["spread_regular"] = is_regular(s)
    doc.update(chk.to_json())
    doc["spread"] = s.to_json()
    run.verdict("biconditional_holds", chk.consistent)
    if args.out:
        run.add(args.out, doc)
        run.commit()
    _say(f"side_a={chk.side_a} side_b={chk.side_b} biconditional={chk.consistent}")
    return EXIT_OK if chk.consistent else EXIT_VERDICT


def cmd_pipeline(args):
    out = args.outdir
    paths = {k: os.path.join(out, f"{k}.json")
             for k in ("configuration", "axioms", "reconstruction", "derivation")}
    run = Run("pipeline", {"q": args.q, "n": args.n, "scale": args.scale,
                           "skip_verify": args.skip_verify, "survey": args.survey,
                           "seed": args.seed})
    code = EXIT_OK
    c = _generate(args.q, args.n, args.scale, args.threads)
    run.add(paths["configuration"], io.configuration_to_json(c, {"n": args.n, "scale": args.scale}))
    _say(f"gen: {len(c.c_points)} C-points, {len(c.c_planes)} C-planes")
    if not args.skip_verify:
        report, doc = _verify(c, AXIOMS, args.threads)
        run.add(paths["axioms"], doc)
        run.verdict("axioms", report.passed)
        _say(f"verify: {'pass' if report.passed else 'FAIL'}")
        if not report.passed:
            run.commit(os.path.join(out, "manifest.json"))
            return EXIT_VERDICT
    try:
        res, doc = _reconstruct(c, True, args.threads)
    except ReconstructionFailed as exc:
        run.add(paths["reconstruction"], _failure_doc(exc))
        run.verdict("reconstruction", False)
        run.commit(os.path.join(out, "manifest.json"))
        _say(f"reconstruct: failed at stage {exc.stage}")
        return EXIT_VERDICT
    run.add(paths["reconstruction"], doc)
    run.verdict("reconstruction", True)
    run.verdict("n_mod_h", res.n_mod_h)
    _say(f"reconstruct: n_mod_h={res.n_mod_h} n_lift={res.n_lift}")
    if c.cfg.h % 2 == 0:
        rec = io.result_from_json(doc)
        rep, ddoc, ok = _derive(rec, args.survey, args.seed)
        run.add(paths["derivation"], ddoc)
        run.verdict("derivation", ok)
        _say(f"derive: regular={rep.derived_regular} side_a={rep.check.side_a} "
             f"side_b={rep.check.side_b}")
        if not ok:
            code = EXIT_VERDICT
    else:
        run.verdict("derivation", "skipped: h odd")
        _say("derive: skipped (h odd)")
    run.commit(os.path.join(out, "manifest.json"))
    return code


# -- argument parsing ---------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=int, default=1, help="worker threads for plane scans")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized choices")
    return p


def build_parser():
    common = _common()
    ap = argparse.ArgumentParser(prog="transoval", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="forward construction of C-points and C-planes")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="oval exponent: t -> t^(2^n)")
    p.add_argument("--scale", type=int, default=1, help="nonzero GF(q^2) scale of the oval")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="check axioms A1-A4 on a configuration")
    p.add_argument("input")
    p.add_argument("--axioms", type=_axiom_list, default=list(AXIOMS))
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reconstruct", parents=[common], help="recover the spread and exponent")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--skip-verify", action="store_true", help="do not re-check the axioms first")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("derive", parents=[common], help="conjugate-regulus derivation experiment")
    p.add_argument("input", help="reconstruction result")
    p.add_argument("--out", required=True)
    p.add_argument("--survey", action="store_true", help="also reverse every avoiding regulus")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("check-spread", parents=[common], help="evaluate the spread criterion")
    p.add_argument("input", help="reconstruction result")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--spread", help="spread document to test instead of the recovered one")
    g.add_argument("--reverse", choices=("none", "conjugate", "random"), default="none",
                   help="reverse one regulus of the recovered spread first")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_spread)

    p = sub.add_parser("pipeline", parents=[common], help="gen, verify, reconstruct and derive")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--outdir", required=True)
    p.add_argument("--skip-verify", action="store_true")
    p.add_argument("--survey", action="store_true")
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        ap.error("--threads must be positive")
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
