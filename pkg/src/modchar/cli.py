"""Command-line front end and bit-exact file formats.

Formats (LF newlines, no trailing whitespace):
  MTX q=<q> r=<rows> c=<cols>      then r lines of c packed base-10 entries
  PRM n=<degree> k=<count>         then k lines of n 1-based images
  REP q=<q> d=<dim> k=<count>      then k blocks of d lines of d entries
  CTB order=<N> classes=<m> p=<p|0>  then m class lines `size order label
      pregular`, then one line per character `kind degree v1 ... vm` with
      values integers or cyc(n)[a/b,...]

Every command takes --seed (default 1), --out, --log; --log appends a
hash-chained manifest entry, so identical manifests reproduce identical
bytes.  Exit codes: 0 ok, 2 domain error, 3 I/O or format error.

The classic MeatAxe text matrix header `<mode> <q> <rows> <cols>` (mode 1)
is accepted on input wherever an MTX file is expected.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__, cond, ctab, dxm, fixtures, gfla, grp, rep
from .cyclo import Cyclotomic, format_cyclotomic, parse_cyclotomic
from .errors import FormatError, ModcharError


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def write_text(path: str, text: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def format_matrix(m: gfla.FqMatrix) -> str:
    lines = [f"MTX q={m.field.q} r={m.rows} c={m.cols}"]
    for row in m.arr:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> gfla.FqMatrix:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines:
        raise FormatError("empty matrix file")
    head = lines[0].split()
    if head[0] == "MTX":
        kv = dict(t.split("=") for t in head[1:])
        q, r, c = int(kv["q"]), int(kv["r"]), int(kv["c"])
    elif len(head) == 4 and all(t.isdigit() for t in head):
        # classic MeatAxe text header: mode q rows cols
        mode, q, r, c = (int(t) for t in head)
        if mode != 1:
            raise FormatError(f"unsupported MeatAxe mode {mode}")
    else:
        raise FormatError(f"bad matrix header: {lines[0]!r}")
    p, k = _pk_from_q(q)
    field = gfla.field_make(p, k)
    entries = []
    for line in lines[1:]:
        entries.extend(int(t) for t in line.split())
    if len(entries) != r * c:
        raise FormatError(f"expected {r * c} entries, got {len(entries)}")
    arr = np.array(entries, dtype=np.int64).reshape(r, c)
    return gfla.FqMatrix(field, arr)


def _pk_from_q(q: int):
    for p in range(2, q + 1):
        if gfla.is_prime(p):
            k = 0
            t = q
            while t % p == 0:
                t //= p
                k += 1
            if t == 1 and p**k == q:
                return p, k
    raise FormatError(f"{q} is not a prime power")


def format_perms(perms: list, degree: int) -> str:
    lines = [f"PRM n={degree} k={len(perms)}"]
    for p in perms:
        lines.append(" ".join(str(i + 1) for i in p))
    return "\n".join(lines) + "\n"


def parse_perms(text: str):
    lines = [l for l in text.splitlines() if l.strip()]
    head = lines[0].split()
    if head[0] != "PRM":
        raise FormatError(f"bad permutation header: {lines[0]!r}")
    kv = dict(t.split("=") for t in head[1:])
    n, k = int(kv["n"]), int(kv["k"])
    perms = []
    for line in lines[1 : 1 + k]:
        img = tuple(int(t) - 1 for t in line.split())
        if sorted(img) != list(range(n)):
            raise FormatError("line is not a permutation")
        perms.append(img)
    return perms


def format_rep(r: rep.Representation) -> str:
    lines = [f"REP q={r.field.q} d={r.dim} k={r.ngens}"]
    for g in r.gens:
        for row in g.arr:
            lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_rep(text: str) -> rep.Representation:
    lines = [l for l in text.splitlines() if l.strip()]
    head = lines[0].split()
    if head[0] != "REP":
        raise FormatError(f"bad representation header: {lines[0]!r}")
    kv = dict(t.split("=") for t in head[1:])
    q, d, k = int(kv["q"]), int(kv["d"]), int(kv["k"])
    p, kk = _pk_from_q(q)
    field = gfla.field_make(p, kk)
    body = []
    for line in lines[1:]:
        body.append([int(t) for t in line.split()])
    gens = []
    for gi in range(k):
        arr = np.array(body[gi * d : (gi + 1) * d], dtype=np.int64)
        gens.append(gfla.FqMatrix(field, arr))
    return rep.Representation(field, d, tuple(gens))


def format_table(t: ctab.CharTable) -> str:
    p = t.p if t.p else 0
    lines = [f"CTB order={t.group_order} classes={t.nclasses} p={p}"]
    for c in t.classes:
        lines.append(f"{c.size} {c.order} {c.label} {1 if c.p_regular else 0}")
    for ch in t.characters:
        vals = " ".join(format_cyclotomic(v) for v in ch.values)
        lines.append(f"{ch.kind} {ch.degree_int()} {vals}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> ctab.CharTable:
    lines = [l for l in text.splitlines() if l.strip()]
    head = lines[0].split()
    if head[0] != "CTB":
        raise FormatError(f"bad table header: {lines[0]!r}")
    kv = dict(t.split("=") for t in head[1:])
    order, m, p = int(kv["order"]), int(kv["classes"]), int(kv["p"])
    classes = []
    for line in lines[1 : 1 + m]:
        toks = line.split()
        classes.append(
            ctab.ClassInfo(toks[2], int(toks[0]), int(toks[1]), toks[3] == "1")
        )
    chars = []
    for line in lines[1 + m :]:
        toks = line.split()
        kind = toks[0]
        vals = tuple(parse_cyclotomic(t) for t in toks[2:])
        deg = vals[0]
        if deg != Cyclotomic.from_rational(int(toks[1])):
            raise FormatError("degree check failed for a character line")
        chars.append(ctab.Character(vals, kind))
    return ctab.CharTable(order, tuple(classes), tuple(chars), p or None)


def format_decomp_state(state: dxm.DecompState) -> str:
    """Structured text for resumable decomposition sessions."""
    lines = [f"DECSTATE block={state.block_label} k={state.k} l={state.l}"]
    for lbl, deg in zip(state.row_labels, state.row_degrees):
        lines.append(f"row {lbl} {deg}")
    lines.append("basic " + " ".join(str(i) for i in state.brauer_basic))
    for col in state.proj_basic:
        flag = "x" if col.indecomposable else "."
        lines.append(
            f"col {col.name} {flag} : " + " ".join(str(int(c)) for c in col.coeffs)
        )
    lines.append(f"candidates {len(state.candidates)}")
    for cand in state.candidates:
        for row in cand:
            lines.append("cand " + " ".join(str(x) for x in row))
        lines.append("endcand")
    for msg in state.log:
        lines.append("log " + msg)
    return "\n".join(lines) + "\n"


def parse_decomp_state(text: str) -> dxm.DecompState:
    lines = [l for l in text.splitlines() if l.strip()]
    head = lines[0].split()
    if head[0] != "DECSTATE":
        raise FormatError(f"bad state header: {lines[0]!r}")
    kv = dict(t.split("=", 1) for t in head[1:])
    rows = []
    degrees = []
    basic = ()
    cols = []
    candidates = []
    current = []
    log = []
    for line in lines[1:]:
        toks = line.split()
        if toks[0] == "row":
            rows.append(toks[1])
            degrees.append(int(toks[2]))
        elif toks[0] == "basic":
            basic = tuple(int(t) for t in toks[1:])
        elif toks[0] == "col":
            sep = toks.index(":")
            coeffs = dxm._vec([int(t) for t in toks[sep + 1 :]])
            cols.append(dxm.ProjectiveColumn(toks[1], coeffs, toks[2] == "x"))
        elif toks[0] == "cand":
            current.append(tuple(int(t) for t in toks[1:]))
        elif toks[0] == "endcand":
            candidates.append(tuple(current))
            current = []
        elif toks[0] == "candidates":
            pass
        elif toks[0] == "log":
            log.append(line[4:])
    return dxm.DecompState(
        kv["block"], tuple(rows), tuple(degrees), basic, tuple(cols),
        tuple(candidates), tuple(log),
    )


# ---------------------------------------------------------------------------
# workspace manifest
# ---------------------------------------------------------------------------


def _sha(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def append_manifest(log_path: str, command: str, argv, seed, inputs, outputs):
    prev = ""
    if os.path.exists(log_path):
        with open(log_path) as fh:
            entries = [l for l in fh.read().splitlines() if l.strip()]
        if entries:
            prev = json.loads(entries[-1])["hash"]
    entry = {
        "command": command,
        "argv": list(argv),
        "seed": seed,
        "version": __version__,
        "inputs": [{"path": p, "sha256": _sha(p)} for p in inputs if os.path.exists(p)],
        "outputs": [{"path": p, "sha256": _sha(p)} for p in outputs if os.path.exists(p)],
        "prev": prev,
    }
    body = json.dumps(entry, sort_keys=True)
    entry["hash"] = hashlib.sha256(body.encode()).hexdigest()
    with open(log_path, "a", newline="\n") as fh:
        fh.write(json.dumps(entry, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _field_arg(s: str) -> gfla.FieldSpec:
    p, _, k = s.partition(",")
    return gfla.field_make(int(p), int(k or 1))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--log", default=argparse.SUPPRESS)
    common.add_argument("--field", default=argparse.SUPPRESS, help="p,k")

    ap = argparse.ArgumentParser(prog="modchar")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default=None)
    ap.add_argument("--log", default=None)
    ap.add_argument("--field", default=None, help="p,k")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    sp = sub.add_parser("field", help="construct a field and print its data")
    sp.add_argument("spec", help="p,k")

    sp = sub.add_parser("mat")
    sp.add_argument("op", choices=["add", "mul", "kron", "echelon", "nullspace", "minpoly", "charpoly"])
    sp.add_argument("-a", required=True)
    sp.add_argument("-b")

    sp = sub.add_parser("rep")
    sp.add_argument("op", choices=["chop", "spin", "iso", "dual", "tensor", "hom", "socle"])
    sp.add_argument("--rep", required=True)
    sp.add_argument("--other")
    sp.add_argument("--seeds")

    sp = sub.add_parser("grp")
    sp.add_argument("op", choices=["enum", "classes", "cosets", "dcosets"])
    sp.add_argument("--gens", required=True)
    sp.add_argument("--sub")
    sp.add_argument("-p", type=int, default=0)

    sp = sub.add_parser("cond")
    sp.add_argument("op", choices=["make", "elem", "perm", "tensor", "uncondense", "dim"])
    sp.add_argument("--rep")
    sp.add_argument("--other")
    sp.add_argument("--sub")
    sp.add_argument("--gens")
    sp.add_argument("--element")
    sp.add_argument("--space")
    sp.add_argument("--table")
    sp.add_argument("--char", type=int, default=0)

    sp = sub.add_parser("ctab")
    sp.add_argument("op", choices=["table", "brauer", "restrict", "blocks", "heights", "project", "decompose", "clifford2"])
    sp.add_argument("--gens")
    sp.add_argument("--table")
    sp.add_argument("-p", type=int, default=0)
    sp.add_argument("--char", type=int, default=0, help="character index")
    sp.add_argument("--block", type=int, default=0)
    sp.add_argument("--fixture")
    sp.add_argument("--target")

    sp = sub.add_parser("dxm")
    sp.add_argument("op", choices=["projs", "dtd", "fitting", "refine", "enumerate", "atoms", "eliminate", "sd16", "verify"])
    sp.add_argument("--cartan")
    sp.add_argument("--rows", type=int, default=0)
    sp.add_argument("--block", default=None)
    sp.add_argument("--fixture")
    sp.add_argument("--endo")
    sp.add_argument("--pins", default="")
    sp.add_argument("--atom")
    sp.add_argument("--position", type=int, default=0)
    sp.add_argument("--known", default="")
    sp.add_argument("--gens")
    sp.add_argument("-p", type=int, default=0)
    sp.add_argument("--blockindex", type=int, default=0)

    sp = sub.add_parser("fixtures")
    sp.add_argument("op", choices=["list", "load"])
    sp.add_argument("name", nargs="?")

    return ap


def _emit(args, text: str, outputs: list):
    if args.out:
        write_text(args.out, text)
        outputs.append(args.out)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_field(args, outputs):
    F = _field_arg(args.spec)
    lines = [
        f"field p={F.p} k={F.k} q={F.q}",
        "conway " + " ".join(str(c) for c in F.conway),
        f"omega {F.omega}",
    ]
    _emit(args, "\n".join(lines) + "\n", outputs)


def cmd_mat(args, outputs):
    a = parse_matrix(open(args.a).read())
    if args.op in ("add", "mul", "kron"):
        b = parse_matrix(open(args.b).read())
        out = gfla.mat_arith(a, b, args.op)
        _emit(args, format_matrix(out), outputs)
    elif args.op == "echelon":
        ech = gfla.echelonize(a)
        text = f"rank {ech.rank}\npivots {' '.join(str(p) for p in ech.pivots)}\n"
        text += format_matrix(ech.matrix)
        _emit(args, text, outputs)
    elif args.op == "nullspace":
        _emit(args, format_matrix(gfla.nullspace(a)), outputs)
    elif args.op == "minpoly":
        _emit(args, "minpoly " + gfla.min_poly(a).format() + "\n", outputs)
    elif args.op == "charpoly":
        _emit(args, "charpoly " + gfla.char_poly(a).format() + "\n", outputs)


def cmd_rep(args, outputs):
    r = parse_rep(open(args.rep).read())
    if args.op == "chop":
        factors = rep.chop(r, args.seed)
        text = " ".join(f"{f.label}:{m}" for f, m in factors) + "\n"
        _emit(args, text, outputs)
    elif args.op == "spin":
        seeds = parse_matrix(open(args.seeds).read())
        _emit(args, format_matrix(rep.spin(r, seeds)), outputs)
    elif args.op == "iso":
        other = parse_rep(open(args.other).read())
        h = rep.iso(r, other, args.seed)
        _emit(args, ("none\n" if h is None else format_matrix(h)), outputs)
    elif args.op == "dual":
        _emit(args, format_rep(rep.dual(r)), outputs)
    elif args.op == "tensor":
        other = parse_rep(open(args.other).read())
        _emit(args, format_rep(rep.tensor(r, other)), outputs)
    elif args.op == "hom":
        other = parse_rep(open(args.other).read())
        maps = rep.hom(r, other)
        text = f"dim {len(maps)}\n" + "".join(format_matrix(h) for h in maps)
        _emit(args, text, outputs)
    elif args.op == "socle":
        factors = rep.chop(r, args.seed)
        simples = [f for f, _ in factors]
        layers = rep.socle_series(r, simples, args.seed)
        lines = []
        for li, layer in enumerate(layers):
            part = " ".join(f"{simples[si].label}:{m}" for si, m in layer)
            lines.append(f"layer {li + 1}: {part}")
        _emit(args, "\n".join(lines) + "\n", outputs)


def cmd_grp(args, outputs):
    gens = parse_perms(open(args.gens).read())
    g = grp.enumerate_group(gens)
    if args.op == "enum":
        _emit(args, f"order {g.order}\n", outputs)
    elif args.op == "classes":
        cls = grp.conjugacy_classes(g, args.p or None)
        lines = [f"classes {cls.count}"]
        flags = cls.p_regular(args.p or None)
        for i, lbl in enumerate(cls.labels()):
            lines.append(f"{lbl} size {cls.sizes[i]} order {cls.orders[i]} regular {1 if flags[i] else 0}")
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "cosets":
        sub = parse_perms(open(args.sub).read())
        act = grp.coset_action(g, sub)
        _emit(args, format_perms(list(act.perms), act.degree), outputs)
    elif args.op == "dcosets":
        sub = parse_perms(open(args.sub).read())
        dcs = grp.double_cosets(g, sub)
        lines = [f"count {len(dcs)}"]
        for rep_, size in dcs:
            lines.append(" ".join(str(i + 1) for i in rep_) + f" size {size}")
        _emit(args, "\n".join(lines) + "\n", outputs)


def cmd_cond(args, outputs):
    if args.op == "dim":
        cmd_cond_dim(args, outputs)
        return
    if args.op == "perm":
        gperms = parse_perms(open(args.rep).read())
        ksub = parse_perms(open(args.sub).read())
        field = _field_arg(args.field or "2,1")
        mats, orbits = cond.condense_perm(field, len(gperms[0]), ksub, gperms)
        text = f"orbits {len(orbits)}\n" + "".join(format_matrix(m) for m in mats)
        _emit(args, text, outputs)
        return
    r = parse_rep(open(args.rep).read())
    kgens = parse_rep(open(args.sub).read()) if args.sub else None
    setup = cond.make_idempotent(r, list(kgens.gens) if kgens else [])
    if args.op == "make":
        text = f"rank {setup.rank}\n" + format_matrix(setup.image_basis)
        _emit(args, text, outputs)
    elif args.op == "elem":
        g = parse_matrix(open(args.element).read())
        _emit(args, format_matrix(cond.condense_element(setup, g)), outputs)
    elif args.op == "uncondense":
        u = parse_matrix(open(args.space).read())
        _emit(args, format_matrix(cond.uncondense(setup, u)), outputs)
    elif args.op == "tensor":
        other = parse_rep(open(args.other).read())
        word = rep.AlgebraWord(((1, (0,)),))
        m = cond.condense_tensor(r, other, [word], word)
        _emit(args, format_matrix(m), outputs)


def cmd_cond_dim(args, outputs):
    """Expects the table file to carry the group's full canonical class list
    (as produced by `ctab table --gens`), so class indices line up."""
    gens = parse_perms(open(args.gens).read())
    g = grp.enumerate_group(gens)
    sub = parse_perms(open(args.sub).read())
    t = parse_table(open(args.table).read())
    cls = grp.conjugacy_classes(g)
    if t.nclasses != cls.count:
        raise FormatError("table classes do not match the group's class list")
    kgrp = grp.enumerate_group(sub)
    kcls = grp.conjugacy_classes(kgrp)
    fusion = tuple(cls.class_of[krep] for krep in kcls.reps)
    chi = t.characters[args.char]
    d = cond.condensed_dim(t, chi, kcls.sizes, fusion)
    _emit(args, f"dim {d}\n", outputs)


def cmd_ctab(args, outputs):
    if args.op in ("table", "brauer"):
        gens = parse_perms(open(args.gens).read())
        g = grp.enumerate_group(gens)
        t = ctab.ordinary_table(g, args.seed) if args.op == "table" else ctab.brauer_table(g, args.p, args.seed)
        _emit(args, format_table(t), outputs)
        return
    if args.op == "clifford2":
        fx = _load_fixture_arg(args.fixture)
        block = ctab.BlockDecomposition(
            fx.meta.get("block", fx.name), fx.meta_int("p"), fx.row_labels,
            fx.row_degrees, fx.matrix, fx.col_degrees,
        )
        pairs, plan = (), None
        if args.target:
            dst = _load_fixture_arg(args.target)
            pairs, plan = _clifford_plan(fx, dst)
        res = ctab.clifford_index2(block, fx.col_pairs, pairs, plan)
        out = res.blocks[0]
        lines = [f"k {out.k}", f"l {out.l}"]
        for lbl, deg, row in zip(out.row_labels, out.row_degrees, out.matrix):
            lines.append(f"{lbl} {deg} " + " ".join(str(x) for x in row))
        _emit(args, "\n".join(lines) + "\n", outputs)
        return
    t = parse_table(open(args.table).read())
    if args.op == "restrict":
        rt = ctab.restrict_table(t, args.p)
        _emit(args, format_table(rt), outputs)
    elif args.op == "blocks":
        b = ctab.blocks(t, args.p)
        lines = [f"blocks {b.nblocks}"]
        for bi in range(b.nblocks):
            mem = " ".join(str(i) for i in b.blocks[bi])
            lines.append(f"block {bi} defect {b.defects[bi]} chars {mem}")
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "heights":
        b = ctab.blocks(t, args.p)
        h = ctab.heights(b, args.block)
        lines = [f"{i} {v}" for i, v in sorted(h.items())]
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "project":
        b = ctab.blocks(t, args.p)
        psi = t.characters[args.char]
        proj = ctab.block_project(t, psi, b, args.block)
        _emit(args, " ".join(format_cyclotomic(v) for v in proj.values) + "\n", outputs)
    elif args.op == "decompose":
        rt = ctab.restrict_table(t, args.p) if args.p else t
        theta = rt.characters[args.char]
        basic = [c for i, c in enumerate(rt.characters) if i != args.char]
        coeffs = ctab.decompose_basic(basic, theta)
        _emit(args, " ".join(str(c) for c in coeffs) + "\n", outputs)
def _clifford_plan(src, dst):
    """Row plan and fused pairs read off a target fixture's source column."""
    plan = []
    pairs = []
    seen = set()
    for extra in dst.row_extra:
        token = extra[0]
        if "+" in token:
            a, b = token.split("+")
            pr = (src.row_labels.index(a), src.row_labels.index(b))
            if pr not in seen:
                seen.add(pr)
                pairs.append(pr)
            plan.append(("fuse", pr))
        else:
            plan.append(("ext", src.row_labels.index(token)))
    return tuple(pairs), tuple(plan)


def cmd_dxm(args, outputs):
    if args.op == "dtd":
        fx_or_file = args.cartan
        if fx_or_file and os.path.exists(fx_or_file):
            fx = fixtures.parse_fixture(open(fx_or_file).read())
        else:
            fx = fixtures.load(fx_or_file)
        k = args.rows or fx.meta_int("k")
        sols = dxm.dtd_solve(dxm.CartanInstance(fx.matrix, k))
        lines = [f"solutions {len(sols)}"]
        for sol in sols:
            for row in sol:
                lines.append(" ".join(str(x) for x in row))
            lines.append("--")
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "sd16":
        fx = _load_fixture_arg(args.block or args.fixture)
        bd = ctab_blockdata_from_fixture(fx)
        res = dxm.sd16_analyze(bd)
        lines = [
            "deltas " + " ".join(str(d) for d in res.deltas),
            "labeling " + " ".join(res.labeling),
            "basic " + " ".join(res.basic_labels),
        ]
        for (lbl, deg, h), row in zip(bd.chars, res.matrix):
            lines.append(f"{lbl} {deg} " + " ".join(str(x) for x in row))
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "verify":
        fx = _load_fixture_arg(args.fixture)
        ok = verify_fixture_matrix(fx)
        _emit(args, ("ok\n" if ok else "FAIL\n"), outputs)
        if not ok:
            raise ModcharError("matrix verification failed")
    elif args.op == "atoms":
        fx = _load_fixture_arg(args.fixture)
        prob, degs, _basic = atom_problem_from_fixture(fx)
        ats = dxm.atoms(prob)
        lines = []
        for i, a in enumerate(ats):
            deg = sum(int(c) * d for c, d in zip(a, degs))
            lines.append(f"atom {i} degree {deg} : " + " ".join(str(int(c)) for c in a))
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "projs":
        gens = parse_perms(open(args.gens).read())
        g = grp.enumerate_group(gens)
        table = ctab.ordinary_table(g, args.seed)
        bd = ctab.blocks(table, args.p)
        cols = dxm.projectives_from_products(table, bd, args.blockindex)
        lines = [f"projectives {len(cols)}"]
        for c in cols:
            lines.append(f"{c.name} : " + " ".join(str(int(x)) for x in c.coeffs))
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "fitting":
        state = _state_from_projbasis(_load_fixture_arg(args.fixture))
        e = _load_fixture_arg(args.endo)
        fxa = _load_fixture_arg(args.fixture)
        reg_mult = tuple(r[-1] for r in fxa.matrix)
        pins = []
        for pair in args.pins.split(",") if args.pins else []:
            a, b = pair.split(":")
            pins.append((e.row_labels.index(a), fxa.row_labels.index(b)))
        prob = dxm.FittingProblem(e.matrix, e.row_degrees, reg_mult, tuple(pins))
        survivors = dxm.fitting_match(state, prob)
        lines = [f"matchings {len(survivors)}"]
        for assignment, cols in survivors:
            pairs = " ".join(
                f"{e.row_labels[k]}:{fxa.row_labels[v]}" for k, v in sorted(assignment.items())
            )
            lines.append("assignment " + pairs)
            for j, c in enumerate(cols):
                lines.append(f"pim {j + 1} : " + " ".join(str(int(x)) for x in c))
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "refine":
        fx = _load_fixture_arg(args.fixture)
        state = _state_from_projbasis(fx, ncols=fx.l - 1)
        psi = dxm._vec([r[fx.l - 1] for r in fx.matrix])
        state = dxm.refine_by_relation(state, fx.col_labels[fx.l - 1], psi)
        lines = [state.log[-1]]
        for c in state.proj_basic:
            lines.append(f"{c.name} : " + " ".join(str(int(x)) for x in c.coeffs))
        _emit(args, "\n".join(lines) + "\n", outputs)
    elif args.op == "enumerate":
        state = _state_from_projbasis(_load_fixture_arg(args.fixture))
        state = dxm.enumerate_candidates(state)
        _emit(args, f"candidates {len(state.candidates)}\n", outputs)
    elif args.op == "eliminate":
        state = _state_from_projbasis(_load_fixture_arg(args.fixture))
        state = dxm.enumerate_candidates(state)
        if args.known:
            known = {}
            for pair in args.known.split(","):
                a, b = pair.split(":")
                known[int(a)] = int(b)
            state = dxm.import_known_brauer(state, known)
        if args.atom:
            fxa = _load_fixture_arg(args.atom)
            prob, degs, _b = atom_problem_from_fixture(fxa)
            ats = dxm.atoms(prob)
            atom_degree = sum(int(c) * d for c, d in zip(ats[-1], degs))
            state = dxm.eliminate_by_atom(state, atom_degree, args.position)
        lines = [f"candidates {len(state.candidates)}"]
        if len(state.candidates) == 1:
            for lbl, deg, row in zip(state.row_labels, state.row_degrees, state.candidates[0]):
                lines.append(f"{lbl} {deg} " + " ".join(str(x) for x in row))
            degs_out = dxm.candidate_brauer_degrees(state, state.candidates[0])
            lines.append("brauer degrees " + " ".join(str(int(d)) for d in degs_out))
        _emit(args, "\n".join(lines) + "\n", outputs)


def _state_from_projbasis(fx, ncols=None):
    ncols = ncols if ncols is not None else fx.l
    if fx.indecomposable:
        flags = [bool(f) for f in fx.indecomposable[:ncols]]
    else:
        flags = [False] * ncols
    # an explicit regular/product column (flag '-') is data, not basic set
    keep = [j for j in range(ncols) if j < len(fx.col_labels)]
    cols = tuple(
        dxm.ProjectiveColumn(
            fx.col_labels[j], dxm._vec([r[j] for r in fx.matrix]), flags[j]
        )
        for j in keep
        if fx.col_labels[j] not in ("R", "X")
    )
    return dxm.DecompState(
        fx.name, fx.row_labels, fx.row_degrees, fx.basic_row_indices(), cols
    )


def _load_fixture_arg(name_or_path):
    if name_or_path and os.path.exists(name_or_path):
        return fixtures.parse_fixture(open(name_or_path).read())
    return fixtures.load(name_or_path)


def ctab_blockdata_from_fixture(fx) -> dxm.SD16Instance:
    g_order = fx.meta_int("grouporder")
    d = fx.meta_int("defect")
    p = fx.meta_int("p")

    def nu_p(n):
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    base = nu_p(g_order) - d
    chars = tuple(
        (lbl, deg, nu_p(deg) - base)
        for lbl, deg in zip(fx.row_labels, fx.row_degrees)
    )
    return dxm.SD16Instance(chars)


def atom_problem_from_fixture(fx):
    amatrix = fx.matrix
    degs = [int(t) for t in fx.sections["basicdegrees"][0]]
    bvecs = []
    for payload in fx.sections["bvec"]:
        toks = list(payload)
        sep = toks.index(":")
        bvecs.append(dxm._vec([int(t) for t in toks[sep + 1 :]]))
    prob = dxm.AtomProblem(amatrix, tuple(bvecs))
    return prob, degs, fx.basic_rows


def verify_fixture_matrix(fx) -> bool:
    """Degree-augmented verification: phi_j = (deg_j, e_j), chi rows likewise."""
    D = fx.matrix
    l = fx.l
    phis = []
    for j in range(l):
        vec = [Fraction(fx.col_degrees[j])] + [Fraction(int(j == t)) for t in range(l)]
        phis.append(tuple(vec))
    chis = []
    for i in range(fx.k):
        vec = [Fraction(fx.row_degrees[i])] + [Fraction(x) for x in D[i]]
        chis.append(tuple(vec))
    return dxm.verify_matrix(D, chis, phis)


def cmd_fixtures(args, outputs):
    if args.op == "list":
        _emit(args, "\n".join(fixtures.list_fixtures()) + "\n", outputs)
    else:
        text = fixtures.fixture_text(args.name)
        _emit(args, text, outputs)


HANDLERS = {
    "field": cmd_field,
    "mat": cmd_mat,
    "rep": cmd_rep,
    "grp": cmd_grp,
    "cond": cmd_cond,
    "ctab": cmd_ctab,
    "dxm": cmd_dxm,
    "fixtures": cmd_fixtures,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    outputs: list[str] = []
    inputs = [v for v in vars(args).values() if isinstance(v, str) and os.path.exists(v)]
    try:
        HANDLERS[args.command](args, outputs)
    except ModcharError as exc:
        if isinstance(exc, FormatError):
            print(f"format error: {exc}", file=sys.stderr)
            return 3
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    if args.log:
        append_manifest(args.log, args.command, argv, args.seed, inputs, outputs)
    return 0


if __name__ == "__main__":
    sys.exit(main())
