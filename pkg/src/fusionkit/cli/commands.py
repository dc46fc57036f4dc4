"""Report generation for each CLI command.

Every command returns a ``Report`` whose JSON form depends only on the spec
text and the options that change the mathematics (target, family,
truncation, seed).  Thread count, timings and paths are left out on purpose
so reports are byte-identical across runs.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence

from .. import __version__
from ..bounds import get_bounds
from ..fusion import AmbientFinite, check_saturated, f_classes, fully_normalized, inner_system
from ..fusion.saturation import classify_subgroup
from .build import Workspace, subgroup_family
from .spec import SpecDocument

SCHEMA = "fusionkit.report/1"
COMMANDS = ("saturation", "centric-radical", "bullet", "normalizer", "extension", "twisting",
            "transporter-axioms", "dump")
DUMP_ITEMS = ("transporter", "linking", "nerve", "levels", "LU", "twisted")


class InputError(ValueError):
    """The spec or options do not describe something the command can run on."""


@dataclass
class Options:
    target: Optional[str] = None
    family: Optional[str] = None
    truncation: Optional[int] = None
    seed: int = 0
    threads: int = 1
    what: Sequence[str] = ()
    out: Optional[str] = None

    @property
    def N(self) -> int:
        return self.truncation if self.truncation is not None else get_bounds().truncation


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict
    violations: List[dict] = field(default_factory=list)
    table: List[List[str]] = field(default_factory=list)
    headers: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, "version": __version__, "command": self.command, "inputs": self.inputs,
                "ok": self.ok, "violations": self.violations, "results": self.results}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=str) + "\n"

    def render_table(self) -> str:
        lines = [f"{self.command}: {'ok' if self.ok else 'VIOLATION'}"]
        if self.headers:
            rows = [self.headers] + [[str(c) for c in r] for r in self.table]
            widths = [max(len(r[i]) for r in rows) for i in range(len(self.headers))]
            for k, r in enumerate(rows):
                lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
                if k == 0:
                    lines.append("  ".join("-" * w for w in widths))
        for v in self.violations:
            lines.append("violation: " + json.dumps(v, sort_keys=True, default=str))
        return "\n".join(lines) + "\n"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map, optionally on a thread pool."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# target selection ------------------------------------------------------------------

def _pick(doc: SpecDocument, kind: str, name: Optional[str]) -> str:
    if name is not None:
        try:
            b = doc[name]
        except KeyError:
            raise InputError(f"no block named {name!r}") from None
        if b.kind != kind:
            raise InputError(f"{name!r} is a {b.kind} block, this command needs a {kind} block")
        return name
    names = doc.names(kind)
    if len(names) != 1:
        what = "no" if not names else "several"
        raise InputError(f"{what} {kind} blocks in the spec; choose one with --target")
    return names[0]


def _fusion_and_family(ws: Workspace, opts: Options):
    if opts.family is not None:
        fam_name = _pick(ws.doc, "family", opts.family)
        fname = ws.doc[fam_name].get("fusion")[1]
        if opts.target is not None and opts.target != fname:
            raise InputError(f"family {fam_name!r} belongs to {fname!r}, not {opts.target!r}")
        return fname, ws.get(fname), fam_name, ws.get(fam_name)
    fname = _pick(ws.doc, "fusion", opts.target)
    F = ws.get(fname)
    return fname, F, None, subgroup_family(F, get_bounds().torsion_exponent)


def _inputs(doc_text: str, source: str, opts: Options, **extra) -> dict:
    d = {"spec": os.path.basename(source), "spec_sha256": digest(doc_text)}
    if opts.seed:
        d["seed"] = opts.seed
    d.update({k: v for k, v in extra.items() if v is not None})
    return d


# commands --------------------------------------------------------------------------

def cmd_saturation(ws: Workspace, opts: Options, base: dict) -> Report:
    fname, F, fam_name, fam = _fusion_and_family(ws, opts)
    rep = check_saturated(F, fam)
    results = rep.to_dict()
    results["family_size"] = len(fam)
    results["inconclusive"] = sorted(set(F.inconclusive))
    viol = [dict(w.to_dict(), kind="saturation") for w in rep.witnesses]
    if not rep.saturated and not viol:
        viol = [{"kind": "saturation", "check": k} for k, v in rep.axioms.items() if not v]
    if not rep.paths_agree:
        viol.append({"kind": "saturation", "check": "paths_disagree"})
    table = [[c.representative.describe(), len(c.members)] + [_flag(rep.flag_of(c.representative).get(k))
             for k in ("fully_normalized", "fully_centralized", "fully_automized", "receptive")]
             for c in rep.classes]
    return Report("saturation", dict(base, target=fname, family=fam_name), results, viol, table,
                  ["class", "size", "f.norm", "f.cent", "f.aut", "receptive"])


def _flag(v) -> str:
    return "-" if v is None else ("yes" if v else "no")


def cmd_centric_radical(ws: Workspace, opts: Options, base: dict) -> Report:
    fname, F, fam_name, fam = _fusion_and_family(ws, opts)
    classes = f_classes(F, fam)

    def row(c):
        P = c.representative
        fl = classify_subgroup(F, P)
        fn_members = [Q for Q in c.members if fully_normalized(F, Q)]
        s_classes = len({F.s_class_key(Q) for Q in fn_members})
        return {"representative": P.describe(), "members": [Q.describe() for Q in c.members],
                "centric": fl.get("centric"), "radical": fl.get("radical"),
                "fully_normalized_S_classes": s_classes, "coprime_to_p": gcd(s_classes, F.p) == 1}

    rows = _pmap(row, classes, opts.threads)
    viol = [{"kind": "class_count", "class": r["representative"], "count": r["fully_normalized_S_classes"]}
            for r in rows if not r["coprime_to_p"]]
    results = {"classes": rows,
               "centric": [r["representative"] for r in rows if r["centric"]],
               "centric_radical": [r["representative"] for r in rows if r["centric"] and r["radical"]]}
    table = [[r["representative"], len(r["members"]), _flag(r["centric"]), _flag(r["radical"]),
              r["fully_normalized_S_classes"]] for r in rows]
    return Report("centric-radical", dict(base, target=fname, family=fam_name), results, viol, table,
                  ["class", "size", "centric", "radical", "f.norm S-classes"])


def cmd_bullet(ws: Workspace, opts: Options, base: dict) -> Report:
    from ..bullet import BulletContext, bullet, bullet_table, f_bullet

    fname, F, fam_name, fam = _fusion_and_family(ws, opts)
    ctx = BulletContext.for_fusion(F)
    S = F.S

    def check(P):
        B = bullet(ctx, P)
        BB = bullet(ctx, B)
        return {"P": P.describe(), "P*": B.describe(), "idempotent": BB == B, "contains_P": P <= B,
                "normalizer_grows": S.normalizer(P) <= S.normalizer(B)}

    rows = _pmap(check, fam, opts.threads)
    viol = [{"kind": "bullet", "subgroup": r["P"], "check": k} for r in rows
            for k in ("idempotent", "contains_P", "normalizer_grows") if not r[k]]
    reps = f_bullet(F, ctx, fam)
    results = {"m": ctx.m, "rows": rows, "table": bullet_table(ctx, fam),
               "bullet_classes": [P.describe() for P in reps], "family_size": len(fam)}
    table = [[r["P"], r["P*"], _flag(r["idempotent"]), _flag(r["contains_P"]), _flag(r["normalizer_grows"])]
             for r in rows]
    return Report("bullet", dict(base, target=fname, family=fam_name), results, viol, table,
                  ["P", "P*", "idempotent", "P<=P*", "N(P)<=N(P*)"])


def cmd_normalizer(ws: Workspace, opts: Options, base: dict) -> Report:
    from ..normalizer import AutSubgroupK, centralizer_system, verify_normalizer_saturation

    fname, F, fam_name, fam = _fusion_and_family(ws, opts)
    if not F.is_finite:
        raise InputError("the normalizer command needs a fusion system over a finite p-group")
    F_sat = check_saturated(F, F.all_subgroups()).saturated
    jobs = [(P, K) for P in fam for K in (AutSubgroupK.trivial(P), AutSubgroupK.full(P),
                                          AutSubgroupK.automizer(F, P))]

    def run(job):
        P, K = job
        return verify_normalizer_saturation(F, P, K, F_sat).to_dict()

    rows = _pmap(run, jobs, opts.threads)
    viol = [{"kind": "normalizer", "Q": r["Q"], "K": r["K"]} for r in rows
            if r["hypothesis_met"] and not r["saturation"]["saturated"]]
    S = F.S
    Z = S.closure([x for x in S.whole().elements() if all(S.mul(x, y) == S.mul(y, x) for y in S.whole().elements())])
    CZ = centralizer_system(F, Z)
    inner = inner_system(S)
    subs = F.all_subgroups()
    same = all(set(CZ.hom(P, Q)) == set(inner.hom(P, Q)) for P in subs for Q in subs)
    results = {"F_saturated": F_sat, "rows": rows, "center": Z.describe(),
               "centralizer_of_center_equals_inner": same}
    table = [[r["Q"], r["K"], _flag(r["fully_K_normalized"]), r["N_S^K(Q)"], _flag(r["saturation"]["saturated"])]
             for r in rows]
    return Report("normalizer", dict(base, target=fname, family=fam_name), results, viol, table,
                  ["Q", "K", "f.K-norm", "N_S^K(Q)", "saturated"])


def cmd_extension(ws: Workspace, opts: Options, base: dict) -> Report:
    from ..extend import elementwise_theta, extension_pipeline, fusion_isomorphic_by_map
    from ..grp.ops import ambient_pgroup

    name = _pick(ws.doc, "pair", opts.target)
    cp = ws.get(name)
    res = extension_pipeline(cp.pair, S_ids=cp.S_ids)
    claims = dict(res.claims)
    Sbig = ambient_pgroup(cp.big, cp.pair.p, cp.sylow, "S")
    same, bad = fusion_isomorphic_by_map(res.F, AmbientFinite(Sbig), elementwise_theta(cp, res.S, Sbig))
    claims["F_matches_ambient"] = same
    claims["LU_count"] = res.LU.cat.n_mor == cp.pair.L.cat.n_mor * cp.pair.G.order
    results = res.to_dict()
    results["claims"] = claims
    results["pair"] = cp.pair.to_dict()
    results["L_morphisms"] = cp.pair.L.cat.n_mor
    results["ambient_mismatches"] = bad[:5]
    viol = [{"kind": "claim", "claim": k} for k, v in claims.items() if not v]
    table = [[k, _flag(v)] for k, v in claims.items()]
    return Report("extension", dict(base, target=name), results, viol, table, ["claim", "holds"])


def cmd_twisting(ws: Workspace, opts: Options, base: dict) -> Report:
    from ..simpl import (aut_typ_tables, check_cocycle, check_nerve_iso, check_twisting, random_section,
                         roundtrip_pair, roundtrip_twisting, twisting_from_pair)

    name = _pick(ws.doc, "pair", opts.target)
    pair = ws.get(name).pair
    N = opts.N
    if N < 3:
        raise InputError("twisting needs --truncation of at least 3")
    tabs = aut_typ_tables(pair.L)
    tw = twisting_from_pair(pair, tabs, N=N)
    checks: Dict[str, bool] = {}
    tr = check_twisting(tw)
    checks["twisting_relations"] = tr.ok
    checks.update({f"cocycle_{k}": v for k, v in check_cocycle(tabs, pair.G, tw.t, tw.chi).items()})
    checks.update({f"pair_roundtrip_{k}": v for k, v in roundtrip_pair(pair, tabs).items()})
    rng = random.Random(opts.seed)
    sec = random_section(pair, rng)
    checks["pair_roundtrip_random_section"] = all(roundtrip_pair(pair, tabs, sec).values())
    checks["twisting_roundtrip"] = roundtrip_twisting(tw)
    iso = check_nerve_iso(pair, N, tabs)
    checks.update({f"nerve_iso_{k}": v for k, v in iso.checks.items()})
    results = {"checks": checks, "N": N, "levels": iso.sizes, "isotypical_autos": tabs.n_autos,
               "twisting_failures": tr.failures}
    viol = [{"kind": "twisting", "check": k} for k, v in checks.items() if not v]
    return Report("twisting", dict(base, target=name, truncation=N), results, viol,
                  [[k, _flag(v)] for k, v in checks.items()], ["check", "holds"])


def _transporter_data(ws: Workspace, opts: Options):
    from ..catsys import transporter_of
    from ..fusion import is_centric

    fname, F, fam_name, fam = _fusion_and_family(ws, opts)
    if not isinstance(F, AmbientFinite):
        raise InputError("transporter systems are built from ambient fusion blocks")
    H = fam if fam_name is not None else [P for P in fam if is_centric(F, P)]
    return fname, fam_name, F, transporter_of(F.G, F.S, H, f"T({F.G.name})")


def cmd_transporter_axioms(ws: Workspace, opts: Options, base: dict) -> Report:
    from ..catsys import FAULTS, check_linking_axioms, check_transporter_axioms, linking_quotient

    fname, fam_name, F, T = _transporter_data(ws, opts)
    rT = check_transporter_axioms(T)
    L = linking_quotient(T)
    rL = check_linking_axioms(L)
    n = len(T.objs)
    ratios = sorted({len(T.cat.hom(a, b)) // max(len(L.cat.hom(a, b)), 1)
                     for a in range(n) for b in range(n) if T.cat.hom(a, b)})
    exact = all(len(T.cat.hom(a, b)) == ratios[0] * len(L.cat.hom(a, b)) for a in range(n) for b in range(n))

    def fault(item):
        key, fn = item
        try:
            bad, axiom = fn(T)
        except ValueError as e:
            return {"fault": key, "applicable": False, "detail": str(e)}
        failed = check_transporter_axioms(bad).failed()
        return {"fault": key, "applicable": True, "expected": axiom, "failed": failed, "caught": axiom in failed}

    faults = _pmap(fault, sorted(FAULTS.items()), opts.threads)
    viol = [{"kind": "transporter_axiom", "axiom": a} for a in rT.failed()]
    viol += [{"kind": "linking_axiom", "axiom": a} for a in rL.failed()]
    viol += [{"kind": "fault_missed", "fault": f["fault"]} for f in faults if f["applicable"] and not f["caught"]]
    if len(ratios) != 1 or not exact:
        viol.append({"kind": "quotient", "ratios": ratios})
    results = {"objects": [P.describe() for P in T.objs], "T_morphisms": T.cat.n_mor, "L_morphisms": L.cat.n_mor,
               "transporter": rT.to_dict(), "linking": rL.to_dict(), "quotient_ratio": ratios,
               "faults": faults}
    table = [[k, _flag(v)] for k, v in rT.verdicts.items()] + [[f"linking {k}", _flag(v)] for k, v in rL.verdicts.items()]
    table += [[f"fault {f['fault']}", "caught" if f.get("caught") else "n/a" if not f["applicable"] else "MISSED"]
              for f in faults]
    return Report("transporter-axioms", dict(base, target=fname, family=fam_name), results, viol, table,
                  ["check", "result"])


def cmd_dump(ws: Workspace, opts: Options, base: dict) -> Report:
    from ..simpl import nerve

    what = list(dict.fromkeys(opts.what))
    bad = [w for w in what if w not in DUMP_ITEMS]
    if bad:
        raise InputError(f"unknown dump item {bad[0]!r}; choose from {', '.join(DUMP_ITEMS)}")
    files: Dict[str, str] = {}
    payloads: Dict[str, dict] = {}
    if what:
        kinds = {ws.doc[opts.target].kind} if opts.target else set()
        use_pair = "pair" in kinds or any(w in ("LU", "twisted") for w in what) or \
            (not kinds and not ws.doc.names("fusion"))
        if use_pair:
            name = _pick(ws.doc, "pair", opts.target)
            pair = ws.get(name).pair
            L = pair.L
            T = None
        else:
            name, _, _, T = _transporter_data(ws, opts)
            from ..catsys import linking_quotient
            L = linking_quotient(T)
        N = opts.N
        for w in what:
            if w == "transporter":
                if T is None:
                    raise InputError("transporter dumps need a fusion target")
                payloads[w] = T.to_json()
            elif w == "linking":
                payloads[w] = L.to_json()
            elif w == "nerve":
                payloads[w] = nerve(L.cat, N).to_json()
            elif w == "levels":
                payloads[w] = {"N": N, "sizes": nerve(L.cat, N).sizes, "morphisms": L.cat.n_mor}
            elif w == "LU":
                from ..extend import build_LU
                payloads[w] = build_LU(pair).cat.to_json()
            elif w == "twisted":
                from ..simpl import aut_typ_tables, twisted_product, twisting_from_pair
                tw = twisting_from_pair(pair, aut_typ_tables(L), N=N)
                payloads[w] = twisted_product(tw, L, N).to_json()
        out = opts.out or "."
        os.makedirs(out, exist_ok=True)
        for w, data in payloads.items():
            text = json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
            fn = f"{name}.{w}.json"
            with open(os.path.join(out, fn), "w", encoding="utf-8") as fh:
                fh.write(text)
            files[fn] = digest(text)
        base = dict(base, target=name, truncation=N)
    summary = {w: _summary(w, d) for w, d in payloads.items()}
    return Report("dump", base, {"files": files, "summary": summary}, [],
                  [[fn, h[:16]] for fn, h in sorted(files.items())], ["file", "sha256"] if files else [])


def _summary(what: str, data: dict) -> dict:
    if "sizes" in data:
        return {"sizes": data["sizes"]}
    return {"objects": len(data.get("objects", [])), "morphisms": len(data.get("morphisms", []))}


RUNNERS = {
    "saturation": cmd_saturation,
    "centric-radical": cmd_centric_radical,
    "bullet": cmd_bullet,
    "normalizer": cmd_normalizer,
    "extension": cmd_extension,
    "twisting": cmd_twisting,
    "transporter-axioms": cmd_transporter_axioms,
    "dump": cmd_dump,
}


def run_report(doc: SpecDocument, command: str, opts: Optional[Options] = None, text: str = "") -> Report:
    """Run one command on a parsed document."""
    opts = opts or Options()
    if command not in RUNNERS:
        raise InputError(f"unknown command {command!r}")
    base = _inputs(text, doc.source, opts)
    return RUNNERS[command](Workspace(doc), opts, base)
