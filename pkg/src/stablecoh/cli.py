"""Command-line front end.

Exit status: 0 on success, 1 for invalid input, 2 when a mathematical
self-check fails (oracle mismatch, closure violation, bad quotient, ...).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .catalog import CATALOG, ALIASES, elementary_abelian, generator_names, group, natural_prime
from .linalg import SUPPORTED_PRIMES
from .perm import GroupError, GroupHom, Perm, PermGroup, brute_force_conjugators, close_generators, find_conjugator
from .resolution import (MAX_DEGREE, basis_classes, cup, minimal_resolution, resolution_for)
from .stable import (CategoryError, CategorySpec, StableEngine, aut_category, category_to_json,
                     cu_category, gamma_dims, identity_category, load_category, module_finiteness,
                     ring_closure_check, stable_report, validate_category)

PRESETS = ("cu", "aut", "identity", "dickson-1", "dickson-2", "dickson-3")


class UsageError(Exception):
    pass


class SelfCheckFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    prime: int | None = None
    max_degree: int = 6
    group: str | None = None
    category: str | None = None
    preset: str | None = None
    oracle: bool = False
    format: str = "text"
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not 0 <= self.max_degree <= MAX_DEGREE:
            raise UsageError(f"--max-degree must lie in 0..{MAX_DEGREE}")
        if self.prime is not None and self.prime not in SUPPORTED_PRIMES:
            raise UsageError(f"--prime must be one of {SUPPORTED_PRIMES}")
        if self.preset and self.category:
            raise UsageError("--preset and --category are mutually exclusive")

    def as_dict(self) -> dict:
        d = {"command": self.command, "prime": self.prime, "max_degree": self.max_degree,
             "group": self.group, "category": self.category, "preset": self.preset,
             "oracle": self.oracle, "deterministic": True}
        d.update(self.extra)
        return d


def _group(name: str | None) -> PermGroup:
    if not name:
        raise UsageError("--group is required")
    try:
        return group(name)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _prime(cfg: RunConfig) -> int:
    if cfg.prime is not None:
        return cfg.prime
    if cfg.group:
        return natural_prime(cfg.group)
    return 2


def _category(cfg: RunConfig) -> CategorySpec:
    if cfg.category:
        try:
            C = load_category(cfg.category)
        except OSError as e:
            raise UsageError(f"cannot read {cfg.category}: {e.strerror}") from None
        except (json.JSONDecodeError, CategoryError) as e:
            raise UsageError(f"invalid category file {cfg.category}: {e}") from None
        cfg.prime = C.prime
    else:
        preset = cfg.preset or "identity"
        if preset.startswith("dickson-"):
            n = int(preset.split("-")[1])
            if not 1 <= n <= 3:
                raise UsageError("dickson preset supports n = 1..3")
            C = aut_category(elementary_abelian(n), 2)
            C.label = preset
            cfg.prime = 2
        else:
            P = _group(cfg.group)
            p = _prime(cfg)
            builders = {"cu": cu_category, "aut": aut_category, "identity": identity_category}
            if preset not in builders:
                raise UsageError(f"unknown preset {preset!r}; expected one of {PRESETS}")
            C = builders[preset](P, p)
            cfg.prime = p
    rep = validate_category(C)
    if not rep.valid:
        raise UsageError("invalid category: " + "; ".join(rep.problems))
    return C


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------- commands

def cmd_cohomology(cfg: RunConfig) -> dict:
    G = _group(cfg.group)
    p = _prime(cfg)
    cfg.prime = p
    try:
        R = minimal_resolution(G, p, cfg.max_degree)
    except (GroupError, ValueError) as e:
        raise UsageError(str(e)) from None
    out: dict = {"group_order": G.order, "betti": R.betti()}
    problems = R.check()
    out["resolution_check"] = problems or "ok"
    checks = {"resolution": not problems}
    if cfg.oracle:
        from .bar import MAX_DEGREE as BAR_N, MAX_ORDER, bar_betti_oracle
        if G.order > MAX_ORDER:
            raise UsageError(f"bar oracle needs |G| <= {MAX_ORDER}")
        top = min(cfg.max_degree, BAR_N)
        orc = []
        for n in range(top + 1):
            orc.append(bar_betti_oracle(G, p, n))
            _progress(f"oracle degree {n}: {orc[-1]}")
        out["oracle_betti"] = orc
        out["oracle_agrees"] = orc == R.betti()[: top + 1]
        checks["oracle"] = out["oracle_agrees"]
    if cfg.extra.get("cups"):
        table = []
        for a in range(1, cfg.max_degree + 1):
            for b in range(a, cfg.max_degree + 1 - a):
                for i, x in enumerate(basis_classes(R, a)):
                    for j, y in enumerate(basis_classes(R, b)):
                        table.append({"x": [a, i], "y": [b, j], "product": list(cup(R, x, y).vector)})
        out["cups"] = table
    return {"result": out, "checks": checks}


def cmd_stable(cfg: RunConfig) -> dict:
    C = _category(cfg)
    eng = StableEngine(C, cfg.max_degree)
    rep = stable_report(C, cfg.max_degree, eng, _progress)
    closure = ring_closure_check(C, cfg.max_degree, eng) if C.mode == "subgroup" else None
    out = rep.as_dict()
    rank_ok = all(d.limit_dim + d.rank == d.source_dim for d in rep.degrees)
    checks = {"rank_nullity": rank_ok}
    if closure is not None:
        out["closure_checked"] = closure.checked
        checks["ring_closure"] = closure.closed
    if cfg.extra.get("dump_category"):
        with open(cfg.extra["dump_category"], "w") as fh:
            json.dump(category_to_json(C), fh, indent=2)
            fh.write("\n")
    return {"result": out, "checks": checks}


def cmd_gamma(cfg: RunConfig) -> dict:
    from .graph_of_groups import gamma_presentation
    C = _category(cfg)
    try:
        g = gamma_dims(C, cfg.max_degree)
        pres = gamma_presentation(C)
    except CategoryError as e:
        raise UsageError(str(e)) from None
    out = g.as_dict()
    out["presentation"] = {"generators": len(pres.generators), "relations": len(pres.relations),
                           "vertex_relations": pres.vertex_relation_count}
    path = cfg.extra.get("emit_presentation")
    if path:
        with open(path, "w") as fh:
            fh.write(pres.to_text())
    checks = {"degree_zero": g.gamma_dims[0] == 1}
    return {"result": out, "checks": checks}


def cmd_quotient(cfg: RunConfig) -> dict:
    from .graph_of_groups import finite_quotient
    C = _category(cfg)
    if C.mode != "subgroup":
        raise UsageError("quotient needs a subgroup-mode category")
    q = finite_quotient(C)
    d = q.as_dict()
    return {"result": d, "checks": {"relations": q.relations_ok, "injective_on_P": q.injective_on_P,
                                    "conjugation": q.conjugation_ok, "order_divides": q.divides_bound}}


_WORD = re.compile(r"[a-z]'?")


def _word_to_perm(P: PermGroup, word: str) -> Perm:
    names = generator_names(P)
    out = P.elements[0]
    text = word.replace("*", "").replace(" ", "")
    if text in ("", "e", "1"):
        return out
    pos = 0
    while pos < len(text):
        m = _WORD.match(text, pos)
        if not m or m.group(0)[0] not in names:
            raise UsageError(f"cannot parse word {word!r} over generators {names}")
        g = P.generators[names.index(m.group(0)[0])]
        out = out * (g.inverse() if m.group(0).endswith("'") else g)
        pos = m.end()
    return out


def cmd_conjugator(cfg: RunConfig) -> dict:
    P = _group(cfg.group)
    sub = cfg.extra.get("subgroup")
    qwords = [w.strip() for w in sub.split(",")] if sub else generator_names(P)
    qgens = [_word_to_perm(P, w) for w in qwords]
    phi_text = cfg.extra.get("phi")
    if not phi_text:
        raise UsageError("--phi is required, e.g. \"a:b,b:a\"")
    mapping = {}
    for part in phi_text.split(","):
        if ":" not in part:
            raise UsageError(f"bad --phi entry {part!r}")
        k, v = part.split(":", 1)
        mapping[k.strip()] = v.strip()
    missing = [w for w in qwords if w not in mapping]
    if missing:
        raise UsageError(f"--phi gives no image for {', '.join(missing)}")
    Q = close_generators(P.degree, qgens)
    imgs = tuple(_word_to_perm(P, mapping[w]) for w in qwords)
    try:
        phi = GroupHom(Q, P, imgs)
        if not phi.is_injective():
            raise UsageError("φ is not injective")
        w = find_conjugator(phi)
    except GroupError as e:
        raise UsageError(str(e)) from None
    emb = w.embedding
    out = {"conjugator": str(w.conjugator),
           "subgroup_order": Q.order,
           "verification": [{"q": str(emb(q)), "phi_q": str(emb(phi(q))),
                             "g_q_ginv": str(w.conjugator * emb(q) * w.conjugator.inverse())}
                            for q in Q.elements]}
    checks = {"witness": w.verify()}
    if cfg.oracle and P.order <= 8:
        all_g = brute_force_conjugators(phi)
        out["oracle_witness_count"] = len(all_g)
        checks["oracle"] = w.conjugator in all_g
    return {"result": out, "checks": checks}


def cmd_invariants(cfg: RunConfig) -> dict:
    from .invariants import (MatrixGroup2, compare_invariants_vs_limit, dickson_generators,
                             invariant_basis, swap_group)
    n = int(cfg.extra.get("rank") or 2)
    which = cfg.extra.get("matrix_group") or "gl"
    if which == "gl":
        H = MatrixGroup2.gl(n)
    elif which == "trivial":
        H = MatrixGroup2.trivial(n)
    elif which == "swap":
        if n != 2:
            raise UsageError("the swap group is defined for n = 2")
        H = swap_group()
    else:
        raise UsageError(f"unknown matrix group {which!r}")
    cfg.prime = 2
    out: dict = {"n": n, "group_order": H.order,
                 "invariant_dims": [invariant_basis(H, d).dim for d in range(cfg.max_degree + 1)]}
    checks = {}
    if n <= 4 and which == "gl":
        out["dickson"] = [{"degree": d, "poly": str(c)} for c, d in dickson_generators(n)]
    if n <= 3 and cfg.max_degree <= 8:
        cmp_ = compare_invariants_vs_limit(n, H, cfg.max_degree)
        out["comparison"] = cmp_.as_dict()
        checks["limit_matches_invariants"] = cmp_.ok
    return {"result": out, "checks": checks}


def cmd_finiteness(cfg: RunConfig) -> dict:
    C = _category(cfg)
    rep = module_finiteness(C, cfg.max_degree, window=int(cfg.extra.get("window") or 3))
    return {"result": rep.as_dict(), "checks": {}}


COMMANDS = {
    "cohomology": cmd_cohomology,
    "stable": cmd_stable,
    "gamma": cmd_gamma,
    "quotient": cmd_quotient,
    "conjugator": cmd_conjugator,
    "invariants": cmd_invariants,
    "finiteness": cmd_finiteness,
}


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg.validate()
        body = COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    env = {"tool": "stablecoh", "version": __version__, "config": cfg.as_dict(), **body}
    failed = [k for k, v in body.get("checks", {}).items() if v is False]
    env["status"] = "self-check failed: " + ", ".join(failed) if failed else "ok"
    if cfg.format == "json":
        out.write(json.dumps(env, indent=2, sort_keys=True, default=_jsonable) + "\n")
    else:
        out.write(_text(env))
    return 2 if failed else 0


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(type(x))


def _text(env: dict) -> str:
    lines = [f"stablecoh {env['version']} :: {env['config']['command']}"]

    def walk(d, indent=""):
        for k in sorted(d):
            v = d[k]
            if isinstance(v, dict):
                lines.append(f"{indent}{k}:")
                walk(v, indent + "  ")
            elif isinstance(v, list) and v and isinstance(v[0], dict):
                lines.append(f"{indent}{k}:")
                for item in v:
                    lines.append(f"{indent}  - " + ", ".join(f"{a}={item[a]}" for a in sorted(item)))
            else:
                lines.append(f"{indent}{k}: {v}")

    walk(env["result"])
    for k, v in sorted(env.get("checks", {}).items()):
        lines.append(f"check {k}: {'pass' if v else 'FAIL'}")
    lines.append(f"status: {env['status']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stablecoh", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, category=False):
        p.add_argument("--group", help="catalog group: " + ", ".join(sorted(CATALOG)))
        p.add_argument("--prime", type=int)
        p.add_argument("--max-degree", type=int, default=6)
        p.add_argument("--format", choices=("text", "json"), default="text")
        if category:
            p.add_argument("--preset", help="one of " + ", ".join(PRESETS))
            p.add_argument("--category", help="CategorySpec JSON file")

    p = sub.add_parser("cohomology", help="Betti numbers of a minimal resolution")
    common(p)
    p.add_argument("--oracle", action="store_true", help="cross-check with the bar complex")
    p.add_argument("--cups", action="store_true", help="include the cup product table")

    p = sub.add_parser("stable", help="limit dimensions and bases")
    common(p, True)
    p.add_argument("--dump-category", metavar="PATH")

    p = sub.add_parser("gamma", help="cohomology dimensions of Γ and its presentation")
    common(p, True)
    p.add_argument("--emit-presentation", metavar="PATH")

    p = sub.add_parser("quotient", help="finite quotient of Γ in Sym(|P|)")
    common(p, True)

    p = sub.add_parser("conjugator", help="a translation conjugator realizing φ")
    common(p)
    p.add_argument("--phi", help='images of the subgroup generators, e.g. "a:b,b:a"')
    p.add_argument("--subgroup", help="subgroup generators as words, e.g. \"a\"")
    p.add_argument("--oracle", action="store_true", help="confirm against exhaustive search")

    p = sub.add_parser("invariants", help="fixed spaces and Dickson generators over F_2")
    common(p)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--matrix-group", choices=("gl", "swap", "trivial"), default="gl")

    p = sub.add_parser("finiteness", help="module generators over the limit ring")
    common(p, True)
    p.add_argument("--window", type=int, default=3)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {"command", "group", "prime", "max_degree", "format", "preset", "category", "oracle"}
    extra = {k: v for k, v in vars(ns).items() if k not in known and v not in (None, False)}
    return RunConfig(ns.command, ns.prime, ns.max_degree, ns.group, getattr(ns, "category", None),
                     getattr(ns, "preset", None), getattr(ns, "oracle", False), ns.format, extra)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
