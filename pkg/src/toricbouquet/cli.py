"""Command-line front end.

Every subcommand reads its inputs, calls one library routine and prints the
result either as plain text (matrices and vector sets in the "rows cols"
format) or as JSON holding the same numbers.  Exit status: 0 on success,
2 when a result is mathematically inconclusive, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bases, bouquets, constructors, core
from .formats import format_matrix, format_rows, parse_matrix, parse_vector
from .hypergraphs import Hypergraph, format_hypergraph, incidence_matrix, parse_hypergraph

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    output_format: str = "text"
    graver_cap: int = bases.DEFAULT_GRAVER_CAP
    fiber_cap: int | None = None
    minor_cap: int = core.DEFAULT_MINOR_CAP
    seed: int = 0
    threads: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("graver_cap", "minor_cap", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.fiber_cap is not None and self.fiber_cap < 1:
            raise ValueError("fiber_cap must be positive")
        if self.output_format not in ("text", "json"):
            raise ValueError("format must be text or json")


class _Inconclusive(Exception):
    def __init__(self, reason: str, payload: dict | None = None):
        super().__init__(reason)
        self.payload = payload or {}


# input helpers

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_matrix(cfg: RunConfig) -> core.IntMatrix:
    if not cfg.inputs:
        raise ValueError("an input file is required")
    text = _read(cfg.inputs[0])
    if cfg.options.get("hypergraph"):
        return incidence_matrix(parse_hypergraph(text))
    return parse_matrix(text)


def _index_list(text: str | None, n: int) -> list[int]:
    """Comma-separated 1-based indices to sorted 0-based ones."""
    if not text:
        return []
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        k = int(tok)
        if not 1 <= k <= n:
            raise ValueError(f"index {k} outside 1..{n}")
        out.append(k - 1)
    return sorted(set(out))


def _parts(text: str, n: int) -> list[list[int]]:
    return [_index_list(p, n) for p in text.split(";") if p.strip()]


def _vectors(rows) -> list[list[int]]:
    return [list(r) for r in rows]


def _vector_block(rows, width: int) -> str:
    return format_rows(list(rows), width=width)


# subcommands; each returns (json payload, text)

def cmd_bouquets(cfg, A):
    if cfg.options.get("stable"):
        dec = bouquets.canonical_stable_decomposition(A)
    elif cfg.options.get("parts"):
        dec = bouquets.subbouquet_decomposition(A, _parts(cfg.options["parts"], A.cols))
    else:
        dec = bouquets.compute_bouquets(A)
    payload = dec.to_json()
    lines = []
    for k, b in enumerate(payload["bouquets"], 1):
        lines.append(f"B{k} {b['kind']} indices={','.join(map(str, b['indices']))} "
                     f"c={','.join(map(str, b['c']))} a={','.join(map(str, b['a']))}")
    text = "\n".join(lines) + "\nA_B\n" + format_matrix(dec.bouquet_matrix)
    return payload, text


def _graver(cfg, A):
    return bases.graver_basis(A, cap=cfg.graver_cap)


def cmd_graver(cfg, A):
    gr = _graver(cfg, A)
    return {"graver": _vectors(gr)}, _vector_block(gr, A.cols)


def cmd_circuits(cfg, A):
    ci = bases.circuits(A, _graver(cfg, A))
    return {"circuits": _vectors(ci)}, _vector_block(ci, A.cols)


def cmd_markov(cfg, A):
    gr = _graver(cfg, A)
    if not bases.is_positively_graded(A, gr):
        raise bases.NotPositivelyGraded("not positively graded: minimal Markov bases need finite fibers")
    mk = bases.minimal_markov_basis(A, gr)
    return {"markov": _vectors(mk)}, _vector_block(mk, A.cols)


def cmd_indispensable(cfg, A):
    gr = _graver(cfg, A)
    if not bases.is_positively_graded(A, gr):
        raise bases.NotPositivelyGraded("not positively graded")
    ind = bases.indispensable_binomials(A, gr)
    return {"indispensable": _vectors(ind)}, _vector_block(ind, A.cols)


def cmd_fiber(cfg, A):
    point = parse_vector(cfg.options["point"])
    if len(point) != A.cols:
        raise ValueError(f"point has {len(point)} coordinates, expected {A.cols}")
    f = bases.fiber_of(A, point, caps=cfg.fiber_cap)
    payload = {"degree": list(f.degree), "fiber": _vectors(f), "complete": f.complete}
    text = _vector_block(f, A.cols)
    if not f.complete:
        raise _Inconclusive("fiber search truncated by the search box", payload)
    return payload, text


def _tri(v) -> str:
    return "unknown" if v is None else str(v).lower()


def cmd_classify(cfg, A):
    gr = _graver(cfg, A)
    dec = bouquets.compute_bouquets(A)
    pg = bases.is_positively_graded(A, gr)
    report = bases.classify_lawrence(A)
    payload = {
        "stable": not dec.mixed_indices,
        "positively_graded": pg,
        "empty_set_lawrence": report.cond_b,
        "generic": bases.is_generic(A, gr) if pg else False,
        "mixed_bouquets": [k + 1 for k in dec.mixed_indices],
        "cond_a": report.cond_a,
        "cond_b": report.cond_b,
        "cond_c": report.cond_c,
        "S": [k + 1 for k in report.S],
        "witness": None if report.witness is None else [list(x) for x in report.witness],
    }
    try:
        uc = bouquets.check_unimodular_correspondence(A, cap=cfg.minor_cap, threads=cfg.threads)
        payload["unimodular"] = uc.uni_A
        payload["unimodular_AB"] = uc.uni_AB
    except core.SizeLimitExceeded as exc:
        payload["unimodular"] = None
        payload["unimodular_reason"] = str(exc)
    if cfg.options.get("set") is not None:
        S = _index_list(cfg.options["set"], A.cols)
        payload["s_lawrence"] = bases.is_s_lawrence(A, S, gr)
        payload["s_lawrence_set"] = [k + 1 for k in S]
    lines = [f"{k}: {_tri(v) if v is None or isinstance(v, bool) else v}"
             for k, v in payload.items() if k not in ("witness",)]
    if report.witness is not None:
        u, v, w = report.witness
        lines.append(f"witness: {u} = {v} +sc {w}")
    text = "\n".join(lines) + "\n"
    undecided = [k for k in ("cond_a", "cond_b", "cond_c", "s_lawrence") if k in payload and payload[k] is None]
    if undecided:
        raise _Inconclusive(f"undecided: {', '.join(undecided)} (fiber search truncated)", payload)
    return payload, text


def cmd_lift(cfg, A):
    dec = bouquets.compute_bouquets(A)
    u = parse_vector(cfg.options["vector"])
    v = bouquets.lift_vector(dec, u)
    return {"lift": list(v)}, " ".join(map(str, v)) + "\n"


def cmd_unlift(cfg, A):
    dec = bouquets.compute_bouquets(A)
    v = parse_vector(cfg.options["vector"])
    u = bouquets.unlift_vector(dec, v)
    return {"unlift": list(u)}, " ".join(map(str, u)) + "\n"


def cmd_oracle(cfg, A):
    rep = bases.graver_oracle(A, cfg.options.get("bound") or 3, _graver(cfg, A))
    payload = {"bound": rep.bound, "enumerated": rep.enumerated, "graver_in_box": rep.graver_in_box,
               "minimal_in_box": rep.minimal_in_box, "agree": rep.agree,
               "box_covers_graver": rep.box_covers_graver}
    text = "".join(f"{k}: {str(v).lower() if isinstance(v, bool) else v}\n" for k, v in payload.items())
    if not rep.agree:
        raise bases.TheoremViolation(f"Graver basis and bounded enumeration disagree on {list(rep.mismatches)}")
    return payload, text


def _random_matrix(rng: random.Random, rows: int, cols: int, lo: int, hi: int) -> list[list[int]]:
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def cmd_search(cfg, A=None):
    """Random nonnegative matrices that are ∅-Lawrence with no mixed bouquet."""
    rng = random.Random(cfg.seed)
    trials = cfg.options.get("trials") or 100
    candidates, examined, undecided = [], 0, 0
    for _ in range(trials):
        m = rng.randint(1, 3)
        n = rng.randint(m + 1, m + 3)
        M = core.IntMatrix.from_rows(_random_matrix(rng, m, n, 0, 3))
        if not any(M.entries):
            continue
        try:
            dec = bouquets.compute_bouquets(M)
            if dec.mixed_indices:
                continue
            examined += 1
            gr = bases.graver_basis(M, cap=cfg.graver_cap)
            if gr and bases.empty_set_lawrence(M, gr):
                candidates.append(M.tolist())
        except (core.SizeLimitExceeded, core.Inconclusive):
            undecided += 1
    payload = {"seed": cfg.seed, "trials": trials, "examined_without_mixed": examined,
               "undecided": undecided, "candidates": candidates}
    text = (f"seed: {cfg.seed}\ntrials: {trials}\nexamined_without_mixed: {examined}\n"
            f"undecided: {undecided}\ncandidates: {len(candidates)}\n")
    text += "".join(format_rows(c) for c in candidates)
    return payload, text


# construct

def _write_outputs(prefix: str | None, matrix: core.IntMatrix, H: Hypergraph | None = None):
    if not prefix:
        return
    Path(prefix + ".mat").write_text(format_matrix(matrix))
    if H is not None:
        Path(prefix + ".hyp").write_text(format_hypergraph(H))


def cmd_construct(cfg):
    what = cfg.options["what"]
    H = None
    extra: dict = {}
    if what == "lawrence":
        spec_data = json.loads(_read(cfg.inputs[0]))
        spec = constructors.LawrenceSpec(spec_data["a"], spec_data["c"], spec_data.get("lambda"))
        M = constructors.generalized_lawrence(spec)
    elif what == "lambda":
        M = constructors.second_lawrence(parse_matrix(_read(cfg.inputs[0])))
    elif what == "hypergraph":
        H = constructors.hypergraph_from_matrix(parse_matrix(_read(cfg.inputs[0])))
        M = incidence_matrix(H)
    elif what == "encode01":
        M = constructors.encode01_stable(parse_matrix(_read(cfg.inputs[0])))
    elif what == "sunflower":
        cores = [t for t in (cfg.options.get("cores") or "").split(",") if t]
        petals = [int(t) for t in (cfg.options.get("petals") or "").split(",") if t]
        matching = cfg.options.get("matching") or "cyclic"
        if matching != "cyclic":
            matching = [tuple(int(x) for x in e.split("-")) for e in matching.split(",")]
        H = constructors.build_sunflower_family(cores, petals, matching,
                                                cfg.options.get("petal_size") or 3)
        M = incidence_matrix(H)
    elif what == "witness":
        H, w = constructors.build_complete_uniform_witness(cfg.options.get("d") or 2)
        M = incidence_matrix(H)
        extra["witness"] = list(w)
    else:
        raise ValueError(f"unknown construction {what!r}")
    _write_outputs(cfg.options.get("out"), M, H)
    payload = {"matrix": M.tolist(), **extra}
    if H is not None:
        payload["hypergraph"] = {"vertex_count": H.vertex_count, "edges": [list(e) for e in H.edges]}
    text = format_hypergraph(H) if H is not None else format_matrix(M)
    if "witness" in extra:
        text += "witness: " + " ".join(map(str, extra["witness"])) + "\n"
    return payload, text


COMMANDS = {
    "bouquets": cmd_bouquets,
    "graver": cmd_graver,
    "circuits": cmd_circuits,
    "markov": cmd_markov,
    "indispensable": cmd_indispensable,
    "fiber": cmd_fiber,
    "classify": cmd_classify,
    "lift": cmd_lift,
    "unlift": cmd_unlift,
    "oracle": cmd_oracle,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr

    def emit(payload, text):
        if cfg.output_format == "json":
            out.write(json.dumps(payload) + "\n")
        else:
            out.write(text)

    try:
        if cfg.subcommand == "construct":
            emit(*cmd_construct(cfg))
        elif cfg.subcommand == "search-open-q4":
            emit(*cmd_search(cfg))
        else:
            A = _load_matrix(cfg)
            emit(*COMMANDS[cfg.subcommand](cfg, A))
        return EXIT_OK
    except (_Inconclusive, core.Inconclusive) as exc:
        payload = {"status": "inconclusive", "reason": str(exc), **getattr(exc, "payload", {})}
        out.write(json.dumps(payload) + "\n")
        return EXIT_INCONCLUSIVE
    except (core.ToricError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        if isinstance(exc, KeyError):
            exc = f"missing field {exc}"
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors exit 1; status 2 is reserved for inconclusive results
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cap-graver", type=int, default=bases.DEFAULT_GRAVER_CAP)
    common.add_argument("--cap-fiber", type=int, default=None)
    common.add_argument("--cap-minors", type=int, default=core.DEFAULT_MINOR_CAP)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="toricbouquet", description="Bouquets, Graver/Markov data and Lawrence conditions of integer matrices.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def matrix_cmd(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("input", help="matrix file ('rows cols' header), or - for stdin")
        sp.add_argument("--hypergraph", action="store_true",
                        help="read a hypergraph file and use its incidence matrix")
        return sp

    sp = matrix_cmd("bouquets", "bouquet decomposition and the bouquet matrix")
    sp.add_argument("--parts", help="explicit subbouquets, e.g. '1,6;2,5;3,4;7'")
    sp.add_argument("--stable", action="store_true", help="canonical stable decomposition")
    matrix_cmd("graver", "Graver basis")
    matrix_cmd("circuits", "circuits")
    matrix_cmd("markov", "a minimal Markov basis")
    matrix_cmd("indispensable", "indispensable binomials")
    sp = matrix_cmd("fiber", "fiber of a nonnegative point")
    sp.add_argument("--point", required=True)
    sp = matrix_cmd("classify", "stability, grading, Lawrence conditions, genericity, unimodularity")
    sp.add_argument("--set", help="1-based columns for an S-Lawrence test")
    sp = matrix_cmd("lift", "lift a kernel vector of the bouquet matrix")
    sp.add_argument("--vector", required=True)
    sp = matrix_cmd("unlift", "inverse of lift")
    sp.add_argument("--vector", required=True)
    sp = matrix_cmd("oracle", "compare the Graver basis with bounded enumeration")
    sp.add_argument("--bound", type=int, default=3)

    sp = sub.add_parser("construct", parents=[common], help="build matrices and hypergraphs")
    sp.add_argument("what", choices=("lawrence", "lambda", "hypergraph", "encode01", "sunflower", "witness"))
    sp.add_argument("input", nargs="?", help="matrix file, or a JSON {a, c, lambda} file for lawrence")
    sp.add_argument("--out", help="write PREFIX.mat (and PREFIX.hyp for hypergraphs)")
    sp.add_argument("--cores", help="sunflower core labels, comma-separated")
    sp.add_argument("--petals", help="petal count per sunflower, comma-separated")
    sp.add_argument("--petal-size", type=int, default=3)
    sp.add_argument("--matching", default="cyclic", help="'cyclic' or edges like '4-5,6-7'")
    sp.add_argument("--d", type=int, default=2)

    sp = sub.add_parser("search-open-q4", parents=[common],
                        help="random search for an ∅-Lawrence matrix without mixed bouquets")
    sp.add_argument("--trials", type=int, default=100)
    return p


_OPTION_KEYS = ("parts", "stable", "point", "set", "vector", "bound", "what", "out", "cores", "petals",
                "petal_size", "matching", "d", "trials", "hypergraph")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = [ns.input] if getattr(ns, "input", None) else []
    options = {k: getattr(ns, k) for k in _OPTION_KEYS if hasattr(ns, k)}
    return RunConfig(ns.subcommand, inputs, ns.format, ns.cap_graver, ns.cap_fiber, ns.cap_minors,
                     ns.seed, ns.threads, options)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    if cfg.subcommand == "construct" and ns.what not in ("sunflower", "witness") and not cfg.inputs:
        sys.stderr.write("error: this construction needs an input file\n")
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
