"""Command-line entry point.

Exit codes: 0 success, 1 negative answer (reject, disjoint, failed
invariant), 2 malformed input or unmet precondition, 3 resource cap hit.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import experiments as ex
from . import kernels, oracles
from . import serialize as ser
from .blind import (AutomatonCache, BlindAutomaton, PreconditionError, accept,
                    accept_with_certificate, automaton_constants, format_word, parse_word)
from .cho import ChoAutomaton, blind_det_to_cho, cho_accept, cho_to_blind
from .config import Config, ResourceLimitError
from .groups import (GenMap, HeisenbergGroup, build_wp_automaton,
                     exchange_index, heisenberg_evaluate)
from .semilinear import (SemilinearSet, bounded_preimage, compute_LM,
                         intersect_witness, intersection_bound, norm)

OK, NEGATIVE, MALFORMED, RESOURCE = 0, 1, 2, 3


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, data: dict, text: str):
        self.stream.write(ser.dumps(data) if self.fmt == "json" else text.rstrip("\n") + "\n")


def _load(path, kind):
    obj = ser.load(path)
    if not isinstance(obj, kind):
        raise ser.FormatError(f"{path}: expected {kind.__name__}, found {type(obj).__name__}")
    return obj


def _word(text: str) -> tuple:
    return parse_word(text)


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


# ---------------------------------------------------------------------------
# subcommands


def cmd_accept(args, cfg, out):
    A = _load(args.automaton, BlindAutomaton)
    w = _word(args.word)
    cache = AutomatonCache(A, cfg.component_cap)
    if args.certificate:
        run = accept_with_certificate(A, w, cache, cfg.search_budget)
        ok = run is not None
        cert = None
        text = "accept" if ok else "reject"
        if ok:
            cert = {"edges": [{"src": e.src, "inc": list(e.inc), "input": e.input, "dst": e.dst}
                              for e in run.edges], "trace": [list(t) for t in run.trace]}
            text += "\n" + "\n".join(
                f"  {e.src} --({','.join(map(str, e.inc))}; {e.input or 'ε'})--> {e.dst}"
                for e in run.edges)
        out.emit({"word": format_word(w), "accepted": ok, "certificate": cert}, text)
    else:
        ok = accept(A, w, cache)
        out.emit({"word": format_word(w), "accepted": ok}, "accept" if ok else "reject")
    return OK if ok else NEGATIVE


def cmd_cho_accept(args, cfg, out):
    B = _load(args.automaton, ChoAutomaton)
    w = _word(args.word)
    ok = cho_accept(B, w, cfg.vector_set_cap)
    out.emit({"word": format_word(w), "accepted": ok}, "accept" if ok else "reject")
    return OK if ok else NEGATIVE


def cmd_convert(args, cfg, out):
    if args.direction == "cho-to-blind":
        result = cho_to_blind(_load(args.input, ChoAutomaton))
    else:
        result = blind_det_to_cho(_load(args.input, BlindAutomaton))
    ser.save(result, args.output)
    out.emit({"written": args.output, "states": len(result.states), "edges": len(result.edges)},
             f"wrote {args.output}: {len(result.states)} states, {len(result.edges)} edges")
    return OK


def cmd_build_wp(args, cfg, out):
    g = _load(args.group, GenMap)
    A = build_wp_automaton(g.group, g)
    ser.save(A, args.output)
    out.emit({"written": args.output, "states": len(A.states), "edges": len(A.edges)},
             f"wrote {args.output}: {len(A.states)} states, {len(A.edges)} edges")
    return OK


def cmd_reach(args, cfg, out):
    A = _load(args.automaton, BlindAutomaton)
    R = AutomatonCache(A, cfg.component_cap).reach
    entries = [{"src": p, "dst": q, "set": ser.semilinear_to_json(R[p, q])}
               for p in A.states for q in A.states]
    text = "\n".join(f"R[{p}, {q}] = {R[p, q]}" for p in A.states for q in A.states)
    out.emit({"reach": entries}, text)
    return OK


def cmd_intersect(args, cfg, out):
    S = _load(args.S, SemilinearSet)
    T = _load(args.T, SemilinearSet)
    b = intersection_bound(S, T)
    w = intersect_witness(S, T)
    data = {"witness": list(w) if w is not None else None, "disjoint": w is None,
            "C": b.C, "D": b.D, "m": b.m, "bound": b.bound}
    head = "disjoint" if w is None else f"witness {w} (norm {norm(w)})"
    out.emit(data, f"{head}\nC = {_frac(b.C)}, D = {_frac(b.D)}, m = {b.m}, "
                   f"bound C*m + D = {_frac(b.bound)}")
    return NEGATIVE if w is None else OK


def cmd_constants(args, cfg, out):
    A = _load(args.automaton, BlindAutomaton)
    c = automaton_constants(A, AutomatonCache(A, cfg.component_cap), cfg.constants_period_cap)
    data = {"F": c.F, "K": c.K, "R": c.R, "C": c.C, "D": c.D, "P": c.P, "Q": c.Q}
    out.emit(data, "\n".join(f"{k} = {_frac(v)}" for k, v in data.items()))
    return OK


def cmd_growth(args, cfg, out):
    if args.heisenberg:
        table = ex.ball_sizes(HeisenbergGroup(), ["x", "x'", "y", "y'"], args.radius, cfg.ball_cap)
    else:
        if args.group is None:
            raise PreconditionError("give a group file or --heisenberg")
        g = _load(args.group, GenMap)
        table = ex.ball_sizes(g.group, g, args.radius, cfg.ball_cap)
    out.emit(table.to_dict(), table.to_text())
    return OK


def cmd_witness(args, cfg, out):
    A = _load(args.automaton, BlindAutomaton)
    g = _load(args.group, GenMap)
    rep = ex.witness_map_experiment(A, g.group, g, args.radius, config=cfg)
    out.emit(rep.to_dict(), rep.to_text())
    return OK if rep.ok else NEGATIVE


def cmd_interchange(args, cfg, out):
    rep = ex.heisenberg_interchange_experiment(args.heisenberg_n)
    out.emit(rep.to_dict(), rep.to_text())
    return OK if rep.ok else NEGATIVE


# ---------------------------------------------------------------------------
# selftest: quick randomized oracle comparisons


def _selftest_suites(rng: random.Random, scale: int):
    def acceptance():
        bad = 0
        for _ in range(20 * scale):
            A = oracles.random_blind(rng)
            cache = AutomatonCache(A)
            bad += sum(accept(A, w, cache) != oracles.bfs_accept(A, w)
                       for w in oracles.words(["a", "a'"], 3))
        return bad

    def preimage():
        bad = 0
        for _ in range(10 * scale):
            m = oracles.random_linear_map(rng, 3, 3)
            bc = compute_LM(m)
            img = oracles.preimage_image(m, int(bc.L * 4 + bc.M) + 1, 4)
            for v in (tuple(int(x) for x in p) for r in range(5) for p in kernels.shell_points(m.codomain_dim, r)):
                u = bounded_preimage(m, v, bc)
                bad += (u is not None) != (v in img)
                bad += u is not None and (m(u) != v or norm(u) > bc.bound(v))
        return bad

    def intersection():
        bad = 0
        for _ in range(20 * scale):
            n = rng.randint(1, 2)
            S, T = oracles.random_semilinear(rng, n), oracles.random_semilinear(rng, n)
            w = intersect_witness(S, T)
            if w is None:
                bad += oracles.meets(S, T, 25)
            else:
                bad += not (oracles.linear_union_contains(S, w, 60)
                            and oracles.linear_union_contains(T, w, 60)
                            and norm(w) < intersection_bound(S, T).bound)
        return bad

    def cho():
        bad = 0
        for _ in range(10 * scale):
            B = oracles.random_cho(rng)
            A = cho_to_blind(B)
            cache = AutomatonCache(A)
            bad += sum(cho_accept(B, w) != accept(A, w, cache) for w in oracles.words(["a", "a'"], 4))
        for _ in range(5 * scale):
            A = oracles.random_det_blind(rng)
            C = blind_det_to_cho(A)
            cache = AutomatonCache(A)
            bad += sum(cho_accept(C, w) != accept(A, w, cache) for w in oracles.words(["a", "a'"], 4))
        return bad

    def word_problem():
        bad = 0
        for n in (1, 2):
            g = GenMap.standard(n)
            bad += len(ex.wp_sweep(build_wp_automaton(g.group, g), g, 5).disagreements)
        return bad

    def heisenberg():
        bad = len(ex.exchange_equivalence(8).counterexamples)
        bad += not ex.heisenberg_interchange_experiment(6).ok
        bad += heisenberg_evaluate(parse_word("x' y' x y")) != heisenberg_evaluate(("z",))
        bad += exchange_index(("y", "x")) != 1
        return bad

    def growth():
        g = GenMap.standard(2)
        sizes = ex.ball_sizes(g.group, g, 6).sizes
        return sum(s != 2 * r * r + 2 * r + 1 for r, s in enumerate(sizes))

    return [("acceptance vs configuration search", acceptance),
            ("bounded preimage vs enumeration", preimage),
            ("intersection vs enumeration", intersection),
            ("Cho conversions", cho),
            ("word-problem automata", word_problem),
            ("Heisenberg combinatorics", heisenberg),
            ("growth of Z^2", growth)]


def cmd_selftest(args, cfg, out):
    rng = random.Random(cfg.seed)
    results = []
    for name, fn in _selftest_suites(rng, args.scale):
        results.append({"suite": name, "failures": int(fn())})
    ok = all(r["failures"] == 0 for r in results)
    text = "\n".join(f"{'PASS' if r['failures'] == 0 else 'FAIL'}  {r['suite']}"
                     + (f"  ({r['failures']} failures)" if r["failures"] else "") for r in results)
    out.emit({"backend": kernels.backend(), "seed": cfg.seed, "suites": results, "ok": ok},
             f"backend: {kernels.backend()}, seed {cfg.seed}\n{text}")
    return OK if ok else NEGATIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--seed", type=int, default=None)
    for name in ("component-cap", "vector-set-cap", "search-budget", "ball-cap",
                 "constants-period-cap", "workers"):
        common.add_argument(f"--{name}", type=int, default=None,
                            help=f"overrides BLINDCOUNTER_{name.upper().replace('-', '_')}")

    p = argparse.ArgumentParser(prog="blindcounter", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("accept", parents=[common], help="decide membership of a word")
    s.add_argument("automaton")
    s.add_argument("word")
    s.add_argument("--certificate", action="store_true", help="print an accepting run")
    s.set_defaults(fn=cmd_accept)

    s = sub.add_parser("cho-accept", parents=[common], help="membership for a Cho automaton")
    s.add_argument("automaton")
    s.add_argument("word")
    s.set_defaults(fn=cmd_cho_accept)

    s = sub.add_parser("convert", parents=[common], help="Cho <-> blind conversions")
    s.add_argument("direction", choices=("cho-to-blind", "blind-to-cho"))
    s.add_argument("input")
    s.add_argument("output")
    s.set_defaults(fn=cmd_convert)

    s = sub.add_parser("build-wp", parents=[common], help="word-problem automaton of a group")
    s.add_argument("group")
    s.add_argument("output")
    s.set_defaults(fn=cmd_build_wp)

    s = sub.add_parser("reach", parents=[common], help="epsilon register sets R[p, q]")
    s.add_argument("automaton")
    s.set_defaults(fn=cmd_reach)

    s = sub.add_parser("intersect", parents=[common], help="common element of two semilinear sets")
    s.add_argument("S")
    s.add_argument("T")
    s.set_defaults(fn=cmd_intersect)

    s = sub.add_parser("constants", parents=[common], help="F, K, R, C, D, P, Q of an automaton")
    s.add_argument("automaton")
    s.set_defaults(fn=cmd_constants)

    s = sub.add_parser("growth", parents=[common], help="ball sizes in a Cayley graph")
    s.add_argument("group", nargs="?")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--heisenberg", action="store_true", help="use the Heisenberg group on x, y")
    s.set_defaults(fn=cmd_growth)

    s = sub.add_parser("witness-experiment", parents=[common], help="check the short-witness bounds")
    s.add_argument("automaton")
    s.add_argument("group")
    s.add_argument("--radius", type=int, required=True)
    s.set_defaults(fn=cmd_witness)

    s = sub.add_parser("interchange", parents=[common], help="Heisenberg block-swap table")
    s.add_argument("--heisenberg-n", type=int, required=True)
    s.set_defaults(fn=cmd_interchange)

    s = sub.add_parser("selftest", parents=[common], help="randomized oracle comparisons")
    s.add_argument("--scale", type=int, default=1)
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None, stdout=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out_stream = stdout or sys.stdout
    try:
        cfg = Config.from_env(
            component_cap=args.component_cap, vector_set_cap=args.vector_set_cap,
            search_budget=args.search_budget, ball_cap=args.ball_cap,
            constants_period_cap=args.constants_period_cap, workers=args.workers,
            output_format=args.format, seed=args.seed)
        args.format = cfg.output_format
        return args.fn(args, cfg, Output(cfg.output_format, out_stream))
    except ResourceLimitError as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return RESOURCE
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
