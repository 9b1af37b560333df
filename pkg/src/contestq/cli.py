"""Command-line interface.

Commands: solve, verify, dynamics, graph, concavity, instance, classify.
Exit codes: 0 success / equilibrium found / property holds; 1 negative
result (no equilibrium, cycle found, concavity fails, truncated walk);
2 usage or precondition error.

Profiles on the command line are comma-separated 1-indexed qualities
("1,2,2"); load vectors carry an "L:" prefix ("L:2,1,0").  Identical
inputs and seed give byte-identical stdout; timing goes to stderr.
The CONTESTQ_CAP environment variable overrides the default caps of
10^6 profiles and 10^5 graph nodes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional, Sequence

from .dynamics import (
    PathStatus,
    analyze_graph,
    build_improvement_graph,
    run_improvement_path,
    to_dot,
)
from .errors import ContestError
from .game import ContestGame, Profile, is_pne, load_of, utility
from .gamefile import load_game, save_game, serialize_game
from .instances import INSTANCE_IDS, build, verify_certificate
from .payments import PaymentKind, classify
from .potential import potential_ascent
from .rationals import format_rational
from .solvers import (
    brute_force_pne,
    concavity_report,
    is_three_discrete_concave_invariant,
    is_three_discrete_concave_specific,
    solve_all_at_lowest,
    solve_contiguous_invariant,
    solve_contiguous_specific,
)

DEFAULT_PROFILE_CAP = 10**6
DEFAULT_NODE_CAP = 10**5


def _cap(default: int, override: Optional[int]) -> int:
    if override is not None:
        return override
    env = os.environ.get("CONTESTQ_CAP")
    return int(env) if env else default


def parse_profile(text: str) -> Profile:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ContestError(f"bad profile {text!r}; expected e.g. 1,2,2") from None


def parse_state(game: ContestGame, text: str) -> Profile:
    """A profile ("1,2,2") or a load vector ("L:2,1,0").

    Load vectors are expanded to the contiguous profile they induce
    (players in non-increasing skill order fill qualities left to
    right).
    """
    if text.startswith("L:"):
        from .solvers import contiguous_assignment

        loads = parse_profile(text[2:])
        if len(loads) != game.Q or sum(loads) != game.n or min(loads) < 0:
            raise ContestError(
                f"bad load vector {text!r}: need {game.Q} non-negative "
                f"entries summing to {game.n}"
            )
        return contiguous_assignment(game, loads).profile
    return parse_profile(text)


def _emit_pne(game: ContestGame, profile: Profile, fmt: str, method: str,
              candidates: int) -> None:
    loads = load_of(profile, game.Q)
    utilities = [format_rational(utility(game, profile, i))
                 for i in game.players()]
    if fmt == "json":
        print(json.dumps({
            "status": "pne",
            "method": method,
            "profile": list(profile),
            "loads": list(loads),
            "utilities": utilities,
            "candidates": candidates,
        }, sort_keys=True))
    else:
        print(f"pure Nash equilibrium: {','.join(map(str, profile))}")
        print(f"loads: L:{','.join(map(str, loads))}")
        print(f"utilities: {' '.join(utilities)}")
        print(f"candidates checked: {candidates}")


def _emit_none(fmt: str, method: str, candidates: int, message: str) -> None:
    if fmt == "json":
        print(json.dumps({
            "status": "none",
            "method": method,
            "candidates": candidates,
            "message": message,
        }, sort_keys=True))
    else:
        print(message)


def cmd_solve(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    cap = _cap(DEFAULT_PROFILE_CAP, args.max_profiles)
    started = time.perf_counter()
    method = args.method
    if method == "brute":
        result = brute_force_pne(game, find_all=args.all, cap=cap)
        found = result.found
        candidates = result.scanned
        if found is not None and args.all and args.format == "text":
            for prof in result.all or ():
                print(f"pne: {','.join(map(str, prof))}")
    elif method == "contiguous":
        if game.payment.kind is PaymentKind.PLAYER_SPECIFIC_TABLE:
            outcome = solve_contiguous_specific(
                game, check_concavity=not args.trust_concavity,
                workers=args.workers)
        else:
            outcome = solve_contiguous_invariant(
                game, check_concavity=not args.trust_concavity,
                workers=args.workers)
        found = outcome.assignment.profile if outcome.assignment else None
        candidates = outcome.candidates
    elif method == "all-at-one":
        found = solve_all_at_lowest(game)
        candidates = 1
    elif method == "potential":
        found = potential_ascent(game, (1,) * game.n)
        candidates = 1
    else:  # pragma: no cover - argparse choices guard this
        raise ContestError(f"unknown method {method!r}")
    elapsed = time.perf_counter() - started
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    if found is None:
        scanned_note = (f"no pure Nash equilibrium ({candidates} profiles scanned)"
                        if method == "brute" else
                        f"no pure Nash equilibrium ({candidates} candidates checked)"
                        if method == "contiguous" else
                        "no pure Nash equilibrium under this method's guarantee")
        _emit_none(args.format, method, candidates, scanned_note)
        return 1
    _emit_pne(game, found, args.format, method, candidates)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    if args.profile_file:
        with open(args.profile_file, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if not isinstance(payload, dict) or "profile" not in payload:
            raise ContestError(f"{args.profile_file}: no 'profile' key")
        profile = tuple(int(q) for q in payload["profile"])
    elif args.profile:
        profile = parse_state(game, args.profile)
    else:
        raise ContestError("verify needs --profile or --profile-file")
    verdict = is_pne(game, profile)
    if verdict:
        utilities = " ".join(format_rational(utility(game, profile, i))
                             for i in game.players())
        print(f"PNE: {','.join(map(str, profile))} (utilities {utilities})")
        return 0
    w = verdict.witness
    assert w is not None
    print(f"not a PNE: player {w.player} gains {format_rational(w.gain)} "
          f"by switching to quality {w.quality}")
    return 1


def cmd_dynamics(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    start = parse_state(game, args.start) if args.start else (1,) * game.n
    result = run_improvement_path(game, start, policy=args.policy,
                                  max_steps=args.max_steps, seed=args.seed)
    if result.status is PathStatus.CONVERGED:
        assert result.profile is not None
        print(f"converged in {result.steps} steps: "
              f"{','.join(map(str, result.profile))}")
        return 0
    if result.status is PathStatus.CYCLE:
        assert result.cycle is not None
        chain = " -> ".join(",".join(map(str, p)) for p in result.cycle)
        print(f"improvement cycle of period {len(result.cycle)}: {chain}")
        return 1
    print(f"truncated after {result.steps} steps")
    return 1


def cmd_graph(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    mode = "anonymous" if args.anonymous else args.mode
    max_nodes = _cap(DEFAULT_NODE_CAP, args.max_nodes)
    analysis = analyze_graph(game, mode=mode, max_nodes=max_nodes)
    if args.dot:
        graph = build_improvement_graph(game, mode=mode, max_nodes=max_nodes)
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(graph))
    prefix = "L:" if analysis.mode == "anonymous" else ""
    sinks = " ".join(prefix + ",".join(map(str, s)) for s in analysis.sinks)
    print(f"mode: {analysis.mode}; nodes: {analysis.node_count}; "
          f"edges: {analysis.edge_count}")
    print(f"sinks ({len(analysis.sinks)}): {sinks}")
    if analysis.acyclic:
        print("acyclic: yes (finite improvement property holds)")
        return 0
    assert analysis.cycle_witness is not None
    chain = " -> ".join(prefix + ",".join(map(str, p))
                        for p in analysis.cycle_witness)
    print(f"acyclic: no; witness cycle: {chain}")
    return 1


def cmd_concavity(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    if args.form == "specific":
        report = is_three_discrete_concave_specific(game)
    elif args.form == "invariant":
        report = is_three_discrete_concave_invariant(game)
    else:
        report = concavity_report(game)
    if report:
        print("three-discrete-concave: yes")
        return 0
    v = report.violation
    assert v is not None
    who = "" if v.player is None else f"player {v.player}, "
    print(f"three-discrete-concave: no ({who}loads L:"
          f"{','.join(map(str, v.loads))}, qualities "
          f"{v.q_i},{v.q_k},{v.q})")
    return 1


def cmd_instance(args: argparse.Namespace) -> int:
    inst = build(args.id, k=args.k, n=args.n, Q=args.Q)
    if args.emit:
        save_game(inst.game, args.emit)
        print(f"wrote {args.emit}")
    if args.verify:
        report = verify_certificate(inst)
        for c in report.claims:
            mark = "PASS" if c.passed else "FAIL"
            detail = f" ({c.detail})" if c.detail and not c.passed else ""
            print(f"{mark} {c.claim}{detail}")
        return 0 if report.passed else 1
    if not args.emit:
        print(json.dumps(serialize_game(inst.game), sort_keys=True, indent=2))
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    cap = _cap(DEFAULT_PROFILE_CAP, args.max_profiles)
    verdict = classify(game, cap=cap)
    print(f"oblivious: {'yes' if verdict.oblivious else 'no'}")
    print(f"player-invariant: {'yes' if verdict.player_invariant else 'no'}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contestq",
        description="Exact pure-Nash-equilibrium toolkit for review contests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide/compute a pure Nash equilibrium")
    solve.add_argument("--game", required=True)
    solve.add_argument("--method", required=True,
                       choices=("brute", "contiguous", "all-at-one", "potential"))
    solve.add_argument("--all", action="store_true",
                       help="with brute: list every equilibrium")
    solve.add_argument("--format", default="text", choices=("text", "json"))
    solve.add_argument("--max-profiles", type=int, default=None)
    solve.add_argument("--trust-concavity", action="store_true",
                       help="skip the three-discrete-concavity check")
    solve.add_argument("--workers", type=int, default=1)
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="check whether a profile is a PNE")
    verify.add_argument("--game", required=True)
    verify.add_argument("--profile", default=None,
                        help="comma-separated qualities (1,2,2) or loads (L:2,1,0)")
    verify.add_argument("--profile-file", default=None,
                        help="JSON file with a 'profile' key (solve --format json output)")
    verify.set_defaults(func=cmd_verify)

    dynamics = sub.add_parser("dynamics", help="run an improvement path")
    dynamics.add_argument("--game", required=True)
    dynamics.add_argument("--start", default=None)
    dynamics.add_argument("--policy", default="first",
                          choices=("first", "first-improving", "best",
                                   "best-response", "random"))
    dynamics.add_argument("--seed", type=int, default=0)
    dynamics.add_argument("--max-steps", type=int, default=None)
    dynamics.set_defaults(func=cmd_dynamics)

    graph = sub.add_parser("graph", help="analyze the improvement graph")
    graph.add_argument("--game", required=True)
    graph.add_argument("--mode", default="auto",
                       choices=("auto", "profile", "anonymous"))
    graph.add_argument("--anonymous", action="store_true",
                       help="force the load-vector quotient")
    graph.add_argument("--dot", default=None, help="write GraphViz output here")
    graph.add_argument("--max-nodes", type=int, default=None)
    graph.set_defaults(func=cmd_graph)

    concavity = sub.add_parser("concavity",
                               help="check three-discrete-concavity")
    concavity.add_argument("--game", required=True)
    concavity.add_argument("--form", default="auto",
                           choices=("auto", "specific", "invariant"))
    concavity.set_defaults(func=cmd_concavity)

    instance = sub.add_parser("instance", help="emit or verify a catalog game")
    instance.add_argument("id", choices=INSTANCE_IDS)
    instance.add_argument("--k", type=int, default=2)
    instance.add_argument("--n", type=int, default=3)
    instance.add_argument("--Q", type=int, default=3)
    instance.add_argument("--emit", default=None)
    instance.add_argument("--verify", action="store_true")
    instance.set_defaults(func=cmd_instance)

    classify_p = sub.add_parser("classify",
                                help="decide obliviousness / player-invariance")
    classify_p.add_argument("--game", required=True)
    classify_p.add_argument("--max-profiles", type=int, default=None)
    classify_p.set_defaults(func=cmd_classify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
