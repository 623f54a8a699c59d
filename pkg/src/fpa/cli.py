"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 size guard tripped.
Randomised subcommands take ``--seed``; without one a seed is drawn and
reported (in the JSON payload, or on stderr for plain output).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import channel, codec, combinatorics, pir
from .core import CodeParams, Message, format_word, parse_word
from .errors import CapExceeded, FPAError, ParameterError
from .rng import RandomSource

EXIT_OK = 0
EXIT_USER = 2
EXIT_CAP = 3


def _emit(args, payload: dict, plain: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(plain)


def _seeded(args) -> RandomSource:
    rng = RandomSource(args.seed)
    if args.seed is None and args.format == "plain":
        print(f"seed: {rng.seed}", file=sys.stderr)
    return rng


def _params_from_word(lam: int, k: int, word: Sequence[int]) -> CodeParams:
    return CodeParams.create(lam, len(word), k)


def cmd_encode(args) -> None:
    msg = Message.from_text(args.message)
    params = CodeParams.create(args.lam, args.n, len(msg))
    word = codec.encode(msg, params)
    _emit(args, {"word": list(word), "d": params.d}, format_word(word))


def cmd_decode(args) -> None:
    word = parse_word(args.word)
    params = _params_from_word(args.lam, args.k, word)
    msg = codec.unique_decode(word, params)
    _emit(args, {"message": msg.to_text()}, msg.to_text())


def cmd_local(args) -> None:
    word = parse_word(args.word)
    params = _params_from_word(args.lam, args.k, word)
    rng = _seeded(args)
    res = codec.local_decode(word, args.i, params, rng)
    payload = res.to_dict() | {"i": args.i, "seed": rng.seed}
    _emit(args, payload, f"{res.bit} reads={format_word(res.read_positions)}")


def cmd_bounds(args) -> None:
    report = combinatorics.bounds_report(args.lam, args.m, args.d, exact_cap=args.exact_cap)
    if args.format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True))
        return
    lines = [f"lambda={report.lam} m={report.m} n={report.n} d={report.d}",
             f"|S| = {report.space}"]
    if report.exact:
        lines += [f"V(d-1) = {report.ball_dminus1}",
                  f"V(floor((d-1)/2)) = {report.ball_half}",
                  f"gilbert lower = {report.gilbert_lower} (code size >= {report.code_size_floor})",
                  f"packing upper = {report.packing_upper} (code size <= {report.code_size_ceiling})"]
    else:
        lines.append("exact bounds skipped (n above --exact-cap)")
    lines.append(f"log asymptotic bounds: [{report.asym_lower_log:.6f}, {report.asym_upper_log:.6f}]")
    if report.clamped:
        lines.append("note: band width clamped at n in the permanent bounds")
    print("\n".join(lines))


def cmd_ball(args) -> None:
    n = args.lam * args.m
    payload = {"lambda": args.lam, "m": args.m, "n": n, "d": args.d}
    if args.method in ("exact", "both"):
        payload["exact"] = combinatorics.ball_size_exact(args.lam, n, args.d)
    if args.method in ("bruteforce", "both"):
        payload["bruteforce"] = combinatorics.ball_size_bruteforce(args.lam, n, args.d)
    plain = " ".join(f"{key}={payload[key]}" for key in ("exact", "bruteforce") if key in payload)
    _emit(args, payload, plain)


def cmd_perm(args) -> None:
    n = args.lam * args.m
    A = combinatorics.build_matrix(args.lam, n, args.d)
    if args.method == "naive":
        per = combinatorics.permanent_naive(A)
    else:
        per = combinatorics.permanent_ryser(A)
    payload = {
        "lambda": args.lam, "n": n, "d": args.d, "permanent": per,
        "log_lower": combinatorics.perm_bound_lower(args.lam, n, args.d),
        "log_upper": combinatorics.perm_bound_upper(args.lam, n, args.d),
        "clamped": combinatorics.bound_clamped(args.lam, n, args.d),
    }
    if args.show_matrix and args.format == "plain":
        for row in A:
            print("".join(str(int(v)) for v in row))
    _emit(args, payload, str(per))


def cmd_greedy(args) -> None:
    code = combinatorics.greedy_construct(args.lam, args.lam * args.m, args.d)
    payload = {"size": len(code), "words": [list(w) for w in code]}
    _emit(args, payload, "\n".join(format_word(w) for w in code))


def cmd_channel(args) -> None:
    params = CodeParams.create(args.lam, args.n, args.k)
    cfg = channel.ChannelConfig(args.delta, args.mode, args.walk_steps)
    rng = _seeded(args)
    report = channel.run_experiment(params, cfg, args.trials, rng)
    payload = report.to_dict()
    plain = "\n".join(f"{key}: {value}" for key, value in payload.items())
    _emit(args, payload, plain)


def cmd_pir(args) -> None:
    msg = Message.from_text(args.message)
    params = CodeParams.create(args.lam, args.n, len(msg))
    if args.action == "retrieve":
        if args.i is None:
            raise ParameterError("--i is required for retrieve")
        rng = _seeded(args)
        tr = pir.pir_retrieve(pir.pir_setup(msg, params), args.i, rng)
        payload = tr.to_dict() | {"seed": rng.seed}
        plain = f"{tr.bit} " + " ".join(f"s{s}:{p}" for s, p in sorted(tr.per_server_query.items()))
    elif args.action == "privacy":
        if args.mode == pir.EXACT:
            est = pir.estimate_privacy(params, msg, mode=pir.EXACT)
        else:
            est = pir.estimate_privacy(params, msg, mode=pir.MONTE_CARLO,
                                       trials=args.trials, rng=_seeded(args))
        payload = est.to_dict()
        plain = f"p = {est.p_estimate:.6f}" + (f" +- {est.stderr:.6f}" if est.stderr else "")
    else:
        rng = _seeded(args)
        r = pir.estimate_retrievability(params, msg, args.trials, rng)
        payload = {"r_estimate": r, "trials": args.trials, "seed": rng.seed}
        plain = f"r = {r}"
    _emit(args, payload, plain)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpa", description="Frequency permutation arrays under the l-infinity metric.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name, help, fmt="plain"):
        sp = subparsers.add_parser(name, help=help)
        sp.add_argument("--format", choices=("plain", "json"), default=fmt)
        return sp

    p = add("encode", "encode a bit string")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--message", required=True)
    p.set_defaults(func=cmd_encode)

    p = add("decode", "unique decoding")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_decode)

    p = add("local", "local decoding of one bit", fmt="json")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_local)

    p = add("bounds", "code-size bounds")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--exact-cap", type=int, default=combinatorics.DEFAULT_EXACT_CAP,
                   help="largest n for exact permanents (default %(default)s)")
    p.set_defaults(func=cmd_bounds)

    p = add("ball", "ball volume V(lambda, n, d)")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", choices=("exact", "bruteforce", "both"), default="exact")
    p.set_defaults(func=cmd_ball)

    p = add("perm", "permanent of the band matrix")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", choices=("ryser", "naive"), default="ryser")
    p.add_argument("--show-matrix", action="store_true")
    p.set_defaults(func=cmd_perm)

    p = add("greedy", "greedy code construction")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_greedy)

    p = add("channel", "noisy-channel decoding experiment")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--mode", choices=(channel.EXACT_UNIFORM, channel.SWAP_WALK),
                   default=channel.EXACT_UNIFORM)
    p.add_argument("--walk-steps", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_channel)

    p = add("pir", "simulated (lambda+1)-server PIR")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--action", choices=("retrieve", "privacy", "retrievability"),
                   default="retrieve")
    p.add_argument("--i", type=int)
    p.add_argument("--mode", choices=(pir.EXACT, pir.MONTE_CARLO), default=pir.EXACT)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_pir)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except FPAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
