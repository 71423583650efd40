"""Command-line pipeline driver.

Subcommands mirror the proof lifecycle: ``compile`` turns a source program
into a circuit file, ``setup`` writes the evaluation/verification key pair,
``prove`` writes the witness key for a concrete input assignment, ``verify``
replays the three pairing checks, ``interactive`` runs the commit-and-reveal
baseline, and ``selftest`` exercises the bundled example end to end.

Artifacts are plain JSON files and act as the shared ledger between the
parties; all field and group values travel as decimal strings. Exit codes:
0 success or accept, 1 usage or input error, 2 proof/verification reject.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bundled, interactive, pinocchio
from .circuit import Circuit, flatten, solve
from .field import DEFAULT_MODULUS, FieldContext
from .frontend import ParseError, parse_program
from .groups import PairingUnsupported, make_group
from .pinocchio import InvalidWitness, MalformedKey
from .qap import build_qap
from .rng import Sha256Rng, derive_seed, parse_seed

__all__ = ["build_parser", "entrypoint", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REJECT = 2


class _Parser(argparse.ArgumentParser):
    # Usage problems exit 1; plain argparse would exit 2, which this tool
    # reserves for verification rejects.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_global_flags(parser, top_level: bool) -> None:
    # The same flags register on the top-level parser (with real defaults)
    # and on every subcommand (defaulting to SUPPRESS so a subcommand-level
    # occurrence overrides the top-level value instead of erasing it).
    def default(value):
        return value if top_level else argparse.SUPPRESS

    parser.add_argument(
        "--field",
        metavar="DECIMAL",
        default=default(str(DEFAULT_MODULUS)),
        help="prime modulus (decimal); default 2^64 - 2^32 + 1",
    )
    parser.add_argument(
        "--generator",
        metavar="DECIMAL",
        default=default(None),
        help="generator of the multiplicative group (default: derived)",
    )
    parser.add_argument(
        "--backend",
        choices=["modular", "transparent"],
        default=default("transparent"),
        help="group backend; setup/prove/verify need 'transparent'",
    )
    parser.add_argument(
        "--seed",
        metavar="HEX",
        default=default(None),
        help="hex seed for all randomized steps (default: fresh entropy)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="snarkpipe",
        description="compile polynomial programs and run the proof pipeline",
    )
    _add_global_flags(parser, top_level=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_compile = sub.add_parser(
        "compile", help="compile a .zkp source file into a circuit"
    )
    _add_global_flags(p_compile, top_level=False)
    p_compile.add_argument("source", help="path to a .zkp file or a bundled name")
    p_compile.add_argument(
        "-o", "--output", default="circuit.json", help="circuit file to write"
    )
    p_compile.add_argument(
        "--emit-qap",
        nargs="?",
        const="qap.json",
        default=None,
        metavar="PATH",
        help="also dump the interpolated polynomial families",
    )

    p_setup = sub.add_parser("setup", help="run the trusted setup for a circuit")
    _add_global_flags(p_setup, top_level=False)
    p_setup.add_argument("--circuit", default="circuit.json")
    p_setup.add_argument(
        "--public",
        default="one",
        help="comma-separated public symbol names (default: one)",
    )
    p_setup.add_argument("--evaluation-key", default="evaluation_key.json")
    p_setup.add_argument("--verification-key", default="verification_key.json")

    p_prove = sub.add_parser("prove", help="produce a witness key from inputs")
    _add_global_flags(p_prove, top_level=False)
    p_prove.add_argument("--circuit", default="circuit.json")
    p_prove.add_argument("--evaluation-key", default="evaluation_key.json")
    p_prove.add_argument(
        "--inputs", required=True, help="JSON file mapping input names to decimals"
    )
    p_prove.add_argument("-o", "--output", default="witness_key.json")

    p_verify = sub.add_parser("verify", help="check a witness key")
    _add_global_flags(p_verify, top_level=False)
    p_verify.add_argument("--verification-key", default="verification_key.json")
    p_verify.add_argument("--witness-key", default="witness_key.json")
    p_verify.add_argument(
        "--public-inputs",
        default=None,
        help="JSON file mapping public symbol names to decimals",
    )

    p_inter = sub.add_parser(
        "interactive", help="run the commit-and-reveal protocol"
    )
    _add_global_flags(p_inter, top_level=False)
    p_inter.add_argument(
        "--problem", required=True, help="problem JSON file or bundled name"
    )
    p_inter.add_argument("--rounds", type=int, default=10)
    p_inter.add_argument(
        "--cheat",
        action="store_true",
        help="run a prover that has no solution and guesses each challenge",
    )
    p_inter.add_argument(
        "--repeat",
        type=int,
        default=1,
        help="run this many sessions and report the acceptance rate",
    )
    p_inter.add_argument(
        "--transcript",
        default=None,
        metavar="PATH",
        help="write the session transcript (single sessions only)",
    )

    p_self = sub.add_parser(
        "selftest", help="run the bundled pipeline and quick checks"
    )
    _add_global_flags(p_self, top_level=False)
    return parser


def _write_json(path: str, data: dict) -> None:
    payload = (json.dumps(data, separators=(",", ":"), sort_keys=False) + "\n").encode()
    with open(path, "wb") as fh:
        fh.write(payload)


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _context(args) -> FieldContext:
    p = int(args.field)
    generator = int(args.generator) if args.generator is not None else None
    return FieldContext(p, generator)


def _seed_bytes(args) -> bytes:
    if args.seed is not None:
        return parse_seed(args.seed)
    seed = os.urandom(16)
    print(f"seed: {seed.hex()}")
    return seed


def _load_circuit(path: str) -> Circuit:
    return Circuit.from_json_dict(_read_json(path))


def _parse_input_map(data: dict) -> dict:
    return {name: int(value) for name, value in data.items()}


def cmd_compile(args) -> int:
    source = bundled.resolve_source(args.source, ".zkp")
    program = parse_program(source)
    circuit = flatten(program, _context(args))
    with open(args.output, "wb") as fh:
        fh.write(circuit.to_json_bytes())
    qap = build_qap(circuit)
    if args.emit_qap:
        _write_json(args.emit_qap, qap.to_json_dict())
    print(f"N={circuit.n_gates} symbols={len(qap.symbols)}")
    print(f"wrote {args.output}")
    if args.emit_qap:
        print(f"wrote {args.emit_qap}")
    return EXIT_OK


def cmd_setup(args) -> int:
    circuit = _load_circuit(args.circuit)
    qap = build_qap(circuit)
    group = make_group(args.backend, circuit.ctx)
    public = tuple(name for name in args.public.split(",") if name)
    ek, vk = pinocchio.setup(qap, group, _seed_bytes(args), public)
    _write_json(args.evaluation_key, pinocchio.evaluation_key_to_dict(ek))
    _write_json(args.verification_key, pinocchio.verification_key_to_dict(vk))
    print(f"wrote {args.evaluation_key}")
    print(f"wrote {args.verification_key}")
    return EXIT_OK


def cmd_prove(args) -> int:
    circuit = _load_circuit(args.circuit)
    ek = pinocchio.load_evaluation_key(_read_json(args.evaluation_key))
    if ek.group.ctx != circuit.ctx:
        raise MalformedKey("evaluation key and circuit use different fields")
    qap = build_qap(circuit)
    inputs = _parse_input_map(_read_json(args.inputs))
    assignment = solve(circuit, inputs)
    wk = pinocchio.prove(ek, qap, assignment)
    _write_json(args.output, pinocchio.witness_key_to_dict(wk))
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_verify(args) -> int:
    vk = pinocchio.load_verification_key(_read_json(args.verification_key))
    wk = pinocchio.load_witness_key(_read_json(args.witness_key))
    if not vk.group.describes_same(wk.v.group):
        raise MalformedKey("witness key and verification key backends differ")
    public_inputs = {}
    if args.public_inputs:
        public_inputs = _parse_input_map(_read_json(args.public_inputs))
    result = pinocchio.verify(vk, wk, public_inputs)
    print(result.report())
    if result.accepted:
        print("accept")
        return EXIT_OK
    print("reject")
    return EXIT_REJECT


def cmd_interactive(args) -> int:
    if args.rounds < 1:
        raise ValueError("--rounds must be at least 1")
    if args.repeat < 1:
        raise ValueError("--repeat must be at least 1")
    raw = bundled.resolve_source(args.problem, ".json")
    problem, solution = interactive.load_problem(json.loads(raw))
    if not args.cheat and solution is None:
        raise ValueError("problem file has no solution; add one or pass --cheat")
    seed = _seed_bytes(args)

    if args.repeat == 1:
        result = interactive.run_session(
            problem,
            solution,
            rounds=args.rounds,
            seed=seed,
            cheat=args.cheat,
            collect_transcript=True,
        )
        path = args.transcript or "transcript.json"
        _write_json(path, result.to_json_dict())
        print(f"wrote {path}")
        print("accept" if result.accepted else "reject")
        return EXIT_OK if result.accepted else EXIT_REJECT

    accepted = 0
    for i in range(args.repeat):
        result = interactive.run_session(
            problem,
            solution,
            rounds=args.rounds,
            seed=derive_seed(seed, f"session-{i}"),
            cheat=args.cheat,
            collect_transcript=False,
        )
        accepted += result.accepted
    rate = accepted / args.repeat
    print(
        f"sessions={args.repeat} rounds={args.rounds}"
        f" accepted={accepted} rate={rate:.4f}"
    )
    return EXIT_OK


def cmd_selftest(args) -> int:
    import tempfile
    import time

    seed = parse_seed(args.seed) if args.seed else b"selftest"
    ctx = _context(args)
    failures = []

    def report(name: str, ok: bool) -> None:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            failures.append(name)

    started = time.perf_counter()

    rng = Sha256Rng(seed, label=b"selftest")
    ok = True
    for _ in range(500):
        a = ctx.sample_nonzero(rng)
        ok = ok and (1 / a) * a == ctx.one()
    report("field inverse identity (500 samples)", ok)

    from .polynomial import Polynomial

    ok = True
    for _ in range(100):
        num = Polynomial(ctx, [rng.randrange(ctx.p) for _ in range(12)])
        den = Polynomial(ctx, [rng.randrange(ctx.p) for _ in range(4)] + [1])
        quotient, remainder = divmod(num, den)
        ok = ok and quotient * den + remainder == num
    report("polynomial division reconstructs (100 samples)", ok)

    group = make_group("transparent", ctx)
    g = group.generator()
    ok = True
    for _ in range(200):
        x, y = rng.randrange(ctx.p), rng.randrange(ctx.p)
        ok = ok and (g**x).pair(g**y) == g.pair(g) ** (x * y % ctx.p)
    report("pairing bilinearity (200 samples)", ok)

    program = parse_program(bundled.load_bundled_text("coloring5.zkp"))
    circuit = flatten(program, ctx)
    qap = build_qap(circuit)
    with tempfile.TemporaryDirectory() as tmp:
        ek_path = os.path.join(tmp, "evaluation_key.json")
        vk_path = os.path.join(tmp, "verification_key.json")
        ek, vk = pinocchio.setup(qap, group, seed)
        _write_json(ek_path, pinocchio.evaluation_key_to_dict(ek))
        _write_json(vk_path, pinocchio.verification_key_to_dict(vk))
        ek = pinocchio.load_evaluation_key(_read_json(ek_path))
        vk = pinocchio.load_verification_key(_read_json(vk_path))
    witness = {"c1": 3, "c2": 1, "c3": 2, "c4": 1, "c5": 2}
    assignment = solve(circuit, witness)
    wk = pinocchio.prove(ek, qap, assignment)
    result = pinocchio.verify(vk, wk)
    report("bundled pipeline accepts a valid coloring", result.accepted)

    try:
        bad = solve(circuit, {**witness, "c2": 3})
        pinocchio.prove(ek, qap, bad)
        report("prover refuses an invalid coloring", False)
    except InvalidWitness:
        report("prover refuses an invalid coloring", True)

    tampered = pinocchio.WitnessKey(
        **{
            name: (
                group.element_from_int(12345)
                if name == "h"
                else getattr(wk, name)
            )
            for name in pinocchio.WitnessKey.FIELDS
        }
    )
    report(
        "verifier rejects a tampered witness key",
        not pinocchio.verify(vk, tampered).accepted,
    )

    problem, cycle = interactive.load_problem(
        json.loads(bundled.load_bundled_text("triangle.json"))
    )
    honest = interactive.run_session(problem, cycle, rounds=10, seed=seed)
    report("interactive honest session accepts", honest.accepted)

    path_problem, _ = interactive.load_problem(
        json.loads(bundled.load_bundled_text("path4.json"))
    )
    hits = sum(
        interactive.run_session(
            path_problem,
            None,
            rounds=1,
            seed=derive_seed(seed, f"cheat-{i}"),
            cheat=True,
            collect_transcript=False,
        ).accepted
        for i in range(400)
    )
    report("interactive cheater lands near 1/2 per round", 140 <= hits <= 260)

    elapsed = time.perf_counter() - started
    print(f"selftest finished in {elapsed:.2f}s")
    if failures:
        print(f"{len(failures)} check(s) failed", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


_COMMANDS = {
    "compile": cmd_compile,
    "setup": cmd_setup,
    "prove": cmd_prove,
    "verify": cmd_verify,
    "interactive": cmd_interactive,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except InvalidWitness as exc:
        print(f"invalid witness: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedKey as exc:
        print(f"malformed key: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PairingUnsupported as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"bad JSON input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
