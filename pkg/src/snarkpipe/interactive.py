"""Commit-and-challenge interactive proof sessions.

Each round the prover reshuffles the public problem into an equivalent
instance, commits to that instance entry by entry, and the verifier flips a
coin to demand either the reshuffling itself or the reshuffled solution.
Revealing one side never exposes the private solution; being able to answer
both on demand does, so the prover would be caught guessing in half of the
rounds if it had no solution, and the escape probability halves each round.

Two problem flavours are supported:

* Hamiltonian cycle: the instance is an adjacency matrix, reshuffled by a
  vertex relabeling; commitments cover each matrix entry.
* 3-SAT: the instance is a clause list, reshuffled by a variable permutation
  plus per-variable polarity flips; commitments cover each clause.

Commitments are SHA-256 over the entry's canonical little-endian encoding
followed by a fresh 16-byte salt, so they bind (any post-hoc edit changes
the digest) and hide (the salt blinds the entry value).
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass

from .rng import Sha256Rng, derive_seed

__all__ = [
    "Challenge",
    "HamiltonianCycleProblem",
    "Response",
    "RoundCommitment",
    "RoundConsumed",
    "SatProblem",
    "SessionResult",
    "cipher_round",
    "forge_round",
    "load_problem",
    "run_session",
    "verify_round",
]

SALT_BYTES = 16


class RoundConsumed(RuntimeError):
    """A prover round answers exactly one challenge."""


class Challenge(enum.Enum):
    REVEAL_CIPHER = "cipher"
    REVEAL_SOLUTION = "solution"


def _commit(entry: bytes, salt: bytes) -> bytes:
    return hashlib.sha256(entry + salt).digest()


def _matrix_entry(bit: int) -> bytes:
    return bytes([bit & 1])


def _clause_entry(clause) -> bytes:
    return b"".join(struct.pack("<i", lit) for lit in sorted(clause))


# --- public problems ---------------------------------------------------------


@dataclass(frozen=True)
class HamiltonianCycleProblem:
    """Find a cycle through every vertex of a simple undirected graph."""

    adjacency: tuple  # of tuples of 0/1

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def validate(self) -> None:
        n = self.n
        if n < 3:
            raise ValueError("graph needs at least 3 vertices")
        for i, row in enumerate(self.adjacency):
            if len(row) != n:
                raise ValueError("adjacency matrix must be square")
            for j, bit in enumerate(row):
                if bit not in (0, 1):
                    raise ValueError("adjacency entries must be 0 or 1")
                if bit != self.adjacency[j][i]:
                    raise ValueError("graph must be undirected")
            if row[i] != 0:
                raise ValueError("graph must have no self-loops")

    def is_solution(self, cycle) -> bool:
        n = self.n
        if sorted(cycle) != list(range(n)):
            return False
        return all(
            self.adjacency[cycle[t]][cycle[(t + 1) % n]] == 1 for t in range(n)
        )

    def relabel(self, perm) -> tuple:
        """Adjacency matrix after renaming vertex i to perm[i]."""
        n = self.n
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out[perm[i]][perm[j]] = self.adjacency[i][j]
        return tuple(tuple(row) for row in out)


@dataclass(frozen=True)
class SatProblem:
    """Satisfy a conjunction of 3-literal clauses; literal k means variable
    |k| (1-based), negated when k < 0."""

    n_vars: int
    clauses: tuple  # of 3-tuples of literals

    def validate(self) -> None:
        if self.n_vars < 1:
            raise ValueError("need at least one variable")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("every clause must hold exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range")

    def is_solution(self, assignment) -> bool:
        if len(assignment) != self.n_vars:
            return False
        return all(
            any(self._lit_holds(lit, assignment) for lit in clause)
            for clause in self.clauses
        )

    @staticmethod
    def _lit_holds(lit: int, assignment) -> bool:
        value = bool(assignment[abs(lit) - 1])
        return value if lit > 0 else not value

    def transform(self, perm, flips) -> tuple:
        """Clause list after renaming variable i to perm[i] and flipping the
        polarity of every variable with flips[i] set."""

        def map_lit(lit: int) -> int:
            i = abs(lit) - 1
            sign = 1 if lit > 0 else -1
            if flips[i]:
                sign = -sign
            return sign * (perm[i] + 1)

        return tuple(
            tuple(sorted(map_lit(lit) for lit in clause)) for clause in self.clauses
        )

    def transform_assignment(self, assignment, perm, flips) -> tuple:
        out = [False] * self.n_vars
        for i, value in enumerate(assignment):
            out[perm[i]] = bool(value) ^ bool(flips[i])
        return tuple(out)


# --- round data --------------------------------------------------------------


@dataclass(frozen=True)
class RoundCommitment:
    kind: str  # "hamiltonian-cycle" | "sat3"
    size: int  # vertices or variables
    digests: tuple  # of 32-byte digests

    def hex_digests(self) -> list:
        return [d.hex() for d in self.digests]


@dataclass(frozen=True)
class Response:
    challenge: Challenge
    # REVEAL_CIPHER: the reshuffling plus every salt.
    permutation: tuple | None = None
    flips: tuple | None = None  # sat only
    salts: tuple | None = None
    # REVEAL_SOLUTION: the reshuffled solution plus the openings it needs.
    cycle: tuple | None = None  # hamiltonian only; opened salts in `salts`
    clauses: tuple | None = None  # sat only: the full reshuffled instance
    assignment: tuple | None = None  # sat only

    def to_json_dict(self) -> dict:
        data: dict = {"challenge": self.challenge.value}
        if self.permutation is not None:
            data["permutation"] = list(self.permutation)
        if self.flips is not None:
            data["flips"] = [int(b) for b in self.flips]
        if self.salts is not None:
            data["salts"] = [s.hex() for s in self.salts]
        if self.cycle is not None:
            data["cycle"] = list(self.cycle)
        if self.clauses is not None:
            data["clauses"] = [list(c) for c in self.clauses]
        if self.assignment is not None:
            data["assignment"] = [bool(b) for b in self.assignment]
        return data


class ProverRound:
    """One committed round held prover-side; consumed by its single response."""

    def __init__(self, problem, commitment, secrets: dict):
        self.problem = problem
        self.commitment = commitment
        self._secrets = secrets
        self._consumed = False

    def respond(self, challenge: Challenge) -> Response:
        if self._consumed:
            raise RoundConsumed("this round has already answered a challenge")
        self._consumed = True
        s = self._secrets
        if challenge is Challenge.REVEAL_CIPHER:
            return Response(
                challenge=challenge,
                permutation=s["perm"],
                flips=s.get("flips"),
                salts=s["salts"],
            )
        if self.commitment.kind == "hamiltonian-cycle":
            cycle = s["cycle"]
            n = self.commitment.size
            opened = tuple(
                s["salts"][cycle[t] * n + cycle[(t + 1) % n]] for t in range(n)
            )
            return Response(challenge=challenge, cycle=cycle, salts=opened)
        return Response(
            challenge=challenge,
            clauses=s["instance"],
            salts=s["salts"],
            assignment=s["assignment"],
        )


def _sample_perm(rng, n: int) -> tuple:
    perm = list(range(n))
    rng.shuffle(perm)
    return tuple(perm)


def cipher_round(problem, solution, rng) -> tuple:
    """Honest round: reshuffle, commit, keep the secrets for one response."""
    if isinstance(problem, HamiltonianCycleProblem):
        if not problem.is_solution(solution):
            raise ValueError("refusing to start a round without a valid solution")
        n = problem.n
        perm = _sample_perm(rng, n)
        shuffled = problem.relabel(perm)
        salts = tuple(rng.randbytes(SALT_BYTES) for _ in range(n * n))
        digests = tuple(
            _commit(_matrix_entry(shuffled[i][j]), salts[i * n + j])
            for i in range(n)
            for j in range(n)
        )
        commitment = RoundCommitment("hamiltonian-cycle", n, digests)
        secrets = {
            "perm": perm,
            "salts": salts,
            "cycle": tuple(perm[v] for v in solution),
        }
        return commitment, ProverRound(problem, commitment, secrets)
    if isinstance(problem, SatProblem):
        if not problem.is_solution(solution):
            raise ValueError("refusing to start a round without a valid solution")
        perm = _sample_perm(rng, problem.n_vars)
        flips = tuple(rng.getrandbits(1) for _ in range(problem.n_vars))
        instance = problem.transform(perm, flips)
        salts = tuple(rng.randbytes(SALT_BYTES) for _ in range(len(instance)))
        digests = tuple(
            _commit(_clause_entry(clause), salt)
            for clause, salt in zip(instance, salts)
        )
        commitment = RoundCommitment("sat3", problem.n_vars, digests)
        secrets = {
            "perm": perm,
            "flips": flips,
            "salts": salts,
            "instance": instance,
            "assignment": problem.transform_assignment(solution, perm, flips),
        }
        return commitment, ProverRound(problem, commitment, secrets)
    raise TypeError(f"unsupported problem type {type(problem)!r}")


def forge_round(problem, rng) -> tuple:
    """Cheating round: guess the challenge, prepare only that branch.

    A cipher guess commits an honest reshuffle (no solution needed); a
    solution guess commits a doctored instance that does have a planted
    solution. Either way the other branch cannot verify, so on a problem
    without a solution each round survives with probability 1/2.
    """
    if rng.getrandbits(1) == 0:
        guess = Challenge.REVEAL_CIPHER
    else:
        guess = Challenge.REVEAL_SOLUTION
    if isinstance(problem, HamiltonianCycleProblem):
        n = problem.n
        perm = _sample_perm(rng, n)
        shuffled = [list(row) for row in problem.relabel(perm)]
        planted = _sample_perm(rng, n)
        if guess is Challenge.REVEAL_SOLUTION:
            for t in range(n):
                a, b = planted[t], planted[(t + 1) % n]
                shuffled[a][b] = 1
                shuffled[b][a] = 1
        salts = tuple(rng.randbytes(SALT_BYTES) for _ in range(n * n))
        digests = tuple(
            _commit(_matrix_entry(shuffled[i][j]), salts[i * n + j])
            for i in range(n)
            for j in range(n)
        )
        commitment = RoundCommitment("hamiltonian-cycle", n, digests)
        secrets = {"perm": perm, "salts": salts, "cycle": planted}
        return commitment, ProverRound(problem, commitment, secrets)
    if isinstance(problem, SatProblem):
        perm = _sample_perm(rng, problem.n_vars)
        flips = tuple(rng.getrandbits(1) for _ in range(problem.n_vars))
        instance = [list(clause) for clause in problem.transform(perm, flips)]
        claimed = tuple(
            bool(rng.getrandbits(1)) for _ in range(problem.n_vars)
        )
        if guess is Challenge.REVEAL_SOLUTION:
            # Doctor each unsatisfied clause by flipping one literal's sign.
            for clause in instance:
                if not any(SatProblem._lit_holds(lit, claimed) for lit in clause):
                    clause[0] = -clause[0]
        instance = tuple(tuple(sorted(clause)) for clause in instance)
        salts = tuple(rng.randbytes(SALT_BYTES) for _ in range(len(instance)))
        digests = tuple(
            _commit(_clause_entry(clause), salt)
            for clause, salt in zip(instance, salts)
        )
        commitment = RoundCommitment("sat3", problem.n_vars, digests)
        secrets = {
            "perm": perm,
            "flips": flips,
            "salts": salts,
            "instance": instance,
            "assignment": claimed,
        }
        return commitment, ProverRound(problem, commitment, secrets)
    raise TypeError(f"unsupported problem type {type(problem)!r}")


# --- verifier ----------------------------------------------------------------


def _check_cipher_hc(problem, commitment, response) -> bool:
    n = problem.n
    perm = response.permutation
    salts = response.salts
    if perm is None or salts is None:
        return False
    if sorted(perm) != list(range(n)) or len(salts) != n * n:
        return False
    shuffled = problem.relabel(perm)
    return all(
        _commit(_matrix_entry(shuffled[i][j]), salts[i * n + j])
        == commitment.digests[i * n + j]
        for i in range(n)
        for j in range(n)
    )


def _check_solution_hc(problem, commitment, response) -> bool:
    n = problem.n
    cycle = response.cycle
    salts = response.salts
    if cycle is None or salts is None:
        return False
    if sorted(cycle) != list(range(n)) or len(salts) != n:
        return False
    # Each opened entry must be a committed 1: a present edge of the
    # committed instance.
    return all(
        _commit(_matrix_entry(1), salts[t])
        == commitment.digests[cycle[t] * n + cycle[(t + 1) % n]]
        for t in range(n)
    )


def _check_cipher_sat(problem, commitment, response) -> bool:
    perm = response.permutation
    flips = response.flips
    salts = response.salts
    if perm is None or flips is None or salts is None:
        return False
    if sorted(perm) != list(range(problem.n_vars)):
        return False
    if len(flips) != problem.n_vars or len(salts) != len(commitment.digests):
        return False
    instance = problem.transform(perm, flips)
    return all(
        _commit(_clause_entry(clause), salt) == digest
        for clause, salt, digest in zip(instance, salts, commitment.digests)
    )


def _check_solution_sat(problem, commitment, response) -> bool:
    clauses = response.clauses
    salts = response.salts
    assignment = response.assignment
    if clauses is None or salts is None or assignment is None:
        return False
    if len(clauses) != len(commitment.digests) or len(salts) != len(clauses):
        return False
    if len(assignment) != problem.n_vars:
        return False
    for clause, salt, digest in zip(clauses, salts, commitment.digests):
        if len(clause) != 3:
            return False
        if any(lit == 0 or abs(lit) > problem.n_vars for lit in clause):
            return False
        if _commit(_clause_entry(clause), salt) != digest:
            return False
    return all(
        any(SatProblem._lit_holds(lit, assignment) for lit in clause)
        for clause in clauses
    )


def verify_round(problem, commitment, challenge: Challenge, response) -> bool:
    """Recompute the revealed branch against the commitments; False on any
    mismatch, never an exception for dishonest data."""
    if response.challenge is not challenge:
        return False
    try:
        if isinstance(problem, HamiltonianCycleProblem):
            if challenge is Challenge.REVEAL_CIPHER:
                return _check_cipher_hc(problem, commitment, response)
            return _check_solution_hc(problem, commitment, response)
        if isinstance(problem, SatProblem):
            if challenge is Challenge.REVEAL_CIPHER:
                return _check_cipher_sat(problem, commitment, response)
            return _check_solution_sat(problem, commitment, response)
    except (IndexError, TypeError, ValueError):
        return False
    raise TypeError(f"unsupported problem type {type(problem)!r}")


# --- sessions ----------------------------------------------------------------


@dataclass
class SessionResult:
    accepted: bool
    rounds_run: int
    transcript: list | None = None

    def to_json_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rounds_run": self.rounds_run,
            "rounds": self.transcript if self.transcript is not None else [],
        }


def run_session(
    problem,
    solution=None,
    rounds: int = 10,
    seed: bytes = b"",
    cheat: bool = False,
    collect_transcript: bool = True,
) -> SessionResult:
    """Loop commit -> coin-flip challenge -> response -> check.

    Rejects at the first failed round. The prover and verifier draw from
    independent streams derived from the session seed, so transcripts are
    reproducible.
    """
    if rounds < 1:
        raise ValueError("at least one round is required")
    if not cheat and solution is None:
        raise ValueError("honest sessions need the private solution")
    prover_rng = Sha256Rng(derive_seed(seed, "prover"))
    verifier_rng = Sha256Rng(derive_seed(seed, "verifier"))
    transcript: list | None = [] if collect_transcript else None
    accepted = True
    rounds_run = 0
    for _ in range(rounds):
        rounds_run += 1
        if cheat:
            commitment, state = forge_round(problem, prover_rng)
        else:
            commitment, state = cipher_round(problem, solution, prover_rng)
        challenge = (
            Challenge.REVEAL_CIPHER
            if verifier_rng.getrandbits(1) == 0
            else Challenge.REVEAL_SOLUTION
        )
        response = state.respond(challenge)
        verdict = verify_round(problem, commitment, challenge, response)
        if transcript is not None:
            transcript.append(
                {
                    "commitments": commitment.hex_digests(),
                    "challenge": challenge.value,
                    "response": response.to_json_dict(),
                    "verdict": verdict,
                }
            )
        if not verdict:
            accepted = False
            break
    return SessionResult(accepted, rounds_run, transcript)


# --- problem files -----------------------------------------------------------


def load_problem(data: dict) -> tuple:
    """Parse a problem description; returns (problem, solution or None)."""
    kind = data.get("type")
    if kind == "hamiltonian-cycle":
        problem = HamiltonianCycleProblem(
            tuple(tuple(int(x) for x in row) for row in data["adjacency"])
        )
        problem.validate()
        solution = data.get("cycle")
        if solution is not None:
            solution = tuple(int(v) for v in solution)
            if not problem.is_solution(solution):
                raise ValueError("the supplied cycle does not solve the graph")
        return problem, solution
    if kind == "sat3":
        problem = SatProblem(
            int(data["variables"]),
            tuple(tuple(int(lit) for lit in clause) for clause in data["clauses"]),
        )
        problem.validate()
        solution = data.get("assignment")
        if solution is not None:
            solution = tuple(bool(b) for b in solution)
            if not problem.is_solution(solution):
                raise ValueError("the supplied assignment does not satisfy the clauses")
        return problem, solution
    raise ValueError(f"unknown problem type {kind!r}")
