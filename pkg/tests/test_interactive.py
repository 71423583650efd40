import hashlib
import json

import pytest

from snarkpipe import (
    Challenge,
    HamiltonianCycleProblem,
    RoundConsumed,
    SatProblem,
    Sha256Rng,
    cipher_round,
    forge_round,
    run_session,
    verify_round,
)
from snarkpipe.bundled import load_bundled_text
from snarkpipe.interactive import load_problem
from snarkpipe.rng import derive_seed

K3 = HamiltonianCycleProblem(((0, 1, 1), (1, 0, 1), (1, 1, 0)))
K3_CYCLE = (0, 1, 2)

# 4-vertex path: no Hamiltonian cycle exists.
PATH4 = HamiltonianCycleProblem(
    ((0, 1, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 1, 0))
)

SAT1 = SatProblem(3, ((1, 2, -3),))
SAT1_ASSIGNMENT = (True, False, False)

UNSAT = SatProblem(
    3,
    (
        (1, 2, 3), (1, 2, -3), (1, -2, 3), (1, -2, -3),
        (-1, 2, 3), (-1, 2, -3), (-1, -2, 3), (-1, -2, -3),
    ),
)


class IdentityRng(Sha256Rng):
    """Leaves every permutation alone and never flips a sign; salts still
    come from the underlying stream."""

    def shuffle(self, seq):
        pass

    def getrandbits(self, k):
        if k == 1:
            return 0
        return super().getrandbits(k)


# --- problems -----------------------------------------------------------------


def test_problem_validation():
    K3.validate()
    PATH4.validate()
    SAT1.validate()
    with pytest.raises(ValueError):
        HamiltonianCycleProblem(((0, 1), (1, 0))).validate()  # too small
    with pytest.raises(ValueError):
        HamiltonianCycleProblem(((0, 1, 1), (0, 0, 1), (1, 1, 0))).validate()
    with pytest.raises(ValueError):
        SatProblem(2, ((1, 2, 3),)).validate()  # literal out of range


def test_solution_checks():
    assert K3.is_solution(K3_CYCLE)
    assert K3.is_solution((2, 0, 1))
    assert not K3.is_solution((0, 1))  # not a full tour
    assert not K3.is_solution((0, 1, 1))
    assert not PATH4.is_solution((0, 1, 2, 3))  # missing wrap-around edge
    assert SAT1.is_solution(SAT1_ASSIGNMENT)
    assert not SAT1.is_solution((False, False, True))
    assert not any(
        UNSAT.is_solution(tuple(bool(m >> i & 1) for i in range(3)))
        for m in range(8)
    )


def test_sat_transform_preserves_satisfaction():
    # Hand example: rename 1->2, 2->3, 3->1 and flip variable 1's polarity.
    perm = (1, 2, 0)
    flips = (1, 0, 0)
    transformed = SAT1.transform(perm, flips)
    assert transformed == ((-2, -1, 3),)
    moved = SAT1.transform_assignment(SAT1_ASSIGNMENT, perm, flips)
    carrier = SatProblem(3, transformed)
    assert carrier.is_solution(moved)


def test_sat_transform_round_trip_many(ctx17):
    rng = Sha256Rng(b"sat-transforms")
    for _ in range(100):
        perm = list(range(3))
        rng.shuffle(perm)
        flips = tuple(rng.getrandbits(1) for _ in range(3))
        carrier = SatProblem(3, SAT1.transform(tuple(perm), flips))
        moved = SAT1.transform_assignment(SAT1_ASSIGNMENT, tuple(perm), flips)
        assert carrier.is_solution(moved)


# --- rounds -------------------------------------------------------------------


@pytest.mark.parametrize("challenge", list(Challenge))
def test_honest_round_passes_both_branches(challenge):
    commitment, state = cipher_round(K3, K3_CYCLE, Sha256Rng(b"round"))
    response = state.respond(challenge)
    assert verify_round(K3, commitment, challenge, response)


@pytest.mark.parametrize("challenge", list(Challenge))
def test_honest_sat_round_passes_both_branches(challenge):
    commitment, state = cipher_round(SAT1, SAT1_ASSIGNMENT, Sha256Rng(b"round"))
    response = state.respond(challenge)
    assert verify_round(SAT1, commitment, challenge, response)


def test_identity_permutation_is_degenerate_but_legal():
    commitment, state = cipher_round(K3, K3_CYCLE, IdentityRng(b"id"))
    response = state.respond(Challenge.REVEAL_CIPHER)
    assert response.permutation == (0, 1, 2)
    # ciphered instance equals the original: recompute digests directly
    n = K3.n
    for i in range(n):
        for j in range(n):
            entry = bytes([K3.adjacency[i][j]])
            salt = response.salts[i * n + j]
            assert hashlib.sha256(entry + salt).digest() == commitment.digests[i * n + j]
    assert verify_round(K3, commitment, Challenge.REVEAL_CIPHER, response)


def test_round_is_consumed_by_first_response():
    _, state = cipher_round(K3, K3_CYCLE, Sha256Rng(b"consume"))
    state.respond(Challenge.REVEAL_CIPHER)
    with pytest.raises(RoundConsumed):
        state.respond(Challenge.REVEAL_SOLUTION)


def test_honest_api_refuses_invalid_solution():
    with pytest.raises(ValueError):
        cipher_round(K3, (0, 2, 1, 1), Sha256Rng(b"x"))
    with pytest.raises(ValueError):
        cipher_round(PATH4, (0, 1, 2, 3), Sha256Rng(b"x"))


def test_solution_branch_opens_exactly_v_salts():
    # Structural zero-knowledge: |V| salts for |V| cycle edges, nothing else.
    commitment, state = cipher_round(K3, K3_CYCLE, Sha256Rng(b"zk"))
    response = state.respond(Challenge.REVEAL_SOLUTION)
    assert len(response.salts) == K3.n
    assert response.permutation is None


def test_commitment_binding():
    # Altering any committed digest makes both branches fail.
    for challenge in Challenge:
        commitment, state = cipher_round(K3, K3_CYCLE, Sha256Rng(b"bind"))
        digests = list(commitment.digests)
        digests[4] = bytes(32)
        broken = type(commitment)(commitment.kind, commitment.size, tuple(digests))
        response = state.respond(challenge)
        if challenge is Challenge.REVEAL_CIPHER:
            assert not verify_round(K3, broken, challenge, response)
        else:
            # position 4 = entry (1,1): not a cycle edge opening, so flip one
            # that is opened
            opened_positions = {
                response.cycle[t] * K3.n + response.cycle[(t + 1) % K3.n]
                for t in range(K3.n)
            }
            digests = list(commitment.digests)
            digests[next(iter(opened_positions))] = bytes(32)
            broken = type(commitment)(
                commitment.kind, commitment.size, tuple(digests)
            )
            assert not verify_round(K3, broken, challenge, response)


def test_wrong_challenge_response_pairing_rejected():
    commitment, state = cipher_round(K3, K3_CYCLE, Sha256Rng(b"mix"))
    response = state.respond(Challenge.REVEAL_CIPHER)
    assert not verify_round(K3, commitment, Challenge.REVEAL_SOLUTION, response)


# --- forged rounds --------------------------------------------------------------


def forged_round_with_guess(problem, want_solution_guess, seed_base=b"forge"):
    for i in range(1000):
        rng = Sha256Rng(derive_seed(seed_base, f"try{i}"))
        probe = Sha256Rng(derive_seed(seed_base, f"try{i}"))
        guess_solution = probe.getrandbits(1) == 1
        if guess_solution == want_solution_guess:
            return forge_round(problem, rng)
    raise AssertionError("coin never landed on the wanted side")


def test_forged_solution_branch_survives_solution_challenge():
    commitment, state = forged_round_with_guess(PATH4, want_solution_guess=True)
    response = state.respond(Challenge.REVEAL_SOLUTION)
    assert verify_round(PATH4, commitment, Challenge.REVEAL_SOLUTION, response)


def test_forged_solution_branch_fails_cipher_challenge():
    commitment, state = forged_round_with_guess(PATH4, want_solution_guess=True)
    response = state.respond(Challenge.REVEAL_CIPHER)
    assert not verify_round(PATH4, commitment, Challenge.REVEAL_CIPHER, response)


def test_forged_cipher_branch_fails_solution_challenge():
    commitment, state = forged_round_with_guess(PATH4, want_solution_guess=False)
    response = state.respond(Challenge.REVEAL_SOLUTION)
    assert not verify_round(PATH4, commitment, Challenge.REVEAL_SOLUTION, response)


def test_forged_cipher_branch_survives_cipher_challenge():
    commitment, state = forged_round_with_guess(PATH4, want_solution_guess=False)
    response = state.respond(Challenge.REVEAL_CIPHER)
    assert verify_round(PATH4, commitment, Challenge.REVEAL_CIPHER, response)


def test_sat_forgery_mirrors_graph_forgery():
    com, state = forged_round_with_guess(UNSAT, want_solution_guess=True, seed_base=b"satf")
    assert verify_round(UNSAT, com, Challenge.REVEAL_SOLUTION,
                        state.respond(Challenge.REVEAL_SOLUTION))
    com, state = forged_round_with_guess(UNSAT, want_solution_guess=True, seed_base=b"satf2")
    assert not verify_round(UNSAT, com, Challenge.REVEAL_CIPHER,
                            state.respond(Challenge.REVEAL_CIPHER))


# --- sessions ---------------------------------------------------------------------


@pytest.mark.parametrize("rounds", list(range(1, 21)))
def test_honest_sessions_accept_all_round_counts(rounds):
    for seed in (b"a", b"b", b"c"):
        assert run_session(K3, K3_CYCLE, rounds=rounds, seed=seed).accepted


def test_honest_sat_sessions_accept():
    for rounds in (1, 5, 10):
        assert run_session(SAT1, SAT1_ASSIGNMENT, rounds=rounds, seed=b"s").accepted


def test_session_transcript_shape():
    result = run_session(K3, K3_CYCLE, rounds=3, seed=b"t")
    assert result.accepted and result.rounds_run == 3
    assert len(result.transcript) == 3
    for entry in result.transcript:
        assert set(entry) == {"commitments", "challenge", "response", "verdict"}
        assert entry["verdict"] is True
        assert len(entry["commitments"]) == K3.n * K3.n
    # transcripts serialize
    json.dumps(result.to_json_dict())


def test_sessions_are_reproducible():
    a = run_session(K3, K3_CYCLE, rounds=5, seed=b"repro")
    b = run_session(K3, K3_CYCLE, rounds=5, seed=b"repro")
    assert a.to_json_dict() == b.to_json_dict()


def test_cheater_single_round_rate_near_half():
    trials = 10000
    hits = sum(
        run_session(
            PATH4, None, rounds=1, seed=derive_seed(b"rate", f"s{i}"),
            cheat=True, collect_transcript=False,
        ).accepted
        for i in range(trials)
    )
    assert abs(hits / trials - 0.5) <= 0.02


def test_cheater_decay_with_rounds():
    trials = 2000
    hits = sum(
        run_session(
            PATH4, None, rounds=5, seed=derive_seed(b"decay", f"s{i}"),
            cheat=True, collect_transcript=False,
        ).accepted
        for i in range(trials)
    )
    expected = trials / 32
    sigma = (trials * (1 / 32) * (31 / 32)) ** 0.5
    assert abs(hits - expected) <= 3 * sigma


def test_session_argument_validation():
    with pytest.raises(ValueError):
        run_session(K3, K3_CYCLE, rounds=0, seed=b"")
    with pytest.raises(ValueError):
        run_session(K3, None, rounds=1, seed=b"")  # honest needs a solution


# --- problem files ----------------------------------------------------------------


def test_load_bundled_problems():
    tri, cycle = load_problem(json.loads(load_bundled_text("triangle.json")))
    assert tri == K3 and cycle == K3_CYCLE
    path4, nothing = load_problem(json.loads(load_bundled_text("path4.json")))
    assert path4 == PATH4 and nothing is None
    sat, assignment = load_problem(json.loads(load_bundled_text("sat_demo.json")))
    assert sat.is_solution(assignment)
    unsat, _ = load_problem(json.loads(load_bundled_text("sat_unsat.json")))
    assert unsat == UNSAT


def test_load_problem_rejects_bad_data():
    with pytest.raises(ValueError):
        load_problem({"type": "sudoku"})
    with pytest.raises(ValueError):
        load_problem(
            {"type": "hamiltonian-cycle", "adjacency": [[0, 1], [1, 0]],
             "cycle": [0, 1]}
        )
    with pytest.raises(ValueError):
        load_problem(
            {"type": "sat3", "variables": 1, "clauses": [[1, 1, 1]],
             "assignment": [False]}
        )
