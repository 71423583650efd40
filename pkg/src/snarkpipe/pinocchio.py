"""Trusted setup, proving, and pairing-based verification over a QAP.

Setup samples the trapdoor (r_v, r_w, s, alpha_v, alpha_w, alpha_k, beta,
gamma) from a seeded generator, publishes the evaluation and verification
keys, and forgets the trapdoor. The prover combines evaluation-key entries
using only its witness weights, never the trapdoor, and publishes an
eight-element witness key. Any verifier then runs three pairing checks:

    divisibility   E(gv^v(s), gw^w(s)) = E(gk^T(s), g^H(s)) * E(gk^k(s), g)
    span           E(gv^(av*v(s)), g)  = E(gv^v(s), g^av)      (and w, k)
    coefficients   E(g^Z, g^gamma)     = E(gv^v * gw^w * gk^k, g^(beta*gamma))

where gv = g^rv, gw = g^rw, gk = g^(rv*rw), and the verifier first folds the
public-input contribution from the verification key into the v/w/k terms.

The witness key binds the prover to its assignment but carries no masking
randomness, so it is not statistically hiding; combined with the transparent
group backend this module demonstrates the algebra, it does not protect
secrets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .field import FieldContext
from .groups import Group, GroupElement, PairingUnsupported, make_group
from .qap import QAP, assemble
from .rng import Sha256Rng

__all__ = [
    "EvaluationKey",
    "InvalidWitness",
    "MalformedKey",
    "Trapdoor",
    "VerificationKey",
    "VerifyResult",
    "WitnessKey",
    "load_evaluation_key",
    "load_verification_key",
    "load_witness_key",
    "prove",
    "save_key",
    "setup",
    "verify",
]


class InvalidWitness(ValueError):
    """The assignment does not satisfy the quadratic program."""


class MalformedKey(ValueError):
    """A key file or key pair is structurally unusable."""


@dataclass(frozen=True)
class Trapdoor:
    """Setup randomness; must never outlive setup (files never contain it)."""

    r_v: int
    r_w: int
    r_k: int
    s: int
    alpha_v: int
    alpha_w: int
    alpha_k: int
    beta: int
    gamma: int

    @classmethod
    def sample(cls, rng, p: int, n_gates: int) -> "Trapdoor":
        def nonzero() -> int:
            return rng.randrange(1, p)

        r_v, r_w = nonzero(), nonzero()
        s = nonzero()
        while s <= n_gates:  # s must avoid the interpolation nodes 1..N
            s = nonzero()
        return cls(
            r_v=r_v,
            r_w=r_w,
            r_k=r_v * r_w % p,
            s=s,
            alpha_v=nonzero(),
            alpha_w=nonzero(),
            alpha_k=nonzero(),
            beta=nonzero(),
            gamma=nonzero(),
        )


@dataclass
class EvaluationKey:
    group: Group
    n_gates: int
    symbols: tuple  # symbol names, in QAP order
    public: tuple  # names of the public symbols
    powers_of_s: list  # g^(s^d), d = 0..N
    v: list  # gv^(v_i(s)) per symbol
    w: list
    k: list
    alpha_v: list  # gv^(alpha_v * v_i(s)) per symbol
    alpha_w: list
    alpha_k: list
    beta: list  # gv^(beta*v_i(s)) * gw^(beta*w_i(s)) * gk^(beta*k_i(s))

    def private_indices(self) -> list:
        public = set(self.public)
        return [i for i, name in enumerate(self.symbols) if name not in public]


@dataclass
class VerificationKey:
    group: Group
    g: GroupElement
    alpha_v: GroupElement  # g^alpha_v
    alpha_w: GroupElement
    alpha_k: GroupElement
    gamma: GroupElement  # g^gamma
    beta_gamma: GroupElement  # g^(beta*gamma)
    target_at_s: GroupElement  # gk^T(s)
    public_entries: list  # of (name, gv^v_i(s), gw^w_i(s), gk^k_i(s))


@dataclass
class WitnessKey:
    """Exactly eight group elements, all formed from evaluation-key material."""

    v: GroupElement  # gv^v(s) over the private symbols
    w: GroupElement
    k: GroupElement
    h: GroupElement  # g^H(s)
    alpha_v: GroupElement
    alpha_w: GroupElement
    alpha_k: GroupElement
    z: GroupElement

    FIELDS = ("v", "w", "k", "h", "alpha_v", "alpha_w", "alpha_k", "z")


@dataclass(frozen=True)
class VerifyResult:
    divisibility: bool
    span: bool
    coefficients: bool

    @property
    def accepted(self) -> bool:
        return self.divisibility and self.span and self.coefficients

    def report(self) -> str:
        def mark(ok: bool) -> str:
            return "pass" if ok else "fail"

        return (
            f"checks: div={mark(self.divisibility)}"
            f" span={mark(self.span)} coeff={mark(self.coefficients)}"
        )


def setup(
    qap: QAP,
    group: Group,
    seed: bytes,
    public: tuple = ("one",),
):
    """Generate the evaluation and verification keys from a seeded trapdoor.

    The trapdoor exists only inside this call. Identical seeds reproduce
    identical keys.
    """
    if not group.pairs:
        raise PairingUnsupported(
            f"setup needs a pairing-capable backend, not '{group.name}'"
        )
    if group.ctx != qap.ctx:
        raise ValueError("group and QAP use different field contexts")
    if qap.n_gates == 0:
        raise ValueError("empty quadratic program: nothing to set up")
    for name in public:
        if name not in qap.symbol_names:
            raise ValueError(f"public symbol {name!r} is not in the program")
    public = tuple(dict.fromkeys(("one",) + tuple(public)))  # one is always public

    p = qap.ctx.p
    rng = Sha256Rng(seed, label=b"trusted-setup")
    td = Trapdoor.sample(rng, p, qap.n_gates)
    g = group.generator()
    g_v = g**td.r_v
    g_w = g**td.r_w
    g_k = g**td.r_k

    powers = []
    s_power = 1
    for _ in range(qap.n_gates + 1):
        powers.append(g**s_power)
        s_power = s_power * td.s % p

    v_at_s = [poly.eval_int(td.s) for poly in qap.v]
    w_at_s = [poly.eval_int(td.s) for poly in qap.w]
    k_at_s = [poly.eval_int(td.s) for poly in qap.k]

    ek = EvaluationKey(
        group=group,
        n_gates=qap.n_gates,
        symbols=qap.symbol_names,
        public=public,
        powers_of_s=powers,
        v=[g_v**x for x in v_at_s],
        w=[g_w**x for x in w_at_s],
        k=[g_k**x for x in k_at_s],
        alpha_v=[g_v ** (td.alpha_v * x % p) for x in v_at_s],
        alpha_w=[g_w ** (td.alpha_w * x % p) for x in w_at_s],
        alpha_k=[g_k ** (td.alpha_k * x % p) for x in k_at_s],
        beta=[
            (g_v ** (td.beta * x % p))
            * (g_w ** (td.beta * y % p))
            * (g_k ** (td.beta * z % p))
            for x, y, z in zip(v_at_s, w_at_s, k_at_s)
        ],
    )
    index_of = {name: i for i, name in enumerate(qap.symbol_names)}
    vk = VerificationKey(
        group=group,
        g=g,
        alpha_v=g**td.alpha_v,
        alpha_w=g**td.alpha_w,
        alpha_k=g**td.alpha_k,
        gamma=g**td.gamma,
        beta_gamma=g ** (td.beta * td.gamma % p),
        target_at_s=g_k ** qap.target.eval_int(td.s),
        public_entries=[
            (name, ek.v[index_of[name]], ek.w[index_of[name]], ek.k[index_of[name]])
            for name in public
        ],
    )
    return ek, vk


def prove(ek: EvaluationKey, qap: QAP, assignment: dict) -> WitnessKey:
    """Build the witness key from evaluation-key material and the assignment.

    Only key entries and witness weights enter the products below; the
    evaluation point s never appears. Refuses assignments whose combined
    polynomial is not divisible by the target.
    """
    if ek.symbols != qap.symbol_names or ek.n_gates != qap.n_gates:
        raise MalformedKey("evaluation key was generated for a different program")
    instance = assemble(qap, assignment)
    if not instance.divisible:
        raise InvalidWitness(
            "assignment does not satisfy the program; refusing to prove it"
        )

    weights = [int(qap.ctx(assignment[wire])) for wire in qap.symbols]
    group = ek.group
    private = ek.private_indices()

    def fold(entries) -> GroupElement:
        acc = group.identity()
        for i in private:
            t = weights[i]
            if t:
                acc = acc * (entries[i] ** t)
        return acc

    h_elem = group.identity()
    for d, coeff in enumerate(instance.h.coeffs):
        if coeff:
            h_elem = h_elem * (ek.powers_of_s[d] ** coeff)

    return WitnessKey(
        v=fold(ek.v),
        w=fold(ek.w),
        k=fold(ek.k),
        h=h_elem,
        alpha_v=fold(ek.alpha_v),
        alpha_w=fold(ek.alpha_w),
        alpha_k=fold(ek.alpha_k),
        z=fold(ek.beta),
    )


def verify(
    vk: VerificationKey, wk: WitnessKey, public_inputs: dict | None = None
) -> VerifyResult:
    """Run the three pairing checks; no prover interaction required."""
    group = vk.group
    for name in WitnessKey.FIELDS:
        element = getattr(wk, name)
        if not isinstance(element, GroupElement):
            raise MalformedKey(f"witness key entry {name!r} is not a group element")
        if not group.describes_same(element.group):
            raise MalformedKey(
                "witness key and verification key use different group contexts"
            )
    public_inputs = dict(public_inputs or {})
    expected = {name for name, _, _, _ in vk.public_entries} - {"one"}
    if set(public_inputs) != expected:
        raise ValueError(
            f"public inputs must cover exactly {sorted(expected)},"
            f" got {sorted(public_inputs)}"
        )

    v_full, w_full, k_full = wk.v, wk.w, wk.k
    for name, ev, ew, ek_entry in vk.public_entries:
        t = 1 if name == "one" else int(group.ctx(public_inputs[name]))
        v_full = v_full * (ev**t)
        w_full = w_full * (ew**t)
        k_full = k_full * (ek_entry**t)

    pair = group.pairing
    divisibility = pair(v_full, w_full) == pair(vk.target_at_s, wk.h) * pair(
        k_full, vk.g
    )
    span = (
        pair(wk.alpha_v, vk.g) == pair(wk.v, vk.alpha_v)
        and pair(wk.alpha_w, vk.g) == pair(wk.w, vk.alpha_w)
        and pair(wk.alpha_k, vk.g) == pair(wk.k, vk.alpha_k)
    )
    coefficients = pair(wk.z, vk.gamma) == pair(wk.v * wk.w * wk.k, vk.beta_gamma)
    return VerifyResult(divisibility, span, coefficients)


# --- key serialization -------------------------------------------------------


def _header(group: Group, kind: str) -> dict:
    return {
        "format": f"snarkpipe-{kind}/1",
        "backend": group.name,
        "field": group.ctx.to_json_dict(),
    }


def _element(e: GroupElement) -> str:
    return str(e.value)


def evaluation_key_to_dict(ek: EvaluationKey) -> dict:
    data = _header(ek.group, "evaluation-key")
    data.update(
        {
            "n_gates": ek.n_gates,
            "symbols": list(ek.symbols),
            "public": list(ek.public),
            "powers_of_s": [_element(e) for e in ek.powers_of_s],
            "v": [_element(e) for e in ek.v],
            "w": [_element(e) for e in ek.w],
            "k": [_element(e) for e in ek.k],
            "alpha_v": [_element(e) for e in ek.alpha_v],
            "alpha_w": [_element(e) for e in ek.alpha_w],
            "alpha_k": [_element(e) for e in ek.alpha_k],
            "beta": [_element(e) for e in ek.beta],
        }
    )
    return data


def verification_key_to_dict(vk: VerificationKey) -> dict:
    data = _header(vk.group, "verification-key")
    data.update(
        {
            "g": _element(vk.g),
            "alpha_v": _element(vk.alpha_v),
            "alpha_w": _element(vk.alpha_w),
            "alpha_k": _element(vk.alpha_k),
            "gamma": _element(vk.gamma),
            "beta_gamma": _element(vk.beta_gamma),
            "target_at_s": _element(vk.target_at_s),
            "public": [
                {"name": name, "v": _element(v), "w": _element(w), "k": _element(k)}
                for name, v, w, k in vk.public_entries
            ],
        }
    )
    return data


def witness_key_to_dict(wk: WitnessKey) -> dict:
    data = _header(wk.v.group, "witness-key")
    data.update({name: _element(getattr(wk, name)) for name in WitnessKey.FIELDS})
    return data


def key_to_json_bytes(data: dict) -> bytes:
    return (json.dumps(data, separators=(",", ":"), sort_keys=False) + "\n").encode()


def save_key(path, data: dict) -> None:
    with open(path, "wb") as fh:
        fh.write(key_to_json_bytes(data))


def _load_group(data: dict, kind: str, backend: str | None) -> Group:
    if data.get("format") != f"snarkpipe-{kind}/1":
        raise MalformedKey(f"not a {kind} file (format={data.get('format')!r})")
    file_backend = data.get("backend")
    if backend is not None and backend != file_backend:
        raise MalformedKey(
            f"key was written by the '{file_backend}' backend,"
            f" refusing to load it as '{backend}'"
        )
    try:
        ctx = FieldContext.from_json_dict(data["field"])
        return make_group(file_backend, ctx)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedKey(f"bad key header: {exc}") from exc


def _elements(group: Group, values, expect: int | None = None) -> list:
    out = [group.element_from_int(int(v)) for v in values]
    if expect is not None and len(out) != expect:
        raise MalformedKey(f"expected {expect} elements, found {len(out)}")
    return out


def load_evaluation_key(data: dict, backend: str | None = None) -> EvaluationKey:
    group = _load_group(data, "evaluation-key", backend)
    try:
        n_symbols = len(data["symbols"])
        return EvaluationKey(
            group=group,
            n_gates=int(data["n_gates"]),
            symbols=tuple(data["symbols"]),
            public=tuple(data["public"]),
            powers_of_s=_elements(
                group, data["powers_of_s"], int(data["n_gates"]) + 1
            ),
            v=_elements(group, data["v"], n_symbols),
            w=_elements(group, data["w"], n_symbols),
            k=_elements(group, data["k"], n_symbols),
            alpha_v=_elements(group, data["alpha_v"], n_symbols),
            alpha_w=_elements(group, data["alpha_w"], n_symbols),
            alpha_k=_elements(group, data["alpha_k"], n_symbols),
            beta=_elements(group, data["beta"], n_symbols),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedKey):
            raise
        raise MalformedKey(f"bad evaluation key: {exc}") from exc


def load_verification_key(data: dict, backend: str | None = None) -> VerificationKey:
    group = _load_group(data, "verification-key", backend)
    try:
        return VerificationKey(
            group=group,
            g=group.element_from_int(int(data["g"])),
            alpha_v=group.element_from_int(int(data["alpha_v"])),
            alpha_w=group.element_from_int(int(data["alpha_w"])),
            alpha_k=group.element_from_int(int(data["alpha_k"])),
            gamma=group.element_from_int(int(data["gamma"])),
            beta_gamma=group.element_from_int(int(data["beta_gamma"])),
            target_at_s=group.element_from_int(int(data["target_at_s"])),
            public_entries=[
                (
                    entry["name"],
                    group.element_from_int(int(entry["v"])),
                    group.element_from_int(int(entry["w"])),
                    group.element_from_int(int(entry["k"])),
                )
                for entry in data["public"]
            ],
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedKey):
            raise
        raise MalformedKey(f"bad verification key: {exc}") from exc


def load_witness_key(data: dict, backend: str | None = None) -> WitnessKey:
    group = _load_group(data, "witness-key", backend)
    try:
        return WitnessKey(
            **{
                name: group.element_from_int(int(data[name]))
                for name in WitnessKey.FIELDS
            }
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedKey):
            raise
        raise MalformedKey(f"bad witness key: {exc}") from exc
