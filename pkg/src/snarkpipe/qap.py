"""Turn a gate circuit into a quadratic program over interpolation nodes 1..N.

Every witness-carrying wire (the one-wire, each input, each hint, each gate
output) gets a triple of polynomials. At node d the triple encodes gate d:

    Times gate  l * r = o:  left operand adds to its v column, right operand
                            to its w column, and the output owns k(d) = 1.
    Plus gate   l + r = o:  both operands add to their v columns, the
                            one-wire's w column gets 1, the output owns
                            k(d) = 1, so (t_l + t_r) * 1 = t_o.

Constant operands contribute value-many units to the one-wire's column
instead of owning symbols. An assignment t then satisfies every gate exactly
when the combined polynomial

    F = (sum_i t_i v_i) * (sum_i t_i w_i) - (sum_i t_i k_i)

vanishes on 1..N, i.e. when the target product T(x) = prod(x - d) divides F.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circuit import TIMES, Circuit, IncompleteAssignment
from .field import FieldContext
from .polynomial import Polynomial, lagrange_basis
from .rng import Sha256Rng

__all__ = [
    "QAP",
    "AssembledInstance",
    "FieldTooSmall",
    "assemble",
    "build_qap",
    "soundness_scan",
]


class FieldTooSmall(ValueError):
    """The modulus must exceed twice the gate count."""


@dataclass
class QAP:
    ctx: FieldContext
    n_gates: int
    symbols: tuple  # wire ids, ordered: one, inputs, then remaining by id
    symbol_names: tuple
    v: list  # per-symbol Polynomial
    w: list
    k: list
    target: Polynomial

    def symbol_index(self, name: str) -> int:
        try:
            return self.symbol_names.index(name)
        except ValueError:
            raise ValueError(f"unknown symbol {name!r}") from None

    def to_json_dict(self) -> dict:
        def dump(polys):
            return [[str(c) for c in poly.coeffs] for poly in polys]

        return {
            "format": "snarkpipe-qap/1",
            "field": self.ctx.to_json_dict(),
            "n_gates": self.n_gates,
            "symbols": list(self.symbol_names),
            "v": dump(self.v),
            "w": dump(self.w),
            "k": dump(self.k),
            "target": [str(c) for c in self.target.coeffs],
        }


@dataclass
class AssembledInstance:
    v: Polynomial
    w: Polynomial
    k: Polynomial
    f: Polynomial  # v*w - k
    h: Polynomial | None  # exact quotient f / target, present iff divisible
    divisible: bool


def build_qap(circuit: Circuit) -> QAP:
    ctx = circuit.ctx
    n = circuit.n_gates
    if ctx.p <= 2 * n:
        raise FieldTooSmall(
            f"modulus {ctx.p} must exceed 2N = {2 * n} for a {n}-gate circuit"
        )
    symbols = tuple(circuit.symbol_wires())
    position = {wire: idx for idx, wire in enumerate(symbols)}
    one_pos = position[0]

    cols_v: list = [{} for _ in symbols]
    cols_w: list = [{} for _ in symbols]
    cols_k: list = [{} for _ in symbols]

    def contribute(cols, wire_id: int, d: int) -> None:
        wire = circuit.wires[wire_id]
        if wire.kind == "const":
            col = cols[one_pos]
            col[d] = (col.get(d, 0) + wire.value) % ctx.p
        elif wire.kind == "one":
            col = cols[one_pos]
            col[d] = (col.get(d, 0) + 1) % ctx.p
        else:
            col = cols[position[wire_id]]
            col[d] = (col.get(d, 0) + 1) % ctx.p

    for gate in circuit.gates:
        d = gate.index
        if gate.op == TIMES:
            contribute(cols_v, gate.left, d)
            contribute(cols_w, gate.right, d)
        else:
            contribute(cols_v, gate.left, d)
            contribute(cols_v, gate.right, d)
            cols_w[one_pos][d] = 1
        cols_k[position[gate.out]][d] = 1

    nodes = list(range(1, n + 1))
    basis = lagrange_basis(ctx, nodes)

    def interpolate_column(col: dict) -> Polynomial:
        if not col:
            return Polynomial.zero(ctx)
        acc = [0] * n
        p = ctx.p
        for d, value in col.items():
            if value == 0:
                continue
            for i, c in enumerate(basis[d - 1].coeffs):
                acc[i] = (acc[i] + value * c) % p
        return Polynomial(ctx, acc)

    return QAP(
        ctx=ctx,
        n_gates=n,
        symbols=symbols,
        symbol_names=tuple(circuit.wire_label(wire) for wire in symbols),
        v=[interpolate_column(col) for col in cols_v],
        w=[interpolate_column(col) for col in cols_w],
        k=[interpolate_column(col) for col in cols_k],
        target=Polynomial.from_roots(ctx, nodes),
    )


def _weights(qap: QAP, assignment: dict) -> list:
    missing = [wire for wire in qap.symbols if wire not in assignment]
    if missing:
        raise IncompleteAssignment(
            f"assignment misses {len(missing)} symbol wire(s), first: {missing[0]}"
        )
    return [int(qap.ctx(assignment[wire])) for wire in qap.symbols]


def assemble(qap: QAP, assignment: dict) -> AssembledInstance:
    """Form the weighted sums and test divisibility by the target."""
    p = qap.ctx.p
    weights = _weights(qap, assignment)

    def combine(polys) -> Polynomial:
        acc = [0] * max(1, qap.n_gates)
        for weight, poly in zip(weights, polys):
            if weight == 0:
                continue
            for i, c in enumerate(poly.coeffs):
                acc[i] = (acc[i] + weight * c) % p
        return Polynomial(qap.ctx, acc)

    v = combine(qap.v)
    w = combine(qap.w)
    k = combine(qap.k)
    f = v * w - k
    quotient, remainder = divmod(f, qap.target)
    divisible = remainder.is_zero()
    return AssembledInstance(
        v=v, w=w, k=k, f=f, h=quotient if divisible else None, divisible=divisible
    )


def soundness_scan(
    qap: QAP,
    assignment: dict,
    trials: int | None = None,
    seed: bytes = b"soundness-scan",
) -> Fraction:
    """Fraction of evaluation points where a forged quotient survives.

    The forger rounds F / T down to its polynomial quotient H' and hopes the
    verifier's random point s satisfies v(s)w(s) - k(s) = H'(s)T(s). For a
    genuine solution that identity holds everywhere; otherwise it can hold
    on at most deg(F) <= 2N points. With trials=None every field point is
    scanned (meant for small moduli); otherwise `trials` points are drawn
    uniformly at random.
    """
    p = qap.ctx.p
    inst = assemble(qap, assignment)
    forged_quotient, _ = divmod(inst.f, qap.target)

    if trials is None:
        points = range(p)
        total = p
    else:
        rng = Sha256Rng(seed, label=b"scan")
        points = (rng.randrange(p) for _ in range(trials))
        total = trials

    f_coeffs = inst.f.coeffs
    h_coeffs = forged_quotient.coeffs
    t_coeffs = qap.target.coeffs
    hits = 0
    for x in points:
        lhs = 0
        for c in reversed(f_coeffs):
            lhs = (lhs * x + c) % p
        h_val = 0
        for c in reversed(h_coeffs):
            h_val = (h_val * x + c) % p
        t_val = 0
        for c in reversed(t_coeffs):
            t_val = (t_val * x + c) % p
        if lhs == h_val * t_val % p:
            hits += 1
    return Fraction(hits, total)
