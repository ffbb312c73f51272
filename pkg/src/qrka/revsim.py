"""Basis-state simulator for reversible NOT/CNOT/Toffoli/CSWAP circuits.

Every gadget on the data path of the attack (comparator, controlled copy,
min/max selection) is a classical reversible map, so simulating computational
basis states is exact.  States are integers, wire ``w`` being bit ``w``;
:func:`run_many` runs a whole uint64 array of states at once.

Netlist text format, one item per line::

    WIDTH 9
    REG i input 0 1 2
    TOFFOLI 0 3 6
    CNOT 6 8

``#`` starts a comment.  Gates are listed in application order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from qrka.gf2 import BitVec

GATE_ARITY = {"NOT": 1, "CNOT": 2, "TOFFOLI": 3, "CSWAP": 3}
ROLES = ("input", "output", "ancilla")
MAX_EXHAUSTIVE_WIDTH = 16


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.kind!r}")
        if len(self.wires) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {GATE_ARITY[self.kind]} wires, got {self.wires}")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"{self.kind} wires must be distinct: {self.wires}")

    def __str__(self):
        return " ".join([self.kind, *map(str, self.wires)])


def NOT(t: int) -> Gate:
    return Gate("NOT", (t,))


def CNOT(c: int, t: int) -> Gate:
    return Gate("CNOT", (c, t))


def TOFFOLI(c1: int, c2: int, t: int) -> Gate:
    return Gate("TOFFOLI", (c1, c2, t))


def CSWAP(c: int, a: int, b: int) -> Gate:
    return Gate("CSWAP", (c, a, b))


@dataclass(frozen=True)
class Register:
    name: str
    wires: tuple[int, ...]
    role: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {self.role!r}")


@dataclass
class ReversibleCircuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    registers: dict[str, Register] = field(default_factory=dict)

    def __post_init__(self):
        for g in self.gates:
            self._check_gate(g)
        seen: set[int] = set()
        for reg in self.registers.values():
            for w in reg.wires:
                if not 0 <= w < self.width:
                    raise ValueError(f"register {reg.name} wire {w} out of range")
                if w in seen:
                    raise ValueError(f"wire {w} belongs to two registers")
                seen.add(w)

    def _check_gate(self, g: Gate):
        for w in g.wires:
            if not 0 <= w < self.width:
                raise ValueError(f"{g} uses wire {w} outside width {self.width}")

    def add_register(self, name: str, size: int, role: str) -> Register:
        start = self.width
        self.width += size
        reg = Register(name, tuple(range(start, start + size)), role)
        if name in self.registers:
            raise ValueError(f"duplicate register {name!r}")
        self.registers[name] = reg
        return reg

    def append(self, gates: Gate | Iterable[Gate]):
        if isinstance(gates, Gate):
            gates = [gates]
        for g in gates:
            self._check_gate(g)
            self.gates.append(g)

    def __getitem__(self, name: str) -> Register:
        return self.registers[name]

    def mirror(self) -> ReversibleCircuit:
        """Inverse circuit: every gate here is an involution, so just reverse the list."""
        return ReversibleCircuit(self.width, self.gates[::-1], dict(self.registers))

    # register packing helpers --------------------------------------------

    def pack(self, **values: int) -> int:
        """Basis state with each named register holding an integer (LSB on its first wire)."""
        state = 0
        for name, v in values.items():
            reg = self.registers[name]
            if not 0 <= v < (1 << len(reg.wires)):
                raise ValueError(f"{v} does not fit register {name}")
            for i, w in enumerate(reg.wires):
                state |= ((v >> i) & 1) << w
        return state

    def pack_many(self, **values: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`pack` over equal-length uint64 arrays."""
        states = None
        for name, v in values.items():
            v = np.asarray(v, dtype=np.uint64)
            if states is None:
                states = np.zeros_like(v)
            for i, w in enumerate(self.registers[name].wires):
                states |= ((v >> np.uint64(i)) & np.uint64(1)) << np.uint64(w)
        return states

    def unpack(self, state, name: str):
        reg = self.registers[name]
        if isinstance(state, np.ndarray):
            out = np.zeros(state.shape, dtype=np.uint64)
            for i, w in enumerate(reg.wires):
                out |= ((state >> np.uint64(w)) & np.uint64(1)) << np.uint64(i)
            return out
        return sum(((state >> w) & 1) << i for i, w in enumerate(reg.wires))

    def scratch_wires(self) -> list[int]:
        return [w for reg in self.registers.values() if reg.role == "ancilla" for w in reg.wires]


def run(c: ReversibleCircuit, state):
    """Apply ``c`` to one basis state (``int`` or :class:`BitVec`)."""
    if isinstance(state, BitVec):
        if state.width != c.width:
            raise ValueError(f"state width {state.width} != circuit width {c.width}")
        return BitVec(run(c, state.value), c.width)
    if not 0 <= state < (1 << c.width):
        raise ValueError(f"state does not fit in {c.width} wires")
    for g in c.gates:
        w = g.wires
        if g.kind == "NOT":
            state ^= 1 << w[0]
        elif g.kind == "CNOT":
            state ^= ((state >> w[0]) & 1) << w[1]
        elif g.kind == "TOFFOLI":
            state ^= ((state >> w[0]) & (state >> w[1]) & 1) << w[2]
        else:
            if (state >> w[0]) & 1:
                diff = ((state >> w[1]) ^ (state >> w[2])) & 1
                state ^= (diff << w[1]) | (diff << w[2])
    return state


def run_many(c: ReversibleCircuit, states: np.ndarray) -> np.ndarray:
    """Vectorised :func:`run` over a uint64 array (width <= 64)."""
    if c.width > 64:
        raise ValueError("run_many supports at most 64 wires")
    s = np.array(states, dtype=np.uint64)
    one = np.uint64(1)
    for g in c.gates:
        w = [np.uint64(x) for x in g.wires]
        if g.kind == "NOT":
            s ^= one << w[0]
        elif g.kind == "CNOT":
            s ^= ((s >> w[0]) & one) << w[1]
        elif g.kind == "TOFFOLI":
            s ^= ((s >> w[0]) & (s >> w[1]) & one) << w[2]
        else:
            diff = ((s >> w[0]) & ((s >> w[1]) ^ (s >> w[2]))) & one
            s ^= (diff << w[1]) | (diff << w[2])
    return s


# gadgets ------------------------------------------------------------------

def _comparator_gates(i: Sequence[int], j: Sequence[int], carry: Sequence[int]) -> list[Gate]:
    """Carry chain of ``j + ~i``; ``carry[t]`` ends as the carry into bit ``t+1``.

    The final carry is the top bit of the ``(n+1)``-bit one's-complement
    difference ``j - i - 1 + 2^n``, which is set iff ``i < j``.
    """
    gates = [NOT(w) for w in i]
    prev = None
    for t, (a, b, out) in enumerate(zip(i, j, carry)):
        # out = MAJ(a, b, prev) = ab ^ a.prev ^ b.prev
        gates.append(TOFFOLI(a, b, out))
        if prev is not None:
            gates.append(TOFFOLI(a, prev, out))
            gates.append(TOFFOLI(b, prev, out))
        prev = out
    return gates


def _comparator_into(c: ReversibleCircuit, i: Sequence[int], j: Sequence[int],
                     out: int, carry: Sequence[int]):
    forward = _comparator_gates(i, j, carry)
    c.append(forward)
    c.append(CNOT(carry[-1], out))
    c.append(forward[::-1])


def build_comparator(n: int) -> ReversibleCircuit:
    """``out ^= [i < j]`` for unsigned ``n``-bit ``i``, ``j``; scratch carries end at 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = ReversibleCircuit(0)
    i = c.add_register("i", n, "input")
    j = c.add_register("j", n, "input")
    out = c.add_register("out", 1, "output")
    scratch = c.add_register("scratch", n, "ancilla")
    _comparator_into(c, i.wires, j.wires, out.wires[0], scratch.wires)
    return c


def _copy_gates(src: Sequence[int], ctrl: int, dst: Sequence[int]) -> list[Gate]:
    return [TOFFOLI(ctrl, s, d) for s, d in zip(src, dst)]


def build_controlled_copy(n: int) -> ReversibleCircuit:
    """``dst ^= src`` when ``ctrl`` is set: a copy whenever ``dst`` starts zeroed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = ReversibleCircuit(0)
    src = c.add_register("src", n, "input")
    ctrl = c.add_register("ctrl", 1, "input")
    dst = c.add_register("dst", n, "output")
    c.append(_copy_gates(src.wires, ctrl.wires[0], dst.wires))
    return c


def build_minmax_network(width: int, uncompute_cmp: bool = False) -> ReversibleCircuit:
    """Write ``min(c, c')`` into ``lo`` and ``max(c, c')`` into ``hi``.

    Comparator, then four controlled copies (two on ``cmp``, two on its
    negation realised as NOT-control-NOT).  ``cmp`` is left holding
    ``[c < c']``; comparator scratch is already clean.  With
    ``uncompute_cmp=True`` the comparator runs once more, which returns
    ``cmp`` to 0 because the copies leave ``c`` and ``c'`` untouched.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    circ = ReversibleCircuit(0)
    a = circ.add_register("c", width, "input")
    b = circ.add_register("c_prime", width, "input")
    cmp_role = "ancilla" if uncompute_cmp else "output"
    cmp = circ.add_register("cmp", 1, cmp_role).wires[0]
    lo = circ.add_register("lo", width, "output")
    hi = circ.add_register("hi", width, "output")
    scratch = circ.add_register("scratch", width, "ancilla")
    _comparator_into(circ, a.wires, b.wires, cmp, scratch.wires)
    circ.append(_copy_gates(a.wires, cmp, lo.wires))
    circ.append(_copy_gates(b.wires, cmp, hi.wires))
    circ.append(NOT(cmp))
    circ.append(_copy_gates(b.wires, cmp, lo.wires))
    circ.append(_copy_gates(a.wires, cmp, hi.wires))
    circ.append(NOT(cmp))
    if uncompute_cmp:
        _comparator_into(circ, a.wires, b.wires, cmp, scratch.wires)
    return circ


GADGETS = {
    "comparator": build_comparator,
    "copy": build_controlled_copy,
    "minmax": build_minmax_network,
}


# verification and statistics -------------------------------------------

def verify_reversible(c: ReversibleCircuit) -> bool:
    """Exhaustively check that ``run(c, .)`` permutes ``{0,1}^width``."""
    if c.width > MAX_EXHAUSTIVE_WIDTH:
        raise ValueError(f"width {c.width} exceeds exhaustive limit {MAX_EXHAUSTIVE_WIDTH}")
    states = np.arange(1 << c.width, dtype=np.uint64)
    out = run_many(c, states)
    seen = np.zeros(1 << c.width, dtype=bool)
    seen[out.astype(np.int64)] = True
    return bool(seen.all())


def gate_stats(c: ReversibleCircuit) -> dict:
    """Gate counts by kind plus a greedy layered depth."""
    counts = {kind: 0 for kind in GATE_ARITY}
    level = [0] * c.width
    depth = 0
    for g in c.gates:
        counts[g.kind] += 1
        d = 1 + max(level[w] for w in g.wires)
        for w in g.wires:
            level[w] = d
        depth = max(depth, d)
    return {"counts": counts, "total": len(c.gates), "depth": depth, "width": c.width}


# netlist I/O ------------------------------------------------------------------

def to_netlist(c: ReversibleCircuit) -> str:
    lines = [f"WIDTH {c.width}"]
    for reg in c.registers.values():
        lines.append(" ".join(["REG", reg.name, reg.role, *map(str, reg.wires)]))
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def from_netlist(text: str) -> ReversibleCircuit:
    width = None
    registers: dict[str, Register] = {}
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "WIDTH":
                width = int(rest[0])
            elif head == "REG":
                name, role, *wires = rest
                registers[name] = Register(name, tuple(int(w) for w in wires), role)
            else:
                gates.append(Gate(head, tuple(int(w) for w in rest)))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"netlist line {lineno}: {raw!r}: {exc}") from None
    if width is None:
        width = 1 + max((w for g in gates for w in g.wires), default=-1)
    return ReversibleCircuit(width, gates, registers)
