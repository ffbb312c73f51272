import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrka import revsim
from qrka.revsim import (CNOT, CSWAP, NOT, TOFFOLI, Gate, ReversibleCircuit, build_comparator,
                         build_controlled_copy, build_minmax_network, from_netlist, gate_stats,
                         run, run_many, to_netlist, verify_reversible)


def all_pairs(n):
    a, b = np.meshgrid(np.arange(1 << n, dtype=np.uint64), np.arange(1 << n, dtype=np.uint64))
    return a.ravel(), b.ravel()


def test_truth_tables():
    assert run(ReversibleCircuit(2), 0b10) == 0b10
    assert run(ReversibleCircuit(2, [CNOT(0, 1)]), 0b01) == 0b11  # wire 0 set -> wire 1 set
    for state in range(8):
        a, b, t = state & 1, (state >> 1) & 1, (state >> 2) & 1
        assert run(ReversibleCircuit(3, [TOFFOLI(0, 1, 2)]), state) == a | b << 1 | (t ^ (a & b)) << 2
        swapped = b | a << 1 | t << 2 if t else state
        assert run(ReversibleCircuit(3, [CSWAP(2, 0, 1)]), state) == swapped
        assert run(ReversibleCircuit(3, [NOT(1)]), state) == state ^ 2


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("CNOT", (1, 1))
    with pytest.raises(ValueError):
        Gate("FOO", (1,))
    with pytest.raises(ValueError):
        ReversibleCircuit(2, [TOFFOLI(0, 1, 2)])


gate_st = st.integers(2, 8).flatmap(lambda w: st.tuples(st.just(w), st.lists(
    st.one_of(
        st.permutations(range(w)).map(lambda p: NOT(p[0])),
        st.permutations(range(w)).map(lambda p: CNOT(p[0], p[1])),
        st.permutations(range(w)).map(lambda p: TOFFOLI(p[0], p[1], p[2])) if w >= 3 else st.nothing(),
        st.permutations(range(w)).map(lambda p: CSWAP(p[0], p[1], p[2])) if w >= 3 else st.nothing(),
    ), max_size=30)))


@settings(max_examples=100)
@given(gate_st)
def test_mirror_is_inverse_and_vector_path_agrees(wg):
    width, gates = wg
    c = ReversibleCircuit(width, gates)
    states = np.arange(1 << width, dtype=np.uint64)
    out = run_many(c, states)
    assert [run(c, int(s)) for s in states] == out.tolist()
    assert (run_many(c.mirror(), out) == states).all()
    assert verify_reversible(c)


def test_comparator_small_examples():
    c = build_comparator(3)
    assert c.unpack(run(c, c.pack(i=0, j=0)), "out") == 0
    assert c.unpack(run(c, c.pack(i=2, j=5)), "out") == 1
    assert c.unpack(run(c, c.pack(i=5, j=2)), "out") == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
def test_comparator_exhaustive(n):
    c = build_comparator(n)
    i, j = all_pairs(n)
    out = run_many(c, c.pack_many(i=i, j=j))
    assert (c.unpack(out, "out") == (i < j)).all()
    assert (c.unpack(out, "i") == i).all() and (c.unpack(out, "j") == j).all()
    assert (c.unpack(out, "scratch") == 0).all()
    # out is XORed, so a preset out bit flips accordingly
    out1 = run_many(c, c.pack_many(i=i, j=j, out=np.ones_like(i)))
    assert (c.unpack(out1, "out") == (i >= j)).all()


def test_controlled_copy():
    n = 4
    c = build_controlled_copy(n)
    for src, dst in itertools.product(range(16), repeat=2):
        s0 = run(c, c.pack(src=src, ctrl=0, dst=dst))
        assert c.unpack(s0, "dst") == dst and c.unpack(s0, "src") == src
        s1 = run(c, c.pack(src=src, ctrl=1, dst=dst))
        assert c.unpack(s1, "dst") == dst ^ src
        assert c.unpack(s1, "src") == src and c.unpack(s1, "ctrl") == 1
    assert gate_stats(c)["counts"]["TOFFOLI"] == n


@pytest.mark.parametrize("w", [1, 2, 3, 4, 5])
def test_minmax_exhaustive(w):
    c = build_minmax_network(w)
    a, b = all_pairs(w)
    out = run_many(c, c.pack_many(c=a, c_prime=b))
    assert (c.unpack(out, "lo") == np.minimum(a, b)).all()
    assert (c.unpack(out, "hi") == np.maximum(a, b)).all()
    assert (c.unpack(out, "c") == a).all() and (c.unpack(out, "c_prime") == b).all()
    assert (c.unpack(out, "cmp") == (a < b)).all()
    assert (c.unpack(out, "scratch") == 0).all()


def test_minmax_tie():
    c = build_minmax_network(4)
    s = run(c, c.pack(c=9, c_prime=9))
    assert (c.unpack(s, "lo"), c.unpack(s, "hi"), c.unpack(s, "cmp")) == (9, 9, 0)


@pytest.mark.parametrize("w", [1, 3, 4])
def test_minmax_uncompute_cmp_option(w):
    c = build_minmax_network(w, uncompute_cmp=True)
    a, b = all_pairs(w)
    out = run_many(c, c.pack_many(c=a, c_prime=b))
    assert (c.unpack(out, "lo") == np.minimum(a, b)).all()
    assert (c.unpack(out, "hi") == np.maximum(a, b)).all()
    assert (c.unpack(out, "cmp") == 0).all()
    assert (c.unpack(out, "scratch") == 0).all()


@pytest.mark.parametrize("uncompute", [False, True])
def test_minmax_composition_gate_for_gate(uncompute):
    w = 5
    c = build_minmax_network(w, uncompute_cmp=uncompute)
    comp = build_comparator(w)
    regs = c.registers
    # relabel comparator wires onto the network's registers
    wire_map = {}
    for src, dst in (("i", "c"), ("j", "c_prime"), ("out", "cmp"), ("scratch", "scratch")):
        wire_map.update(zip(comp[src].wires, regs[dst].wires))
    mapped = [Gate(g.kind, tuple(wire_map[x] for x in g.wires)) for g in comp.gates]
    cmp = regs["cmp"].wires[0]

    def copies(src, dst):
        return [TOFFOLI(cmp, s, d) for s, d in zip(regs[src].wires, regs[dst].wires)]

    middle = (copies("c", "lo") + copies("c_prime", "hi") + [NOT(cmp)]
              + copies("c_prime", "lo") + copies("c", "hi") + [NOT(cmp)])
    assert c.gates == mapped + middle + (mapped[::-1] if uncompute else [])


def test_minmax_agrees_with_set_encoding_order():
    from qrka.fs import encode_pair
    w = 16
    c = build_minmax_network(w)
    rng = np.random.default_rng(4)
    for a, b in rng.integers(0, 1 << 16, (200, 2)):
        a, b = int(a), int(b)
        if a == b:
            continue
        s = run(c, c.pack(c=a, c_prime=b))
        enc = encode_pair((a >> 8, a & 255), (b >> 8, b & 255), 8)
        lo = enc.lo[0] << 8 | enc.lo[1]
        hi = enc.hi[0] << 8 | enc.hi[1]
        assert (c.unpack(s, "lo"), c.unpack(s, "hi")) == (lo, hi)


def test_gadgets_bijective_up_to_width_16():
    checked = 0
    for name, build in revsim.GADGETS.items():
        for n in range(1, 9):
            c = build(n)
            if c.width > 16:
                break
            assert verify_reversible(c), (name, n)
            checked += 1
    assert checked >= 10


def test_verify_reversible_rejects_wide():
    with pytest.raises(ValueError):
        verify_reversible(build_comparator(6))


def test_gate_stats_and_linear_size():
    st3 = gate_stats(build_comparator(3))
    assert st3["counts"] == {"NOT": 6, "CNOT": 1, "TOFFOLI": 14, "CSWAP": 0}
    ns = np.arange(4, 13)
    totals = np.array([gate_stats(build_comparator(int(n)))["total"] for n in ns])
    assert (totals == 8 * ns - 3).all()
    assert gate_stats(ReversibleCircuit(3, [CNOT(0, 1), NOT(2), TOFFOLI(0, 1, 2)]))["depth"] == 2


@pytest.mark.parametrize("gadget", sorted(revsim.GADGETS))
def test_netlist_roundtrip(gadget):
    c = revsim.GADGETS[gadget](3)
    text = to_netlist(c)
    back = from_netlist(text)
    assert back.gates == c.gates and back.width == c.width
    assert back.registers == c.registers
    assert to_netlist(back) == text


def test_netlist_parse_plain_gates():
    c = from_netlist("# tiny\nCNOT 0 1\n\nTOFFOLI 0 1 2  # trailing\n")
    assert c.width == 3 and c.gates == [CNOT(0, 1), TOFFOLI(0, 1, 2)]
    with pytest.raises(ValueError, match="line 1"):
        from_netlist("CNOT 0\n")
