# test_gadgets.py

import networkx as nx
import pytest

from zxft.builders import Gadget, gadget, graph_state
from zxft.errors import UnsupportedPhase
from zxft.webs import verify, web_basis

CLIFFORD_PI = [g for g in Gadget if g not in (Gadget.S, Gadget.Z_ROT)]


def suite(d):
    assert d.validate() == []
    basis = web_basis(d)
    assert len(basis.outer) == len(d.ports)
    for w in basis.webs:
        assert verify(w) == []
    return basis


@pytest.mark.parametrize('name', CLIFFORD_PI)
def test_gadget_webs(name):
    suite(gadget(name))


def test_quarter_turn_gadgets():
    for d in (gadget('s'), gadget('z_rot', quarter_turns=3)):
        assert d.validate() == []
        with pytest.raises(UnsupportedPhase):
            web_basis(d)
    suite(gadget('z_rot', quarter_turns=2))


def test_unknown_gadget():
    with pytest.raises(ValueError):
        gadget('toffoli')


def test_bell_measurement_signs():
    d = gadget('bell_meas')
    basis = suite(d)
    labels = {v.label: v.id for v in d.outcome_vars.values()}
    a, b = d.inputs()
    assert basis.find(outer={a: 'Z', b: 'Z'}).sign.vars == frozenset([labels['bZZ']])
    assert basis.find(outer={a: 'X', b: 'X'}).sign.vars == frozenset([labels['bXX']])
    assert basis.find(outer={a: 'Z', b: 'X'}) is None


def test_parity_measurements():
    for name, pauli, n in (('zz_meas', 'Z', 2), ('xx_meas', 'X', 2), ('w4_z_meas', 'Z', 4), ('w4_x_meas', 'X', 4)):
        d = gadget(name)
        basis = suite(d)
        (var,) = d.outcome_vars
        w = basis.find(outer={p: pauli for p in d.inputs()})
        assert w.sign.vars == frozenset([var])
        assert len(d.inputs()) == n


def test_ghz():
    d = gadget('ghz', n=5)
    basis = suite(d)
    outs = d.outputs()
    assert basis.find(outer={p: 'X' for p in outs}) is not None
    assert basis.find(outer={outs[0]: 'Z', outs[3]: 'Z'}) is not None
    assert basis.find(outer={outs[0]: 'Z'}) is None


def test_graph_state_stabilizers():
    g = nx.cycle_graph(4)
    d = graph_state(g)
    basis = suite(d)
    p = d.port_by_label
    for v in g.nodes:
        outer = {p('v{}'.format(v)): 'X'}
        outer.update({p('v{}'.format(u)): 'Z' for u in g.neighbors(v)})
        w = basis.find(outer=outer)
        assert w is not None
        assert w.sign.const == 0
    assert basis.find(outer={p('v0'): 'X'}) is None


def test_graph_state_inputs():
    assert graph_state([(0, 1), (1, 2)]).summary()['hadamard_edges'] == 2
    assert graph_state({0: [1], 1: [2], 2: []}).summary()['ports'] == 3
