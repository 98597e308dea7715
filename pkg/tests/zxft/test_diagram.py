# test_diagram.py

import pytest

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, PortDirection, SpiderKind
from zxft.errors import IntegrityError


def wire(kind=SpiderKind.Z, phase=0):
    d = Diagram()
    i = d.add_port(PortDirection.IN, 'in0')
    o = d.add_port(PortDirection.OUT, 'out0')
    s = d.add_spider(kind, phase)
    d.add_edge(i, s)
    d.add_edge(s, o)
    return d, i, s, o


def suite(d):
    d.spiders
    d.edges
    d.ports
    d.outcome_vars
    d.port_order()
    d.instruments()
    d.summary()
    repr(d)
    assert d.validate() == []


def test_wire():
    d, i, s, o = wire()
    suite(d)
    assert d.degree(s) == 2
    assert sorted(d.neighbors(s)) == [i, o]
    assert d.inputs() == [i]
    assert d.outputs() == [o]
    assert d.port_by_label('out0') == o


def test_ids_never_reused():
    d, i, s, o = wire()
    d.remove_spider(s)
    s2 = d.add_spider(SpiderKind.X)
    assert s2 not in (i, s, o)
    with pytest.raises(IntegrityError):
        d.add_spider(SpiderKind.Z, sid=i)


def test_port_second_edge():
    d, i, s, o = wire()
    with pytest.raises(IntegrityError):
        d.add_edge(i, s)


def test_dangling_endpoint():
    d = Diagram()
    s = d.add_spider(SpiderKind.Z)
    with pytest.raises(IntegrityError):
        d.add_edge(s, 99)


def test_phase_mod_4():
    d, _, s, _ = wire(phase=5)
    assert d.spiders[s].phase == 1
    d.set_phase(s, -1)
    assert d.spiders[s].phase == 3


def test_port_degree_violation():
    d = Diagram()
    d.add_port(PortDirection.OUT)
    assert d.validate() == ['port 0 degree 0']


def test_instrument_needs_known_var():
    d = Diagram()
    with pytest.raises(IntegrityError):
        d.add_spider(SpiderKind.X, instrument=OutcomeExpr.from_var(3))
    v = d.add_outcome_var('b')
    s = d.add_spider(SpiderKind.X, instrument=OutcomeExpr.from_var(v))
    assert d.instruments() == [s]
    with pytest.raises(IntegrityError):
        d.remove_outcome_var(v)
    assert d.spiders[s].effective_phase({v: 1}) == 2
    assert d.spiders[s].effective_phase({v: 0}) == 0


def test_outcome_expr():
    a = OutcomeExpr.from_var(0) ^ OutcomeExpr.from_var(1) ^ 1
    assert a.value({0: 1, 1: 1}) == 1
    assert (a ^ OutcomeExpr.from_var(0)).vars == frozenset([1])
    assert OutcomeExpr.constant(1).is_constant
    assert str(OutcomeExpr()) == '0'


def test_edge_kind_algebra():
    assert EdgeKind.HADAMARD ^ EdgeKind.HADAMARD is EdgeKind.PLAIN
    assert EdgeKind.PLAIN.flipped is EdgeKind.HADAMARD
    assert SpiderKind.Z.other is SpiderKind.X


def test_normalize_loops(caplog):
    d, _, s, _ = wire()
    d.add_edge(s, s)
    d.add_edge(s, s, EdgeKind.HADAMARD)
    assert d.degree(s) == 6
    notes = d.normalize()
    assert len(notes) == 2
    assert d.degree(s) == 2
    assert d.spiders[s].phase == 2
    assert 'Hadamard self-loop' in caplog.text


def test_reconnect():
    d, i, s, o = wire()
    s2 = d.add_spider(SpiderKind.X)
    e = d.port_edge(o)
    d.reconnect(e, s, s2)
    assert d.neighbors(s2) == [o]
    assert d.degree(s) == 1


def test_copy_is_independent():
    d, _, s, _ = wire()
    c = d.copy()
    c.set_kind(s, SpiderKind.X)
    assert d.spiders[s].kind is SpiderKind.Z
