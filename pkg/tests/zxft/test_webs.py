# test_webs.py

import numpy as np
import pytest

from zxft.builders import gadget, rep_code
from zxft.errors import ContractViolation, UnsupportedPhase
from zxft.webs import PauliWeb, WebClass, combine, constraints, verify, web_basis


def suite(basis):
    basis.webs
    basis.outer
    basis.checks
    basis.null
    basis.table()
    for w in basis.webs:
        assert verify(w) == []
        w.to_dict()
        repr(w)
    assert len(basis.outer) == len(basis.diagram.ports)


def test_cnot():
    d = gadget('cnot')
    basis = web_basis(d)
    suite(basis)
    assert len(basis.checks) == 0
    p = d.port_by_label
    w = basis.find(outer={p('in0'): 'X', p('out0'): 'X', p('out1'): 'X'})
    assert w is not None
    assert w.sign.const == 0 and w.sign.is_constant
    assert basis.find(outer={p('in0'): 'X', p('out0'): 'X'}) is None
    w = basis.find(outer={p('in1'): 'Z', p('out0'): 'Z', p('out1'): 'Z'})
    assert w is not None


def test_hadamard_swaps_colors():
    d = gadget('h')
    basis = web_basis(d)
    suite(basis)
    p = d.port_by_label
    assert basis.find(outer={p('in0'): 'X', p('out0'): 'Z'}) is not None
    assert basis.find(outer={p('in0'): 'X', p('out0'): 'X'}) is None
    assert basis.find(outer={p('in0'): 'Y', p('out0'): 'Y'}) is not None


def test_pi_phase_sign():
    d = gadget('z_rot', quarter_turns=2)
    basis = web_basis(d)
    p = d.port_by_label
    assert basis.find(outer={p('in0'): 'X', p('out0'): 'X'}).sign.const == 1
    assert basis.find(outer={p('in0'): 'Z', p('out0'): 'Z'}).sign.const == 0


def test_unsupported_phase():
    with pytest.raises(UnsupportedPhase):
        web_basis(gadget('s'))
    with pytest.raises(UnsupportedPhase):
        constraints(gadget('z_rot', quarter_turns=3))


def test_measurement_sign():
    d = gadget('meas_z')
    basis = web_basis(d)
    suite(basis)
    (w,) = basis.outer
    (s,) = d.instruments()
    assert w.outer_signature.to_string(d) == 'in:Z'
    assert w.inclusions == frozenset([s])
    assert w.sign.vars == d.spiders[s].instrument.vars


def test_rep_code_check():
    d = rep_code(2)
    basis = web_basis(d)
    suite(basis)
    assert len(basis.checks) == 1
    (check,) = basis.checks
    assert check.web_class is WebClass.CHECK
    assert check.sign.vars == frozenset(d.outcome_vars)
    assert check.sign.const == 0
    assert basis.find_check(d.instruments()) is not None
    assert basis.find_check(d.instruments()[:1]) is None


def test_rep_code_more_rounds():
    d = rep_code(4)
    basis = web_basis(d)
    suite(basis)
    assert len(basis.checks) == 3
    a, b, c, e = d.instruments()
    assert basis.find_check_among([a], free=[b]) is not None
    assert basis.find_check_among([a], free=[e]) is not None
    assert basis.find_check_among([a], free=[]) is None
    w = basis.find_check_among([a, c], free=[])
    assert w.inclusions == frozenset([a, c])


def test_broken_web():
    d = gadget('cnot')
    w = web_basis(d).outer[0]
    edges = w.edges
    edges.pop(sorted(edges)[0])
    assert verify(PauliWeb(d, edges, w.inclusions)) != []
    stray = PauliWeb(d, {999: (1, 0)})
    assert verify(stray) == ['highlight on unknown edge 999']
    with pytest.raises(KeyError):
        stray.sign
    assert verify(PauliWeb(d, {}, [999])) == ['inclusion on unknown spider 999']


def test_combine():
    d = gadget('cnot')
    basis = web_basis(d)
    w = combine(basis.outer[0], basis.outer[1])
    assert verify(w) == []
    assert combine(w, w).is_zero
    with pytest.raises(ContractViolation):
        combine(w, web_basis(d.copy()).outer[0])


def test_encode_matches_rows():
    d = rep_code(3)
    basis = web_basis(d)
    for i, w in enumerate(basis.webs):
        assert np.array_equal(basis.encode(w), basis.matrix[i])


def test_yy_measurement():
    d = gadget('yy_meas')
    basis = web_basis(d)
    suite(basis)
    p = d.port_by_label
    w = basis.find(outer={p('in0'): 'Y', p('in1'): 'Y'})
    assert w is not None
    assert len(w.sign.vars) == 1
