# test_lattices.py

import pytest

from zxft.builders import (Flavor, PatchSpec, StabilizerOrder, build, cbqc, chain_neighbors, chain_schedule, fbqc,
                           flobqc, is_bulk_chain, mbqc, rep_code, rep_code_lattice, resource_states, ring_states,
                           rotated_patch)
from zxft.webs import web_basis


def suite(d, meta):
    assert d.validate() == []
    assert meta.coverage(d) == []
    meta.to_dict()
    assert all(d.is_spider(s) for s in meta.roles)


@pytest.mark.parametrize('distance, n_z, n_x', [(2, 1, 2), (3, 4, 4), (4, 7, 8), (5, 12, 12)])
def test_rotated_patch(distance, n_z, n_x):
    qubits, stabs = rotated_patch(distance)
    assert len(qubits) == distance ** 2
    assert len(stabs) == distance ** 2 - 1
    assert sum(1 for s in stabs if s.basis == 'Z') == n_z
    assert sum(1 for s in stabs if s.basis == 'X') == n_x
    assert [s.basis for s in stabs] == ['Z'] * n_z + ['X'] * n_x
    assert all(s.weight in (2, 4) for s in stabs)
    for s in stabs:
        for t in stabs:
            if s.basis != t.basis:
                assert len(set(s.support) & set(t.support)) % 2 == 0


def test_patch_spec():
    spec = PatchSpec(3, 2, 'x_first')
    assert spec.order is StabilizerOrder.X_FIRST
    assert spec.layer_bases == ['X', 'Z']
    assert PatchSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        PatchSpec(1, 2)
    with pytest.raises(ValueError):
        PatchSpec(3, 0)
    with pytest.raises(ValueError):
        PatchSpec(3, 2, ring_size=4)


def test_cbqc_checks():
    d, meta = cbqc(PatchSpec(2, 3))
    suite(d, meta)
    basis = web_basis(d)
    assert len(basis.checks) == 6
    assert len(meta.detectors) == 6
    assert len(basis.outer) == len(d.ports)


def test_rep_code():
    d, meta = rep_code_lattice(2)
    suite(d, meta)
    (check,) = web_basis(d).checks
    assert check.sign.vars == frozenset(meta.slots.values())
    with pytest.raises(ValueError):
        rep_code(1)


def test_cbqc_logical_z():
    d, meta = cbqc(PatchSpec(5, 3))
    suite(d, meta)
    basis = web_basis(d)
    column = [(0, j) for j in range(5)]
    outer = {meta.inputs[q]: 'Z' for q in column}
    outer.update({meta.outputs[q]: 'Z' for q in column})
    w = basis.find(outer=outer)
    assert w is not None
    assert w.outer_signature.to_string(d).count('Z') == 10
    row = [(i, 0) for i in range(5)]
    outer = {meta.inputs[q]: 'Z' for q in row}
    outer.update({meta.outputs[q]: 'Z' for q in row})
    assert basis.find(outer=outer) is None


def test_bulk_stabilizers():
    _, meta = cbqc(PatchSpec(3, 2))
    assert not any(meta.is_bulk_stabilizer(i) for i in range(len(meta.stabilizers)))
    _, meta = cbqc(PatchSpec(5, 3))
    bulk = [i for i in range(len(meta.stabilizers)) if meta.is_bulk_stabilizer(i)]
    assert len(bulk) > 0
    assert meta.bulk_detectors()
    for i, t in meta.detectors:
        first, last = meta.layer_of(i, t - 1), meta.layer_of(i, t)
        expected = i in bulk and first > 0 and last < meta.n_layers - 1
        assert meta.is_bulk_detector(i, t) == expected
    z = [i for i in bulk if meta.stabilizers[i].basis == 'Z']
    x = [i for i in bulk if meta.stabilizers[i].basis == 'X']
    assert not any(meta.is_bulk_detector(i, 1) for i in z)
    assert all(meta.is_bulk_detector(i, 2) for i in z)
    assert all(meta.is_bulk_detector(i, 1) for i in x)
    assert not any(meta.is_bulk_detector(i, 2) for i in x)


def test_mbqc():
    d, meta = mbqc(PatchSpec(3, 2))
    suite(d, meta)
    assert meta.flavor is Flavor.MBQC
    assert any(k[0] == 'data' for k in meta.slots)
    boundary = {n for p in d.ports for n in d.neighbors(p)}
    for s in d.spiders:
        assert (d.spiders[s].instrument is None) == (s in boundary)


@pytest.mark.parametrize('spec', [PatchSpec(3, 2), PatchSpec(5, 3)])
def test_fbqc(spec):
    d, meta = fbqc(spec)
    suite(d, meta)
    assert meta.fusions
    kinds = {k[0] for k in meta.slots}
    assert {'bXX', 'bZZ'} <= kinds
    pieces = resource_states(d, meta)
    assert sum(len(p) for p in pieces) == len(d.spiders) - 2 * len(meta.fusions)
    assert meta.rings == ring_states(d, meta)
    assert meta.rings
    for ring in meta.rings:
        assert len(ring) == 6
        assert sorted(meta.roles[s][0] for s in ring) == ['data'] * 4 + ['stab'] * 2
        assert any(sorted(ring) == p for p in pieces)


@pytest.mark.parametrize('spec', [PatchSpec(2, 1), PatchSpec(3, 1), PatchSpec(3, 3), PatchSpec(5, 2)])
def test_flobqc(spec):
    d, meta = flobqc(spec)
    suite(d, meta)
    assert meta.chains
    owned = [s for members in meta.chains.values() for s in members]
    assert len(owned) == len(set(owned))
    gadgets = {m.gadget for m in meta.pair_measurements}
    assert set(owned) == set(d.spiders) - gadgets
    assert all(len(label) == 3 for label in meta.chains)
    assert {m.kind for m in meta.pair_measurements} == {'ZZ', 'XX'}
    assert not any(k[0] == 'stab' for k in meta.slots)
    for label, members in meta.chains.items():
        times = [meta.times[s] for s in members]
        assert all(b > a for a, b in zip(times, times[1:]))
        assert all(kind in ('ZZ', 'XX') for kind, _ in chain_schedule(meta, label))
    neighbors = chain_neighbors(meta)
    for a, bs in neighbors.items():
        for b in bs:
            assert a in neighbors[b]


def test_flobqc_bulk_chains():
    d, meta = flobqc(PatchSpec(5, 3))
    suite(d, meta)
    assert any(is_bulk_chain(d, meta, label) for label in meta.chains)


def test_build_dispatch():
    spec = PatchSpec(2, 1)
    for flavor in Flavor:
        d, meta = build(flavor.value, spec)
        assert meta.flavor is flavor
        suite(d, meta)
    with pytest.raises(ValueError):
        build('qldpc', spec)
