# test_tableau.py

import numpy as np
import pytest

from zxft.builders import PatchSpec, build, rep_code_lattice
from zxft.diagram import OutcomeExpr, SpiderKind
from zxft.errors import ContractViolation
from zxft.faults import PauliFault, inject, random_faults, syndrome
from zxft.oracle import OutcomeRecord, check_constraints, reading, tableau_run, tableau_runs
from zxft.webs import web_basis


def suite(r, diagram):
    assert sorted(r.measured_vars()) == sorted(diagram.outcome_vars)
    r.to_stim()
    r.ops
    r.locations
    r.port_wires
    assert r.n_qubits == len(r.qubits)


@pytest.mark.parametrize('distance', [2, 3])
@pytest.mark.parametrize('flavor', ['cbqc', 'mbqc', 'fbqc', 'flobqc'])
def test_checks_hold(flavor, distance):
    d, meta = build(flavor, PatchSpec(distance, 3))
    r = reading(d, meta)
    suite(r, d)
    checks = web_basis(d).checks
    assert checks
    table = check_constraints(r, checks, runs=1000, seed=0)
    assert list(table.columns) == ['check', 'sign', 'violations', 'runs']
    assert (table['violations'] == 0).all()


def test_cbqc_reading_shape():
    spec = PatchSpec(3, 2)
    d, meta = build('cbqc', spec)
    r = reading(d, meta)
    assert r.count('MPP') == len(meta.stab_spiders)
    assert r.count('BELL') == len(meta.qubits)
    assert r.n_qubits == 2 * len(meta.qubits)


def test_fbqc_reading_shape():
    d, meta = build('fbqc', PatchSpec(3, 2))
    r = reading(d, meta)
    assert r.count('MPP') == 2 * len(meta.fusions)
    assert r.count('CZ') > 0


def test_random_outcomes_are_not_checks():
    d, meta = rep_code_lattice(3)
    r = reading(d, meta)
    (first,) = [v for k, v in meta.slots.items() if k[2] == 0]
    table = check_constraints(r, [OutcomeExpr.from_var(first)], runs=200, seed=0)
    assert table['violations'][0] > 0


def test_instrument_fault_flips_record():
    d, meta = rep_code_lattice(2)
    a = meta.stab_spiders[(0, 0)]
    e = d.incident(a)[0]
    at_a = d.edges[e].a == a
    r = reading(inject(d, [PauliFault(e, at_a, 'X')]), meta)
    assert r.flips == frozenset(d.spiders[a].instrument.vars)


def test_syndrome_matches_tableau():
    d, meta = build('cbqc', PatchSpec(5, 2))
    basis = web_basis(d)
    for f in random_faults(d, 200, seed=0):
        expected = syndrome([f], basis)
        record = tableau_run(reading(inject(d, [f]), meta), seed=1, runs=4)
        for k, w in enumerate(basis.checks):
            bits = record.evaluate(w.sign)
            assert (bits == expected.bits[k]).all(), (f, k)


def test_faults_in_other_flavors():
    for flavor in ('mbqc', 'flobqc'):
        d, meta = build(flavor, PatchSpec(3, 2))
        basis = web_basis(d)
        for f in random_faults(d, 20, seed=3):
            record = tableau_run(reading(inject(d, [f]), meta), seed=0, runs=4)
            expected = syndrome([f], basis)
            for k, w in enumerate(basis.checks):
                assert (record.evaluate(w.sign) == expected.bits[k]).all(), (flavor, f, k)


def test_unknown_spider_rejected():
    d, meta = rep_code_lattice(2)
    d.add_spider(SpiderKind.Z, 1)
    with pytest.raises(ContractViolation):
        reading(d, meta)


def test_outcome_record():
    record = OutcomeRecord([4, 7], np.array([[1, 0], [1, 1]]))
    assert record.runs == 2
    assert list(record.evaluate(OutcomeExpr(frozenset([4, 7]), 1))) == [0, 1]
    assert record.assignment(1) == {4: 1, 7: 1}
    assert list(record.table().columns) == [4, 7]
    with pytest.raises(ContractViolation):
        record[5]


def test_batch_runs():
    d, meta = rep_code_lattice(3)
    readings = [reading(d, meta)] * 3
    batch = tableau_runs(readings, seed=2, runs=10, n_jobs=2)
    serial = tableau_runs(readings, seed=2, runs=10)
    for a, b in zip(batch, serial):
        assert np.array_equal(a.bits, b.bits)
