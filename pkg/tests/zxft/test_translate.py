# test_translate.py

import pytest

from zxft.builders import Flavor, PatchSpec, build
from zxft.errors import ContractViolation
from zxft.fingerprint import fingerprint
from zxft.translate import (BULK_OUTCOMES, cbqc_to_flobqc, cbqc_to_mbqc, check_correspondence, detector_checks,
                            mbqc_to_fbqc, outcome_kinds, translate)
from zxft.webs import verify


@pytest.fixture(scope='module')
def patch5():
    return build('cbqc', PatchSpec(5, 3))


@pytest.fixture(scope='module')
def patch3():
    return build('cbqc', PatchSpec(3, 2))


def suite(webmap):
    webmap.table()
    assert len(webmap.webs) == len(webmap.source_webs)
    assert sorted(webmap.checks) == sorted(webmap.source_checks)
    for w in webmap.webs:
        assert w.diagram is webmap.target
        assert verify(w) == []


def test_detector_checks(patch3):
    d, meta = patch3
    checks = detector_checks(d, meta)
    assert sorted(checks) == sorted(meta.detectors)
    for (i, t), w in checks.items():
        assert w.sign.vars == meta.detectors[(i, t)]


def test_cbqc_to_mbqc(patch3):
    d, meta = patch3
    before = d.summary()
    target, trace, webmap = cbqc_to_mbqc(d, meta)
    assert d.summary() == before
    assert webmap.target is target
    assert webmap.target_flavor is Flavor.MBQC
    assert len(trace) > 0
    suite(webmap)
    assert check_correspondence(webmap).ok


def test_mbqc_to_fbqc_carried(patch3):
    d, meta = patch3
    _, _, first = cbqc_to_mbqc(d, meta)
    target, _, second = mbqc_to_fbqc(first.target, first.meta, carried=first)
    assert second.source_webs == first.webs
    suite(second)
    assert check_correspondence(second).ok


def test_cbqc_to_flobqc(patch3):
    d, meta = patch3
    _, _, webmap = cbqc_to_flobqc(d, meta)
    suite(webmap)
    assert check_correspondence(webmap).ok


@pytest.mark.parametrize('target', ['cbqc', 'mbqc', 'fbqc', 'flobqc'])
def test_bulk_counts(patch5, target):
    d, meta = patch5
    maps = translate(d, meta, target)
    assert len(maps) == (2 if target == 'fbqc' else 1)
    report = check_correspondence(maps[-1])
    assert report.ok, report.failures[:3]
    assert report.bulk_counts() == [BULK_OUTCOMES[Flavor(target)]]
    table = report.table()
    bulk = table[table['bulk']]
    assert len(bulk) > 0
    for kinds in bulk['kinds']:
        if target == 'fbqc':
            assert kinds == {'bXX': 6, 'bZZ': 6}
        elif target == 'flobqc':
            assert len(kinds) == 1
    assert report.to_dict()['bulk_checks'] == len(bulk)


def test_flobqc_kinds(patch5):
    d, meta = patch5
    (webmap,) = translate(d, meta, 'flobqc')
    kinds = set()
    for key in webmap.meta.bulk_detectors():
        kinds |= set(outcome_kinds(webmap.meta, webmap.checks[key]))
    assert kinds and kinds <= {'ZZ', 'XX'}


def test_dropped_web_fails(patch3):
    d, meta = patch3
    (webmap,) = translate(d, meta, 'mbqc')
    report = check_correspondence(webmap.dropped(0))
    assert not report.ok
    assert any('rank mismatch' in f for f in report.failures)


def test_bad_translations(patch3):
    d, meta = patch3
    (webmap,) = translate(d, meta, 'mbqc')
    with pytest.raises(ContractViolation):
        translate(webmap.target, webmap.meta, 'fbqc')
    with pytest.raises(ContractViolation):
        cbqc_to_flobqc(webmap.target, webmap.meta)
    f, fmeta = build('fbqc', PatchSpec(2, 1))
    with pytest.raises(ContractViolation):
        detector_checks(f, fmeta)
    with pytest.raises(ValueError):
        translate(d, meta, 'qldpc')


@pytest.mark.parametrize('distance', [2, 3])
@pytest.mark.parametrize('target', ['mbqc', 'fbqc', 'flobqc'])
def test_translation_matches_builder(target, distance):
    spec = PatchSpec(distance, 1)
    d, meta = build('cbqc', spec)
    final = translate(d, meta, target)[-1]
    direct, _ = build(target, spec)
    assert fingerprint(final.target) == fingerprint(direct)


def test_time_boundary_checks(patch5):
    d, meta = patch5
    report = check_correspondence(translate(d, meta, 'fbqc')[-1])
    table = report.table()
    for _, row in table.iterrows():
        i, t = row['stabilizer'], row['round']
        if not meta.is_bulk_detector(i, t):
            assert not row['bulk']
        if row['bulk']:
            assert row['outcomes'] == 12
            assert row['kinds'] == {'bXX': 6, 'bZZ': 6}
    bulk = table[table['bulk']]
    assert {meta.stabilizers[i].basis for i in bulk['stabilizer']} == {'Z', 'X'}
    edge = table[~table['bulk'] & table['stabilizer'].map(meta.is_bulk_stabilizer)]
    assert len(edge) > 0
    assert report.ok
