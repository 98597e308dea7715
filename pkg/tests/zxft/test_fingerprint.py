# test_fingerprint.py

import pytest

from zxft.builders import PatchSpec, cbqc, gadget, mbqc, rep_code
from zxft.diagram import Diagram, SpiderKind
from zxft.fingerprint import fingerprint, to_graph
from zxft.rewrite import to_canonical
from zxft.serialization import from_dict, to_dict


def relabelled(d, offset=100):
    # same diagram with shifted ids
    data = to_dict(d)
    for s in data['spiders']:
        s['id'] += offset
    for p in data['ports']:
        p['id'] += offset
    for e in data['edges']:
        e['a'] += offset
        e['b'] += offset
        e['id'] += offset
    return from_dict(data)


def test_fingerprint_relabelling():
    d = rep_code(3)
    assert fingerprint(relabelled(d)) == fingerprint(d)


def test_fingerprint_distinguishes_color():
    d = gadget('zz_meas')
    d2 = d.copy()
    s = d2.instruments()[0]
    d2.set_kind(s, d2.spiders[s].kind.other)
    assert fingerprint(d) != fingerprint(d2)


def test_fingerprint_distinguishes_phase():
    d = gadget('s')
    assert fingerprint(d) != fingerprint(gadget('z_rot', quarter_turns=3))


def test_outcome_flag():
    d = gadget('meas_z')
    d2 = d.copy()
    s = d2.instruments()[0]
    d2.set_instrument(s, None)
    assert fingerprint(d) == fingerprint(d2)
    assert fingerprint(d, outcomes=True) != fingerprint(d2, outcomes=True)


def test_to_graph_parallel_edges():
    d = Diagram()
    a = d.add_spider(SpiderKind.Z)
    b = d.add_spider(SpiderKind.X)
    d.add_edge(a, b)
    d.add_edge(a, b)
    g = to_graph(d)
    assert g.number_of_edges() == 1
    assert g[a][b]['label'] == 'plain,plain'


def test_empty():
    assert fingerprint(Diagram()) == fingerprint(Diagram())


@pytest.mark.parametrize('distance', [2, 3])
@pytest.mark.parametrize('rounds', [1, 2])
def test_mbqc_is_canonical_cbqc(distance, rounds):
    spec = PatchSpec(distance, rounds)
    d, _ = mbqc(spec)
    canonical, _ = to_canonical(cbqc(spec)[0])
    assert fingerprint(d) == fingerprint(canonical)
    # at one round every data spider touches a port and stays unmeasured
    assert (fingerprint(d, outcomes=True) == fingerprint(canonical, outcomes=True)) == (rounds == 1)
