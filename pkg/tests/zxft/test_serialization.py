# test_serialization.py

import json

import pytest

from zxft.builders import gadget
from zxft.diagram import EdgeKind, SpiderKind
from zxft.errors import IntegrityError, ParseError
from zxft.serialization import deserialize, from_dict, load, save, serialize, to_dict


def test_roundtrip_keeps_ids():
    d = gadget('bell_meas')
    text = serialize(d)
    d2 = deserialize(text)
    assert serialize(d2) == text
    assert sorted(d2.spiders) == sorted(d.spiders)
    assert sorted(d2.outcome_vars) == sorted(d.outcome_vars)


def test_byte_stable():
    d = gadget('cnot')
    assert serialize(d) == serialize(d.copy())
    assert json.loads(serialize(d))['format'] == 'zxft/1'


def test_save_load(tmp_path):
    d = gadget('zz_meas')
    path = str(tmp_path / 'zz.json')
    save(d, path)
    assert serialize(load(path)) == serialize(d)


def test_coords_optional():
    d = gadget('cnot')
    data = to_dict(d, coords=False)
    assert all('coord' not in s for s in data['spiders'])


def test_missing_field():
    data = to_dict(gadget('h'))
    del data['edges']
    with pytest.raises(ParseError) as err:
        from_dict(data)
    assert err.value.field == 'edges'


def test_missing_nested_field():
    data = to_dict(gadget('cnot'))
    del data['spiders'][0]['kind']
    with pytest.raises(ParseError) as err:
        from_dict(data)
    assert err.value.field == 'spiders.kind'


def test_invalid_json_line():
    with pytest.raises(ParseError) as err:
        deserialize('{\n"spiders": [,\n]}')
    assert err.value.line == 2


def test_unknown_endpoint():
    data = to_dict(gadget('cnot'))
    data['edges'].append({'id': 100, 'a': 0, 'b': 77, 'kind': 'plain'})
    with pytest.raises(IntegrityError):
        from_dict(data)


def test_unknown_kind():
    data = to_dict(gadget('cnot'))
    data['spiders'][0]['kind'] = 'Y'
    with pytest.raises(ParseError):
        from_dict(data)


def test_unsupported_format():
    data = to_dict(gadget('cnot'))
    data['format'] = 'zxft/9'
    with pytest.raises(ParseError):
        from_dict(data)


def test_hadamard_node_absorbed():
    data = {
        'spiders': [{'id': 0, 'kind': 'Z', 'phase_quarter_turns': 0, 'outcome': None},
                    {'id': 1, 'kind': 'X', 'phase_quarter_turns': 2, 'outcome': None}],
        'ports': [],
        'outcome_vars': [],
        'hadamards': [{'id': 5}],
        'edges': [{'id': 0, 'a': 0, 'b': 5, 'kind': 'plain'},
                  {'id': 1, 'a': 5, 'b': 1, 'kind': 'plain'}],
    }
    d = from_dict(data)
    assert list(d.edges) == [0]
    assert d.edges[0].kind is EdgeKind.HADAMARD
    assert d.spiders[1].kind is SpiderKind.X
    assert d.spiders[1].phase == 2


def test_hadamard_pairs_cancel():
    spiders = [{'id': 0, 'kind': 'Z', 'phase_quarter_turns': 0, 'outcome': None},
               {'id': 1, 'kind': 'Z', 'phase_quarter_turns': 0, 'outcome': None}]
    data = {
        'spiders': spiders,
        'ports': [],
        'outcome_vars': [],
        'hadamards': [{'id': 5}, {'id': 6}],
        'edges': [{'id': 3, 'a': 0, 'b': 5, 'kind': 'plain'},
                  {'id': 4, 'a': 6, 'b': 5, 'kind': 'plain'},
                  {'id': 8, 'a': 6, 'b': 1, 'kind': 'plain'}],
    }
    d = from_dict(data)
    assert list(d.edges) == [3]
    assert d.edges[3].kind is EdgeKind.PLAIN
    assert {d.edges[3].a, d.edges[3].b} == {0, 1}
    data['edges'][2]['kind'] = 'h'
    assert from_dict(data).edges[3].kind is EdgeKind.HADAMARD
    data['edges'] = [{'id': 3, 'a': 5, 'b': 6, 'kind': 'plain'},
                     {'id': 4, 'a': 6, 'b': 5, 'kind': 'plain'}]
    with pytest.raises(ParseError):
        from_dict(data)


def test_port_with_two_edges_is_reported():
    data = to_dict(gadget('h'))
    data['spiders'].append({'id': 50, 'kind': 'Z', 'phase_quarter_turns': 0, 'outcome': None})
    data['edges'].append({'id': 50, 'a': data['ports'][0]['id'], 'b': 50, 'kind': 'plain'})
    d = from_dict(data)
    assert any('degree 2' in v for v in d.validate())
