# test_cli.py

import json

import pytest
from click.testing import CliRunner

from zxft.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_USAGE, cli, load_lattice, main


def invoke(*args):
    return CliRunner().invoke(cli, [str(a) for a in args])


@pytest.fixture
def patch(tmp_path):
    path = tmp_path / 'p.json'
    result = invoke('build', 'cbqc', '--d', 2, '--rounds', 3, '--out', path)
    assert result.exit_code == EXIT_OK, result.output
    return path


@pytest.fixture
def rep(tmp_path):
    path = tmp_path / 'rep.json'
    result = invoke('build', 'rep_code', '--rounds', 2, '--out', path)
    assert result.exit_code == EXIT_OK, result.output
    return path


def test_build_writes_lattice(patch):
    data = json.loads(patch.read_text())
    assert data['format'] == 'zxft/1'
    assert data['lattice'] == {'flavor': 'cbqc', 'spec': {'distance': 2, 'rounds': 3, 'order': 'z_first'}}
    d, meta, _ = load_lattice(str(patch))
    assert meta is not None and meta.coverage(d) == []


def test_build_stdout_is_stable():
    a = invoke('build', 'mbqc', '--d', 2, '--rounds', 1)
    b = invoke('build', 'mbqc', '--d', 2, '--rounds', 1)
    assert a.exit_code == EXIT_OK
    assert a.output == b.output
    assert json.loads(a.output)['lattice']['flavor'] == 'mbqc'


def test_build_usage_errors():
    assert invoke('build', 'gadget').exit_code == EXIT_USAGE
    assert invoke('build', 'cbqc', '--d', 1).exit_code == EXIT_USAGE
    assert invoke('build', 'toric').exit_code == EXIT_USAGE


def test_checks(patch, rep):
    result = invoke('checks', patch, '--json')
    assert result.exit_code == EXIT_OK
    assert json.loads(result.output)['count'] == 6
    result = invoke('checks', rep)
    assert result.exit_code == EXIT_OK
    assert '1 checks' in result.output


def test_webs(rep):
    result = invoke('webs', rep, '--json')
    assert result.exit_code == EXIT_OK
    data = json.loads(result.output)
    assert data['count'] == 5
    assert sum(1 for w in data['webs'] if w['class'] == 'outer') == 4
    result = invoke('webs', rep)
    assert 'in:' in result.output


def test_input_errors(tmp_path, rep):
    assert invoke('webs', tmp_path / 'missing.json').exit_code == EXIT_INPUT
    bad = tmp_path / 'bad.json'
    bad.write_text('{"spiders": [')
    assert invoke('checks', bad).exit_code == EXIT_INPUT
    data = json.loads(rep.read_text())
    data['lattice']['rounds'] = 3
    tampered = tmp_path / 'tampered.json'
    tampered.write_text(json.dumps(data))
    assert invoke('verify', tampered).exit_code == EXIT_INPUT


def test_inject_syndrome(tmp_path, rep):
    d, meta, _ = load_lattice(str(rep))
    a = meta.stab_spiders[(0, 0)]
    e = d.incident(a)[0]
    faults = tmp_path / 'faults.json'
    faults.write_text(json.dumps([{'edge': e, 'side': 'a' if d.edges[e].a == a else 'b', 'pauli': 'X'}]))
    out = tmp_path / 'faulty.json'
    result = invoke('inject', rep, '--faults', faults, '--syndrome', '--json', '--out', out)
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.output)
    assert data['flipped'] == [0]
    assert data['class'] == 'detected'
    assert json.loads(out.read_text())['lattice']['flavor'] == 'rep_code'


def test_inject_bad_faults(tmp_path, rep):
    faults = tmp_path / 'faults.json'
    faults.write_text(json.dumps([{'edge': 999, 'pauli': 'X'}]))
    assert invoke('inject', rep, '--faults', faults).exit_code == EXIT_INPUT
    faults.write_text(json.dumps([{'edge': 0, 'pauli': 'W'}]))
    assert invoke('inject', rep, '--faults', faults).exit_code == EXIT_INPUT


def test_verify(patch, rep):
    result = invoke('verify', patch, '--tableau-runs', 50, '--json')
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.output)
    assert data['ok']
    assert [r['name'] for r in data['results']] == ['structure', 'check constraints']
    result = invoke('verify', rep, '--webs')
    assert result.exit_code == EXIT_OK, result.output
    assert 'PASS' in result.output


def test_verify_against(tmp_path):
    paths = {}
    for name in ('cnot', 'cz'):
        paths[name] = tmp_path / '{}.json'.format(name)
        assert invoke('build', 'gadget', '--name', name, '--out', paths[name]).exit_code == EXIT_OK
    assert invoke('verify', paths['cnot'], '--against', paths['cnot']).exit_code == EXIT_OK
    result = invoke('verify', paths['cnot'], '--against', paths['cz'])
    assert result.exit_code == EXIT_FAILED
    assert 'FAIL' in result.output
    assert invoke('verify', paths['cnot'], '--tableau-runs', 5).exit_code == EXIT_INPUT


def test_translate(tmp_path):
    trace = tmp_path / 'trace.json'
    out = tmp_path / 'mbqc.json'
    result = invoke('translate', '--from', 'cbqc', '--to', 'mbqc', '--d', 3, '--rounds', 2, '--report', '--json',
                    '--emit-trace', trace, '--out', out)
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.output)
    assert data['to'] == 'mbqc'
    assert all(r['ok'] for r in data['reports'])
    (steps,) = json.loads(trace.read_text())
    assert len(steps) == data['steps']
    assert invoke('checks', out).exit_code == EXIT_OK


def test_translate_fbqc_text():
    result = invoke('translate', '--to', 'fbqc', '--d', 3, '--rounds', 2, '--report')
    assert result.exit_code == EXIT_OK, result.output
    assert result.output.count('PASS') == 2


def test_export(tmp_path, rep):
    for fmt, head in (('dot', 'graph zx {'), ('obj', '# zxft'), ('json', '{')):
        result = invoke('export', rep, '--format', fmt)
        assert result.exit_code == EXIT_OK
        assert result.output.startswith(head)
    result = invoke('export', rep, '--format', 'dot', '--web', 0)
    assert 'penwidth=3' in result.output
    assert invoke('export', rep, '--web', 99).exit_code == EXIT_USAGE
    png = tmp_path / 'rep.png'
    assert invoke('export', rep, '--format', 'png', '--out', png).exit_code == EXIT_OK
    assert png.exists()
    assert invoke('export', rep, '--format', 'png').exit_code == EXIT_USAGE


def test_main_exit_codes(tmp_path, rep):
    assert main(['checks', str(rep)]) == EXIT_OK
    assert main(['checks', str(tmp_path / 'missing.json')]) == EXIT_INPUT
    assert main(['build', 'toric']) == EXIT_USAGE
    assert main(['export', str(rep), '--web', '99']) == EXIT_USAGE


def test_quarter_phase_is_input_error(tmp_path):
    path = tmp_path / 's.json'
    assert invoke('build', 'gadget', '--name', 's', '--out', path).exit_code == EXIT_OK
    for args in (('checks', path), ('webs', path), ('verify', path, '--webs'), ('export', path, '--web', 0)):
        result = invoke(*args)
        assert result.exit_code == EXIT_INPUT, args
        assert 'phase' in result.output
    faults = tmp_path / 'faults.json'
    faults.write_text('[]')
    assert invoke('inject', path, '--faults', faults, '--syndrome').exit_code == EXIT_INPUT
    assert main(['checks', str(path)]) == EXIT_INPUT


def test_builder_usage_errors():
    assert invoke('build', 'rep_code', '--rounds', 1).exit_code == EXIT_USAGE
    assert invoke('build', 'fbqc', '--rounds', 0).exit_code == EXIT_USAGE
    assert invoke('translate', '--to', 'mbqc', '--d', 1).exit_code == EXIT_USAGE
    assert invoke('translate', '--to', 'flobqc', '--rounds', 0).exit_code == EXIT_USAGE
    assert main(['translate', '--to', 'fbqc', '--d', '1']) == EXIT_USAGE


def test_bad_lattice_record(tmp_path, patch):
    data = json.loads(patch.read_text())
    data['lattice']['spec']['distance'] = 1
    bad = tmp_path / 'bad_spec.json'
    bad.write_text(json.dumps(data))
    assert invoke('checks', bad).exit_code == EXIT_INPUT
    data['lattice'] = {'flavor': 'rep_code'}
    bad.write_text(json.dumps(data))
    assert invoke('verify', bad).exit_code == EXIT_INPUT


def test_flobqc_commands(tmp_path):
    path = tmp_path / 'flobqc.json'
    result = invoke('build', 'flobqc', '--d', 3, '--rounds', 2, '--out', path)
    assert result.exit_code == EXIT_OK, result.output
    assert invoke('checks', path).exit_code == EXIT_OK
    result = invoke('translate', '--to', 'flobqc', '--report')
    assert result.exit_code == EXIT_OK, result.output
    assert result.output.count('PASS') == 1
