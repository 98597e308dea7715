# cli.py

import functools
import json
import logging
from contextlib import contextmanager
from typing import List, Optional, Tuple

import click
from termcolor import colored

from zxft.builders import Flavor, PatchSpec, StabilizerOrder, build, gadget, rep_code_lattice
from zxft.builders.gadgets import Gadget
from zxft.builders.lattices import LatticeMeta
from zxft.diagram import Diagram
from zxft.errors import ContractViolation, IntegrityError, ParseError, SizeError, UnsupportedPhase
from zxft.faults import PauliFault, classify, inject, syndrome
from zxft.oracle import check_constraints, equivalent, reading, verify_clifford
from zxft.serialization import from_dict, to_dict
from zxft.translate import check_correspondence, translate
from zxft.utils import DEFAULT_SEED, configure_logging
from zxft.viz.export import export_dot, export_obj
from zxft.webs import verify, web_basis

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

LATTICE_FLAVORS = [f.value for f in Flavor] + ['rep_code', 'gadget']


def _dumps(data) -> str:
    return json.dumps(data, sort_keys=True)


def common_options(f):
    """
    --json, --seed and --verbose on every subcommand.
    """
    @click.option('--json', 'as_json', is_flag=True, help='Machine-readable output')
    @click.option('--seed', default=DEFAULT_SEED, type=int, show_default=True, help='Seed for all randomness')
    @click.option('--verbose', is_flag=True, help='Log progress')
    @functools.wraps(f)
    def wrapper(*args, verbose: bool = False, **kwargs):
        configure_logging(verbose)
        return f(*args, **kwargs)
    return wrapper


@contextmanager
def input_errors(ctx: click.Context):
    # unreadable or inconsistent input files exit with EXIT_INPUT
    try:
        yield
    except (OSError, ParseError, IntegrityError, ContractViolation, UnsupportedPhase, KeyError) as err:
        click.echo('error: {}'.format(err), err=True)
        ctx.exit(EXIT_INPUT)


@contextmanager
def usage_errors():
    # builder preconditions fail on bad option values
    try:
        yield
    except (AssertionError, ValueError) as err:
        raise click.UsageError(str(err) or type(err).__name__)


def _read(path: str) -> dict:
    with open(path, 'r') as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError('invalid json: {}'.format(err.msg), line=err.lineno) from err


def load_lattice(path: str) -> Tuple[Diagram, Optional[LatticeMeta], dict]:
    """
    Load a diagram file and rebuild its lattice bookkeeping from the
    "lattice" field written by `zxft build`.

    Returns:
        diagram (Diagram): parsed diagram
        meta (LatticeMeta): rebuilt bookkeeping, or None for plain diagrams
        data (dict): raw file content
    """
    data = _read(path)
    diagram = from_dict(data)
    lattice = data.get('lattice')
    if not lattice or lattice.get('flavor') == 'gadget':
        return diagram, None, data
    try:
        if lattice['flavor'] == 'rep_code':
            _, meta = rep_code_lattice(int(lattice['rounds']))
        else:
            _, meta = build(lattice['flavor'], PatchSpec.from_dict(lattice['spec']))
    except (AssertionError, KeyError, TypeError, ValueError) as err:
        raise ContractViolation('bad lattice record {}: {}'.format(lattice, err)) from err
    missing = [s for s in meta.roles if not diagram.is_spider(s)]
    problems = meta.coverage(diagram)
    if missing or problems:
        raise ContractViolation('diagram does not match its lattice record: {}'.format(
            (['missing spiders {}'.format(missing[:5])] if missing else []) + problems[:3]))
    return diagram, meta, data


def _status(ok: bool) -> str:
    return colored('PASS', 'green') if ok else colored('FAIL', 'red')


@click.group()
def cli():
    """zxft: ZX instrument networks, Pauli webs and fault-tolerance flavors."""


@cli.command('build')
@click.argument('flavor', type=click.Choice(LATTICE_FLAVORS))
@click.option('--d', 'distance', default=3, type=int, show_default=True, help='Code distance')
@click.option('--rounds', default=2, type=int, show_default=True, help='Measurement rounds')
@click.option('--order', type=click.Choice([o.value for o in StabilizerOrder]), default='z_first',
              show_default=True)
@click.option('--name', type=click.Choice([g.value for g in Gadget]), default=None, help='Gadget name')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Output file (default stdout)')
@click.option('--coords', is_flag=True, help='Include layout coordinates')
@common_options
@click.pass_context
def build_command(ctx, flavor, distance, rounds, order, name, out, coords, as_json, seed):
    """Build a lattice or gadget diagram."""
    with usage_errors():
        if flavor == 'gadget':
            if name is None:
                raise click.UsageError('gadget needs --name')
            diagram, lattice = gadget(name), {'flavor': 'gadget', 'name': name}
        elif flavor == 'rep_code':
            diagram, _ = rep_code_lattice(rounds)
            lattice = {'flavor': 'rep_code', 'rounds': rounds}
        else:
            spec = PatchSpec(distance, rounds, StabilizerOrder(order))
            diagram, _ = build(flavor, spec)
            lattice = {'flavor': flavor, 'spec': spec.to_dict()}
    data = to_dict(diagram, coords=coords)
    data['lattice'] = lattice
    if out is None:
        click.echo(_dumps(data))
        return
    with input_errors(ctx):
        with open(out, 'w') as f:
            f.write(json.dumps(data, sort_keys=True, indent=1))
    summary = dict(diagram.summary(), lattice=lattice, out=out)
    click.echo(_dumps(summary) if as_json else 'wrote {} ({} spiders, {} edges, {} instruments)'.format(
        out, summary['spiders'], summary['edges'], summary['instruments']))


@cli.command('webs')
@click.argument('path')
@common_options
@click.pass_context
def webs_command(ctx, path, as_json, seed):
    """List a diagram's Pauli web basis."""
    with input_errors(ctx):
        diagram, _, _ = load_lattice(path)
        basis = web_basis(diagram)
    if as_json:
        click.echo(_dumps({'webs': [w.to_dict() for w in basis.webs], 'count': len(basis)}))
        return
    for w in basis.webs:
        click.echo('{:<6} {:<30} {:<20} {}'.format(w.web_class.value, w.outer_signature.to_string(diagram),
                                                   str(w.sign), w.summary()))


@cli.command('checks')
@click.argument('path')
@common_options
@click.pass_context
def checks_command(ctx, path, as_json, seed):
    """List the check webs of a diagram."""
    with input_errors(ctx):
        diagram, _, _ = load_lattice(path)
        checks = web_basis(diagram).checks
    if as_json:
        click.echo(_dumps({'checks': [w.to_dict() for w in checks], 'count': len(checks)}))
        return
    for k, w in enumerate(checks):
        click.echo('check {}: {} = 0  ({})'.format(k, w.sign, w.summary()))
    click.echo('{} checks'.format(len(checks)))


@cli.command('inject')
@click.argument('path')
@click.option('--faults', 'faults_path', required=True, help='JSON list of {edge, side, pauli}')
@click.option('--syndrome', 'show_syndrome', is_flag=True, help='Report flipped checks')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the faulty diagram')
@common_options
@click.pass_context
def inject_command(ctx, path, faults_path, show_syndrome, out, as_json, seed):
    """Insert Pauli faults into a diagram."""
    with input_errors(ctx):
        diagram, _, data = load_lattice(path)
        entries = _read(faults_path)
        if not isinstance(entries, list):
            raise ParseError('faults file must hold a list', field='faults')
        try:
            faults = [PauliFault.from_dict(e) for e in entries]
        except (AssertionError, TypeError, ValueError) as err:
            raise ParseError('bad fault entry: {}'.format(err), field='faults') from err
        faulty = inject(diagram, faults)
        if out is not None:
            written = to_dict(faulty)
            if 'lattice' in data:
                written['lattice'] = data['lattice']
            with open(out, 'w') as f:
                f.write(json.dumps(written, sort_keys=True, indent=1))
    result = {'faults': [f.to_dict() for f in faults], 'spiders': len(faulty.spiders)}
    if show_syndrome:
        with input_errors(ctx):
            basis = web_basis(diagram)
        s = syndrome(faults, basis)
        result['syndrome'] = list(s.bits)
        result['flipped'] = [k for k, b in enumerate(s.bits) if b]
        result['class'] = classify(faults, basis)
    if as_json:
        click.echo(_dumps(result))
        return
    click.echo('injected {} faults'.format(len(faults)))
    if show_syndrome:
        click.echo('syndrome: {}  flipped checks: {}  ({})'.format(
            ''.join(str(b) for b in result['syndrome']), result['flipped'], result['class']))


@cli.command('verify')
@click.argument('path')
@click.option('--against', default=None, help='Diagram that must be equivalent up to scalar')
@click.option('--webs', 'check_webs', is_flag=True, help='Verify every basis web')
@click.option('--dense-samples', default=16, type=int, show_default=True,
              help='Outcome assignments sampled per web in the dense check')
@click.option('--tableau-runs', default=0, type=int, help='Check constraints over this many tableau runs')
@common_options
@click.pass_context
def verify_command(ctx, path, against, check_webs, dense_samples, tableau_runs, as_json, seed):
    """Run the oracle suite on a diagram."""
    with input_errors(ctx):
        diagram, meta, _ = load_lattice(path)
        other = load_lattice(against)[0] if against is not None else None
    results: List[dict] = []
    problems = diagram.validate()
    results.append({'name': 'structure', 'ok': not problems, 'detail': problems[:3]})
    if other is not None:
        try:
            ok = equivalent(diagram, other, pin_unmatched=True, seed=seed)
            results.append({'name': 'equivalent', 'ok': ok, 'detail': []})
        except (SizeError, ContractViolation) as err:
            results.append({'name': 'equivalent', 'ok': False, 'detail': [str(err)]})
    if check_webs or tableau_runs:
        with input_errors(ctx):
            basis = web_basis(diagram)
    if check_webs:
        bad = ['web {}: {}'.format(k, v[0]) for k, v in enumerate(verify(w) for w in basis.webs) if v]
        results.append({'name': 'web rules', 'ok': not bad, 'detail': bad[:3]})
        try:
            failed = [k for k, w in enumerate(basis.webs)
                      if not verify_clifford(w, seed=seed, limit=4, samples=dense_samples)]
            results.append({'name': 'web signs', 'ok': not failed, 'detail': failed[:10]})
        except SizeError as err:
            logger.warning(f'dense web check skipped: {err}')
    if tableau_runs:
        if meta is None:
            click.echo('error: --tableau-runs needs a lattice file written by zxft build', err=True)
            ctx.exit(EXIT_INPUT)
        table = check_constraints(reading(diagram, meta), basis.checks, runs=tableau_runs, seed=seed)
        bad = table[table['violations'] > 0]['check'].tolist()
        results.append({'name': 'check constraints', 'ok': not bad, 'detail': bad[:10]})
    ok = all(r['ok'] for r in results)
    if as_json:
        click.echo(_dumps({'ok': ok, 'results': results}))
    else:
        for r in results:
            click.echo('{} {}{}'.format(_status(r['ok']), r['name'], ' {}'.format(r['detail']) if r['detail'] else ''))
    ctx.exit(EXIT_OK if ok else EXIT_FAILED)


@cli.command('translate')
@click.option('--from', 'source', type=click.Choice(['cbqc']), default='cbqc', show_default=True)
@click.option('--to', 'target', type=click.Choice(['mbqc', 'fbqc', 'flobqc']), required=True)
@click.option('--d', 'distance', default=3, type=int, show_default=True)
@click.option('--rounds', default=2, type=int, show_default=True)
@click.option('--order', type=click.Choice([o.value for o in StabilizerOrder]), default='z_first')
@click.option('--emit-trace', type=click.Path(dir_okay=False), default=None, help='Write the rewrite trace')
@click.option('--report', is_flag=True, help='Check the check-structure correspondence')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the translated diagram')
@common_options
@click.pass_context
def translate_command(ctx, source, target, distance, rounds, order, emit_trace, report, out, as_json, seed):
    """Translate a CBQC patch into another flavor."""
    with usage_errors():
        spec = PatchSpec(distance, rounds, StabilizerOrder(order))
        diagram, meta = build(source, spec)
        maps = translate(diagram, meta, target)
    final = maps[-1]
    result = {'from': source, 'to': target, 'spec': spec.to_dict(), 'steps': sum(len(m.trace) for m in maps)}
    with input_errors(ctx):
        if emit_trace is not None:
            with open(emit_trace, 'w') as f:
                f.write(json.dumps([json.loads(m.trace.to_json()) for m in maps], sort_keys=True))
        if out is not None:
            data = to_dict(final.target)
            data['lattice'] = {'flavor': target, 'spec': spec.to_dict()}
            with open(out, 'w') as f:
                f.write(json.dumps(data, sort_keys=True, indent=1))
    ok = True
    if report:
        reports = [check_correspondence(m) for m in maps]
        result['reports'] = [r.to_dict() for r in reports]
        ok = all(r.ok for r in reports)
    if as_json:
        click.echo(_dumps(result))
    else:
        click.echo('{} -> {}: {} rewrite steps'.format(source, target, result['steps']))
        for r in result.get('reports', []):
            click.echo('{} {} bulk outcome counts {} over {} bulk checks{}'.format(
                _status(r['ok']), r['flavor'], r['bulk_counts'], r['bulk_checks'],
                ''.join('\n  ' + f for f in r['failures'][:5])))
    ctx.exit(EXIT_OK if ok else EXIT_FAILED)


@cli.command('export')
@click.argument('path')
@click.option('--format', 'fmt', type=click.Choice(['dot', 'obj', 'json', 'png']), default='dot',
              show_default=True)
@click.option('--web', 'web_index', default=None, type=int, help='Highlight this basis web')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Output file (default stdout)')
@common_options
@click.pass_context
def export_command(ctx, path, fmt, web_index, out, as_json, seed):
    """Export a diagram as DOT, OBJ, JSON or a PNG drawing."""
    with input_errors(ctx):
        diagram, _, data = load_lattice(path)
    web = None
    if web_index is not None:
        with input_errors(ctx):
            webs = web_basis(diagram).webs
        if not 0 <= web_index < len(webs):
            raise click.BadParameter('web index {} out of range (0..{})'.format(web_index, len(webs) - 1),
                                     param_hint='--web')
        web = webs[web_index]
    if fmt == 'png':
        if out is None:
            raise click.UsageError('png export needs --out')
        from zxft.viz.draw import draw_diagram, use_headless_backend
        use_headless_backend()
        draw_diagram(diagram, web, seed=seed, filestr=out)
        click.echo(_dumps({'out': out}) if as_json else 'wrote {}'.format(out))
        return
    if fmt == 'dot':
        text = export_dot(diagram, web)
    elif fmt == 'obj':
        text = export_obj(diagram, seed=seed)
    else:
        text = _dumps(data)
    if out is None:
        click.echo(text, nl=False)
        return
    with input_errors(ctx):
        with open(out, 'w') as f:
            f.write(text)
    click.echo(_dumps({'out': out}) if as_json else 'wrote {}'.format(out))


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point. Returns the exit code: 0 success, 1 verification failure,
    2 usage error, 3 input error.
    """
    try:
        rv = cli.main(args=argv, prog_name='zxft', standalone_mode=False)
    except click.UsageError as err:
        err.show()
        return EXIT_USAGE
    except click.ClickException as err:
        err.show()
        return EXIT_INPUT
    except click.exceptions.Abort:
        return EXIT_FAILED
    return int(rv or 0)
