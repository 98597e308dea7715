# serialization.py

import json
import logging

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, PortDirection, SpiderKind
from zxft.errors import IntegrityError, ParseError
from zxft.utils import FORMAT

logger = logging.getLogger(__name__)

REQUIRED = ('spiders', 'edges', 'ports', 'outcome_vars')


def to_dict(diagram: Diagram, coords: bool = True) -> dict:
    """
    Plain-data form of a diagram in the zxft/1 layout.

    Args:
        diagram (Diagram): diagram to convert
        coords (bool): include layout coordinates
    Returns:
        data (dict): json-compatible dictionary
    """
    spiders = []
    for sid in sorted(diagram.spiders):
        sp = diagram.spiders[sid]
        entry = {
            'id': sid,
            'kind': sp.kind.value,
            'phase_quarter_turns': sp.phase,
            'outcome': sp.instrument.to_dict() if sp.instrument is not None else None,
        }
        if coords and sp.coord is not None:
            entry['coord'] = list(sp.coord)
        spiders.append(entry)
    edges = [{'id': e.id, 'a': e.a, 'b': e.b, 'kind': e.kind.value}
             for e in (diagram.edges[eid] for eid in sorted(diagram.edges))]
    ports = [{'id': p.id, 'dir': p.direction.value, 'label': p.label,
              'coord': list(p.coord) if (coords and p.coord is not None) else None}
             for p in (diagram.ports[pid] for pid in sorted(diagram.ports))]
    outcome_vars = [{'id': v.id, 'label': v.label}
                    for v in (diagram.outcome_vars[vid] for vid in sorted(diagram.outcome_vars))]
    return {'format': FORMAT, 'spiders': spiders, 'edges': edges, 'ports': ports,
            'outcome_vars': outcome_vars}


def serialize(diagram: Diagram, coords: bool = True, indent: int = None) -> str:
    return json.dumps(to_dict(diagram, coords=coords), indent=indent, sort_keys=True)


def _field(entry: dict, name: str, where: str):
    if not isinstance(entry, dict) or name not in entry:
        raise ParseError('missing field: {}.{}'.format(where, name), field='{}.{}'.format(where, name))
    return entry[name]


def from_dict(data: dict) -> Diagram:
    """
    Build a diagram from its zxft/1 plain-data form. Explicit Hadamard nodes
    listed under 'hadamards' are absorbed into the edge kinds.

    Args:
        data (dict): decoded json
    Returns:
        diagram (Diagram): diagram with the ids given in data
    """
    if not isinstance(data, dict):
        raise ParseError('top level must be an object')
    for name in REQUIRED:
        if name not in data:
            raise ParseError('missing field: {}'.format(name), field=name)
    fmt = data.get('format', FORMAT)
    if fmt != FORMAT:
        raise ParseError('unsupported format {}'.format(fmt), field='format')

    d = Diagram()
    try:
        for v in data['outcome_vars']:
            d.add_outcome_var(v.get('label') if isinstance(v, dict) else None, vid=_field(v, 'id', 'outcome_vars'))
        for s in data['spiders']:
            outcome = s.get('outcome') if isinstance(s, dict) else None
            instrument = None
            if outcome is not None:
                instrument = OutcomeExpr(frozenset(_field(outcome, 'vars', 'spiders.outcome')),
                                         int(outcome.get('const', 0)))
            d.add_spider(SpiderKind(_field(s, 'kind', 'spiders')),
                         int(_field(s, 'phase_quarter_turns', 'spiders')),
                         instrument, s.get('coord'), sid=_field(s, 'id', 'spiders'))
        for p in data['ports']:
            d.add_port(PortDirection(_field(p, 'dir', 'ports')), p.get('label'), p.get('coord'),
                       pid=_field(p, 'id', 'ports'))
        hadamards = {}
        for h in data.get('hadamards', []):
            hid = _field(h, 'id', 'hadamards')
            if d.has_node(hid) or hid in hadamards:
                raise ParseError('duplicate node id {}'.format(hid), field='hadamards.id')
            hadamards[hid] = []
        pending = []
        for e in data['edges']:
            a, b = _field(e, 'a', 'edges'), _field(e, 'b', 'edges')
            kind = EdgeKind(_field(e, 'kind', 'edges'))
            eid = _field(e, 'id', 'edges')
            if a in hadamards or b in hadamards:
                for n in (a, b):
                    if n in hadamards:
                        hadamards[n].append((eid, a, b, kind))
                continue
            pending.append((a, b, kind, eid))
        for a, b, kind, eid in pending:
            d.add_edge(a, b, kind, eid=eid, check_ports=False)
        _absorb_hadamards(d, hadamards)
    except ValueError as err:
        if isinstance(err, (ParseError, IntegrityError)):
            raise
        raise ParseError(str(err)) from err
    return d


def _hadamard_legs(hid: int, hadamards: dict) -> list:
    legs = hadamards[hid]
    if len(legs) != 2:
        raise ParseError('hadamard node {} must have exactly 2 edges, found {}'.format(hid, len(legs)),
                         field='hadamards')
    return legs


def _absorb_hadamards(d: Diagram, hadamards: dict):
    """
    Replace every chain of hadamard nodes by one edge. Each node toggles the
    edge kind, so adjacent pairs cancel to a plain edge.
    """
    edges = {leg[0]: leg for legs in hadamards.values() for leg in legs}
    done = set()
    for hid in sorted(hadamards):
        if hid in done:
            continue
        chain, ends, kind = {hid}, [], EdgeKind.PLAIN
        first = _hadamard_legs(hid, hadamards)
        for eid, _, _, _ in first:
            node = hid
            while True:
                _, a, b, k = edges[eid]
                kind = kind ^ k
                other = b if a == node else a
                if other not in hadamards:
                    ends.append(other)
                    break
                if other in chain:
                    raise ParseError('hadamard nodes {} form a loop'.format(sorted(chain)), field='hadamards')
                chain.add(other)
                (eid,) = [leg[0] for leg in _hadamard_legs(other, hadamards) if leg[0] != eid]
                node = other
        if len(chain) % 2:
            kind = kind ^ EdgeKind.HADAMARD
        done |= chain
        d.add_edge(ends[0], ends[1], kind, eid=first[0][0], check_ports=False)
        logger.info(f'absorbed hadamard nodes {sorted(chain)} into edge {first[0][0]}')


def deserialize(text: str) -> Diagram:
    """
    Parse zxft/1 json text.

    Args:
        text (str): json text
    Returns:
        diagram (Diagram): parsed diagram
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError('invalid json: {}'.format(err.msg), line=err.lineno) from err
    return from_dict(data)


def save(diagram: Diagram, path: str, coords: bool = True):
    with open(path, 'w') as f:
        f.write(serialize(diagram, coords=coords, indent=1))


def load(path) -> Diagram:
    with open(path, 'r') as f:
        return deserialize(f.read())
