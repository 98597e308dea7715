# rewrite.py

import json
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, SpiderKind
from zxft.errors import ContractViolation, RuleNotApplicable
from zxft.webs import PauliWeb, full_indicator, legs, own_other, through, verify

logger = logging.getLogger(__name__)


class Rule(Enum):
    """
    Rewrite rules.
        'fuse': merge two like-colored spiders joined by a plain edge
        'split': inverse of fuse
        'color_flip': toggle a spider's color and its edge kinds
        'remove_identity': drop a phase-free two-legged spider
        'insert_identity': inverse of remove_identity
        'remove_loop': drop a self-loop (a Hadamard loop adds pi)
        'attach_instrument': read a spider as measured, with a fresh outcome
        'detach_instrument': postselect an instrument on outcome 0
    """
    FUSE = 'fuse'
    SPLIT = 'split'
    COLOR_FLIP = 'color_flip'
    REMOVE_IDENTITY = 'remove_identity'
    INSERT_IDENTITY = 'insert_identity'
    REMOVE_LOOP = 'remove_loop'
    ATTACH_INSTRUMENT = 'attach_instrument'
    DETACH_INSTRUMENT = 'detach_instrument'


@dataclass
class RewriteStep:
    rule: Rule
    params: Dict = field(default_factory=dict)
    created: Dict = field(default_factory=dict)
    info: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'rule': self.rule.value, 'params': self.params, 'created': self.created, 'info': self.info}

    @classmethod
    def from_dict(cls, data: dict) -> 'RewriteStep':
        return cls(Rule(data['rule']), dict(data.get('params', {})), dict(data.get('created', {})),
                   dict(data.get('info', {})))


class RewriteTrace:

    def __init__(self, steps: Iterable[RewriteStep] = ()):
        self._steps = list(steps)

    @property
    def steps(self) -> List[RewriteStep]:
        return list(self._steps)

    def append(self, step: RewriteStep):
        self._steps.append(step)

    def extend(self, other: 'RewriteTrace'):
        self._steps.extend(other.steps)

    def __len__(self):
        return len(self._steps)

    def __iter__(self):
        return iter(self._steps)

    def __add__(self, other: 'RewriteTrace') -> 'RewriteTrace':
        return RewriteTrace(self._steps + other.steps)

    def counts(self) -> Dict[str, int]:
        out = {}
        for s in self._steps:
            out[s.rule.value] = out.get(s.rule.value, 0) + 1
        return out

    def to_json(self) -> str:
        return json.dumps([s.to_dict() for s in self._steps], sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> 'RewriteTrace':
        return cls(RewriteStep.from_dict(d) for d in json.loads(text))

    def replay(self, diagram: Diagram) -> Diagram:
        """
        Apply every step to a diagram in place.

        Args:
            diagram (Diagram): diagram equal to the trace's starting point
        Returns:
            diagram (Diagram): the same object, rewritten
        """
        for step in self._steps:
            apply_step(diagram, step)
        return diagram


def _spider(diagram: Diagram, s: int):
    if not diagram.is_spider(s):
        raise RuleNotApplicable('{} is not a spider'.format(s))
    return diagram.spiders[s]


def _drop_loops(diagram: Diagram, s: int) -> List[Tuple[int, str]]:
    dropped = []
    for eid in sorted(set(diagram.incident(s))):
        e = diagram.edges[eid]
        if e.is_loop:
            diagram.remove_edge(eid)
            if e.kind is EdgeKind.HADAMARD:
                diagram.set_phase(s, diagram.spiders[s].phase + 2)
            dropped.append((eid, e.kind.value))
    return dropped


def fuse(diagram: Diagram, s1: int, s2: int, edge: Optional[int] = None) -> RewriteStep:
    """
    Merge s2 into s1 along a plain edge. Phases add, instrument outcomes XOR;
    further parallel edges become self-loops and are dropped.

    Args:
        diagram (Diagram): diagram, rewritten in place
        s1 (int): surviving spider
        s2 (int): absorbed spider
        edge (int): connecting plain edge (default: lowest id)
    Returns:
        step (RewriteStep): applied step
    """
    sp1, sp2 = _spider(diagram, s1), _spider(diagram, s2)
    if s1 == s2:
        raise RuleNotApplicable('cannot fuse spider {} with itself'.format(s1))
    if sp1.kind is not sp2.kind:
        raise RuleNotApplicable('spiders {} and {} have different kinds'.format(s1, s2))
    between = diagram.edges_between(s1, s2)
    plain = [e for e in between if diagram.edges[e].kind is EdgeKind.PLAIN]
    if edge is None:
        if not plain:
            raise RuleNotApplicable('no plain edge between spiders {} and {}'.format(s1, s2))
        edge = plain[0]
    elif edge not in plain:
        raise RuleNotApplicable('edge {} is not a plain edge between {} and {}'.format(edge, s1, s2))

    phase = sp1.phase + sp2.phase
    if sp1.instrument is not None and sp2.instrument is not None:
        instrument = sp1.instrument ^ sp2.instrument
    else:
        instrument = sp1.instrument if sp1.instrument is not None else sp2.instrument
    diagram.remove_edge(edge)
    for eid in diagram.incident(s2):
        diagram.reconnect(eid, s2, s1)
    diagram.remove_spider(s2)
    diagram.set_phase(s1, phase)
    diagram.set_instrument(s1, instrument)
    loops = _drop_loops(diagram, s1)
    return RewriteStep(Rule.FUSE, {'s1': s1, 's2': s2, 'edge': edge}, {},
                       {'kind': sp1.kind.value, 'loops': loops})


def split(diagram: Diagram, s: int, group: Iterable[int], instrument_on_new: bool = False) -> RewriteStep:
    """
    Move the legs in group onto a new spider of the same color joined to s
    by a plain edge (end A at s). Phase and instrument stay together on the
    chosen side.

    Args:
        diagram (Diagram): diagram, rewritten in place
        s (int): spider to split
        group (iterable): incident edge ids moved to the new spider
        instrument_on_new (bool): put phase and instrument on the new spider
    Returns:
        step (RewriteStep): applied step
    """
    sp = _spider(diagram, s)
    group = sorted(set(group))
    incident = diagram.incident(s)
    if any(diagram.edges[e].is_loop for e in incident):
        raise RuleNotApplicable('cannot split spider {} carrying a self-loop'.format(s))
    if not group or any(e not in incident for e in group) or len(group) >= len(incident):
        raise RuleNotApplicable('invalid partition of spider {}: {}'.format(s, group))
    new = diagram.add_spider(sp.kind, 0, None, sp.coord)
    for eid in group:
        diagram.reconnect(eid, s, new)
    link = diagram.add_edge(s, new, EdgeKind.PLAIN)
    if instrument_on_new:
        diagram.set_phase(new, sp.phase)
        diagram.set_instrument(new, sp.instrument)
        diagram.set_phase(s, 0)
        diagram.set_instrument(s, None)
    return RewriteStep(Rule.SPLIT, {'s': s, 'group': group, 'instrument_on_new': bool(instrument_on_new)},
                       {'spider': new, 'edge': link}, {})


def color_flip(diagram: Diagram, s: int) -> RewriteStep:
    """
    Toggle the color of s and the kind of every incident edge.
    """
    sp = _spider(diagram, s)
    diagram.set_kind(s, sp.kind.other)
    for eid in set(diagram.incident(s)):
        e = diagram.edges[eid]
        if not e.is_loop:
            diagram.set_edge_kind(eid, e.kind.flipped)
    return RewriteStep(Rule.COLOR_FLIP, {'s': s}, {}, {})


def remove_identity(diagram: Diagram, s: int) -> RewriteStep:
    """
    Remove a phase-free two-legged spider; the two edges merge into one whose
    kind is the XOR of both.
    """
    sp = _spider(diagram, s)
    incident = sorted(diagram.incident(s))
    if len(incident) != 2 or incident[0] == incident[1]:
        raise RuleNotApplicable('spider {} does not have exactly two distinct legs'.format(s))
    if sp.phase != 0 or sp.instrument is not None:
        raise RuleNotApplicable('spider {} has a phase or an instrument'.format(s))
    e1, e2 = (diagram.edges[e] for e in incident)
    u, v = e1.other(s), e2.other(s)
    kind = e1.kind ^ e2.kind
    info = {'e1': e1.id, 'e2': e2.id, 'u': u, 'u_is_a': e1.a == u, 'k1': e1.kind.value}
    diagram.remove_spider(s)
    new = diagram.add_edge(u, v, kind)
    info['loops'] = _drop_loops(diagram, u) if u == v else []
    return RewriteStep(Rule.REMOVE_IDENTITY, {'s': s}, {'edge': new}, info)


def insert_identity(diagram: Diagram, edge: int, kind: SpiderKind = SpiderKind.Z,
                    first_kind: EdgeKind = EdgeKind.PLAIN) -> RewriteStep:
    """
    Splice a phase-free spider into an edge. The edge keeps its id and end A
    and ends at the new spider with first_kind; a new edge carries the rest.
    """
    e = diagram.edge(edge)
    kind, first_kind = SpiderKind(kind), EdgeKind(first_kind)
    v = e.b
    coords = [c for c in (_coord(diagram, e.a), _coord(diagram, e.b)) if c is not None]
    coord = tuple(sum(c[i] for c in coords) / len(coords) for i in range(3)) if len(coords) == 2 else None
    m = diagram.add_spider(kind, 0, None, coord)
    second_kind = e.kind ^ first_kind
    diagram.reconnect(edge, v, m)
    diagram.set_edge_kind(edge, first_kind)
    tail = diagram.add_edge(m, v, second_kind, check_ports=False)
    return RewriteStep(Rule.INSERT_IDENTITY, {'edge': edge, 'kind': kind.value, 'first_kind': first_kind.value},
                       {'spider': m, 'edge': tail}, {})


def _coord(diagram: Diagram, node: int):
    if diagram.is_spider(node):
        return diagram.spiders[node].coord
    return diagram.ports[node].coord


def remove_loop(diagram: Diagram, edge: int) -> RewriteStep:
    e = diagram.edge(edge)
    if not e.is_loop:
        raise RuleNotApplicable('edge {} is not a self-loop'.format(edge))
    s = e.a
    diagram.remove_edge(edge)
    if e.kind is EdgeKind.HADAMARD:
        diagram.set_phase(s, diagram.spiders[s].phase + 2)
    return RewriteStep(Rule.REMOVE_LOOP, {'edge': edge}, {}, {'s': s, 'kind': e.kind.value})


def attach_instrument(diagram: Diagram, s: int, label: Optional[str] = None) -> RewriteStep:
    """
    Give spider s a classical outcome port with a fresh outcome variable.
    """
    sp = _spider(diagram, s)
    if sp.instrument is not None:
        raise RuleNotApplicable('spider {} already is an instrument'.format(s))
    var = diagram.add_outcome_var(label)
    diagram.set_instrument(s, OutcomeExpr.from_var(var))
    return RewriteStep(Rule.ATTACH_INSTRUMENT, {'s': s, 'label': label}, {'var': var}, {})


def detach_instrument(diagram: Diagram, s: int) -> RewriteStep:
    """
    Drop the outcome port of spider s (outcome fixed to 0). Outcome variables
    no longer used anywhere are removed.
    """
    sp = _spider(diagram, s)
    if sp.instrument is None:
        raise RuleNotApplicable('spider {} is not an instrument'.format(s))
    expr = sp.instrument
    diagram.set_instrument(s, None)
    used = set()
    for other in diagram.spiders.values():
        if other.instrument is not None:
            used |= other.instrument.vars
    removed = sorted(v for v in expr.vars if v not in used)
    for v in removed:
        diagram.remove_outcome_var(v)
    return RewriteStep(Rule.DETACH_INSTRUMENT, {'s': s}, {},
                       {'outcome': expr.to_dict(), 'removed_vars': removed})


_RULES = {
    Rule.FUSE: lambda d, p: fuse(d, p['s1'], p['s2'], p.get('edge')),
    Rule.SPLIT: lambda d, p: split(d, p['s'], p['group'], p.get('instrument_on_new', False)),
    Rule.COLOR_FLIP: lambda d, p: color_flip(d, p['s']),
    Rule.REMOVE_IDENTITY: lambda d, p: remove_identity(d, p['s']),
    Rule.INSERT_IDENTITY: lambda d, p: insert_identity(d, p['edge'], p['kind'], p['first_kind']),
    Rule.REMOVE_LOOP: lambda d, p: remove_loop(d, p['edge']),
    Rule.ATTACH_INSTRUMENT: lambda d, p: attach_instrument(d, p['s'], p.get('label')),
    Rule.DETACH_INSTRUMENT: lambda d, p: detach_instrument(d, p['s']),
}


def apply_step(diagram: Diagram, step: RewriteStep) -> RewriteStep:
    """
    Replay a recorded step. The diagram's id counters must match the state
    the step was recorded on, so created ids coincide.
    """
    replayed = _RULES[step.rule](diagram, step.params)
    if replayed.created != step.created:
        raise ContractViolation('replayed step created {} instead of {}'.format(replayed.created, step.created))
    return replayed


def is_identity_spider(diagram: Diagram, s: int) -> bool:
    sp = diagram.spiders[s]
    inc = diagram.incident(s)
    return sp.phase == 0 and sp.instrument is None and len(inc) == 2 and inc[0] != inc[1]


def is_canonical(diagram: Diagram) -> bool:
    """
    Only green spiders, no plain edge between two spiders, no removable identity.
    """
    if any(sp.kind is SpiderKind.X for sp in diagram.spiders.values()):
        return False
    for e in diagram.edges.values():
        if e.kind is EdgeKind.PLAIN and diagram.is_spider(e.a) and diagram.is_spider(e.b):
            return False
    return not any(is_identity_spider(diagram, s) for s in diagram.spiders)


def canonicalize(d: Diagram, seed: Optional[int] = None) -> RewriteTrace:
    """
    Reduce a diagram in place to canonical form: drop self-loops, flip every
    red spider, then saturate fuse and remove_identity.

    Args:
        d (Diagram): diagram, rewritten in place
        seed (int): if given, rule candidates are visited in a shuffled order
    Returns:
        trace (RewriteTrace): applied steps, replayable on a copy of the input
    """
    trace = RewriteTrace()
    rng = random.Random(seed) if seed is not None else None

    def order(items):
        items = sorted(items)
        if rng is not None:
            rng.shuffle(items)
        return items

    for eid in order(e for e, edge in d.edges.items() if edge.is_loop):
        trace.append(remove_loop(d, eid))
    for s in order(s for s, sp in d.spiders.items() if sp.kind is SpiderKind.X):
        trace.append(color_flip(d, s))
    changed = True
    while changed:
        changed = False
        for eid in order(d.edges):
            e = d.edges.get(eid)
            if e is None or e.kind is not EdgeKind.PLAIN or e.is_loop:
                continue
            if d.is_spider(e.a) and d.is_spider(e.b):
                a, b = (e.a, e.b) if rng is None or rng.random() < 0.5 else (e.b, e.a)
                trace.append(fuse(d, a, b, eid))
                changed = True
        for s in order(d.spiders):
            if d.is_spider(s) and is_identity_spider(d, s):
                trace.append(remove_identity(d, s))
                changed = True
    logger.info(f'canonicalize: {trace.counts()}')
    return trace


def to_canonical(diagram: Diagram, seed: Optional[int] = None) -> Tuple[Diagram, RewriteTrace]:
    """
    Canonical form of a copy of a diagram; the input is left untouched.
    """
    d = diagram.copy()
    return d, canonicalize(d, seed=seed)


# web transport


def _values_at(diagram: Diagram, edges: dict, eid: int, at_a: bool) -> Tuple[int, int]:
    bits = edges.get(eid, (0, 0))
    return bits if at_a else through(diagram.edges[eid].kind, bits)


def transport_web(web: PauliWeb, step: RewriteStep, diagram: Optional[Diagram] = None,
                  check: bool = False) -> PauliWeb:
    """
    Map a web on a step's pre-diagram to the corresponding web on its
    post-diagram. Highlights on new edges are forced by the spider rules.

    Args:
        web (PauliWeb): web valid before the step
        step (RewriteStep): applied step
        diagram (Diagram): post-diagram (default: web.diagram, rewritten in place)
        check (bool): verify the result and raise on violations
    Returns:
        web (PauliWeb): web on the post-diagram
    """
    d = diagram if diagram is not None else web.diagram
    edges = web.edges
    inclusions = set(web.inclusions)
    sign_expr = web.sign
    p, info, created = step.params, step.info, step.created

    if step.rule is Rule.FUSE:
        c = edges.pop(p['edge'], (0, 0))
        for eid, _ in info['loops']:
            edges.pop(eid, None)
        own = own_other(SpiderKind(info['kind']), c)[0]
        inclusions.discard(p['s2'])
        inclusions.discard(p['s1'])
        if d.spiders[p['s1']].instrument is not None and own:
            inclusions.add(p['s1'])
    elif step.rule is Rule.SPLIT:
        s, new = p['s'], created['spider']
        kind = d.spiders[s].kind
        rest = [(eid, at_a) for eid, at_a in legs(d, s) if eid != created['edge']]
        own = own_other(kind, _values_at(d, edges, *rest[0]))[0]
        other = 0
        for eid, at_a in legs(d, new):
            if eid != created['edge']:
                other ^= own_other(kind, _values_at(d, edges, eid, at_a))[1]
        edges[created['edge']] = (other, own) if kind is SpiderKind.Z else (own, other)
        if p['instrument_on_new'] and s in inclusions:
            inclusions.discard(s)
            inclusions.add(new)
    elif step.rule is Rule.COLOR_FLIP:
        s = p['s']
        for eid in set(d.incident(s)):
            if d.edges[eid].a == s and eid in edges:
                r, g = edges[eid]
                edges[eid] = (g, r)
    elif step.rule is Rule.REMOVE_IDENTITY:
        bits = edges.pop(info['e1'], (0, 0))
        edges.pop(info['e2'], None)
        if not info['u_is_a']:
            bits = through(EdgeKind(info['k1']), bits)
        if created['edge'] in d.edges:
            edges[created['edge']] = bits
    elif step.rule is Rule.INSERT_IDENTITY:
        bits = edges.get(p['edge'], (0, 0))
        edges[created['edge']] = through(EdgeKind(p['first_kind']), bits)
    elif step.rule is Rule.REMOVE_LOOP:
        edges.pop(p['edge'], None)
    elif step.rule is Rule.ATTACH_INSTRUMENT:
        probe = PauliWeb(d, edges, inclusions, OutcomeExpr())
        if full_indicator(probe, p['s']):
            inclusions.add(p['s'])
            sign_expr = sign_expr ^ OutcomeExpr.from_var(created['var'])
    elif step.rule is Rule.DETACH_INSTRUMENT:
        if p['s'] in inclusions:
            inclusions.discard(p['s'])
            outcome = info['outcome']
            sign_expr = sign_expr ^ OutcomeExpr(frozenset(outcome['vars']), outcome['const'])
    else:
        raise NotImplementedError(step.rule)

    out = PauliWeb(d, edges, inclusions, sign_expr)
    if check:
        violations = verify(out)
        if violations:
            raise ContractViolation('transported web violates {}'.format(violations[:3]))
    return out


def transport_all(webs: Iterable[PauliWeb], trace: RewriteTrace, diagram: Diagram) -> List[PauliWeb]:
    """
    Transport webs through a whole trace. The webs must live on a copy of the
    trace's starting diagram; the trace is replayed on that copy step by step.

    Args:
        webs (iterable): webs on the starting diagram
        trace (RewriteTrace): recorded steps
        diagram (Diagram): the starting diagram the webs refer to; rewritten in place
    Returns:
        webs (list): webs on the rewritten diagram
    """
    webs = [w.rebind(diagram) for w in webs]
    for step in trace:
        apply_step(diagram, step)
        webs = [transport_web(w, step, diagram) for w in webs]
    return webs
