# schedules.py

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx

from zxft.builders.lattices import (BOTTOM, LEFT, Flavor, Fusion, LatticeMeta, PairMeasurement, PatchSpec,
                                    cbqc)
from zxft.diagram import Diagram, SpiderKind
from zxft.rewrite import (RewriteTrace, attach_instrument, canonicalize, detach_instrument, insert_identity,
                          split)

logger = logging.getLogger(__name__)

UP, DOWN = 'U', 'D'


def _only_var(d: Diagram, s: int) -> int:
    (var,) = d.spiders[s].instrument.vars
    return var


def _drop_slot(meta: LatticeMeta, var: int):
    for key in [k for k, v in meta.slots.items() if v == var]:
        del meta.slots[key]


def _prune(d: Diagram, meta: LatticeMeta):
    meta.roles = {s: r for s, r in meta.roles.items() if d.is_spider(s)}
    meta.times = {s: t for s, t in meta.times.items() if d.is_spider(s)}


def leg_groups(d: Diagram, meta: LatticeMeta, s: int, horizontal: bool = False) -> Tuple[List[int], List[int]]:
    """
    Partition the legs of a lattice spider.

    Data spiders split into an upper group (the worldline leg towards later
    layers and the legs to stabilizers where the qubit is a bottom corner) and
    a lower group (the rest). Stabilizer spiders split into bottom and top
    corners, or into left and right corners when horizontal is set.

    Args:
        d (Diagram): lattice diagram
        meta (LatticeMeta): its bookkeeping
        s (int): spider with a 'data' or 'stab' role
        horizontal (bool): split stabilizers left/right instead of bottom/top
    Returns:
        first (list[int]): edges kept on s
        second (list[int]): edges moved off s
    """
    role = meta.roles[s]
    first, second = [], []
    for eid in d.incident(s):
        n = d.edges[eid].other(s)
        if role[0] == 'data':
            q, L = role[1], role[2]
            if d.is_port(n):
                upper = n == meta.outputs.get(q)
            else:
                other = meta.roles[n]
                if other[0] == 'data':
                    upper = other[2] > L
                else:
                    upper = meta.stabilizers[other[1]].role_of(q) in BOTTOM
        else:
            q = meta.roles[n][1]
            corner = meta.stabilizers[role[1]].role_of(q)
            upper = corner in (LEFT if horizontal else BOTTOM)
        (first if upper else second).append(eid)
    return first, second


def _half_role(role: tuple, half: str) -> tuple:
    return role[:3] + (half,)


def mbqc_schedule(d: Diagram, meta: LatticeMeta, seed: Optional[int] = None) -> Tuple[RewriteTrace, LatticeMeta]:
    """
    Rewrite a CBQC lattice in place into its MBQC reading: canonical form,
    then an X-measurement instrument on every spider not adjacent to a
    boundary port.

    Args:
        d (Diagram): CBQC diagram, rewritten in place
        meta (LatticeMeta): CBQC bookkeeping
        seed (int): rule-order seed for the canonical form
    Returns:
        trace (RewriteTrace): applied steps
        meta (LatticeMeta): MBQC bookkeeping
    """
    meta = meta.copy(Flavor.MBQC)
    trace = canonicalize(d, seed=seed)
    _prune(d, meta)
    boundary = {n for p in d.ports for n in d.neighbors(p)}
    for s in sorted(d.spiders):
        if d.spiders[s].instrument is not None or s in boundary:
            continue
        role = meta.roles.get(s, ('spider', s))
        if role[0] == 'data':
            (i, j), L = role[1], role[2]
            label, key = 'mX@{}_{}_L{}'.format(i, j, L), ('data', (i, j), L)
        else:
            label, key = 'mX@{}'.format(s), ('spider', s)
        step = attach_instrument(d, s, label)
        trace.append(step)
        meta.slots[key] = step.created['var']
    logger.info(f'mbqc schedule: {len(trace)} steps, {len(d.instruments())} instruments')
    return trace, meta


def fbqc_schedule(d: Diagram, meta: LatticeMeta) -> Tuple[RewriteTrace, LatticeMeta]:
    """
    Rewrite an MBQC lattice in place into its FBQC reading. Every measured
    spider with legs both above and below is split in two and the halves are
    joined by a fusion: an X-instrument identity (bZZ) and the moved
    Z-instrument (bXX) in series.

    Args:
        d (Diagram): MBQC diagram, rewritten in place
        meta (LatticeMeta): MBQC bookkeeping
    Returns:
        trace (RewriteTrace): applied steps
        meta (LatticeMeta): FBQC bookkeeping with fusions and rings
    """
    meta = meta.copy(Flavor.FBQC)
    trace = RewriteTrace()
    for s in sorted(d.instruments()):
        if s not in meta.roles:
            continue
        kept, moved = leg_groups(d, meta, s)
        if not kept or not moved:
            continue
        role = meta.roles[s]
        k = len(meta.fusions)
        step = split(d, s, moved)
        trace.append(step)
        s2, link1 = step.created['spider'], step.created['edge']
        step = split(d, s, [link1], instrument_on_new=True)
        trace.append(step)
        s3, link2 = step.created['spider'], step.created['edge']
        step = insert_identity(d, link2, SpiderKind.X)
        trace.append(step)
        x = step.created['spider']
        step = attach_instrument(d, x, 'bZZ@f{}'.format(k))
        trace.append(step)
        zz_var = step.created['var']
        xx_var = _only_var(d, s3)
        d.relabel_outcome(xx_var, 'bXX@f{}'.format(k))
        _drop_slot(meta, xx_var)
        meta.slots[('bXX', k)] = xx_var
        meta.slots[('bZZ', k)] = zz_var
        meta.roles[s] = _half_role(role, UP)
        meta.roles[s2] = _half_role(role, DOWN)
        meta.roles[s3] = ('fusion', 'XX', k)
        meta.roles[x] = ('fusion', 'ZZ', k)
        for t in (s2, s3, x):
            meta.times[t] = meta.times[s]
        meta.fusions.append(Fusion(k, s, (s, s2), s3, x, xx_var, zz_var))
    meta.rings = ring_states(d, meta)
    logger.info(f'fbqc schedule: {len(meta.fusions)} fusions, {len(meta.rings)} rings')
    return trace, meta


def _cut_fusions(d: Diagram, meta: LatticeMeta) -> nx.Graph:
    gadget = {f.xx_spider for f in meta.fusions} | {f.zz_spider for f in meta.fusions}
    g = nx.Graph()
    g.add_nodes_from(s for s in d.spiders if s not in gadget)
    for e in d.edges.values():
        if e.a in g and e.b in g and not e.is_loop:
            g.add_edge(e.a, e.b)
    return g


def resource_states(d: Diagram, meta: LatticeMeta) -> List[List[int]]:
    """
    Connected pieces left after cutting every fusion gadget, largest first.
    """
    g = _cut_fusions(d, meta)
    return sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: (-len(c), c))


def ring_states(d: Diagram, meta: LatticeMeta) -> List[List[int]]:
    """
    Resource states that are rings: pieces whose spiders are each joined to
    exactly two others in the piece. Pieces holding an unmeasured port
    neighbor or ending on a side boundary are left out.

    Returns:
        rings (list[list[int]]): spiders of each ring in cycle order
    """
    g = _cut_fusions(d, meta)
    boundary = {n for p in d.ports for n in d.neighbors(p)}
    out = []
    for c in nx.connected_components(g):
        piece = g.subgraph(c)
        if len(c) < 3 or any(piece.degree(s) != 2 for s in c):
            continue
        if c & boundary:
            continue
        cycle = [u for u, _ in nx.find_cycle(piece, source=min(c))]
        out.append(cycle)
    return sorted(out)


def _chain_time(meta: LatticeMeta, role: tuple) -> float:
    # one time step per spider along a chain; chains drift down one row per layer
    if role[0] == 'data':
        (_, j), L = role[1], role[2]
        return L - 2 * j + 2
    b = meta.stabilizers[role[1]].plaquette[1]
    return role[2] - 2 * b + 1


def flobqc_schedule(d: Diagram, meta: LatticeMeta) -> Tuple[RewriteTrace, LatticeMeta]:
    """
    Rewrite a CBQC lattice in place into its FloBQC reading. Data spiders
    split into upper and lower halves, stabilizer spiders into left and
    right halves; the stabilizer instruments are dropped and every split is
    read as a two-body measurement gadget (ZZ between green halves, XX
    between red halves). The halves form one chain per physical qubit; the
    last spider of a chain that does not reach an output is measured.

    Args:
        d (Diagram): CBQC diagram, rewritten in place
        meta (LatticeMeta): CBQC bookkeeping
    Returns:
        trace (RewriteTrace): applied steps
        meta (LatticeMeta): FloBQC bookkeeping with chains and pair measurements
    """
    meta = meta.copy(Flavor.FLOBQC)
    trace = RewriteTrace()
    for s in sorted(meta.roles):
        role = meta.roles[s]
        if role[0] not in ('data', 'stab'):
            continue
        meta.times[s] = _chain_time(meta, role)
        if d.spiders[s].instrument is not None:
            _drop_slot(meta, _only_var(d, s))
            trace.append(detach_instrument(d, s))
        kept, moved = leg_groups(d, meta, s, horizontal=role[0] == 'stab')
        if not kept or not moved:
            continue
        kind = d.spiders[s].kind
        step = split(d, s, moved)
        trace.append(step)
        s2, link = step.created['spider'], step.created['edge']
        step = insert_identity(d, link, kind.other)
        trace.append(step)
        g = step.created['spider']
        label = 'ZZ' if kind is SpiderKind.Z else 'XX'
        k = len(meta.pair_measurements)
        step = attach_instrument(d, g, '{}@p{}'.format(label, k))
        trace.append(step)
        halves = (UP, DOWN) if role[0] == 'data' else ('left', 'right')
        meta.roles[s] = _half_role(role, halves[0])
        meta.roles[s2] = _half_role(role, halves[1])
        meta.roles[g] = ('pair', label, k)
        meta.times[s2] = meta.times[g] = meta.times[s]
        meta.slots[(label, k)] = step.created['var']
        meta.pair_measurements.append(PairMeasurement(k, label, (s, s2), g, step.created['var'], meta.times[s]))
        _shift(d, s, s2, role[0] == 'data')
    meta.chains = chains(d, meta)
    boundary = {n for p in d.ports for n in d.neighbors(p)}
    for label in sorted(meta.chains):
        end = meta.chains[label][-1]
        if end in boundary:
            continue
        step = attach_instrument(d, end, 'M{}@c{}'.format('X' if d.spiders[end].kind is SpiderKind.Z else 'Z',
                                                          '_'.join(map(str, label))))
        trace.append(step)
        meta.slots[('end', end)] = step.created['var']
    logger.info(f'flobqc schedule: {len(meta.chains)} chains, {len(meta.pair_measurements)} pair measurements')
    return trace, meta


def _shift(d: Diagram, s: int, s2: int, vertical: bool):
    # separate the halves in the layout: lower half down, right half right
    c = d.spiders[s].coord
    if c is None:
        return
    delta = (0, 0, 0.2) if vertical else (-0.2, 0, 0)
    d.set_coord(s, tuple(x + dx for x, dx in zip(c, delta)))
    d.set_coord(s2, tuple(x - dx for x, dx in zip(c, delta)))


def chains(d: Diagram, meta: LatticeMeta) -> Dict[Tuple[int, int, int], List[int]]:
    """
    Qubit chains of a FloBQC lattice: the spiders joined by non-gadget edges,
    ordered by time and labelled (column, k, segment) where k = row + layer of
    the chain's upper data halves. Side columns lose every other stabilizer,
    so a diagonal there breaks into several segments numbered by start time.
    """
    gadgets = {m.gadget for m in meta.pair_measurements}
    g = nx.Graph()
    g.add_nodes_from(s for s in d.spiders if s not in gadgets)
    for e in d.edges.values():
        if e.a in g and e.b in g and not e.is_loop:
            g.add_edge(e.a, e.b)
    lines = {}
    for component in nx.connected_components(g):
        members = sorted(component, key=lambda s: (meta.times.get(s, 0), s))
        line = None
        for s in members:
            role = meta.roles.get(s, ())
            if role and role[0] == 'data':
                (i, j), L = role[1], role[2]
                line = (i, j + L) if role[3] == UP else (i, j + L - 1)
                break
        if line is None:
            line = (-1, members[0])
        lines.setdefault(line, []).append(members)
    out = {}
    for line, segments in lines.items():
        segments.sort(key=lambda ms: (meta.times.get(ms[0], 0), ms[0]))
        for n, members in enumerate(segments):
            out[line + (n,)] = members
    return out


def chain_neighbors(meta: LatticeMeta) -> Dict[Tuple[int, int, int], set]:
    owner = {s: label for label, members in meta.chains.items() for s in members}
    out = {label: set() for label in meta.chains}
    for m in meta.pair_measurements:
        a, b = (owner[s] for s in m.spiders)
        out[a].add(b)
        out[b].add(a)
    return out


def chain_schedule(meta: LatticeMeta, label: Tuple[int, int, int]) -> List[Tuple[str, str]]:
    """
    Ordered two-body measurement steps along a chain, each as (kind,
    direction) with direction 'up' (partner k+1), 'down' (k-1) or 'side'.
    """
    members = meta.chains[label]
    owner = {s: lab for lab, ms in meta.chains.items() for s in ms}
    steps = []
    for s in members:
        for m in meta.pair_measurements:
            if s in m.spiders:
                partner = owner[m.spiders[1] if m.spiders[0] == s else m.spiders[0]]
                dk = partner[1] - label[1]
                steps.append((m.kind, 'up' if dk > 0 else 'down' if dk < 0 else 'side'))
    return steps


def is_bulk_chain(d: Diagram, meta: LatticeMeta, label: Tuple[int, int, int]) -> bool:
    """
    A chain is in the bulk when every spider on it takes part in a two-body
    measurement and it holds both upper and lower data halves.
    """
    paired = {s for m in meta.pair_measurements for s in m.spiders}
    members = meta.chains[label]
    halves = {meta.roles[s][3] for s in members if meta.roles.get(s, ('',))[0] == 'data'}
    return all(s in paired for s in members) and {UP, DOWN} <= halves


def mbqc(spec: PatchSpec) -> Tuple[Diagram, LatticeMeta]:
    """
    Measurement-based memory patch: the canonical form of cbqc(spec) with
    every non-boundary spider measured.
    """
    d, meta = cbqc(spec)
    _, meta = mbqc_schedule(d, meta)
    return d, meta


def fbqc(spec: PatchSpec) -> Tuple[Diagram, LatticeMeta]:
    """
    Fusion-based memory patch: 6-ring resource states joined by fusions.
    """
    d, meta = mbqc(spec)
    _, meta = fbqc_schedule(d, meta)
    return d, meta


def flobqc(spec: PatchSpec) -> Tuple[Diagram, LatticeMeta]:
    """
    Floquet-based memory patch: qubit chains on a honeycomb joined by
    alternating XX and ZZ measurements.
    """
    d, meta = cbqc(spec)
    _, meta = flobqc_schedule(d, meta)
    return d, meta
