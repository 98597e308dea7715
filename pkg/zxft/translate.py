# translate.py

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from zxft.builders.lattices import Flavor, LatticeMeta
from zxft.builders.schedules import fbqc_schedule, flobqc_schedule, mbqc_schedule
from zxft.diagram import Diagram
from zxft.errors import ContractViolation
from zxft.gf2 import rank
from zxft.rewrite import RewriteTrace, transport_all
from zxft.webs import PauliWeb, WebBasis, verify, web_basis

logger = logging.getLogger(__name__)

# outcomes per bulk check
BULK_OUTCOMES = {Flavor.CBQC: 2, Flavor.MBQC: 6, Flavor.FBQC: 12, Flavor.FLOBQC: 6}

# allowed source -> target hops
_HOPS = {(Flavor.CBQC, Flavor.MBQC), (Flavor.MBQC, Flavor.FBQC), (Flavor.CBQC, Flavor.FLOBQC)}


@dataclass
class WebMap:
    """
    Result of a translation: the source basis and detector checks, and their
    transported images on the target diagram.
    """
    source: Diagram
    target: Diagram
    source_meta: LatticeMeta
    meta: LatticeMeta
    trace: RewriteTrace
    source_webs: List[PauliWeb]
    webs: List[PauliWeb]
    source_checks: Dict[tuple, PauliWeb] = field(default_factory=dict)
    checks: Dict[tuple, PauliWeb] = field(default_factory=dict)

    @property
    def source_flavor(self) -> Flavor:
        return self.source_meta.flavor

    @property
    def target_flavor(self) -> Flavor:
        return self.meta.flavor

    def dropped(self, k: int) -> 'WebMap':
        """
        Copy of the map without its k-th transported web.
        """
        return WebMap(self.source, self.target, self.source_meta, self.meta, self.trace, self.source_webs,
                      [w for i, w in enumerate(self.webs) if i != k], dict(self.source_checks), dict(self.checks))

    def table(self) -> pd.DataFrame:
        return pd.DataFrame([{
            'web': i,
            'source_class': s.web_class.value,
            'target_class': t.web_class.value,
            'source_outcomes': len(s.sign.vars),
            'target_outcomes': len(t.sign.vars),
        } for i, (s, t) in enumerate(zip(self.source_webs, self.webs))])


def detector_checks(diagram: Diagram, meta: LatticeMeta, basis: Optional[WebBasis] = None) -> Dict[tuple, PauliWeb]:
    """
    One check per detector (stabilizer, round): the check including the two
    consecutive measurements of the stabilizer. On MBQC lattices the data
    X-measurements are left free.

    Args:
        diagram (Diagram): CBQC or MBQC lattice
        meta (LatticeMeta): its bookkeeping
        basis (WebBasis): precomputed basis of diagram
    Returns:
        checks (dict): (stabilizer, round) -> check web
    """
    basis = basis if basis is not None else web_basis(diagram)
    free = []
    if meta.flavor is Flavor.MBQC:
        free = [s for s in diagram.instruments() if meta.roles.get(s, ('spider',))[0] != 'stab']
    elif meta.flavor is not Flavor.CBQC:
        raise ContractViolation('detector checks are defined on cbqc and mbqc lattices, not {}'.format(
            meta.flavor.value))
    out = {}
    for (i, t) in sorted(meta.detectors):
        pair = {meta.stab_spiders[(i, t - 1)], meta.stab_spiders[(i, t)]}
        web = basis.find_check(pair) if not free else basis.find_check_among(pair, free)
        if web is None:
            raise ContractViolation('no check for detector {}'.format((i, t)))
        out[(i, t)] = web
    return out


def _translate(diagram: Diagram, meta: LatticeMeta, schedule, target: Flavor,
               carried: Optional['WebMap'] = None) -> Tuple[Diagram, RewriteTrace, WebMap]:
    if (meta.flavor, target) not in _HOPS:
        raise ContractViolation('no translation from {} to {}'.format(meta.flavor.value, target.value))
    if carried is not None:
        source_webs, source_checks = carried.webs, carried.checks
    else:
        basis = web_basis(diagram)
        if basis.null:
            logger.warning(f'{len(basis.null)} null webs in the source basis')
        source_webs, source_checks = basis.webs, detector_checks(diagram, meta, basis)
    d = diagram.copy()
    trace, tmeta = schedule(d, meta)
    keys = sorted(source_checks)
    replay = diagram.copy()
    moved = transport_all(list(source_webs) + [source_checks[k] for k in keys], trace, replay)
    moved = [w.rebind(d) for w in moved]
    n = len(source_webs)
    webmap = WebMap(diagram, d, meta, tmeta, trace, list(source_webs), moved[:n],
                    dict(source_checks), dict(zip(keys, moved[n:])))
    logger.info(f'{meta.flavor.value} -> {target.value}: {len(trace)} steps, {n} webs, {len(keys)} checks')
    return d, trace, webmap


def cbqc_to_mbqc(diagram: Diagram, meta: LatticeMeta) -> Tuple[Diagram, RewriteTrace, WebMap]:
    """
    Rewrite a CBQC lattice to its MBQC canonical form and transport its web
    basis and detector checks.

    Args:
        diagram (Diagram): CBQC diagram (left untouched)
        meta (LatticeMeta): CBQC bookkeeping
    Returns:
        diagram (Diagram): MBQC diagram
        trace (RewriteTrace): applied steps
        webmap (WebMap): transported webs and checks
    """
    return _translate(diagram, meta, mbqc_schedule, Flavor.MBQC)


def mbqc_to_fbqc(diagram: Diagram, meta: LatticeMeta,
                 carried: Optional[WebMap] = None) -> Tuple[Diagram, RewriteTrace, WebMap]:
    """
    Split an MBQC lattice into 6-ring resource states joined by fusions.

    Args:
        diagram (Diagram): MBQC diagram (left untouched)
        meta (LatticeMeta): MBQC bookkeeping
        carried (WebMap): map that produced diagram; its transported webs and
            checks are carried on instead of recomputing a basis
    Returns:
        diagram (Diagram): FBQC diagram
        trace (RewriteTrace): applied steps
        webmap (WebMap): transported webs and checks
    """
    return _translate(diagram, meta, fbqc_schedule, Flavor.FBQC, carried)


def cbqc_to_flobqc(diagram: Diagram, meta: LatticeMeta) -> Tuple[Diagram, RewriteTrace, WebMap]:
    """
    Split a CBQC lattice into qubit chains joined by two-body measurements.
    """
    return _translate(diagram, meta, flobqc_schedule, Flavor.FLOBQC)


def identity_map(diagram: Diagram, meta: LatticeMeta) -> WebMap:
    basis = web_basis(diagram)
    checks = detector_checks(diagram, meta, basis) if meta.flavor in (Flavor.CBQC, Flavor.MBQC) else {}
    return WebMap(diagram, diagram, meta, meta, RewriteTrace(), basis.webs, basis.webs, checks, dict(checks))


def translate(diagram: Diagram, meta: LatticeMeta, target) -> List[WebMap]:
    """
    Translate a CBQC lattice to target, going through MBQC for FBQC.

    Returns:
        maps (list[WebMap]): one map per hop, the last one ends at target
    """
    target = Flavor(target)
    if meta.flavor is not Flavor.CBQC:
        raise ContractViolation('translations start from cbqc, not {}'.format(meta.flavor.value))
    if target is Flavor.CBQC:
        return [identity_map(diagram, meta)]
    if target is Flavor.FLOBQC:
        return [cbqc_to_flobqc(diagram, meta)[2]]
    _, _, first = cbqc_to_mbqc(diagram, meta)
    if target is Flavor.MBQC:
        return [first]
    _, _, second = mbqc_to_fbqc(first.target, first.meta, carried=first)
    return [first, second]


def _touches_port(diagram: Diagram, web: PauliWeb) -> bool:
    ports = set(diagram.ports)
    return any(diagram.edges[e].a in ports or diagram.edges[e].b in ports for e in web.edges)


def outcome_kinds(meta: LatticeMeta, web: PauliWeb) -> Dict[str, int]:
    """
    Outcome count of a check per slot kind ('stab', 'data', 'bXX', ...).
    """
    slot = {v: k for k, v in meta.slots.items()}
    kinds = {}
    for v in web.sign.vars:
        kind = slot[v][0] if v in slot else 'unslotted'
        kinds[kind] = kinds.get(kind, 0) + 1
    return kinds


class CorrespondenceReport:
    """
    Outcome of check_correspondence: failures (empty when the map is a
    bijection of valid webs with the expected bulk counts) and one row per
    detector check.
    """

    def __init__(self, flavor: Flavor, failures: List[str], rows: List[dict]):
        self._flavor = flavor
        self._failures = failures
        self._rows = rows

    @property
    def flavor(self) -> Flavor:
        return self._flavor

    @property
    def ok(self) -> bool:
        return not self._failures

    @property
    def failures(self) -> List[str]:
        return list(self._failures)

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(self._rows, columns=['stabilizer', 'round', 'bulk', 'outcomes', 'kinds'])

    def bulk_counts(self) -> List[int]:
        return sorted({r['outcomes'] for r in self._rows if r['bulk']})

    def to_dict(self) -> dict:
        return {'flavor': self._flavor.value, 'ok': self.ok, 'failures': self.failures,
                'bulk_counts': self.bulk_counts(), 'checks': len(self._rows),
                'bulk_checks': sum(1 for r in self._rows if r['bulk'])}


def check_correspondence(webmap: WebMap) -> CorrespondenceReport:
    """
    Check that a map is a bijection on web spans, that every transported web
    is valid, and that bulk detector checks carry the expected number of
    outcomes (of a single measurement kind on FloBQC lattices).

    Args:
        webmap (WebMap): map from any translation
    Returns:
        report (CorrespondenceReport): failures and the per-check table
    """
    failures = []
    target_basis = web_basis(webmap.target)
    encoded = np.array([target_basis.encode(w) for w in webmap.webs], dtype=np.uint8) if webmap.webs \
        else np.zeros((0, 1), dtype=np.uint8)
    r = rank(encoded) if len(webmap.webs) else 0
    if not (r == len(webmap.source_webs) == len(target_basis)):
        failures.append('rank mismatch: {} transported of {} source webs, target basis has {}'.format(
            r, len(webmap.source_webs), len(target_basis)))
    for k, w in enumerate(webmap.webs + [webmap.checks[key] for key in sorted(webmap.checks)]):
        violations = verify(w, webmap.target)
        if violations:
            failures.append('web {} violates {}'.format(k, violations[0]))
    flavor = webmap.target_flavor
    expected = BULK_OUTCOMES[flavor]
    rows = []
    for (i, t), w in sorted(webmap.checks.items()):
        kinds = outcome_kinds(webmap.meta, w)
        bulk = webmap.meta.is_bulk_detector(i, t) and not _touches_port(webmap.target, w)
        n = len(w.sign.vars)
        rows.append({'stabilizer': i, 'round': t, 'bulk': bulk, 'outcomes': n, 'kinds': kinds})
        if not bulk:
            continue
        if n != expected:
            failures.append('check {} has {} outcomes, expected {}'.format((i, t), n, expected))
        if flavor is Flavor.FLOBQC and len(kinds) != 1:
            failures.append('check {} mixes measurement kinds {}'.format((i, t), sorted(kinds)))
    n_boundary = sum(1 for row in rows if not row['bulk'])
    if n_boundary:
        logger.warning(f'{n_boundary} boundary checks excluded from the bulk count')
    report = CorrespondenceReport(flavor, failures, rows)
    logger.info(f'correspondence {flavor.value}: {"ok" if report.ok else "; ".join(failures[:3])}')
    return report
