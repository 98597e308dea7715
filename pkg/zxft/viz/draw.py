# draw.py

import logging
from typing import Optional

import matplotlib
import matplotlib.pyplot as plt
import numpy as np

from zxft.diagram import Diagram, EdgeKind, SpiderKind
from zxft.viz.export import COLORS, layout
from zxft.webs import PauliWeb

logger = logging.getLogger(__name__)


def draw_diagram(diagram: Diagram, web: Optional[PauliWeb] = None, ax=None, seed: int = 0,
                 filestr: Optional[str] = None, **kwargs):
    """
    Draw a diagram in 3D, optionally with a web's highlights.

    Args:
        diagram (Diagram): diagram
        web (PauliWeb): web whose red and green highlights are drawn over the edges
        ax (Axes3D): axis to draw on (default: a new figure)
        seed (int): layout seed for nodes without coordinates
        filestr (str): if given, save the figure to this path
        kwargs: forwarded to plt.figure
    Returns:
        ax (Axes3D): the axis drawn on
    """
    if ax is None:
        fig = plt.figure(**kwargs)
        ax = fig.add_subplot(projection='3d')
    pos = layout(diagram, seed)
    for eid in sorted(diagram.edges):
        e = diagram.edges[eid]
        if e.is_loop:
            continue
        xs, ys, zs = np.array([pos[e.a], pos[e.b]]).T
        ax.plot(xs, ys, zs, color='#3355ff' if e.kind is EdgeKind.HADAMARD else 'k',
                linestyle='--' if e.kind is EdgeKind.HADAMARD else '-', linewidth=0.8)
        if web is not None and eid in web.edges:
            r, g = web.edges[eid]
            # red above, green below when both are present
            for bit, color, dz in ((r, 'r', 0.03), (g, 'g', -0.03)):
                if bit:
                    ax.plot(xs, ys, zs + (dz if r and g else 0), color=color, linewidth=3, alpha=0.7)
    for kind in SpiderKind:
        nodes = [s for s, sp in diagram.spiders.items() if sp.kind is kind]
        if not nodes:
            continue
        p = np.array([pos[s] for s in nodes])
        sizes = [80 if diagram.spiders[s].instrument is not None else 40 for s in nodes]
        ax.scatter(p[:, 0], p[:, 1], p[:, 2], c=COLORS[kind], s=sizes, edgecolors='k', depthshade=False)
    if diagram.ports:
        p = np.array([pos[n] for n in diagram.ports])
        ax.scatter(p[:, 0], p[:, 1], p[:, 2], c='w', marker='s', s=20, edgecolors='k', depthshade=False)
    ax.set_xlabel('x')
    ax.set_ylabel('y')
    ax.set_zlabel('layer')
    if filestr is not None:
        ax.figure.savefig(filestr)
        logger.info(f'saved drawing to {filestr}')
    return ax


def use_headless_backend():
    # for the CLI and tests
    matplotlib.use('Agg')
