# test_export.py

import matplotlib
matplotlib.use('Agg')

from zxft.builders import PatchSpec, build, gadget
from zxft.diagram import Diagram, PortDirection, SpiderKind
from zxft.viz import draw_diagram, export_dot, export_obj, layout
from zxft.webs import web_basis


def test_layout_uses_coords():
    d = gadget('cnot')
    pos = layout(d)
    for s, sp in d.spiders.items():
        assert pos[s] == tuple(float(x) for x in sp.coord)


def test_layout_fills_missing():
    d = Diagram()
    a = d.add_spider(SpiderKind.Z)
    b = d.add_spider(SpiderKind.X, coord=(1, 2))
    p = d.add_port(PortDirection.OUT)
    d.add_edge(a, b)
    d.add_edge(a, p)
    pos = layout(d, seed=0)
    assert set(pos) == {a, b, p}
    assert pos[b] == (1., 2., 0.)
    assert pos == layout(d, seed=0)


def test_dot():
    d = gadget('cz')
    text = export_dot(d)
    assert text.startswith('graph zx {')
    assert 'style=dashed' in text
    assert text.count(' -- ') == len(d.edges)


def test_dot_highlight():
    d = gadget('bell_meas')
    w = web_basis(d).outer[0]
    text = export_dot(d, w)
    assert text.count('penwidth=3') == len(w.edges)
    assert 'bZZ' in text


def test_obj():
    d, _ = build('cbqc', PatchSpec(2, 1))
    text = export_obj(d)
    lines = text.splitlines()
    assert sum(1 for line in lines if line.startswith('v ')) == len(d.spiders) + len(d.ports)
    assert sum(1 for line in lines if line.startswith('l ')) == len(d.edges)


def test_draw(tmp_path):
    d = gadget('yy_meas')
    path = str(tmp_path / 'yy.png')
    ax = draw_diagram(d, web_basis(d).outer[0], filestr=path)
    assert ax is not None
    assert (tmp_path / 'yy.png').exists()
