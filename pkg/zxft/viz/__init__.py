from zxft.viz.draw import draw_diagram
from zxft.viz.export import export_dot, export_obj, layout
