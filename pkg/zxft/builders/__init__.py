from zxft.builders.gadgets import Gadget, gadget, graph_state
from zxft.builders.lattices import (Flavor, Fusion, LatticeMeta, PairMeasurement, PatchSpec, Stabilizer,
                                    StabilizerOrder, cbqc, memory_circuit, rep_code, rep_code_lattice, rotated_patch)
from zxft.builders.schedules import (chain_neighbors, chain_schedule, fbqc, fbqc_schedule, flobqc, flobqc_schedule,
                                     is_bulk_chain, mbqc, mbqc_schedule, resource_states, ring_states)


def build(flavor, spec: PatchSpec):
    """
    Build a memory patch of the given flavor.

    Args:
        flavor (str or Flavor): 'cbqc', 'mbqc', 'fbqc' or 'flobqc'
        spec (PatchSpec): patch
    Returns:
        diagram (Diagram): lattice diagram
        meta (LatticeMeta): lattice bookkeeping
    """
    builder = {Flavor.CBQC: cbqc, Flavor.MBQC: mbqc, Flavor.FBQC: fbqc, Flavor.FLOBQC: flobqc}[Flavor(flavor)]
    return builder(spec)
