from zxft.oracle.dense import (ContractionOrder, DenseTensor, dense_contract, equivalent, proportional, spider_tensor,
                               verify_clifford)
from zxft.oracle.invariance import invariance_suite
from zxft.oracle.tableau import (CircuitReading, Op, OutcomeRecord, check_constraints, reading, tableau_run,
                                 tableau_runs)
