# __init__.py

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, PortDirection, SpiderKind
from zxft.errors import (ContractViolation, IntegrityError, ParseError, RuleNotApplicable, SizeError,
                         UnsupportedPhase, ZXError)
from zxft.serialization import deserialize, load, save, serialize
from zxft.webs import PauliWeb, WebBasis, WebClass, web_basis
from zxft.rewrite import Rule, RewriteStep, RewriteTrace, canonicalize
from zxft.faults import PauliFault, inject, syndrome
