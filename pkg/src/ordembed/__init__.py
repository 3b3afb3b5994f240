"""ordembed: monotone enumeration operators between computable linear orders.

The package has three layers: a symbolic order-type engine (`ordertype`),
stage-driven presentations and pure monotone operators on finite diagrams
(`presentation`, `enumop`), and a finite-stage analysis and experiment
harness (`analysis`, `experiments`) with a CLI front end (`cli`).
"""

from .diagram import FiniteDiagram, NotLinearError
from .enumop import (
    EnumOperator,
    InputOutsideFragment,
    NonAtomInput,
    op_concat_copies,
    op_concat_hetero,
    op_interval,
    op_lexsum,
    op_power,
    op_product,
    op_rad,
    op_self_power,
    parse_operator,
    run_stream,
    transfer_check,
)
from .names import Atom, Copy, ElementName, Pair, Tup, parse_name
from .ordertype import (
    OrderTypeExpr,
    SummandSpec,
    UnsupportedForm,
    add,
    equal,
    mul,
    normalize,
    parse,
    pow_finite,
    reverse,
    sum_over,
)
from .presentation import (
    Presentation,
    Schedule,
    concat_sum,
    interleave_merge,
    partition_recombine,
    random_finite_diagram,
    round_interleave,
    std_presentation,
    strict_growth_interleave,
)

__version__ = "0.1.0"

__all__ = [
    "Atom", "Copy", "ElementName", "EnumOperator", "FiniteDiagram",
    "InputOutsideFragment", "NonAtomInput", "NotLinearError", "OrderTypeExpr",
    "Pair", "Presentation", "Schedule", "SummandSpec", "Tup",
    "UnsupportedForm", "add", "concat_sum", "equal", "interleave_merge",
    "mul", "normalize", "op_concat_copies", "op_concat_hetero", "op_interval",
    "op_lexsum", "op_power", "op_product", "op_rad", "op_self_power", "parse",
    "parse_name", "parse_operator", "partition_recombine", "pow_finite",
    "random_finite_diagram", "reverse", "round_interleave", "run_stream",
    "std_presentation", "strict_growth_interleave", "sum_over",
    "transfer_check",
]
