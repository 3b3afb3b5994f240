"""Line-based fact files recording a growing diagram stage by stage.

Format, one fact per line, ASCII:

    # stage <s>        stage boundary
    E <name>           declares an element
    L <name1> <name2>  declares name1 < name2

Names use the canonical encoding from `names`. The writer emits, per stage,
the newly arrived elements in ascending order followed by their adjacency
links in the stage's order; the full comparison set is recovered
transitively on read. Writing is canonical, so identical stage sequences
produce identical bytes.
"""

from __future__ import annotations

from typing import Iterable

from .diagram import FiniteDiagram, linear_order_from_facts
from .names import parse_name


class FactFileError(ValueError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def render_stages(stages: Iterable[tuple]) -> str:
    """Serialize [(stage_number, FiniteDiagram), ...] canonically."""
    lines: list = []
    previous: frozenset = frozenset()
    for stage_no, diag in stages:
        lines.append(f"# stage {stage_no}")
        fresh = [n for n in diag.ordered if n not in previous]
        for name in fresh:
            lines.append(f"E {name.encode()}")
        seq = diag.ordered
        for name in fresh:
            r = diag.rank(name)
            if r > 0:
                lines.append(f"L {seq[r - 1].encode()} {name.encode()}")
            if r + 1 < len(seq):
                lines.append(f"L {name.encode()} {seq[r + 1].encode()}")
        previous = diag.names()
    return "\n".join(lines) + ("\n" if lines else "")


def write_stages(path, stages: Iterable[tuple]) -> None:
    text = render_stages(stages)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def parse_raw_stages(text: str) -> list:
    """Parse into [(stage_number, elements, pairs), ...], cumulative, unvalidated."""
    stages: list = []
    elements: list = []
    pairs: list = []
    current = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if not body.startswith("stage"):
                continue  # plain comment
            try:
                stage_no = int(body[len("stage") :].strip())
            except ValueError:
                raise FactFileError(f"bad stage marker {line!r}", line_no)
            if current is not None:
                stages.append((current, list(elements), list(pairs)))
            current = stage_no
            continue
        parts = line.split()
        try:
            if parts[0] == "E" and len(parts) == 2:
                elements.append(parse_name(parts[1]))
                continue
            if parts[0] == "L" and len(parts) == 3:
                pairs.append((parse_name(parts[1]), parse_name(parts[2])))
                continue
        except ValueError as exc:
            raise FactFileError(str(exc), line_no)
        raise FactFileError(f"unrecognized fact {line!r}", line_no)
    if current is not None:
        stages.append((current, list(elements), list(pairs)))
    elif elements or pairs:
        stages.append((0, list(elements), list(pairs)))
    return stages


def read_stages(path) -> list:
    """Read and validate a fact file into [(stage_number, FiniteDiagram), ...]."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    out = []
    for stage_no, elements, pairs in parse_raw_stages(text):
        order, reason, witness = linear_order_from_facts(elements, pairs)
        if order is None:
            names = ", ".join(n.encode() for n in witness)
            raise FactFileError(
                f"stage {stage_no} is not a strict total order ({reason}: {names})", 0
            )
        out.append((stage_no, FiniteDiagram(order)))
    return out
