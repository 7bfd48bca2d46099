"""Edge-list and outcome-log text formats.

Edge lists carry a provenance header ``# mori n=<n> m=<m> beta=<beta>
seed=<seed>`` followed by one ``tail head`` pair per line in insertion order
(1-based).  Outcome logs carry one ``step kind index`` line per step, with
kind one of v/h/t.
"""

from __future__ import annotations

import io as _io

from .errors import EdgeListParseError
from .model import (
    COPY_HEAD,
    COPY_TAIL,
    UNIFORM,
    MergedMultigraph,
    Outcome,
    multigraph_from_edges,
)

_KINDS = (UNIFORM, COPY_HEAD, COPY_TAIL)


def format_header(g: MergedMultigraph) -> str | None:
    if g.m is None or g.beta is None or g.seed is None:
        return None
    return f"# mori n={g.n} m={g.m} beta={g.beta!r} seed={g.seed}"


def write_edge_list(g: MergedMultigraph, fh) -> None:
    header = format_header(g)
    if header is not None:
        fh.write(header + "\n")
    buf = _io.StringIO()
    for a, b in zip(g.tails, g.heads):
        buf.write(f"{a} {b}\n")
    fh.write(buf.getvalue())


def _parse_header(line: str) -> dict:
    fields = {}
    for token in line.lstrip("#").split():
        if "=" in token:
            key, val = token.split("=", 1)
            fields[key] = val
    return fields


def read_edge_list(fh) -> MergedMultigraph:
    """Parse an edge list; the header is optional and the vertex count is
    inferred from the largest endpoint when absent."""
    n = m = seed = None
    beta = None
    edges = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if lineno == 1:
                fields = _parse_header(line)
                try:
                    n = int(fields["n"]) if "n" in fields else None
                    m = int(fields["m"]) if "m" in fields else None
                    beta = float(fields["beta"]) if "beta" in fields else None
                    seed = int(fields["seed"]) if "seed" in fields else None
                except ValueError as exc:
                    raise EdgeListParseError(lineno, f"bad header field: {exc}")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected 'tail head', got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer endpoint in {line!r}")
        if a < 1 or b < 1:
            raise EdgeListParseError(lineno, "vertex indices are 1-based")
        edges.append((a, b))
    if n is None:
        n = max((max(a, b) for a, b in edges), default=0)
    if edges and max(max(a, b) for a, b in edges) > n:
        raise EdgeListParseError(0, "edge endpoint exceeds header vertex count")
    return multigraph_from_edges(edges, n, m=m, beta=beta, seed=seed)


def write_outcome_log(log, fh) -> None:
    for o in log:
        fh.write(f"{o.step} {o.kind} {o.index}\n")


def read_outcome_log(fh) -> list[Outcome]:
    out = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[1] not in _KINDS:
            raise EdgeListParseError(lineno, f"expected 'step kind index', got {line!r}")
        try:
            step, index = int(parts[0]), int(parts[2])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer field in {line!r}")
        out.append(Outcome(parts[1], index, step))
    return out
