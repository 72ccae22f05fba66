"""NBG graph reading and NBH hint writing.

This package talks to the solver toolkit purely through its file formats:
NBG 1 graphs in (node types 0 meta / 1 variable / -1 clause, edge types
0 meta / 1 positive / -1 negative, optional `l <node> <phase>` labels) and
NBH 1 hints out (`<var> <phase> <confidence>` per variable).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import torch

# Dense edge-type ids used by the model's embedding tables.
EDGE_META, EDGE_POS, EDGE_NEG, EDGE_SELF = 0, 1, 2, 3
_EDGE_TYPE_MAP = {0: EDGE_META, 1: EDGE_POS, -1: EDGE_NEG}
_NODE_TYPES = (0, 1, -1)


class NbgFormatError(ValueError):
    """Malformed NBG input."""


@dataclass
class GraphData:
    """One parsed graph, ready for the model.

    ``edge_index``/``edge_types`` hold each undirected edge once; the model
    expands them to both directions. ``var_nodes[i]`` is the node id of the
    i-th variable (formula variable ``var_ids[i]``), in ascending variable
    order. ``label_nodes`` indexes into node ids, not variable positions.
    """

    node_types: torch.Tensor  # float [N, 1], raw type scalars
    edge_index: torch.Tensor  # long [2, E]
    edge_types: torch.Tensor  # long [E], dense ids (meta/pos/neg)
    var_nodes: torch.Tensor  # long [V]
    var_ids: list[int]
    label_nodes: torch.Tensor  # long [K]
    label_phases: torch.Tensor  # float [K]

    @property
    def num_nodes(self) -> int:
        return self.node_types.shape[0]

    @property
    def num_labels(self) -> int:
        return int(self.label_nodes.shape[0])


def parse_nbg(text: str) -> GraphData:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "NBG 1":
        raise NbgFormatError("expected 'NBG 1' header")
    if len(lines) < 2 or not lines[1].startswith("h "):
        raise NbgFormatError("expected 'h' counts line")
    try:
        num_nodes, num_edges, num_vars, _num_clauses, _num_components = map(
            int, lines[1].split()[1:]
        )
    except ValueError as exc:
        raise NbgFormatError("malformed counts line") from exc

    types: dict[int, int] = {}
    edges: list[tuple[int, int, int]] = []
    labels: list[tuple[int, int]] = []
    for raw in lines[2:]:
        fields = raw.split()
        kind = fields[0]
        try:
            values = [int(x) for x in fields[1:]]
        except ValueError as exc:
            raise NbgFormatError(f"non-integer field in {raw!r}") from exc
        if kind == "n" and len(values) == 2:
            if values[1] not in _NODE_TYPES:
                raise NbgFormatError(f"unknown node type in {raw!r}")
            types[values[0]] = values[1]
        elif kind == "e" and len(values) == 3:
            if values[2] not in _EDGE_TYPE_MAP:
                raise NbgFormatError(f"unknown edge type in {raw!r}")
            edges.append((values[0], values[1], values[2]))
        elif kind == "l" and len(values) == 2:
            labels.append((values[0], values[1]))
        else:
            raise NbgFormatError(f"unrecognized line {raw!r}")

    if len(types) != num_nodes or sorted(types) != list(range(num_nodes)):
        raise NbgFormatError("node ids must be exactly 0..num_nodes-1")
    if len(edges) != num_edges:
        raise NbgFormatError(f"declared {num_edges} edges, found {len(edges)}")
    for src, dst, _t in edges:
        if src not in types or dst not in types:
            raise NbgFormatError(f"dangling edge endpoint ({src}, {dst})")

    var_nodes = sorted(nid for nid, t in types.items() if t == 1)
    if len(var_nodes) != num_vars:
        raise NbgFormatError(f"declared {num_vars} variables, found {len(var_nodes)}")
    node_pos = {nid: i for i, nid in enumerate(var_nodes)}
    for nid, phase in labels:
        if nid not in node_pos:
            raise NbgFormatError(f"label attached to non-variable node {nid}")
        if phase not in (0, 1):
            raise NbgFormatError(f"label phase must be 0 or 1, got {phase}")

    node_types = torch.tensor(
        [[float(types[nid])] for nid in range(num_nodes)], dtype=torch.float32
    )
    if edges:
        edge_index = torch.tensor([[e[0] for e in edges], [e[1] for e in edges]])
        edge_types = torch.tensor([_EDGE_TYPE_MAP[e[2]] for e in edges])
    else:
        edge_index = torch.zeros((2, 0), dtype=torch.long)
        edge_types = torch.zeros((0,), dtype=torch.long)
    return GraphData(
        node_types=node_types,
        edge_index=edge_index,
        edge_types=edge_types,
        var_nodes=torch.tensor(var_nodes, dtype=torch.long),
        var_ids=list(range(1, num_vars + 1)),
        label_nodes=torch.tensor([nid for nid, _p in labels], dtype=torch.long),
        label_phases=torch.tensor([float(p) for _nid, p in labels]),
    )


def load_graph_file(path: str | Path) -> GraphData:
    return parse_nbg(Path(path).read_text())


def merge_graphs(graphs: Sequence[GraphData]) -> GraphData:
    """Disjoint union with node-id offsets; the standard graph batching."""
    if not graphs:
        raise ValueError("cannot merge zero graphs")
    node_types, eidx, etypes, var_nodes, label_nodes, label_phases = [], [], [], [], [], []
    var_ids: list[int] = []
    offset = 0
    for g in graphs:
        node_types.append(g.node_types)
        eidx.append(g.edge_index + offset)
        etypes.append(g.edge_types)
        var_nodes.append(g.var_nodes + offset)
        label_nodes.append(g.label_nodes + offset)
        label_phases.append(g.label_phases)
        var_ids.extend(g.var_ids)
        offset += g.num_nodes
    return GraphData(
        node_types=torch.cat(node_types),
        edge_index=torch.cat(eidx, dim=1),
        edge_types=torch.cat(etypes),
        var_nodes=torch.cat(var_nodes),
        var_ids=var_ids,
        label_nodes=torch.cat(label_nodes),
        label_phases=torch.cat(label_phases),
    )


def format_hints(
    var_ids: Sequence[int], phases: Sequence[int], confidences: Sequence[float]
) -> str:
    lines = ["NBH 1"]
    for var, phase, conf in zip(var_ids, phases, confidences):
        lines.append(f"{var} {phase} {conf:.6f}")
    return "\n".join(lines) + "\n"


def write_hints(
    path: str | Path,
    var_ids: Sequence[int],
    phases: Sequence[int],
    confidences: Sequence[float],
) -> None:
    Path(path).write_text(format_hints(var_ids, phases, confidences))
