"""Bipartite variable/clause graph encoding with per-component meta nodes.

Node types: 0 meta, 1 variable, -1 clause. Edge types: 0 meta edge, 1 positive
polarity, -1 negative polarity. Each connected component gets one meta node
joined to all of its clause nodes, which caps the distance between any two
nodes of a clause-containing component at four hops. Graphs serialize to the
NBG 1 text format, optionally with backbone phase labels attached to variable
nodes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .cnf import BackboneLabeling, CnfFormula, connected_components

META, VARIABLE, CLAUSE = 0, 1, -1
META_EDGE, POSITIVE, NEGATIVE = 0, 1, -1

_NODE_TYPES = (META, VARIABLE, CLAUSE)
_EDGE_TYPES = (META_EDGE, POSITIVE, NEGATIVE)


class GraphFormatError(ValueError):
    """Malformed NBG graph data."""


@dataclass
class SatGraph:
    """Typed-node, typed-edge undirected graph; each edge is stored once.

    Node ids are dense and canonical: variables ascending, then clauses in
    file order, then one meta node per component in discovery order.
    """

    nodes: list[tuple[int, int]] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    var_map: dict[int, int] = field(default_factory=dict)
    component_count: int = 0

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def nodes_of_type(self, node_type: int) -> list[int]:
        return [nid for nid, t in self.nodes if t == node_type]


def encode(formula: CnfFormula) -> SatGraph:
    """Encode a formula as its variable/clause incidence graph plus meta nodes.

    One edge per distinct (variable, clause, polarity) incidence; a variable
    occurring in a clause with both polarities therefore contributes two edges
    of opposite types. Isolated variables become singleton components carrying
    their own meta node and no edges.
    """
    n, m = formula.num_vars, len(formula.clauses)
    components = connected_components(formula)
    graph = SatGraph(component_count=len(components))

    graph.nodes.extend((v - 1, VARIABLE) for v in range(1, n + 1))
    graph.nodes.extend((n + j, CLAUSE) for j in range(m))
    graph.nodes.extend((n + m + k, META) for k in range(len(components)))
    graph.var_map = {v: v - 1 for v in range(1, n + 1)}

    for j, clause in enumerate(formula.clauses):
        seen: set[tuple[int, int]] = set()
        for lit in clause:
            incidence = (abs(lit), POSITIVE if lit > 0 else NEGATIVE)
            if incidence in seen:
                continue
            seen.add(incidence)
            graph.edges.append((incidence[0] - 1, n + j, incidence[1]))

    for k, comp in enumerate(components):
        meta_id = n + m + k
        for j in comp.clauses:
            graph.edges.append((meta_id, n + j, META_EDGE))

    return graph


def component_members(graph: SatGraph) -> list[list[int]]:
    """Node ids of each component, in meta-node id order.

    Membership is recovered from the edges; an isolated variable shares a
    component with the edge-less meta node that the canonical ordering pairs
    it with.
    """
    n_nodes = graph.num_nodes
    parent = list(range(n_nodes))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for src, dst, _t in graph.edges:
        a, b = find(src), find(dst)
        if a != b:
            parent[b] = a

    types = dict(graph.nodes)
    meta_ids = sorted(nid for nid, t in graph.nodes if t == META)
    groups: dict[int, list[int]] = {}
    for nid in range(n_nodes):
        groups.setdefault(find(nid), []).append(nid)

    by_meta: dict[int, list[int]] = {}
    lone_vars: list[int] = []
    lone_metas: list[int] = []
    for members in groups.values():
        metas = [nid for nid in members if types[nid] == META]
        if len(metas) == 1 and len(members) > 1:
            by_meta[metas[0]] = members
        elif metas and len(members) == 1:
            lone_metas.append(metas[0])
        elif len(members) == 1 and types[members[0]] == VARIABLE:
            lone_vars.append(members[0])
        else:
            raise GraphFormatError("component lacks a unique meta node")
    lone_vars.sort()
    lone_metas.sort()
    if len(lone_vars) != len(lone_metas):
        raise GraphFormatError("unpaired isolated variable or meta node")
    for var_id, meta_id in zip(lone_vars, lone_metas):
        by_meta[meta_id] = sorted([var_id, meta_id])

    return [sorted(by_meta[mid]) for mid in meta_ids]


def diameter(graph: SatGraph, component: int) -> int:
    """Exact BFS diameter of one component (by index in meta-node order).

    Distances are taken over reachable pairs only, so an isolated variable's
    component (its meta node is disconnected) has diameter 0.
    """
    members = component_members(graph)
    if not 0 <= component < len(members):
        raise ValueError(f"component index {component} out of range")
    nodes = members[component]
    node_set = set(nodes)
    adj: dict[int, list[int]] = {nid: [] for nid in nodes}
    for src, dst, _t in graph.edges:
        if src in node_set and dst in node_set:
            adj[src].append(dst)
            adj[dst].append(src)

    best = 0
    for start in nodes:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in adj[cur]:
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        best = max(best, max(dist.values()))
    return best


def serialize(graph: SatGraph, labels: Mapping[int, int] | None = None) -> str:
    """NBG 1 text for a graph and optional backbone labels."""
    if labels:
        for var in labels:
            if var not in graph.var_map:
                raise ValueError(f"label references unknown variable {var}")
    num_clauses = sum(1 for _nid, t in graph.nodes if t == CLAUSE)
    lines = [
        "NBG 1",
        f"h {graph.num_nodes} {len(graph.edges)} {len(graph.var_map)} "
        f"{num_clauses} {graph.component_count}",
    ]
    for nid, node_type in graph.nodes:
        lines.append(f"n {nid} {node_type}")
    for src, dst, edge_type in graph.edges:
        lines.append(f"e {src} {dst} {edge_type}")
    if labels:
        for var in sorted(labels):
            lines.append(f"l {graph.var_map[var]} {1 if labels[var] else 0}")
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> tuple[SatGraph, BackboneLabeling | None]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "NBG 1":
        raise GraphFormatError("expected 'NBG 1' header")
    if len(lines) < 2 or not lines[1].startswith("h "):
        raise GraphFormatError("expected 'h' counts line")
    try:
        num_nodes, num_edges, num_vars, num_clauses, num_components = map(
            int, lines[1].split()[1:]
        )
    except ValueError as exc:
        raise GraphFormatError("malformed counts line") from exc

    nodes: list[tuple[int, int]] = []
    edges: list[tuple[int, int, int]] = []
    label_lines: list[tuple[int, int]] = []
    for raw in lines[2:]:
        kind, *fields = raw.split()
        try:
            values = [int(x) for x in fields]
        except ValueError as exc:
            raise GraphFormatError(f"non-integer field in {raw!r}") from exc
        if kind == "n" and len(values) == 2:
            if values[1] not in _NODE_TYPES:
                raise GraphFormatError(f"unknown node type in {raw!r}")
            nodes.append((values[0], values[1]))
        elif kind == "e" and len(values) == 3:
            if values[2] not in _EDGE_TYPES:
                raise GraphFormatError(f"unknown edge type in {raw!r}")
            edges.append((values[0], values[1], values[2]))
        elif kind == "l" and len(values) == 2:
            if values[1] not in (0, 1):
                raise GraphFormatError(f"phase must be 0 or 1 in {raw!r}")
            label_lines.append((values[0], values[1]))
        else:
            raise GraphFormatError(f"unrecognized line {raw!r}")

    if len(nodes) != num_nodes:
        raise GraphFormatError(f"declared {num_nodes} nodes, found {len(nodes)}")
    if len(edges) != num_edges:
        raise GraphFormatError(f"declared {num_edges} edges, found {len(edges)}")
    ids = [nid for nid, _t in nodes]
    if sorted(ids) != list(range(num_nodes)):
        raise GraphFormatError("node ids must be exactly 0..num_nodes-1")
    types = dict(nodes)
    for src, dst, _t in edges:
        if src not in types or dst not in types:
            raise GraphFormatError(f"dangling edge endpoint ({src}, {dst})")

    var_ids = sorted(nid for nid, t in nodes if t == VARIABLE)
    clause_count = sum(1 for _nid, t in nodes if t == CLAUSE)
    meta_count = sum(1 for _nid, t in nodes if t == META)
    if len(var_ids) != num_vars:
        raise GraphFormatError(f"declared {num_vars} variables, found {len(var_ids)}")
    if clause_count != num_clauses:
        raise GraphFormatError(f"declared {num_clauses} clauses, found {clause_count}")
    if meta_count != num_components:
        raise GraphFormatError(f"declared {num_components} components, found {meta_count}")

    var_map = {i + 1: nid for i, nid in enumerate(var_ids)}
    node_to_var = {nid: var for var, nid in var_map.items()}
    labels: BackboneLabeling = {}
    for nid, phase in label_lines:
        if nid not in node_to_var:
            raise GraphFormatError(f"label attached to non-variable node {nid}")
        labels[node_to_var[nid]] = phase

    graph = SatGraph(nodes=nodes, edges=edges, var_map=var_map, component_count=num_components)
    return graph, (labels if labels else None)


def save_graph(
    graph: SatGraph, path: str | Path, labels: Mapping[int, int] | None = None
) -> None:
    Path(path).write_text(serialize(graph, labels))


def load_graph(path: str | Path) -> tuple[SatGraph, BackboneLabeling | None]:
    return deserialize(Path(path).read_text())
