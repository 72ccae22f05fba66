import pytest

from nbsat.cnf import CnfFormula, connected_components, parse_dimacs
from nbsat.dataset import gen_random_ksat
from nbsat.graph import (
    CLAUSE,
    META,
    META_EDGE,
    NEGATIVE,
    POSITIVE,
    VARIABLE,
    GraphFormatError,
    component_members,
    deserialize,
    diameter,
    encode,
    serialize,
)

UNIT_NBG = "NBG 1\nh 3 2 1 1 1\nn 0 1\nn 1 -1\nn 2 0\ne 0 1 1\ne 2 1 0\n"


def corpus():
    formulas = [
        CnfFormula(4, [[1, 2], [2, 3], [3, 4]]),
        parse_dimacs("p cnf 3 3\n1 -2 0\n2 3 0\n2 0\n"),
        CnfFormula(1, [[1]]),
        CnfFormula(4, [[1, 2], [3, 4]]),
        CnfFormula(5, [[1, -2], [4, 5]]),  # v3 isolated
        CnfFormula(2, [[1, -1], [1, 2]]),  # tautological clause
        CnfFormula(3, []),  # all variables isolated
        CnfFormula(2, [[1, 2], []]),  # empty clause forms its own component
    ]
    formulas += [gen_random_ksat(12, 40, 3, seed=s) for s in range(10)]
    return formulas


class TestEncode:
    def test_chain_counts_and_diameter(self, chain4):
        g = encode(chain4)
        assert g.num_nodes == 8  # 4 variables + 3 clauses + 1 meta
        assert len(g.edges) == 9  # 6 polarity + 3 meta
        assert sum(1 for _i, t in g.nodes if t == META) == 1
        assert diameter(g, 0) == 4

    def test_chain_diameter_without_meta_would_be_six(self, chain4):
        g = encode(chain4)
        members = component_members(g)[0]
        incidence = [(s, d) for s, d, t in g.edges if t != META_EDGE]
        from collections import deque

        adj = {nid: [] for nid in members}
        for s, d in incidence:
            adj[s].append(d)
            adj[d].append(s)
        best = 0
        for start in adj:
            dist = {start: 0}
            queue = deque([start])
            while queue:
                cur = queue.popleft()
                for nxt in adj[cur]:
                    if nxt not in dist:
                        dist[nxt] = dist[cur] + 1
                        queue.append(nxt)
            best = max(best, max(dist.values()))
        assert best == 6

    def test_example_formula_incidences(self, phi):
        g = encode(phi)
        assert g.num_nodes == 7  # 3 vars + 3 clauses + 1 meta
        polarity = [e for e in g.edges if e[2] != META_EDGE]
        assert polarity == [
            (0, 3, POSITIVE),
            (1, 3, NEGATIVE),
            (1, 4, POSITIVE),
            (2, 4, POSITIVE),
            (1, 5, POSITIVE),
        ]
        meta = [e for e in g.edges if e[2] == META_EDGE]
        assert meta == [(6, 3, META_EDGE), (6, 4, META_EDGE), (6, 5, META_EDGE)]

    def test_unit_clause(self):
        g = encode(CnfFormula(1, [[1]]))
        assert g.num_nodes == 3
        assert g.edges == [(0, 1, POSITIVE), (2, 1, META_EDGE)]
        assert diameter(g, 0) == 2

    def test_isolated_variable_component(self):
        g = encode(CnfFormula(2, [[1]]))
        assert g.component_count == 2
        assert g.num_nodes == 5  # 2 vars + 1 clause + 2 metas
        members = component_members(g)
        assert members == [[0, 2, 3], [1, 4]]
        assert diameter(g, 1) == 0

    def test_tautological_clause_two_edges(self):
        g = encode(CnfFormula(1, [[1, -1]]))
        polarity = [e for e in g.edges if e[2] != META_EDGE]
        assert polarity == [(0, 1, POSITIVE), (0, 1, NEGATIVE)]

    def test_duplicate_incidence_collapsed(self):
        g = encode(CnfFormula(2, [[1, 1, 2]]))
        polarity = [e for e in g.edges if e[2] != META_EDGE]
        assert polarity == [(0, 2, POSITIVE), (1, 2, POSITIVE)]

    def test_deterministic(self, phi):
        assert encode(phi) == encode(phi)

    @pytest.mark.parametrize("formula", corpus())
    def test_count_identities(self, formula):
        g = encode(formula)
        comps = connected_components(formula)
        assert g.num_nodes == formula.num_vars + len(formula.clauses) + len(comps)
        assert g.component_count == len(comps)
        meta_edges = [e for e in g.edges if e[2] == META_EDGE]
        assert len(meta_edges) == len(formula.clauses)
        per_clause = {dst for _src, dst, _t in meta_edges}
        clause_ids = {nid for nid, t in g.nodes if t == CLAUSE}
        assert per_clause == clause_ids

    @pytest.mark.parametrize("formula", corpus())
    def test_bipartite_discipline(self, formula):
        g = encode(formula)
        types = dict(g.nodes)
        for src, dst, etype in g.edges:
            if etype == META_EDGE:
                assert types[src] == META and types[dst] == CLAUSE
            else:
                assert types[src] == VARIABLE and types[dst] == CLAUSE

    @pytest.mark.parametrize("formula", corpus())
    def test_diameter_at_most_four_with_clauses(self, formula):
        g = encode(formula)
        comps = connected_components(formula)
        for k, comp in enumerate(comps):
            if comp.clauses:
                assert diameter(g, k) <= 4

    def test_diameter_bad_component(self, phi):
        with pytest.raises(ValueError):
            diameter(encode(phi), 5)


class TestSerialization:
    def test_unit_clause_fixture_text(self):
        g = encode(CnfFormula(1, [[1]]))
        assert serialize(g) == UNIT_NBG

    def test_labels_one_line_per_backbone_variable(self, phi):
        text = serialize(encode(phi), {1: 1, 2: 1})
        label_lines = [ln for ln in text.splitlines() if ln.startswith("l ")]
        assert label_lines == ["l 0 1", "l 1 1"]

    def test_round_trip_corpus(self):
        for formula in corpus():
            g = encode(formula)
            loaded, labels = deserialize(serialize(g))
            assert loaded == g
            assert labels is None

    def test_round_trip_with_labels(self, phi):
        g = encode(phi)
        loaded, labels = deserialize(serialize(g, {1: 1, 2: 0}))
        assert loaded == g
        assert labels == {1: 1, 2: 0}

    def test_label_for_unknown_variable(self, phi):
        with pytest.raises(ValueError):
            serialize(encode(phi), {9: 1})

    def test_version_mismatch(self):
        with pytest.raises(GraphFormatError):
            deserialize("NBG 2\nh 0 0 0 0 0\n")

    def test_count_mismatch(self):
        with pytest.raises(GraphFormatError):
            deserialize("NBG 1\nh 2 0 1 0 1\nn 0 1\n")

    def test_dangling_edge(self):
        bad = "NBG 1\nh 3 1 1 1 1\nn 0 1\nn 1 -1\nn 2 0\ne 0 9 1\n"
        with pytest.raises(GraphFormatError):
            deserialize(bad)

    def test_label_on_clause_node(self):
        bad = UNIT_NBG + "l 1 1\n"
        with pytest.raises(GraphFormatError):
            deserialize(bad)

    def test_bad_node_type(self):
        with pytest.raises(GraphFormatError):
            deserialize("NBG 1\nh 1 0 0 0 0\nn 0 7\n")
