import pytest

from nbsat.cnf import CnfFormula, save_dimacs, write_dimacs
from nbsat.dataset import (
    DatasetManifest,
    ManifestEntry,
    build,
    gen_coloring,
    gen_pigeonhole,
    gen_random_ksat,
    load_manifest,
    save_dimacs_corpus,
    stats,
)
from nbsat.graph import load_graph
from nbsat.solver import Status, solve
from oracle import brute_force_backbone, brute_force_status

PHI = CnfFormula(3, [[1, -2], [2, 3], [2]])


class TestBuild:
    def test_single_accepted_formula(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs(PHI, corpus / "phi.cnf")
        out = tmp_path / "out"
        manifest = build(corpus, timeout=10.0, out_dir=out, split="pretrain")
        assert len(manifest.entries) == 1
        entry = manifest.entries[0]
        assert entry.accepted
        assert (entry.num_vars, entry.num_clauses, entry.num_backbone) == (3, 3, 2)
        _g1, labels = load_graph(out / entry.graph_original)
        _g2, dual_labels = load_graph(out / entry.graph_dual)
        assert labels == {1: 1, 2: 1}
        assert dual_labels == {1: 0, 2: 0}
        assert (out / "manifest.nbm").exists()

    def test_unsat_rejected(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs(CnfFormula(1, [[1], [-1]]), corpus / "bad.cnf")
        manifest = build(corpus, timeout=10.0, out_dir=tmp_path / "out")
        assert manifest.entries[0].status == "UNSAT_INPUT"
        assert manifest.entries[0].graph_original is None

    def test_zero_backbone_rejected(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs(CnfFormula(2, [[1, 2]]), corpus / "free.cnf")
        manifest = build(corpus, timeout=10.0, out_dir=tmp_path / "out")
        assert manifest.entries[0].status == "ZERO_BACKBONE"

    def test_unreadable_file_recorded(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        (corpus / "junk.cnf").write_text("not dimacs at all\n")
        manifest = build(corpus, timeout=10.0, out_dir=tmp_path / "out")
        assert manifest.entries[0].status == "READ_ERROR"

    def test_filter_rule_matches_oracle(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        formulas = [gen_random_ksat(8, 30, 3, seed=s) for s in range(12)]
        save_dimacs_corpus(formulas, corpus)
        manifest = build(corpus, timeout=30.0, out_dir=tmp_path / "out")
        for formula, entry in zip(formulas, manifest.entries):
            bb = brute_force_backbone(formula)
            if bb is None:
                assert entry.status == "UNSAT_INPUT"
            elif not bb:
                assert entry.status == "ZERO_BACKBONE"
            else:
                assert entry.accepted
                assert entry.num_backbone == len(bb)

    def test_parallel_matches_serial(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs_corpus([gen_random_ksat(10, 38, 3, seed=s) for s in range(6)], corpus)
        serial = build(corpus, timeout=30.0, out_dir=tmp_path / "a", workers=1)
        parallel = build(corpus, timeout=30.0, out_dir=tmp_path / "b", workers=3)
        assert serial.entries == parallel.entries
        for entry in serial.entries:
            if entry.accepted:
                a = (tmp_path / "a" / entry.graph_original).read_text()
                b = (tmp_path / "b" / entry.graph_original).read_text()
                assert a == b

    def test_bad_split_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            build(tmp_path, timeout=1.0, out_dir=tmp_path / "out", split="validation")


class TestStats:
    def test_hand_numbers_for_example(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs(PHI, corpus / "phi.cnf")
        manifest = build(corpus, timeout=10.0, out_dir=tmp_path / "out")
        summary = stats(manifest)
        assert summary.accepted_formulas == 1
        assert summary.graph_count == 2
        assert summary.mean_vars == 3
        assert summary.mean_clauses == 3
        assert summary.mean_backbone == 2
        assert summary.backbone_proportion == pytest.approx(2 / 3)
        assert summary.label_balance == 0.5

    def test_balance_exact_on_larger_corpus(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs_corpus([gen_random_ksat(10, 42, 3, seed=s) for s in range(30)], corpus)
        manifest = build(corpus, timeout=30.0, out_dir=tmp_path / "out")
        if not any(e.accepted for e in manifest.entries):
            pytest.skip("corpus produced no accepted formulas")
        assert stats(manifest).label_balance == 0.5

    def test_empty_manifest_rejected(self):
        with pytest.raises(ValueError):
            stats(DatasetManifest("pretrain", 1.0, []))

    def test_no_accepted_entries_rejected(self):
        entry = ManifestEntry("x.cnf", "UNSAT_INPUT", 1, 2, 0, 0, 0, None, None)
        with pytest.raises(ValueError):
            stats(DatasetManifest("pretrain", 1.0, [entry]))


class TestManifestFile:
    def test_round_trip(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        save_dimacs(PHI, corpus / "phi.cnf")
        save_dimacs(CnfFormula(1, [[1], [-1]]), corpus / "uns.cnf")
        manifest = build(corpus, timeout=10.0, out_dir=tmp_path / "out")
        loaded = load_manifest(tmp_path / "out" / "manifest.nbm")
        assert loaded == manifest

    def test_sorted_by_source(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        for name in ("zz.cnf", "aa.cnf", "mm.cnf"):
            save_dimacs(PHI, corpus / name)
        manifest = build(corpus, timeout=10.0, out_dir=tmp_path / "out")
        sources = [e.source for e in manifest.entries]
        assert sources == sorted(sources)


class TestGenerators:
    def test_ksat_deterministic(self):
        a = gen_random_ksat(5, 10, 3, seed=1)
        b = gen_random_ksat(5, 10, 3, seed=1)
        assert a == b
        assert a != gen_random_ksat(5, 10, 3, seed=2)

    def test_ksat_shape(self):
        f = gen_random_ksat(20, 85, 3, seed=0)
        assert f.num_vars == 20
        assert len(f.clauses) == 85
        for clause in f.clauses:
            assert len(clause) == 3
            assert len({abs(l) for l in clause}) == 3

    def test_ksat_single_full_clause(self):
        f = gen_random_ksat(3, 1, 3, seed=5)
        assert sorted(abs(l) for l in f.clauses[0]) == [1, 2, 3]

    def test_ksat_near_threshold_mixed_population(self):
        statuses = {brute_force_status(gen_random_ksat(20, 85, 3, seed=s)) for s in range(40)}
        assert statuses == {"SAT", "UNSAT"}

    def test_ksat_infeasible(self):
        with pytest.raises(ValueError):
            gen_random_ksat(2, 5, 3, seed=0)

    def test_pigeonhole_sat_iff_enough_holes(self):
        assert solve(gen_pigeonhole(3, 3)).status is Status.SAT
        assert solve(gen_pigeonhole(4, 3)).status is Status.UNSAT

    def test_coloring_has_backbone_seed(self):
        f = gen_coloring(6, 3, 0.4, seed=3)
        assert [3 * 0 + 1] in f.clauses  # pinned vertex-1-color-1 unit clause
        assert solve(f).status in (Status.SAT, Status.UNSAT)

    def test_write_parse_generated(self):
        f = gen_coloring(5, 3, 0.5, seed=1)
        from nbsat.cnf import parse_dimacs

        assert parse_dimacs(write_dimacs(f)) == f
