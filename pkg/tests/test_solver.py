import pytest

from nbsat.cnf import CnfFormula, evaluate
from nbsat.dataset import gen_random_ksat
from nbsat.hints import hints_from_model
from nbsat.solver import (
    Solver,
    SolverConfig,
    Status,
    check_model,
    luby,
    solve,
    solve_with_assumptions,
)
from oracle import (
    brute_force_model,
    brute_force_status,
    clause_satisfied_by_all_models,
    oracle_status,
)


def test_luby_sequence_prefix():
    assert [luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


class TestSolve:
    def test_example_formula_sat(self, phi):
        result = solve(phi)
        assert result.status is Status.SAT
        assert result.model[1] == 1 and result.model[2] == 1
        assert evaluate(phi, result.model)

    def test_direct_contradiction(self):
        result = solve(CnfFormula(1, [[1], [-1]]))
        assert result.status is Status.UNSAT

    def test_empty_formula(self):
        result = solve(CnfFormula(0, []))
        assert result.status is Status.SAT
        assert result.model == {}

    def test_empty_clause(self):
        result = solve(CnfFormula(2, [[1, 2], []]))
        assert result.status is Status.UNSAT

    def test_free_variables_get_assigned(self):
        result = solve(CnfFormula(5, [[1]]))
        assert result.status is Status.SAT
        assert sorted(result.model) == [1, 2, 3, 4, 5]

    @pytest.mark.parametrize("seed", range(60))
    def test_matches_oracle_small(self, seed):
        n = 4 + (seed % 14)
        m = int(n * (3.5 + (seed % 7) * 0.25))
        f = gen_random_ksat(n, m, 3, seed=seed)
        result = solve(f)
        assert result.status.value == brute_force_status(f)
        if result.status is Status.SAT:
            assert evaluate(f, result.model)

    def test_matches_oracle_medium(self):
        for seed in range(20):
            f = gen_random_ksat(40, 160, 3, seed=5000 + seed)
            result = solve(f)
            assert result.status.value == oracle_status(f)
            if result.status is Status.SAT:
                assert evaluate(f, result.model)

    def test_deterministic_counters(self):
        f = gen_random_ksat(30, 128, 3, seed=42)
        runs = [solve(f, SolverConfig(seed=3)) for _ in range(3)]
        assert len({r.stats.counters() for r in runs}) == 1
        assert len({r.status for r in runs}) == 1

    def test_conflict_limit_gives_unknown(self):
        f = gen_random_ksat(40, 180, 3, seed=77)
        result = solve(f, SolverConfig(conflict_limit=1))
        assert result.status in (Status.UNKNOWN, Status.SAT, Status.UNSAT)
        full = solve(f)
        if full.stats.conflicts > 1:
            assert result.status is Status.UNKNOWN

    def test_time_limit_gives_unknown(self):
        f = gen_random_ksat(60, 270, 3, seed=11)
        result = solve(f, SolverConfig(time_limit=0.0))
        assert result.status is Status.UNKNOWN

    def test_rephasing_path_runs(self):
        f = gen_random_ksat(30, 135, 3, seed=9)
        cfg = SolverConfig(rephase_enabled=True, rephase_interval=5)
        result = solve(f, cfg)
        assert result.status.value == oracle_status(f)

    def test_learned_clauses_are_implied(self):
        checked = 0
        for seed in range(30):
            f = gen_random_ksat(15, 64, 3, seed=300 + seed)
            solver = Solver(f)
            result = solver.solve()
            assert result.status.value == brute_force_status(f)
            for clause in solver._learned[:20]:
                assert clause_satisfied_by_all_models(f, clause.lits)
                checked += 1
        assert checked > 0


class TestHints:
    def test_oracle_hints_zero_conflicts(self, phi):
        hints = {1: (1, 0.9), 2: (1, 0.9), 3: (0, 0.9)}
        cfg = SolverConfig(phase_default="hints", rephase_enabled=False)
        result = solve(phi, cfg, hints)
        assert result.status is Status.SAT
        assert result.stats.conflicts == 0

    def test_oracle_hints_zero_conflicts_random(self):
        done = 0
        seed = 0
        while done < 20:
            seed += 1
            f = gen_random_ksat(16, 60, 3, seed=800 + seed)
            model = brute_force_model(f)
            if model is None:
                continue
            cfg = SolverConfig(phase_default="hints", rephase_enabled=False)
            result = solve(f, cfg, hints_from_model(model))
            assert result.status is Status.SAT
            assert result.stats.conflicts == 0
            done += 1

    def test_hints_inert_when_disabled(self):
        for seed in range(10):
            f = gen_random_ksat(25, 105, 3, seed=900 + seed)
            model = {v: 1 for v in f.variables()}
            baseline = solve(f, SolverConfig(phase_default="false"))
            hinted = solve(f, SolverConfig(phase_default="false"), hints_from_model(model))
            assert baseline.status is hinted.status
            assert baseline.stats.counters() == hinted.stats.counters()
            assert baseline.model == hinted.model

    def test_excess_hint_variables_warn(self, phi):
        hints = {1: (1, 1.0), 99: (0, 0.5)}
        with pytest.warns(UserWarning):
            result = solve(phi, SolverConfig(phase_default="hints"), hints)
        assert result.status is Status.SAT

    def test_partial_hints_fall_back_to_false(self):
        f = CnfFormula(2, [[1, 2]])
        cfg = SolverConfig(phase_default="hints", rephase_enabled=False)
        result = solve(f, cfg, {1: (1, 1.0)})
        assert result.status is Status.SAT
        assert result.model[1] == 1
        assert result.model[2] == 0  # unhinted variable defaults to false

    def test_rephase_resets_to_hints(self):
        f = gen_random_ksat(20, 88, 3, seed=31)
        model = brute_force_model(f)
        if model is None:
            pytest.skip("fixture turned out unsatisfiable")
        cfg = SolverConfig(phase_default="hints", rephase_enabled=True, rephase_interval=1)
        result = solve(f, cfg, hints_from_model(model))
        assert result.status is Status.SAT
        assert result.stats.conflicts == 0


class TestAssumptions:
    def test_backbone_negation_is_unsat(self, phi):
        assert solve_with_assumptions(phi, [-2]).status is Status.UNSAT

    def test_free_variable_assumption_sat(self, phi):
        result = solve_with_assumptions(phi, [3])
        assert result.status is Status.SAT
        assert result.model[3] == 1

    def test_empty_assumptions_match_solve(self):
        for seed in range(10):
            f = gen_random_ksat(18, 76, 3, seed=600 + seed)
            assert solve_with_assumptions(f, []).status is solve(f).status

    def test_contradictory_assumptions(self, phi):
        assert solve_with_assumptions(phi, [1, -1]).status is Status.UNSAT

    def test_out_of_range_assumption(self, phi):
        with pytest.raises(ValueError):
            solve_with_assumptions(phi, [4])

    def test_model_respects_assumptions(self):
        f = gen_random_ksat(12, 40, 3, seed=55)
        if brute_force_status(f) != "SAT":
            pytest.skip("fixture turned out unsatisfiable")
        model = brute_force_model(f)
        lits = [v if model[v] else -v for v in list(model)[:4]]
        result = solve_with_assumptions(f, lits)
        assert result.status is Status.SAT
        for lit in lits:
            assert result.model[abs(lit)] == (1 if lit > 0 else 0)

    def test_incremental_reuse(self, phi):
        solver = Solver(phi)
        assert solver.solve().status is Status.SAT
        assert solver.solve([-2]).status is Status.UNSAT
        assert solver.solve([3]).status is Status.SAT
        assert solver.solve().status is Status.SAT

    def test_incremental_matches_fresh_on_random(self):
        f = gen_random_ksat(15, 55, 3, seed=66)
        solver = Solver(f)
        for v in range(1, 8):
            fresh = solve_with_assumptions(f, [-v]).status
            assert solver.solve([-v]).status is fresh


class TestCheckModel:
    def test_sat_results_verify(self, phi):
        result = solve(phi)
        assert check_model(phi, result) is True

    def test_requires_sat(self, phi):
        result = solve(CnfFormula(1, [[1], [-1]]))
        with pytest.raises(ValueError):
            check_model(phi, result)


class TestConfigValidation:
    def test_bad_decay(self):
        with pytest.raises(ValueError):
            SolverConfig(var_decay=1.0)

    def test_bad_phase_default(self):
        with pytest.raises(ValueError):
            SolverConfig(phase_default="maybe")

    def test_negative_limit(self):
        with pytest.raises(ValueError):
            SolverConfig(time_limit=-1.0)
