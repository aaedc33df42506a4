"""Objective evaluation, quantization, random problems, and problem files."""

import numpy as np
import pytest

from qcorrect import (
    ChimeraTopology,
    IsingProblem,
    Resolution,
    build_chimera,
    energy,
    quantize,
    random_problem,
    read_problem_file,
    validate_spins,
    write_problem_file,
)

from conftest import brute_force_minima, naive_energy, two_qubit_problem


class TestEnergy:
    def test_two_qubit_example(self):
        # frozen from the brute-force oracle: F([-1,+1]) = -1, and the global
        # minimum is -1 (attained by three of the four states)
        problem = two_qubit_problem(1.0, -1.0, -1.0)
        assert energy(problem, [-1, 1]) == pytest.approx(-1.0, abs=1e-12)
        best, states = brute_force_minima(problem)
        assert best == pytest.approx(-1.0, abs=1e-12)
        assert len(states) == 3
        assert (-1, 1) in states

    def test_all_zero_coefficients(self):
        problem = two_qubit_problem(0.0, 0.0, 0.0)
        for q in ([1, 1], [1, -1], [-1, 1], [-1, -1]):
            assert energy(problem, q) == 0.0

    def test_global_flip_symmetry_without_fields(self):
        rng = np.random.default_rng(3)
        topo = build_chimera(2, 2, 2)
        for _ in range(20):
            problem = IsingProblem(
                topo,
                np.zeros(topo.num_qubits),
                rng.uniform(-1, 1, topo.num_couplers),
            )
            q = rng.choice([-1, 1], topo.num_qubits).astype(np.int8)
            assert energy(problem, q) == pytest.approx(energy(problem, -q), abs=1e-12)

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(11)
        topo = build_chimera(2, 3, 3)
        for seed in range(10):
            problem = random_problem(topo, seed)
            q = rng.choice([-1, 1], topo.num_qubits).astype(np.int8)
            assert energy(problem, q) == pytest.approx(
                naive_energy(problem, q), abs=1e-9
            )

    def test_linear_in_each_coefficient(self):
        topo = build_chimera(1, 1, 2)
        a = np.array([0.3, -0.8, 0.55, 0.1])
        b = np.array([0.2, -0.4, 0.9, -0.1])
        problem = IsingProblem(topo, a, b)
        q = np.array([1, -1, 1, 1], dtype=np.int8)
        a2 = a.copy()
        a2[1] *= 2
        doubled = IsingProblem(topo, a2, b)
        delta = energy(doubled, q) - energy(problem, q)
        assert delta == pytest.approx(a[1] * q[1], abs=1e-12)

    def test_length_mismatch_rejected(self):
        problem = two_qubit_problem(0.5, 0.5, 0.5)
        with pytest.raises(ValueError):
            energy(problem, [1, 1, 1])

    def test_non_unit_spins_rejected(self):
        problem = two_qubit_problem(0.5, 0.5, 0.5)
        with pytest.raises(ValueError):
            energy(problem, [1, 0])


class TestProblemValidation:
    def test_qubit_coefficient_range(self):
        topo = ChimeraTopology([0, 1], [(0, 1)])
        with pytest.raises(ValueError, match="outside"):
            IsingProblem(topo, [2.5, 0.0], [0.0])

    def test_coupler_coefficient_range(self):
        topo = ChimeraTopology([0, 1], [(0, 1)])
        with pytest.raises(ValueError, match="outside"):
            IsingProblem(topo, [0.0, 0.0], [-1.5])

    def test_wrong_lengths(self):
        topo = ChimeraTopology([0, 1], [(0, 1)])
        with pytest.raises(ValueError):
            IsingProblem(topo, [0.0], [0.0])
        with pytest.raises(ValueError):
            IsingProblem(topo, [0.0, 0.0], [])

    def test_arrays_frozen(self):
        problem = two_qubit_problem(0.1, 0.2, 0.3)
        with pytest.raises(ValueError):
            problem.a[0] = 1.0


class TestResolution:
    def test_parse(self):
        assert Resolution.parse("inf").is_infinite
        assert Resolution.parse("100").value == 100

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            Resolution(0)
        with pytest.raises(ValueError):
            Resolution(-3)
        with pytest.raises(ValueError):
            Resolution(2.5)

    def test_str(self):
        assert str(Resolution.infinite()) == "inf"
        assert str(Resolution(32)) == "32"


class TestQuantize:
    def test_infinite_resolution_is_identity(self):
        problem = two_qubit_problem(0.123456, -1.9, 0.77)
        same = quantize(problem, Resolution.infinite())
        assert np.array_equal(same.a, problem.a)
        assert np.array_equal(same.b, problem.b)

    def test_fine_resolution_example(self):
        problem = two_qubit_problem(0.0, 0.0, 0.5004)
        assert quantize(problem, Resolution(1000)).b[0] == pytest.approx(0.5, abs=1e-15)

    def test_coarse_rounding(self):
        low = two_qubit_problem(0.0, 0.0, 0.04)
        high = two_qubit_problem(0.0, 0.0, 0.06)
        assert quantize(low, Resolution(10)).b[0] == 0.0
        assert quantize(high, Resolution(10)).b[0] == pytest.approx(0.1, abs=1e-15)

    def test_half_rounds_away_from_zero(self):
        pos = two_qubit_problem(0.0, 0.0, 0.05)
        neg = two_qubit_problem(0.0, 0.0, -0.05)
        assert quantize(pos, Resolution(10)).b[0] == pytest.approx(0.1, abs=1e-15)
        assert quantize(neg, Resolution(10)).b[0] == pytest.approx(-0.1, abs=1e-15)

    def test_qubit_coefficients_use_normalized_lattice(self):
        # lattice for a is {2f/R}: at R=2 the points are -2,-1,0,1,2
        problem = two_qubit_problem(1.7, -0.6, 0.0)
        quantized = quantize(problem, Resolution(2))
        assert quantized.a[0] == pytest.approx(2.0, abs=1e-15)
        assert quantized.a[1] == pytest.approx(-1.0, abs=1e-15)
        assert quantize(two_qubit_problem(-0.4, 0.0, 0.0), Resolution(2)).a[0] == 0.0

    def test_output_stays_in_range(self):
        topo = build_chimera(2, 2, 2)
        for seed in range(5):
            problem = random_problem(topo, seed)
            for r in (1, 3, 32):
                quantized = quantize(problem, Resolution(r))
                assert np.all(np.abs(quantized.a) <= 2.0)
                assert np.all(np.abs(quantized.b) <= 1.0)

    def test_idempotent(self):
        topo = build_chimera(2, 2, 2)
        for seed in range(10):
            problem = random_problem(topo, seed)
            for r in (10, 32, 100, 1000):
                once = quantize(problem, Resolution(r))
                twice = quantize(once, Resolution(r))
                assert np.array_equal(once.a, twice.a)
                assert np.array_equal(once.b, twice.b)

    def test_energy_error_bound(self):
        rng = np.random.default_rng(17)
        topo = build_chimera(2, 2, 2)
        for seed in range(5):
            problem = random_problem(topo, seed)
            for r in (10, 32, 100):
                quantized = quantize(problem, Resolution(r))
                bound = (2 * topo.num_qubits + topo.num_couplers) / (2 * r)
                for _ in range(5):
                    q = rng.choice([-1, 1], topo.num_qubits).astype(np.int8)
                    gap = abs(energy(problem, q) - energy(quantized, q))
                    assert gap <= bound + 1e-12


class TestRandomProblem:
    def test_deterministic_per_seed(self, chimera_1x1):
        p1 = random_problem(chimera_1x1, 123)
        p2 = random_problem(chimera_1x1, 123)
        assert np.array_equal(p1.a, p2.a)
        assert np.array_equal(p1.b, p2.b)

    def test_seeds_differ(self, chimera_1x1):
        p1 = random_problem(chimera_1x1, 1)
        p2 = random_problem(chimera_1x1, 2)
        assert not (np.array_equal(p1.a, p2.a) and np.array_equal(p1.b, p2.b))

    def test_mean_of_many_draws(self):
        # 102152 qubit coefficients, uniform on [-2, 2]
        topo = build_chimera(113, 113, 4)
        problem = random_problem(topo, 7)
        assert abs(problem.a.mean()) <= 0.02
        assert np.all(np.abs(problem.a) <= 2.0)
        assert np.all(np.abs(problem.b) <= 1.0)


class TestProblemFile:
    def test_roundtrip(self, tmp_path, chimera_1x1):
        problem = random_problem(chimera_1x1, 9)
        path = tmp_path / "problem.txt"
        write_problem_file(problem, path)
        loaded = read_problem_file(path)
        assert np.array_equal(loaded.topology.active_qubits, chimera_1x1.active_qubits)
        assert np.array_equal(loaded.topology.couplers, chimera_1x1.couplers)
        assert np.array_equal(loaded.a, problem.a)
        assert np.array_equal(loaded.b, problem.b)

    def test_out_of_range_rejected_with_line(self, tmp_path):
        path = tmp_path / "problem.txt"
        path.write_text("q 0 1.0\nq 1 3.5\n")
        with pytest.raises(ValueError, match=":2"):
            read_problem_file(path)

    def test_bad_record_rejected_with_line(self, tmp_path):
        path = tmp_path / "problem.txt"
        path.write_text("q 0 1.0\nnot a record\n")
        with pytest.raises(ValueError, match=":2"):
            read_problem_file(path)

    def test_coupler_needs_declared_qubits(self, tmp_path):
        path = tmp_path / "problem.txt"
        path.write_text("q 0 1.0\nc 0 1 0.5\n")
        with pytest.raises(ValueError, match="undeclared"):
            read_problem_file(path)

    def test_duplicate_qubit_rejected(self, tmp_path):
        path = tmp_path / "problem.txt"
        path.write_text("q 0 1.0\nq 0 0.5\n")
        with pytest.raises(ValueError, match="duplicate"):
            read_problem_file(path)


class TestValidateSpins:
    def test_accepts_lists_and_arrays(self):
        topo = ChimeraTopology([0, 1], [(0, 1)])
        out = validate_spins(topo, [1, -1])
        assert out.dtype == np.int8
        assert out.tolist() == [1, -1]

    def test_rejects_zero(self):
        topo = ChimeraTopology([0, 1], [(0, 1)])
        with pytest.raises(ValueError):
            validate_spins(topo, [1, 0])

    def test_rejects_wrong_length(self):
        topo = ChimeraTopology([0, 1], [(0, 1)])
        with pytest.raises(ValueError):
            validate_spins(topo, [1])
