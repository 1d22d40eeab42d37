import numpy as np
import pytest

from qpsim.classical import LearningParams
from qpsim.compressed import (
    SIGMA_X,
    CompressedAgent,
    CompressedRegister,
    DriveCouplings,
    build_hamiltonian,
    build_jumps,
    build_projector,
    encode_event,
    update_couplings,
)
from qpsim.dynamics import evolve_closed, evolve_lindblad
from qpsim.numerics import TimeGrid, kron_all, projector

GRID = TimeGrid()
REG22 = CompressedRegister(2, 2)


def ket_from_bits(bits: str, reg: CompressedRegister) -> np.ndarray:
    j, rest = int(bits[0]), bits[1:]
    return np.eye(reg.dim)[reg.index(j, [int(b) for b in rest])]


class TestEncoding:
    def test_p0_a1_is_001(self):
        assert np.array_equal(encode_event(0, 1, REG22), ket_from_bits("001", REG22))
        assert REG22.event_index(0, 1) == 0b001

    def test_p1_a0_is_110(self):
        assert np.array_equal(encode_event(1, 0, REG22), ket_from_bits("110", REG22))
        assert REG22.event_index(1, 0) == 0b110

    def test_qutrit(self):
        reg = CompressedRegister(3, 1)
        assert reg.dim == 6
        assert reg.event_index(2, 0) == 5
        assert encode_event(2, 0, reg)[5] == 1

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            encode_event(2, 0, REG22)
        with pytest.raises(IndexError):
            encode_event(0, 2, REG22)

    def test_index_decomposes_uniquely(self):
        reg = CompressedRegister(3, 2)
        seen = {reg.decompose(i) for i in range(reg.dim)}
        assert len(seen) == reg.dim


class TestHamiltonian:
    def test_single_drive(self):
        omega = 0.7
        reg = CompressedRegister(2, 1)
        h = build_hamiltonian(DriveCouplings([[omega], [0.0]]), reg)
        expected = np.kron(np.diag([1, 0]), omega * SIGMA_X)
        assert np.array_equal(h, expected)
        assert not h[2:, 2:].any()

    def test_onsite_action_energy(self):
        h = build_hamiltonian(DriveCouplings(np.zeros((2, 2)), [0, 3.0, 0]), REG22)
        assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
        for i in range(REG22.dim):
            _, bits = REG22.decompose(i)
            assert h[i, i] == (3.0 if bits[0] == "1" else 0.0)

    def test_block_diagonal_in_percept(self):
        rng = np.random.default_rng(0)
        c = DriveCouplings(rng.uniform(1, 3, (2, 2)), rng.uniform(0, 1, 3))
        h = build_hamiltonian(c, REG22)
        assert np.array_equal(h, h.conj().T)
        for i in range(REG22.dim):
            for k in range(REG22.dim):
                if REG22.decompose(i)[0] != REG22.decompose(k)[0]:
                    assert h[i, k] == 0

    def test_sector_equals_action_drive(self):
        rng = np.random.default_rng(1)
        lam = rng.uniform(1, 3, (3, 2))
        eps = np.array([0.4, 0.2, 0.9])
        reg = CompressedRegister(3, 2)
        h = build_hamiltonian(DriveCouplings(lam, eps), reg)
        eye, n = np.eye(2), np.diag([0.0, 1.0])
        for j in range(3):
            block = h[j * 4:(j + 1) * 4, j * 4:(j + 1) * 4]
            drive = (lam[j, 0] * kron_all(SIGMA_X, eye) + lam[j, 1] * kron_all(eye, SIGMA_X)
                     + eps[0] * j * np.eye(4) + eps[1] * kron_all(n, eye) + eps[2] * kron_all(eye, n))
            assert np.allclose(block, drive, atol=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            build_hamiltonian(DriveCouplings(np.ones((3, 2))), REG22)


class TestProjectors:
    def test_p1_a1(self):
        p = build_projector(1, 1, REG22)
        assert p[5, 5] == 1 and np.trace(p) == 1
        assert np.allclose(p @ p, p)

    def test_p0_a0(self):
        assert build_projector(0, 0, REG22)[0b010, 0b010] == 1

    def test_trace_sum(self):
        total = sum(build_projector(j, k, REG22) for j in range(2) for k in range(2))
        assert np.trace(total).real == 2 * 2

    def test_mutually_orthogonal(self):
        reg = CompressedRegister(3, 2)
        ps = [build_projector(j, k, reg) for j in range(3) for k in range(2)]
        for a in range(len(ps)):
            for b in range(len(ps)):
                if a != b:
                    assert not (ps[a] @ ps[b]).any()


class TestDeliberate:
    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    def test_conditional_rabi(self, omega):
        lam = np.zeros((2, 2))
        lam[0, 0] = omega
        agent = CompressedAgent(2, couplings=DriveCouplings(lam))
        series = agent.action_series(0)
        assert np.max(np.abs(series[0] - np.sin(omega * GRID.times) ** 2)) < 1e-8
        d = agent.deliberate(0, np.random.default_rng(0))
        assert d.action == 0
        assert d.probabilities[0] > 1 - 1e-6
        assert abs(d.t_star - np.pi / (2 * omega)) <= GRID.dt

    def test_symmetric(self):
        agent = CompressedAgent(2, couplings=DriveCouplings([[1.3, 1.3], [1, 1]]))
        s = agent.action_series(0)
        assert np.allclose(s[0], s[1], atol=1e-12)

    def test_mirror(self):
        omega = 1.0
        agent = CompressedAgent(2, couplings=DriveCouplings([[0, 0], [0, omega]]))
        series = agent.action_series(1)
        assert np.max(np.abs(series[1] - np.sin(omega * GRID.times) ** 2)) < 1e-8
        d = agent.deliberate(1, np.random.default_rng(0))
        assert d.action == 1 and d.probabilities[1] > 1 - 1e-6

    def test_percept_marginal_constant(self):
        rng = np.random.default_rng(2)
        c = DriveCouplings(rng.uniform(1, 3, (2, 2)), rng.uniform(0, 1, 3))
        psi0 = (np.eye(REG22.dim)[REG22.rest_index(0)] + np.eye(REG22.dim)[REG22.rest_index(1)]) / np.sqrt(2)
        traj = evolve_closed(build_hamiltonian(c, REG22), psi0, GRID)
        p0 = (np.abs(traj.states[:, :4]) ** 2).sum(axis=1)
        assert np.max(np.abs(p0 - 0.5)) < 1e-9

    def test_decay_channel(self):
        (j0, j1) = build_jumps(REG22, decay=0.3)
        assert j0.rate == 0.3
        agent = CompressedAgent(2, decay=0.3)
        probs, _ = agent.action_probabilities(0)
        assert np.allclose(probs, 0.5)

    def test_dephasing_leaves_marginal(self):
        jumps = build_jumps(REG22, dephasing=0.5)
        rho0 = projector(np.eye(REG22.dim)[REG22.rest_index(1)])
        traj = evolve_lindblad(build_hamiltonian(DriveCouplings(np.ones((2, 2))), REG22), jumps, rho0, GRID)
        p1 = np.einsum("nii->n", traj.states[:, 4:, 4:]).real
        assert np.max(np.abs(p1 - 1)) < 1e-9


class TestUpdate:
    def test_reward(self):
        c = update_couplings(DriveCouplings(np.ones((2, 2))), (0, 0), True, 0.0, 0.5)
        assert c.lam[0, 0] == 1.5
        assert np.array_equal(c.lam[[0, 1, 1], [1, 0, 1]], [1, 1, 1])

    def test_full_damping(self):
        c = update_couplings(DriveCouplings([[1, 1], [1, 2]]), (0, 0), False, 1.0, 1.0)
        assert c.lam[1, 1] == 1.0

    def test_input_untouched(self):
        c = DriveCouplings(np.ones((2, 2)))
        update_couplings(c, (1, 1), True, 0.2, 1.0)
        assert np.array_equal(c.lam, np.ones((2, 2)))

    def test_agent_learns(self):
        agent = CompressedAgent(2, params=LearningParams(0.0, 1.0))
        d = agent.deliberate(1, np.random.default_rng(0))
        agent.learn(d, True)
        assert agent.couplings.lam[1, d.action] == 2.0
