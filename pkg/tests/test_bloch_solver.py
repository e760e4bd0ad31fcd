import numpy as np
import pytest

from leakage import (
    OperatorMatrix,
    ProblemInstance,
    assemble_h_bloch,
    bloch_recursion_step,
    catalan,
    delta_of,
    herm_eig,
    operator_norm,
    partition_by_threshold,
    solve_bloch_series,
    solve_block_sylvester,
)
from leakage.bounds import catalan_tail
from leakage.errors import GammaBelowThreshold, NotConverged, ZeroGap
from leakage.spectral_partition import SpectralPartition, complement, projection

from conftest import make_instance, random_hermitian


def exact_two_level_omega(inst):
    """Wave operator from the exact eigenvectors of a 2x2 instance.

    Column k is the perturbed eigenvector attached to e_k, normalized so
    that its overlap with e_k is one.
    """
    lam, psi = np.linalg.eigh(inst.h.entries)
    cols = []
    for k in range(2):
        # pick the eigenvector with the largest overlap with e_k
        j = int(np.argmax(np.abs(psi[k, :])))
        cols.append(psi[:, j] / psi[k, j])
    return np.column_stack(cols)


def test_two_level_series_matches_exact_wave_operator(rabi_instance):
    sol = solve_bloch_series(rabi_instance, tol=1e-14)
    exact = exact_two_level_omega(rabi_instance)
    assert operator_norm(sol.omega.entries - exact) < 1e-12
    # the effective generator is diagonal with the exact eigenvalues
    lam = np.linalg.eigvalsh(rabi_instance.h.entries)
    hb = sol.h_bloch.entries
    assert abs(hb[0, 0] - lam[0]) < 1e-12
    assert abs(hb[1, 1] - lam[1]) < 1e-12
    assert abs(hb[0, 1]) < 1e-12 and abs(hb[1, 0]) < 1e-12


def test_sylvester_solution_residual():
    inst = make_instance(21, 9, 3, x=0.01)
    part = inst.partition
    rng = np.random.default_rng(22)
    y = OperatorMatrix(random_hermitian(rng, 9))
    for k in range(part.n_groups):
        x = solve_block_sylvester(part, k, y)
        p = projection(part, k).entries
        q = complement(part, k).entries
        h0 = inst.h0.entries
        # [H0, X] = Q_k Y P_k and X lives on the Q..P block
        assert operator_norm(h0 @ x.entries - x.entries @ h0 - q @ y.entries @ p) < 1e-10
        assert operator_norm(x.entries - q @ x.entries @ p) < 1e-12


def test_first_order_term_entrywise():
    inst = make_instance(23, 7, 2, x=0.01)
    part = inst.partition
    u = part.eig.eigenvectors
    lam = part.eig.eigenvalues
    term1 = bloch_recursion_step(inst, [OperatorMatrix.identity(7)])
    t_eig = u.conj().T @ term1.entries @ u
    v_eig = u.conj().T @ inst.v.entries @ u
    # independent formula: -V_ab / (lam_a - lam_b) across groups, 0 inside
    group_of = np.empty(7, dtype=int)
    for k, g in enumerate(part.groups):
        group_of[g] = k
    for a in range(7):
        for b in range(7):
            if group_of[a] == group_of[b]:
                assert abs(t_eig[a, b]) < 1e-14
            else:
                assert t_eig[a, b] == pytest.approx(
                    -v_eig[a, b] / (lam[a] - lam[b]), rel=1e-12, abs=1e-14
                )


def test_bloch_equations_hold():
    inst = make_instance(24, 12, 3, x=0.015)
    sol = solve_bloch_series(inst, tol=1e-13)
    h = inst.h.entries
    scale = operator_norm(inst.h)
    for k in range(inst.partition.n_groups):
        om_k = sol.omega_blocks[k].entries
        p = projection(inst.partition, k).entries
        assert operator_norm(h @ om_k - om_k @ h @ om_k) < 1e-11 * scale
        assert operator_norm(om_k @ p - om_k) < 1e-12
        assert operator_norm(p @ om_k - p) < 1e-11


def test_series_terms_are_gamma_independent():
    a = make_instance(25, 8, 2, x=0.01, gamma=1.0)
    b = ProblemInstance(a.h0, a.v, 3.0, a.partition)
    sol_a = solve_bloch_series(a)
    sol_b = solve_bloch_series(b)
    n = min(len(sol_a.omega_terms), len(sol_b.omega_terms))
    for ta, tb in zip(sol_a.omega_terms[:n], sol_b.omega_terms[:n]):
        assert operator_norm(ta.entries - tb.entries) < 1e-12
    assert operator_norm(sol_a.omega_terms[0].entries - np.eye(8)) < 1e-13


def test_catalan_majorant_and_delta():
    inst = make_instance(26, 10, 3, x=0.018)
    sol = solve_bloch_series(inst)
    ratio = np.pi * inst.v_norm / inst.partition.gap
    for j, term in enumerate(sol.omega_terms):
        assert operator_norm(term) <= ratio**j * catalan(j) + 1e-12
    assert operator_norm(sol.omega.entries - np.eye(10)) <= sol.delta_bound + 1e-9
    assert sol.delta_bound == pytest.approx(delta_of(inst.x), rel=1e-14)
    assert sol.tail_bound == pytest.approx(catalan_tail(inst.x, sol.order), rel=1e-12)
    assert sol.tail_bound < 1e-12


def test_h_bloch_block_diagonal_and_isospectral():
    inst = make_instance(27, 11, 2, x=0.012)
    sol = solve_bloch_series(inst)
    hb = sol.h_bloch.entries
    scale = operator_norm(inst.h)
    for k in range(inst.partition.n_groups):
        q = complement(inst.partition, k).entries
        p = projection(inst.partition, k).entries
        assert operator_norm(q @ hb @ p) < 1e-9 * scale
    spec_h = np.linalg.eigvalsh(inst.h.entries)
    spec_hb = np.sort(np.linalg.eigvals(hb).real)
    assert np.abs(spec_hb - spec_h).max() < 1e-8 * scale
    # similarity H Omega = Omega H_bloch
    om = sol.omega.entries
    assert operator_norm(inst.h.entries @ om - om @ hb) < 1e-10 * scale
    assert operator_norm(assemble_h_bloch(inst, sol).entries - hb) == 0.0


def test_gamma_below_threshold_raises():
    inst = make_instance(28, 6, 2, x=0.3)  # 4 pi x > 1 at gamma = 1
    with pytest.raises(GammaBelowThreshold):
        solve_bloch_series(inst)


def test_not_converged_when_order_capped():
    inst = make_instance(29, 6, 2, x=0.02)
    with pytest.raises(NotConverged):
        solve_bloch_series(inst, tol=1e-12, j_max=2)
    with pytest.raises(ValueError):
        solve_bloch_series(inst, tol=0.0)


def test_misdeclared_gap_raises_zero_gap():
    eig = herm_eig(OperatorMatrix(np.diag([0.0, 0.4, 1.0]), hermitian_hint=True))
    honest = partition_by_threshold(eig, 0.3)
    # overstate the gap: actual cross-group distance 0.4 < claimed 2.0 / 2
    lied = SpectralPartition(
        eig, honest.groups, 2.0, honest.component_intervals
    )
    y = OperatorMatrix(np.ones((3, 3)))
    with pytest.raises(ZeroGap):
        solve_block_sylvester(lied, 0, y)


def test_instance_validation():
    inst = make_instance(30, 5, 2)
    with pytest.raises(ValueError):
        ProblemInstance(inst.h0, inst.v, 0.0, inst.partition)
    other = OperatorMatrix(np.zeros((4, 4)), hermitian_hint=True)
    with pytest.raises(ValueError):
        ProblemInstance(inst.h0, other, 1.0, inst.partition)


def test_solution_json():
    inst = make_instance(31, 5, 2, x=0.01)
    sol = solve_bloch_series(inst)
    blob = sol.to_json()
    assert blob["order"] == sol.order
    assert len(blob["term_norms"]) == sol.order + 1
    assert blob["term_norms"][0] == pytest.approx(1.0, rel=1e-13)
