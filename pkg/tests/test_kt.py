"""Saddle-point solvers: stage combinations, reuse, failure detection."""

import numpy as np
import pytest

from absolve import kt, problems
from absolve.errors import SingularKT


def generated(n, m, seed):
    spec = problems.ProblemSpec(kind="kt", n=n, m=m, seed=seed)
    return problems.generate(spec)


@pytest.mark.parametrize("p_method", kt.P_METHODS)
@pytest.mark.parametrize("z_method", kt.Z_METHODS)
def test_all_stage_combinations_match_the_dense_baseline(p_method, z_method):
    prob = generated(12, 4, seed=2)
    rep = kt.solve(prob.kt_system, p_method, z_method)
    base_p, base_z = kt.dense_baseline(prob.kt_system)
    assert np.allclose(rep.p, base_p, atol=1e-8)
    assert np.allclose(rep.z, base_z, atol=1e-8)
    assert rep.residual_norm < 1e-8 * (1 + np.linalg.norm(prob.b))


def test_reuse_skips_the_constraint_stage_cost():
    prob = generated(10, 3, seed=7)
    solver = kt.KTSolver(prob.kt_system)
    first = solver.solve("a2", "b2")
    second = solver.solve("a2", "b2")
    assert np.allclose(first.p, second.p)
    assert solver.c_stage_mults > 0
    assert first.mult_count - second.mult_count == solver.c_stage_mults


def test_square_constraint_block_edge_case():
    prob = generated(6, 6, seed=11)
    rep = kt.solve(prob.kt_system, "a2", "b2")
    base_p, base_z = kt.dense_baseline(prob.kt_system)
    assert np.allclose(rep.p, base_p, atol=1e-8)
    assert np.allclose(rep.z, base_z, atol=1e-8)


def test_rank_deficient_constraints_are_rejected():
    c_mat = np.array([[1.0, 0.0, 1.0], [2.0, 0.0, 2.0]])
    g_mat = np.eye(3)
    system = kt.KTSystem(g_mat=g_mat, c_mat=c_mat,
                         g=np.ones(3), c=np.array([1.0, 2.0]))
    with pytest.raises(SingularKT):
        kt.solve(system)


def test_singular_reduced_block_is_rejected():
    # zero curvature on the constraint null space leaves p undetermined
    g_mat = np.zeros((3, 3))
    c_mat = np.array([[1.0, 0.0, 0.0]])
    system = kt.KTSystem(g_mat=g_mat, c_mat=c_mat,
                         g=np.ones(3), c=np.array([1.0]))
    with pytest.raises(SingularKT):
        kt.solve(system, "a2", "b2")


def test_system_validation():
    with pytest.raises(ValueError):
        kt.KTSystem(g_mat=np.eye(3), c_mat=np.ones((4, 3)),
                    g=np.ones(3), c=np.ones(4))
    with pytest.raises(ValueError):
        kt.KTSystem(g_mat=np.eye(3), c_mat=np.ones((1, 2)),
                    g=np.ones(3), c=np.ones(1))


def test_assembled_block_structure():
    prob = generated(5, 2, seed=3)
    a, b = prob.kt_system.assemble()
    assert a.shape == (7, 7)
    assert np.array_equal(a[:5, 5:], prob.kt_system.c_mat.T)
    assert np.all(a[5:, 5:] == 0)
    assert np.array_equal(b[:5], prob.kt_system.g)


def test_method_name_validation():
    prob = generated(5, 2, seed=4)
    with pytest.raises(ValueError):
        kt.solve(prob.kt_system, "a3", "b1")
    with pytest.raises(ValueError):
        kt.solve(prob.kt_system, "a1", "b9")
