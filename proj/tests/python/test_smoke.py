import math

import numpy as np
import pytest

import rollnd


def test_manifold_factory():
    M = rollnd.manifold("sphere_stereo:2")
    assert M.dim == 2
    assert M.state_dim == 2
    phi = M.frame(np.zeros(2))
    assert np.allclose(phi, 0.5 * np.eye(2))


def test_roll_great_circle_to_segment():
    M = rollnd.manifold("sphere_stereo:2")
    Mh = rollnd.manifold("euclidean:2")
    gc = rollnd.curve("greatcircle:len=%.10f" % (math.pi / 2))
    traj = rollnd.roll_along(M, Mh, gc, np.eye(2), np.zeros(2))
    assert traj.status.complete
    assert abs(np.linalg.norm(traj.xihat[-1]) - math.pi / 2) < 1e-6
    rep = rollnd.verify_rolling(M, Mh, traj)
    assert rep.max_noslip < 1e-6
    assert rep.max_so_drift < 1e-10


def test_frenet_helix():
    M = rollnd.manifold("euclidean:3")
    helix = rollnd.curve("helix:kappa=1,tau=0.5,len=4")
    c = helix.sample_step(1e-3)
    fd = rollnd.frenet_apparatus(M, c)
    assert fd.complete
    mid = len(fd.t) // 2
    assert abs(fd.kappa[mid, 0] - 1.0) < 1e-5
    assert abs(fd.kappa[mid, 1] - 0.5) < 1e-5


def test_existence_verdicts():
    M = rollnd.manifold("euclidean:2")
    circle = rollnd.curve("circle:r=1,len=3")
    line = rollnd.curve("line:n=2,len=3")
    assert rollnd.exists_general(M, M, circle, circle).accepted
    v = rollnd.exists_general(M, M, circle, line)
    assert not v.accepted
    assert v.residual > 1e-5


def test_loop_check_circle():
    M = rollnd.manifold("euclidean:2")
    lr = rollnd.loop_check(M, rollnd.curve("circle:r=1"))
    assert lr.config_loop and lr.c1_loop and lr.closed
    assert abs(lr.alpha - 2 * math.pi) < 1e-7


def test_synthesis_round_trip():
    p = rollnd.CurvatureProfile(3, 0.0, 4.0, np.array([1.0, 0.5]))
    syn = rollnd.backend_euclidean(p, np.zeros(3), np.eye(3))
    assert syn.status.complete
    M = rollnd.manifold("euclidean:3")
    fd = rollnd.frenet_apparatus(M, syn.x)
    assert fd.complete
    mid = len(fd.t) // 2
    assert abs(fd.kappa[mid, 0] - 1.0) < 1e-4
    assert abs(fd.kappa[mid, 1] - 0.5) < 1e-4


def test_curve_from_numpy_samples():
    t = np.linspace(0.0, 1.0, 501)
    xi = np.stack([t, t**2], axis=1)
    dxi = np.stack([np.ones_like(t), 2 * t], axis=1)
    c = rollnd.curve_from_samples(rollnd.SampledCurve(t, xi, dxi))
    assert c.dim == 2
    assert np.allclose(c.point(0.5), [0.5, 0.25], atol=1e-10)


def test_input_errors_raise():
    with pytest.raises(ValueError):
        rollnd.manifold("nosuch:2")
    with pytest.raises(ValueError):
        rollnd.curve("nosuchfamily:r=1")
