"""Shared strategies and reference implementations for the test suite."""

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.linalg import sqrtm

from multiprobe.channels import ChannelFamily
from multiprobe.gaussian import symplectic_form


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def fidelity_sqrtm_reference(v1, v2):
    """Matrix-function form of the mixed-state Gaussian fidelity.

    Independent of the production eigenvalue form; zero-mean states only.
    """
    n = v1.shape[0] // 2
    omega = symplectic_form(n)
    vsum = v1 + v2
    vaux = omega.T @ np.linalg.inv(vsum) @ (omega / 4.0 + v2 @ omega @ v1)
    w = vaux @ omega
    mat = np.eye(2 * n) + np.linalg.inv(w @ w) / 4.0
    core = 2.0 * (sqrtm(mat) + np.eye(2 * n)) @ vaux
    return float(np.real(np.linalg.det(core) / np.linalg.det(vsum)) ** 0.25)


def loss_families():
    return st.tuples(
        st.floats(0.3, 0.999), st.floats(0.3, 0.999)
    ).filter(lambda p: abs(p[0] - p[1]) > 1e-6).map(lambda p: ChannelFamily.pure_loss(*p))


def additive_families():
    return st.tuples(
        st.floats(0.001, 0.5), st.floats(0.001, 0.5)
    ).filter(lambda p: abs(p[0] - p[1]) > 1e-9).map(lambda p: ChannelFamily.additive(*p))


def thermal_families():
    from multiprobe.channels import THERMAL, thermal_params

    return (
        st.tuples(
            st.floats(0.3, 1.7), st.floats(0.5, 2.0), st.floats(0.3, 1.7), st.floats(0.5, 2.0)
        )
        .map(lambda p: (thermal_params(p[0], p[1]), thermal_params(p[2], p[3])))
        .filter(lambda q: q[0] != q[1])
        .map(lambda q: ChannelFamily(THERMAL, q[0], q[1]))
    )


def any_family():
    return st.one_of(loss_families(), additive_families(), thermal_families())


def patterns(m):
    return st.lists(st.integers(0, 1), min_size=m, max_size=m).map(tuple)
