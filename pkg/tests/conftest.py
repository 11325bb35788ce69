import numpy as np
import pytest

from klstab import ReconstructionSpec, template
from klstab.boundary import BoundaryCondition

# Golden rationals displayed for the third-order reconstruction at sigma = 0.4, r = 2.
Y_MINUS_GOLDEN = np.array([[-12 / 5, 1753 / 600], [-7 / 5, 613 / 600]])
Y_PLUS_GOLDEN = np.array([[-2 / 5, 73 / 600], [3 / 5, 133 / 600]])
B_GOLDEN = np.array([[1371 / 97, 526 / 97], [554 / 97, 143 / 97]])


def o3_calB_golden(lam: float) -> np.ndarray:
    """The eliminated boundary matrix for the third-order scheme, R^{3,0}, sigma=0.4."""
    return np.array(
        [
            [
                180 * lam**2 / 97 + 277 * lam / 97 + 1,
                120 * lam**2 / 97 + 23 * lam / 97,
                0.0,
            ],
            [
                263 * lam**3 / 582 + lam**2 / 2 + 14 * lam / 291,
                217 * lam**3 / 291 - lam**2 - 217 * lam / 291 + 1,
                -(lam**3) / 6 + lam**2 / 2 - lam / 3,
            ],
        ]
    )


def o3_Btilde_golden(lam: float, s0: complex, s1: complex) -> np.ndarray:
    """The reduced 2x2 boundary matrix as a function of the recurrence coefficients."""
    return np.array(
        [
            [
                180 * lam**2 / 97 + 277 * lam / 97 + 1,
                120 * lam**2 / 97 + 23 * lam / 97,
            ],
            [
                (263 + 97 * s0) * lam**3 / 582
                + (1 - s0) * lam**2 / 2
                + (14 + 97 * s0) * lam / 291,
                (434 + 97 * s1) * lam**3 / 582
                - (2 + s1) * lam**2 / 2
                - (217 - 97 * s1) * lam / 291
                + 1,
            ],
        ],
        dtype=complex,
    )


def brute_roots(coeffs_ascending) -> np.ndarray:
    """Independent root oracle: companion-matrix eigenvalues via numpy."""
    cs = np.trim_zeros(np.asarray(coeffs_ascending, dtype=complex), "b")
    return np.roots(cs[::-1])


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def o3():
    return template("o3")


@pytest.fixture
def lw5():
    return template("lw5")


@pytest.fixture
def upwind():
    return template("upwind")


@pytest.fixture
def naive():
    return template("naive_average")


def recon_bc(tmpl, lam: float, d: int, k_d: int, sigma: float) -> BoundaryCondition:
    scheme = tmpl(lam)
    return BoundaryCondition.from_reconstruction(
        ReconstructionSpec(d=d, k_d=k_d, sigma=sigma), scheme
    )
