import numpy as np
import pytest

from pctlab import (
    MassProfile,
    Parity,
    QuantumNumbers,
    ValidationError,
    degeneracy_ladder,
    ell_d,
)


def test_ell_d_3d_identity():
    assert ell_d(0, 3) == 0.0


def test_ell_d_shift():
    assert ell_d(1, 5) == 2.0
    assert ell_d(2, 3) == 2.0
    # half-integers are exact in binary floating point
    assert ell_d(0, 2) == -0.5
    assert ell_d(1, 4) == 1.5


def test_ell_d_one_dimensional():
    assert ell_d(0, 1, Parity.EVEN) == -1.0
    assert ell_d(0, 1, Parity.ODD) == 0.0


def test_ell_d_errors():
    with pytest.raises(ValidationError):
        ell_d(0, 1)  # parity required
    with pytest.raises(ValidationError):
        ell_d(0, 0)
    with pytest.raises(ValidationError):
        ell_d(-1, 3)


def test_ladder_examples():
    assert degeneracy_ladder(0, 2, 3) == [(2, 3), (1, 5), (0, 7)]
    assert degeneracy_ladder(1, 0, 4) == [(0, 4)]
    assert degeneracy_ladder(0, 1, 2) == [(1, 2), (0, 4)]


def test_ladder_preserves_ell_d():
    for ell in range(1, 6):
        for d in range(2, 8):
            base = ell_d(ell, d)
            for l2, d2 in degeneracy_ladder(0, ell, d):
                assert ell_d(l2, d2) == base


def test_ladder_errors():
    with pytest.raises(ValidationError):
        degeneracy_ladder(0, 1, 1)


def test_quantum_numbers_validation():
    with pytest.raises(ValidationError):
        QuantumNumbers(n_r=-1)
    with pytest.raises(ValidationError):
        QuantumNumbers(n_r=0, d=0)
    with pytest.raises(ValidationError):
        QuantumNumbers(n_r=0, d=1)  # parity missing
    with pytest.raises(ValidationError):
        QuantumNumbers(n_r=0, ell=1, d=1, parity=Parity.ODD)
    qn = QuantumNumbers(n_r=1, ell=2, d=5)
    assert qn.ell_d == 3.0


ALL_MASSES = [
    MassProfile.power_law(1.3, 0.7),
    MassProfile.power_law(2.0, -3.0),
    MassProfile.power_law(0.5, 2.0),
    MassProfile.inverse_square(1.7),
    MassProfile.poschl_teller(0.9),
    MassProfile.hulthen(0.6),
]


@pytest.mark.parametrize("mass", ALL_MASSES, ids=lambda m: f"{m.family.value}-a{m.alpha}")
def test_mass_positive(mass):
    r = np.geomspace(1e-3, 1e3, 200)
    assert np.all(mass.m(r) > 0.0)


@pytest.mark.parametrize("mass", ALL_MASSES, ids=lambda m: f"{m.family.value}-a{m.alpha}")
def test_mass_derivatives_match_central_differences(mass):
    # analytic m', m'' vs O(h^2) central differences at h = 1e-4; the
    # second difference carries a cancellation floor ~ eps m / h^2 that
    # the tolerance must account for
    h = 1e-4
    eps = np.finfo(float).eps
    r = np.linspace(0.5, 5.0, 46)
    d1 = (mass.m(r + h) - mass.m(r - h)) / (2 * h)
    d2 = (mass.m(r + h) - 2 * mass.m(r) + mass.m(r - h)) / h**2
    assert np.all(np.abs(d1 - mass.dm(r)) <= 1e-6 * np.abs(mass.dm(r)))
    floor = 16.0 * eps * np.abs(mass.m(r)) / h**2
    assert np.all(np.abs(d2 - mass.d2m(r)) <= 1e-6 * np.abs(mass.d2m(r)) + floor)


def test_mass_validation():
    with pytest.raises(ValidationError):
        MassProfile.power_law(-1.0, 0.0)
    with pytest.raises(ValidationError):
        MassProfile.power_law(1.0, -2.0)
