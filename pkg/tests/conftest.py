import pytest

from magnon_qrm.model import ModelParams
from magnon_qrm.spectrum import extract_geff


@pytest.fixture(scope="session")
def equal_coupling():
    """Three identical qubits, g_R = g_CR = 0.1 omega_q, at the numerical resonance."""
    p = ModelParams.identical(3.0, 0.1, 0.1)
    geff, w_star = extract_geff(p)
    return p.with_omega0(w_star), geff
