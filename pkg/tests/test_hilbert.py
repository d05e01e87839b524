import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnon_qrm.errors import ParameterError
from magnon_qrm.hilbert import (HilbertSpace, boson_annihilation, build_space, qubit_operator,
                                qubit_projector)

spaces = st.builds(HilbertSpace, st.integers(2, 12), st.integers(1, 3))


def test_dimensions():
    assert build_space(10, 3).dim == 80
    assert build_space(2, 1).dim == 4


@pytest.mark.parametrize("n_max, n_qubits", [(1, 3), (0, 1), (5, 0), (5, 4), (2.5, 1)])
def test_rejects_bad_space(n_max, n_qubits):
    with pytest.raises(ParameterError):
        build_space(n_max, n_qubits)


def test_basis_ordering():
    s = build_space(4, 3)
    assert s.index(1, "ggg") == 8
    assert s.index(0, "eee") == 7
    assert s.index(0, "egg") == 4  # qubit 1 is the most significant bit
    assert s.label(13) == "1,ege"
    assert all(s.index(*_split(s.label(i))) == i for i in range(s.dim))


def _split(label):
    n, bits = label.split(",")
    return int(n), bits


def test_annihilation_matrix_elements():
    s = build_space(3, 1)
    a = boson_annihilation(s)
    one, two = s.basis_state("1,g"), s.basis_state("2,g")
    assert one.conj() @ a @ two == pytest.approx(np.sqrt(2))
    assert np.allclose(a @ s.basis_state("0,e"), 0)


@given(spaces)
def test_canonical_commutator_and_truncation(space):
    a = boson_annihilation(space)
    comm = a @ a.conj().T - a.conj().T @ a
    diag = np.real(np.diag(comm)).reshape(space.n_max, space.qubit_dim)
    assert np.allclose(diag[:-1], 1.0, atol=1e-12)
    assert np.allclose(diag[-1], 1 - space.n_max, atol=1e-12)
    off = comm - np.diag(np.diag(comm))
    assert np.max(np.abs(off)) < 1e-12


def test_qubit_ladder_action():
    s = build_space(2, 1)
    sp = qubit_operator(s, 1, "s+")
    assert s.basis_state("0,e").conj() @ sp @ s.basis_state("0,g") == 1.0
    sz = qubit_operator(s, 1, "sz")
    assert s.basis_state("0,e").conj() @ sz @ s.basis_state("0,e") == 1.0
    assert s.basis_state("0,g").conj() @ sz @ s.basis_state("0,g") == -1.0


@given(spaces, st.data())
def test_pauli_algebra(space, data):
    q = data.draw(st.integers(1, space.n_qubits))
    sp, sm = qubit_operator(space, q, "s+"), qubit_operator(space, q, "s-")
    sx, sy, sz = (qubit_operator(space, q, k) for k in ("sx", "sy", "sz"))
    assert np.array_equal(sp @ sm + sm @ sp, np.eye(space.dim))
    assert np.array_equal(sz, sp @ sm - sm @ sp)
    assert np.allclose(sp, 0.5 * (sx + 1j * sy))


@given(spaces)
def test_distinct_qubits_commute(space):
    kinds = ("sx", "sy", "sz", "s+", "s-")
    for q1 in range(1, space.n_qubits + 1):
        for q2 in range(q1 + 1, space.n_qubits + 1):
            for k1 in kinds:
                for k2 in kinds:
                    A, B = qubit_operator(space, q1, k1), qubit_operator(space, q2, k2)
                    assert np.array_equal(A @ B, B @ A)


def test_qubit_index_out_of_range():
    with pytest.raises(ParameterError):
        qubit_operator(build_space(3, 2), 3, "sz")
    with pytest.raises(ParameterError):
        qubit_operator(build_space(3, 2), 1, "sq")


@settings(max_examples=20)
@given(spaces)
def test_reproducible(space):
    assert np.array_equal(boson_annihilation(space), boson_annihilation(space))
    assert boson_annihilation(space).shape == (space.dim, space.dim)


def test_projector_is_population_of_configuration():
    s = build_space(3, 3)
    P = qubit_projector(s, "eee")
    assert np.real(s.basis_state("0,eee").conj() @ P @ s.basis_state("0,eee")) == 1.0
    assert np.real(s.basis_state("1,eeg").conj() @ P @ s.basis_state("1,eeg")) == 0.0
