import numpy as np
import pytest

from local_codes.gf2core import row_reduce
from local_codes.stabilizer import StabilizerCode
from local_codes.surface import planar_surface_code, toric_code


@pytest.fixture(scope="session")
def planar2():
    return planar_surface_code(2)


@pytest.fixture(scope="session")
def planar3():
    return planar_surface_code(3)


@pytest.fixture(scope="session")
def toric2():
    return toric_code(2)


@pytest.fixture(scope="session")
def toric3():
    return toric_code(3)


@pytest.fixture(scope="session")
def toric4():
    return toric_code(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I = np.eye(2, dtype=complex)


def _pauli_matrix(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for xj, zj in zip(x, z):
        factor = (_X if xj else _I) @ (_Z if zj else _I)
        out = np.kron(out, factor)
    # X Z = -iY, so i^(x.z) makes every factor Hermitian
    return (1j ** int(np.dot(x, z))) * out


def _code_state(code: StabilizerCode) -> np.ndarray:
    n = code.n
    projector = np.eye(2**n, dtype=complex)
    reduced, _ = row_reduce(code.generators)
    for row in reduced.to_dense():
        g = _pauli_matrix(row[:n].astype(int), row[n:].astype(int))
        projector = projector @ (np.eye(2**n) + g) / 2
    return projector / np.trace(projector).real


def _entropy(rho: np.ndarray, qubits, n: int) -> float:
    keep = sorted(qubits)
    if not keep:
        return 0.0
    rest = [q for q in range(n) if q not in keep]
    m = len(keep)
    tensor = rho.reshape([2] * (2 * n))
    perm = keep + rest + [n + q for q in keep] + [n + q for q in rest]
    block = tensor.transpose(perm).reshape(2**m, 2 ** (n - m), 2**m, 2 ** (n - m))
    reduced = np.einsum("ajbj->ab", block)
    eigenvalues = np.linalg.eigvalsh(reduced)
    eigenvalues = eigenvalues[eigenvalues > 1e-12]
    return float(-(eigenvalues * np.log2(eigenvalues)).sum())


@pytest.fixture
def dense_entropy():
    """S(qubits) of the maximally mixed code state by diagonalising the reduced density matrix."""
    cache = {}

    def compute(code: StabilizerCode, qubits) -> float:
        if id(code) not in cache:
            cache[id(code)] = _code_state(code)
        return _entropy(cache[id(code)], list(qubits), code.n)

    return compute
