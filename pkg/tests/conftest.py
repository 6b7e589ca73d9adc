import functools
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import expm

sys.path.insert(0, str(Path(__file__).parent))

from magnomol import SystemParams, run_sweep, preset  # noqa: E402
from magnomol.dynamics import solve_lyapunov, symplectic_form  # noqa: E402
from magnomol.model import linearize  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def canonical():
    return SystemParams()


@pytest.fixture(scope="session")
def canonical_linear(canonical):
    return linearize(canonical)


@pytest.fixture(scope="session")
def canonical_cm(canonical_linear):
    _, lin = canonical_linear
    return solve_lyapunov(lin.drift, lin.diffusion)


@functools.lru_cache(maxsize=None)
def preset_result(name, workers=1):
    return run_sweep(preset(name).with_workers(workers))


def squeezed_vacuum(r):
    c, s = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def thermal(n_th):
    return (n_th + 0.5) * np.eye(2)


def physical_cm(h_entries, nus):
    """``S diag(nu) S^T`` with ``S = expm(Omega H)`` symplectic, ``nu >= 1/2``."""
    n = len(nus)
    dim = 2 * n
    h = np.zeros((dim, dim))
    h[np.triu_indices(dim)] = h_entries
    h = h + h.T - np.diag(np.diag(h))
    s = expm(symplectic_form(n) @ h)
    d = np.diag(np.repeat(nus, 2))
    return s @ d @ s.T


def record_acceptance(criterion, ok, detail):
    line = f"[acceptance {criterion}] {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
