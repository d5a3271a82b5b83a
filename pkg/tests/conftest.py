"""Shared test setup: network lockout and one-time kernel warm-up.

The whole suite runs with socket creation disabled, which makes the
no-network property of the acceptance suite an enforced fact rather than a
promise.  The warm-up fixture touches every compiled kernel once so that
per-test wall-time assertions measure the algorithms, not JIT setup.
"""

import socket
import time

import pytest

SESSION_T0 = time.perf_counter()

_REAL_SOCKET = socket.socket


def _blocked_socket(*args, **kwargs):
    raise RuntimeError("network access is disabled for the test suite")


_blocked_socket._network_blocked = True


@pytest.fixture(autouse=True, scope="session")
def no_network():
    socket.socket = _blocked_socket
    try:
        yield
    finally:
        socket.socket = _REAL_SOCKET


@pytest.fixture(autouse=True, scope="session")
def warm_kernels(no_network):
    from phisum import phi_mertens_first, phi_oracle, phi_space_saving

    n = 100001
    expected = phi_oracle(n)
    assert phi_mertens_first(n).value == expected
    assert phi_space_saving(n).value == expected
