import numpy as np
import pytest

from spectral_spread.datasets import karate_club
from spectral_spread.graph import Graph, generate_barbell, random_connected_graph


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_graphs(count, n_max, seed, n_min=2):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        yield random_connected_graph(n, float(rng.uniform(0.1, 0.7)), rng)


@pytest.fixture(scope="session")
def karate():
    return karate_club()


@pytest.fixture(scope="session")
def barbell():
    return generate_barbell(5, 10)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria register here; the table is printed after the run
ACCEPTANCE = []


def record_criterion(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
