import numpy as np
import pytest

from kdvheat import free_tau, make_rational_tau, make_soliton


def soliton1():
    return make_soliton([1])


def soliton2():
    return make_soliton([1, 2], [0, "1/3"])


def rational1():
    return make_rational_tau(1)


def rational2():
    return make_rational_tau(2)


FAMILIES = {
    "soliton1": soliton1,
    "soliton2": soliton2,
    "rational1": rational1,
    "rational2": rational2,
}


def family_range(name):
    # rational potentials have a double pole at x = 0
    return (0.5, 2.5) if name.startswith("rational") else (-1.5, 1.5)


def random_points(name, count, seed=0):
    lo, hi = family_range(name)
    return [float(v) for v in np.random.default_rng(seed).uniform(lo, hi, count)]


def random_pairs(name, count, seed=0, dmin=0.1, dmax=2.0):
    lo, hi = family_range(name)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, b = rng.uniform(lo, hi, 2)
        if dmin <= abs(a - b) <= dmax:
            out.append((float(a), float(b)))
    return out


@pytest.fixture(params=sorted(FAMILIES))
def family(request):
    return request.param, FAMILIES[request.param]()


@pytest.fixture
def free():
    return free_tau()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
