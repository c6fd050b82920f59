import numpy as np
import pytest

from bicomplex_laplace import Bicomplex, IdempotentPair, from_idempotent

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_bicomplex(rng, scale=10.0):
    return Bicomplex(*rng.uniform(-scale, scale, 4))


def random_in_region(rng, k, n, re_span=(0.25, 3.0), im_span=4.0):
    """Bicomplex points whose idempotent components both sit right of ``k``."""
    out = []
    for _ in range(n):
        re = k + rng.uniform(*re_span, 2)
        im = rng.uniform(-im_span, im_span, 2)
        out.append(from_idempotent(IdempotentPair(complex(re[0], im[0]), complex(re[1], im[1]))))
    return out


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _ACCEPTANCE:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  ({duration:.2f} s)")
