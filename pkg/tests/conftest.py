import numpy as np
import pytest
from hypothesis import strategies as st

from dprt.core import Image

PRIMES = (2, 3, 5, 7, 11, 13)

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, text): acceptance criterion number k")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            k, text = mark.args
            _criteria.setdefault(k, {"text": text, "outcomes": []})


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for k, info in _criteria.items():
        if f"::test_criterion_{k}_" in report.nodeid:
            info["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        info = _criteria[k]
        outs = info["outcomes"]
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status}  {info['text']}")


@st.composite
def images(draw, primes=PRIMES, max_bits=12):
    n = draw(st.sampled_from(primes))
    bits = draw(st.integers(1, max_bits))
    seed = draw(st.integers(0, 2**32 - 1))
    px = np.random.default_rng(seed).integers(0, 1 << bits, (n, n))
    return Image(px, bits)


@pytest.fixture
def example_image():
    return Image(np.arange(1, 10).reshape(3, 3), 4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
