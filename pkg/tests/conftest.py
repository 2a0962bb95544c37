import functools
import warnings

import pytest

from harmonic_quench import ChainSpec
from harmonic_quench import fock

_VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = dict(report.user_properties).get("detail", "")
        _VERDICTS[marker] = (report.outcome == "passed", detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        report.acceptance = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), (ok, detail) in sorted(_VERDICTS.items()):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a one-line measurement summary to the acceptance report."""
    def _set(text):
        request.node.user_properties.append(("detail", text))
    return _set


def _system(spec, n_max, model="H1"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fock.build_system(spec, n_max, model)


@pytest.fixture(scope="session")
def spec_ref():
    return ChainSpec(2, 1.0, 1.0, 1.0)


@pytest.fixture(scope="module")
def fock_ref(spec_ref):
    """N=2, omega=1, g0=1, beta=1 at the default cutoff, diagonalised once."""
    sys = _system(spec_ref, 60)
    sys.final_eigh
    return sys


@pytest.fixture(scope="module")
def fock_ref_half(spec_ref):
    sys = _system(spec_ref, 30)
    sys.final_eigh
    return sys


@pytest.fixture(scope="module")
def fock_rwa():
    spec = ChainSpec(2, 1.0, 0.5, 1.0)
    return spec, _system(spec, 60, "H2")


@pytest.fixture(scope="session")
def fock_factory():
    # a cutoff-60 pair with its eigenvectors is several hundred MB, so only
    # the most recent few systems are kept
    return functools.lru_cache(maxsize=2)(_system)
