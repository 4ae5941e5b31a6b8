import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import matroidswap
import matroidswap.bench
import matroidswap.cli
import matroidswap.solver
from matroidswap import _backend

# Every in-process solve is recorded so the iteration bound can be checked
# over the whole session (acceptance criterion on n + m iterations).
SOLVE_LOG: list[tuple[int, int, int]] = []

_original_solve = matroidswap.solver.yankee_swap


def _recording_solve(instance, *args, **kwargs):
    alloc, trace = _original_solve(instance, *args, **kwargs)
    SOLVE_LOG.append((instance.n, instance.m, trace.total_iterations))
    return alloc, trace


for module in (matroidswap, matroidswap.solver, matroidswap.bench, matroidswap.cli):
    module.yankee_swap = _recording_solve


def pytest_sessionfinish(session, exitstatus):
    bad = [(n, m, it) for n, m, it in SOLVE_LOG if it > n + m]
    if bad:
        print(f"\niteration bound violated by {len(bad)} solves, e.g. {bad[:3]}", file=sys.stderr)
        session.exitstatus = 1


@pytest.fixture(params=_backend.available())
def backend(request):
    with _backend.use_backend(request.param):
        yield request.param


# Acceptance tests append (criterion, passed, detail) here; the summary below
# prints one line per criterion at the end of the run.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (passed, detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE and not SOLVE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    if SOLVE_LOG:
        worst = max(it - (n + m) for n, m, it in SOLVE_LOG)
        ok = worst <= 0
        ACCEPTANCE[3] = (ok and ACCEPTANCE.get(3, (True, ""))[0],
                         f"{len(SOLVE_LOG)} solves this session, max(iterations - (n + m)) = {worst}; "
                         + ACCEPTANCE.get(3, (True, "m = 0 case not run"))[1])
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
