import numpy as np
import pytest

_CRITERIA: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    _CRITERIA.append(f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


def unit_vectors(rng: np.random.Generator, count: int, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
