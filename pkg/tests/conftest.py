import functools

import pytest

from pnu.nu import build_nu
from pnu.permgroup import RegularGroup
from pnu.presentations import catalog_group


@functools.lru_cache(maxsize=None)
def group(spec: str):
    """Whole group of the regular representation of a catalog spec."""
    return RegularGroup.from_presentation(catalog_group(spec)).whole()


@functools.lru_cache(maxsize=None)
def nu_of(spec: str):
    return build_nu(catalog_group(spec))


def brute_closure(G, seeds):
    """Subgroup generated by seeds, by repeated multiplication over element sets."""
    amb = G.ambient
    elems = {0}
    frontier = {0}
    seeds = [int(s) for s in seeds]
    while frontier:
        new = set()
        for x in frontier:
            for s in seeds:
                y = int(amb.mul(x, s))
                if y not in elems:
                    new.add(y)
        elems |= new
        frontier = new
    return elems


@pytest.fixture
def D8():
    return group("dihedral:8")


@pytest.fixture
def D16():
    return group("dihedral:16")


@pytest.fixture
def E27():
    return group("extraspecial:3,p")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
