import math

import numpy as np
import pytest
from hypothesis import settings

from specdisk import potentials as pt

settings.register_profile("specdisk", deadline=None, max_examples=40)
settings.load_profile("specdisk")


@pytest.fixture(scope="session")
def mkdv():
    return pt.make_problem(pt.MKdVCnoidal(A=1.0, m=0.5), M=32)


@pytest.fixture(scope="session")
def bbm():
    return pt.make_problem(pt.BBMCnoidal(m=0.75))


@pytest.fixture(scope="session")
def kawahara_params():
    return pt.kawahara_example()


@pytest.fixture(scope="session")
def kawahara(kawahara_params):
    return pt.make_problem(kawahara_params)


@pytest.fixture(scope="session")
def bo():
    # c*T/(2 pi) = 1.5 keeps the coefficient decay fast enough for M = 32
    return pt.make_problem(pt.BORational(c=1.5, T=2 * math.pi))


@pytest.fixture(scope="session")
def four_families(mkdv, bbm, kawahara, bo):
    return {"mkdv": mkdv, "bbm": bbm, "kawahara": kawahara, "bo": bo}


def zero_problem(equation="gkdv", T=2 * math.pi, c=0.0, alpha=0.0, M=16):
    return pt.make_problem(pt.ZeroPotential(equation, T, c, alpha), M=M)


def single_harmonic(q, T=2 * math.pi, c=0.0):
    """gKdV problem with Q = 2 q cos(2 pi x / T), i.e. Q_{+-1} = q."""
    from specdisk.dispersion import DispersionRelation, SpectralProblem
    from specdisk.potentials import PeriodicPotential

    pot = PeriodicPotential(T, np.array([q, 0.0, q], dtype=complex), exact=True)
    return SpectralProblem(DispersionRelation.gkdv(), c, pot)


def pytest_terminal_summary(terminalreporter):
    import re

    import acceptance_log

    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acceptance_log.LINES, key=lambda s: (int(re.match(r"\d+", s).group()), s)):
        terminalreporter.write_line(acceptance_log.LINES[key])
