import pytest

from entire_symmetry import _kernels

CORPUS = [
    "z^2",
    "z^3",
    "z^4+z^2",
    "(z+1)^2",
    "z^5+z^3-z+2",
    "cos(z)",
    "sin(z)",
    "exp(z)",
    "exp(z)*sin(z)",
    "cosh(z)^2+z^2",
    "sinh(2*z)-cosh(z)^3",
    "z^3*exp(2*z)/7 - i*z",
]


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    # compile once up front so timing assertions measure steady state
    _kernels.warmup()


def corpus_box(text):
    from entire_symmetry.expr import parse, to_polynomial
    from entire_symmetry.roots import SearchBox

    if to_polynomial(parse(text)) is not None:
        return None
    return SearchBox(-4 - 2j, 4 + 2j, 24)


def verified_maps(text):
    """Every (map, report) verified at the critical points found for a corpus entry."""
    from entire_symmetry.expr import parse
    from entire_symmetry.roots import critical_points
    from entire_symmetry.symmetry import find_symmetries_at

    f = parse(text)
    out = []
    for cp in critical_points(f, corpus_box(text)):
        out.extend(find_symmetries_at(f, cp.exact if cp.exact is not None else cp.location))
    return out
