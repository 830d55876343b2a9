"""Numeric search: residuals, analytic gradients, determinism, convergence.

The gradient convention pairs Re/Im of each entry of 2 J^H r with the partial
derivatives of the squared error in the real and imaginary parameter parts;
finite differences check exactly that pairing.
"""

import numpy as np
import pytest

from kwaring.decomp import special_x04x1x2, two_square
from kwaring.polynomials import Monomial
from kwaring.search import (
    SearchProblem,
    gradient,
    params_from_certificate,
    probe_open_case,
    residual,
    residual_vector,
    search,
)


def test_problem_validation():
    with pytest.raises(ValueError):
        SearchProblem(Monomial((1, 1)), 1, 2)
    with pytest.raises(ValueError):
        SearchProblem(Monomial((1, 1)), 2, 0)
    with pytest.raises(ValueError):
        SearchProblem(Monomial((1, 1, 1)), 2, 2)  # degree 3 not divisible
    p = SearchProblem(Monomial((2, 2)), 4, 3)
    assert p.d == 1 and p.nparams == 3 * 2


def test_residual_at_zero_params():
    p = SearchProblem(Monomial((1, 1)), 2, 1)
    r = residual_vector(p, np.zeros(p.nparams, dtype=complex))
    # only the target coordinate is nonzero, with coefficient -1
    nz = np.nonzero(r)[0]
    assert len(nz) == 1
    assert r[nz[0]] == -1.0
    assert residual(p, np.zeros(p.nparams, dtype=complex)) == 1.0


def test_residual_rejects_wrong_shape():
    p = SearchProblem(Monomial((1, 1)), 2, 1)
    with pytest.raises(ValueError):
        residual_vector(p, np.zeros(p.nparams + 1, dtype=complex))


def test_exact_certificate_has_negligible_residual():
    cert = special_x04x1x2()
    p = SearchProblem(Monomial((4, 1, 1)), 3, 3)
    params = params_from_certificate(p, cert)
    assert residual(p, params) < 1e-20

    sq = two_square(Monomial((3, 1)))
    p2 = SearchProblem(Monomial((3, 1)), 2, 2)
    assert residual(p2, params_from_certificate(p2, sq)) < 1e-20


def test_params_from_certificate_mismatch():
    cert = special_x04x1x2()
    with pytest.raises(ValueError):
        params_from_certificate(SearchProblem(Monomial((4, 1, 1)), 3, 2), cert)


def _fd_gradient(problem, params, h=1e-5):
    out = np.zeros(problem.nparams, dtype=complex)
    for i in range(problem.nparams):
        for part, step in ((1.0, h), (1.0j, h)):
            plus = params.copy()
            plus[i] += part * step
            minus = params.copy()
            minus[i] -= part * step
            d = (residual(problem, plus) - residual(problem, minus)) / (2 * step)
            out[i] += d * (1.0 if part == 1.0 else 1.0j)
    return out


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(12345)
    for trial in range(30):
        nv = int(rng.integers(1, 4))
        d = int(rng.integers(1, 3))
        k = int(rng.integers(2, 5))
        s = int(rng.integers(1, 4))
        exps = [0] * nv
        for _ in range(d * k):
            exps[int(rng.integers(nv))] += 1
        problem = SearchProblem(Monomial(tuple(exps)), k, s)
        params = (rng.uniform(-1, 1, problem.nparams)
                  + 1j * rng.uniform(-1, 1, problem.nparams))
        g = gradient(problem, params)
        fd = _fd_gradient(problem, params)
        rel = np.linalg.norm(fd - g) / max(1.0, np.linalg.norm(g))
        assert rel < 1e-6, (trial, rel)


def test_search_validation():
    p = SearchProblem(Monomial((1, 1)), 2, 2)
    with pytest.raises(ValueError):
        search(p, restarts=0)
    with pytest.raises(ValueError):
        search(p, tolerance=0.0)


def test_search_converges_on_easy_problem():
    p = SearchProblem(Monomial((1, 1)), 2, 2)
    result = search(p, restarts=10, tolerance=1e-10, seed=0)
    assert result.converged
    assert result.best_residual < 1e-10
    assert residual(p, result.best_params) < 1e-18


def test_search_is_deterministic():
    p = SearchProblem(Monomial((2, 1, 1)), 2, 3)
    a = search(p, restarts=3, tolerance=1e-10, seed=42)
    b = search(p, restarts=3, tolerance=1e-10, seed=42)
    assert a.best_residual == b.best_residual
    assert a.restarts_used == b.restarts_used
    assert np.array_equal(a.best_params, b.best_params)


def test_search_restart_prefix_stability():
    # once converged, extra allowed restarts change nothing
    p = SearchProblem(Monomial((1, 1)), 2, 2)
    a = search(p, restarts=10, tolerance=1e-10, seed=7)
    b = search(p, restarts=50, tolerance=1e-10, seed=7)
    assert a.converged and b.converged
    assert a.restarts_used == b.restarts_used
    assert a.best_residual == b.best_residual


def test_probe_open_case_reports_full_range():
    report = probe_open_case(Monomial((2, 4)), 3, restarts=10, seed=0)
    assert report["heuristic"] is True
    assert report["bounds"] == (3, 3)
    assert [s for s, _ in report["results"]] == [3]
    assert report["results"][0][1].converged
