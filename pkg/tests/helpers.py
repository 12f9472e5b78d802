import numpy as np

from gse.sylvester import SylvesterProblem


def random_symmetric(rng, n, scale=1.0):
    a = rng.normal(scale=scale, size=(n, n))
    return (a + a.T) / 2


def random_solvable_problem(rng, n, min_margin=1e-2):
    """Random symmetric pair whose eigenvalue products stay away from 1."""
    while True:
        p = SylvesterProblem(random_symmetric(rng, n), random_symmetric(rng, n))
        if p.solvability_margin > min_margin:
            return p
