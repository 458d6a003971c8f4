from . import norms, expansions, decompositions, weights, verify, factorize, ensembles, suite  # noqa: F401
