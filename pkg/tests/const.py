"""Constants for cheb-jacobi tests."""
MOCK_CONFIG = {
    "problem": "poisson2d-exp",
    "n": "10",
    "methods": "cjm, jacobi",
    "sigma": "1e-3",
    "tolerance": "1e-6",
}

PRINTED_ORDERINGS = {
    1: (1, 2),
    2: (1, 4, 2, 3),
    3: (1, 8, 4, 5, 2, 7, 3, 6),
    4: (1, 16, 8, 9, 4, 13, 5, 12, 2, 15, 7, 10, 3, 14, 6, 11),
}

NEUMANN_256_KAPPA_MIN = 3.76491e-5
