"""Initial-value, shooting and relaxation solvers for |y'|^{p-2} y'' = x^p |y|^{p-2} y."""
