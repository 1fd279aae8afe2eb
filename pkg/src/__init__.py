"""
Two-sided triangular solve and product library.

Reduces the generalized Hermitian-definite eigenvalue problem A x = lambda B x to
standard form through a family of blocked algorithms, each checked against its
loop invariant by an executable worksheet.
"""
