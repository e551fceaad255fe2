"""
Rational cross-check of the Lazard presentation, computed with sympy.

Every FGL over a Q-algebra comes from a logarithm. Taking the generic
logarithm log(x) = x + m1 x^2 + m2 x^3 + ... and expanding
F(x, y) = exp(log x + log y) expresses each a_ij as a polynomial in the
m_k. The rank of a weight component of L equals the dimension spanned by
the images of its monomials, which this module computes independently of
the integral normal forms.
"""
from __future__ import annotations

from functools import lru_cache

import sympy

from fgl_cobord.core.lazard import LazardPresentation
from fgl_cobord.utils.logging import logger


def _truncate(expr, var, degree: int):
    poly = sympy.Poly(sympy.expand(expr), var)
    return sum((c * var**k for (k,), c in poly.terms() if k <= degree), sympy.Integer(0))


def log_symbols(max_weight: int) -> tuple:
    return sympy.symbols(f"m1:{max_weight + 1}")


@lru_cache(maxsize=None)
def logarithmic_table(max_weight: int) -> dict[tuple[int, int], sympy.Expr]:
    """a_ij (i <= j, i + j - 1 <= N) as polynomials in m_1..m_N."""
    m = log_symbols(max_weight)
    degree = max_weight + 1
    u, t, x, y = sympy.symbols("u t x y")

    # exp(u) = u + sum b_k u^(k+1), solved so that log(exp(u)) = u
    b = [sympy.Integer(0)] * (degree + 1)
    exp_u = u
    for k in range(2, degree + 1):
        log_exp = exp_u
        power = exp_u
        for j in range(1, k):
            power = _truncate(power * exp_u, u, k)
            log_exp += m[j - 1] * power
        b[k] = -sympy.Poly(_truncate(log_exp, u, k), u).coeff_monomial(u**k)
        exp_u = exp_u + b[k] * u**k

    # scale x, y by t so total degree is the t-degree
    log_sum = sum(
        (v * t + sum(m[k - 1] * (v * t) ** (k + 1) for k in range(1, degree)) for v in (x, y)),
        sympy.Integer(0),
    )
    power = sympy.Integer(1)
    total = sympy.Integer(0)
    for k in range(1, degree + 1):
        power = _truncate(power * log_sum, t, degree)
        coefficient = 1 if k == 1 else b[k]
        total += coefficient * power
    total = sympy.Poly(_truncate(total, t, degree), t, x, y)

    table = {}
    for i in range(1, degree + 1):
        for j in range(i, degree + 1 - i):
            table[(i, j)] = sympy.expand(total.coeff_monomial(t ** (i + j) * x**i * y**j))
    logger.debug(f"logarithmic table N={max_weight}: {len(table)} coefficients")
    return table


def rational_component_rank(L: LazardPresentation, w: int) -> int:
    """Dimension of the span of the weight-w monomials' images in Q[m_1, ..., m_N]."""
    component = L.component(w)
    if w == 0:
        return 1
    table = logarithmic_table(L.max_weight)
    m = log_symbols(L.max_weight)
    rows = []
    for exp in component.monomials:
        image = sympy.Integer(1)
        for (i, j), e in zip(L.generators, exp):
            if e:
                image *= table[(i, j)] ** e
        rows.append(sympy.Poly(sympy.expand(image), *m).as_dict())
    columns = sorted({mon for row in rows for mon in row})
    matrix = sympy.Matrix([[row.get(mon, 0) for mon in columns] for row in rows])
    return matrix.rank()
