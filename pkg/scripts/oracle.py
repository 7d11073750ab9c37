"""Independent reference values, computed with sympy rather than this package.

The numbers printed here are frozen into the test-suite; rerun to audit them:

    python scripts/oracle.py
"""

from __future__ import annotations

from math import comb, gcd

from sympy import Matrix, ZZ, groebner, symbols
from sympy.matrices.normalforms import smith_normal_form

x, y = symbols("x y")


def snf_diag(rows):
    m = smith_normal_form(Matrix(rows), domain=ZZ)
    return [abs(int(m[i, i])) for i in range(min(m.shape))]


def standard_monomials(gens, gens_vars, order="grevlex", cap=30):
    """Count monomials outside the leading-term ideal (None if more than cap)."""
    G = groebner(gens, *gens_vars, order=order)
    leads = [g.as_poly(*gens_vars).monoms(order=order)[0] for g in G.exprs]
    count = 0
    for a in range(cap):
        for b in range(cap):
            if not any(a >= l[0] and b >= l[1] for l in leads):
                count += 1
    return count if count < cap else None


def main():
    print("snf [[2,0],[0,3]]:", snf_diag([[2, 0], [0, 3]]))
    print("snf [[2,4,4],[-6,6,12],[10,-4,-16]]:", snf_diag([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    print("snf [[6,4],[4,6],[2,2]]:", snf_diag([[6, 4], [4, 6], [2, 2]]))
    print("gb lex {x^2, xy}:", groebner([x**2, x * y], x, y, order="lex").exprs)
    print("gb lex {x-y, y}:", groebner([x - y, y], x, y, order="lex").exprs)
    print("gb lex {x^2+y, xy-1}:", groebner([x**2 + y, x * y - 1], x, y, order="lex").exprs)
    print("gb grevlex {x^2+y, xy-1}:", groebner([x**2 + y, x * y - 1], x, y, order="grevlex").exprs)
    print("length k[x,y]/(y-x^2, y):", standard_monomials([y - x**2, y], (x, y)))
    print("length k[x,y]/(x^2, xy, y^2):", standard_monomials([x**2, x * y, y**2], (x, y)))
    print("length k[x,y]/(x^2+y, xy-1):", standard_monomials([x**2 + y, x * y - 1], (x, y)))
    # Tor over ZZ of cyclic groups: Tor_0 = Z/gcd, Tor_1 = Z/gcd
    print("Tor_i(Z/4, Z/6) orders:", gcd(4, 6), gcd(4, 6))
    # the telescope stage j for (p): SNF of the (j+1)x(j+1) differential
    for p, j in ((3, 2), (2, 3)):
        rows = [[0] * (j + 1) for _ in range(j + 1)]
        rows[0][0] = 1
        for i in range(1, j + 1):
            rows[i - 1][i] = 1
            rows[i][i] = -p
        print(f"telescope snf p={p} j={j}:", snf_diag(rows))
    for n in (1, 2, 3):
        print(f"Koszul self-intersection n={n}:", [comb(n, k) for k in range(n + 1)])


if __name__ == "__main__":
    main()
