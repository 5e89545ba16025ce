"""Exact reference values for the matter-shell potential.

Independent of the C++ solver: everything here is symbolic integration of
the polynomial bump with sympy.  The printed numbers are frozen into
tests/test_shell.cpp and tests/test_weighted.cpp.

    python3 tests/oracles/shell_oracle.py
"""
import sympy as sp

s, r = sp.symbols("s r", positive=True)
bump = (1 - (4 * (s - sp.Rational(3, 4))) ** 2) ** 3


def omega(n):
    return 2 * sp.pi ** sp.Rational(n, 2) / sp.gamma(sp.Rational(n, 2))


for n in (3, 4, 5):
    w = omega(n)
    norm = 1 / (w * sp.integrate(bump * s ** (n - 1), (s, sp.Rational(1, 2), 1)))
    rho = norm * bump
    # enclosed source per unit solid angle, valid on [1/2, 1]
    enclosed = sp.integrate(rho * s ** (n - 1), (s, sp.Rational(1, 2), r))
    a = 1 / ((n - 2) * w)
    v_out = a * r ** (2 - n)
    # v(r) = v(1) + int_r^1 t^{1-n} M(t) dt on the support
    t = sp.symbols("t", positive=True)
    v_in = a + sp.integrate((t ** (1 - n) * enclosed.subs(r, t)), (t, r, 1))
    v_hollow = v_in.subs(r, sp.Rational(1, 2))

    def v(x):
        x = sp.nsimplify(x)
        if x >= 1:
            return v_out.subs(r, x)
        if x <= sp.Rational(1, 2):
            return v_hollow
        return v_in.subs(r, x)

    # int v rho dx over R^n
    v_rho = w * sp.integrate(v_in.subs(r, s) * rho * s ** (n - 1), (s, sp.Rational(1, 2), 1))
    mass = 2 / ((n - 2) * w)
    defect = -mass * v_rho
    print(f"n={n}")
    print(f"  bump normalization C = {sp.N(norm, 17)}")
    print(f"  a = {sp.N(a, 17)}")
    for x in ("0.3", "0.6", "0.75", "0.9", "2.0"):
        print(f"  v_1({x}) = {sp.N(v(sp.Rational(x)), 17)}")
    print(f"  int v_1 rho_1 dx = {sp.N(v_rho, 17)}")
    print(f"  ADM mass 2/((n-2) omega) = {sp.N(mass, 17)}")
    print(f"  defect(i=1) = -mass * int v_1 rho_1 = {sp.N(defect, 17)}")
