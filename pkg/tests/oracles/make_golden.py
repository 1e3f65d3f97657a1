"""Brute-force reference values for the test suite.

Standalone on purpose: only the standard library, no numpy and no import of
the package under test.  Integrals use adaptive Simpson with Richardson
correction; everything else is direct closed-form evaluation with ``math``.

    python tests/oracles/make_golden.py            # rewrite tests/golden.json
    python tests/oracles/make_golden.py --check    # compare against it
"""
import json
import math
import sys
from pathlib import Path

GOLDEN = Path(__file__).resolve().parent.parent / "golden.json"
SIMPSON_TOL = 1e-13


def adaptive_simpson(f, a, b, tol=SIMPSON_TOL, max_depth=60):
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6 * (fa + 4 * fm + fb)

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    total = 0.0
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15 * eps:
            total += left + right + delta / 15
        else:
            stack.append((a, m, fa, flm, fm, left, eps / 2, depth + 1))
            stack.append((m, b, fm, frm, fb, right, eps / 2, depth + 1))
    return total


def gauss_c(n):
    return math.log((2 * math.pi) ** (-n / 2))


def sphere_area(n, R=1.0):
    if n == 1:
        return 2.0
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2) * R ** (n - 1)


# the example, written exactly as printed: sqrt(e^{tau^2} / (1 + e^{tau^2}))
def example_uprime(tau):
    e = math.exp(tau * tau)
    return math.sqrt(e / (1 + e))


def example_W(x):
    return math.sqrt(1 / (1 + math.exp(x * x)))


def example_u(x):
    return adaptive_simpson(example_uprime, 0.0, x) if x else 0.0


def weight1(x):
    return math.exp(gauss_c(1) - x * x / 2)


def vol_hyperbolic_radial(r, n, upper=14.0):
    c = gauss_c(n)
    integrand = lambda p: math.exp(c - p * p / 2) * p ** (n - 1) * r / math.sqrt(p * p + r * r)
    return sphere_area(n) * adaptive_simpson(integrand, 0.0, upper)


def stokes_example_n1(R=4.0, r=1.0):
    g = lambda x: math.sqrt(x * x + r * r)
    sigma = 2 * adaptive_simpson(lambda x: weight1(x) * example_W(x), 0.0, R)
    hyper = adaptive_simpson(
        lambda x: weight1(x) * (1 - example_uprime(x) * x / g(x)) / example_W(x),
        -R, R,
    )
    # wall = the two points x = +-R with outward normals +-1; u is odd and u' even,
    # so the heights are g -+ u(R) and both carry the same u'/W
    uR = example_u(R)
    v = example_uprime(R) / example_W(R)
    outward = weight1(R) * ((g(R) - uR) * v * 1 + (g(R) + uR) * v * (-1))
    return {"flux_sigma": sigma, "flux_hyperbolic": hyper, "flux_wall": -outward}


def flux_bound(R, r, K, n):
    return 2 * math.exp(gauss_c(n) - R * R / 2) * K * math.sqrt(R * R + r * r) * sphere_area(n, R)


def build():
    g = {}
    g["f_value_n1_origin"] = -gauss_c(1)
    g["f_value_n2_ones"] = 1.0 - gauss_c(2)
    g["weight_n2_origin"] = 1 / (2 * math.pi)
    g["weight_n1_one"] = math.exp(-0.5) / math.sqrt(2 * math.pi)
    g["hyperbolic_angle_boost1"] = math.acosh(-(math.sinh(1) * 0 - math.cosh(1) * 1))
    g["example_normal_origin"] = [
        example_uprime(0) / example_W(0), 1 / example_W(0)]
    g["example_theta_origin"] = math.acosh(1 / example_W(0))
    g["example_slice_calibration_origin"] = 1 / example_W(0)
    g["example_u"] = {str(a): example_u(a) for a in (0.5, 1.0, 2.0, 3.0)}
    g["translation_uprime_v0_2_x1_1"] = 2 * math.exp(0.5) / math.sqrt(1 + 4 * math.e)
    g["radial_uprime_C1_n2_rho1"] = math.exp(0.5) / math.sqrt(1 + math.e)
    g["tilted_plane_Hf_over_x"] = 0.5 / math.sqrt(1 - 0.25)
    g["tilted_plane_residual_sqrt3"] = -math.sqrt(3) * 0.5 / math.sqrt(1 - 0.25)
    g["vol_example_n1"] = 2 * adaptive_simpson(lambda x: weight1(x) * example_W(x), 0.0, 14.0)
    g["vol_example_n1_R6"] = 2 * adaptive_simpson(lambda x: weight1(x) * example_W(x), 0.0, 6.0)
    g["vol_example_n1_R9"] = 2 * adaptive_simpson(lambda x: weight1(x) * example_W(x), 0.0, 9.0)
    g["vol_constant_n1_R9"] = 2 * adaptive_simpson(weight1, 0.0, 9.0)
    g["vol_hyperbolic"] = {
        str(n): {str(r): vol_hyperbolic_radial(r, n) for r in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0)}
        for n in (1, 2, 3)
    }
    g["stokes_example_n1_R4_r1"] = stokes_example_n1()
    g["stokes_slice_n1_R4"] = 2 * adaptive_simpson(weight1, 0.0, 4.0)
    g["flux_bound_n2_K1_r1"] = {str(R): flux_bound(R, 1.0, 1.0, 2) for R in (3.0, 8.0)}
    g["flux_bound_R3_closed_form"] = 6 * math.sqrt(10) * math.exp(-4.5)
    g["example_sup_uprime_x6"] = example_uprime(6.0)
    return g


def main(argv):
    golden = build()
    if "--check" in argv:
        stored = json.loads(GOLDEN.read_text())
        ok = stored == golden
        print("golden values reproduce" if ok else "golden values DIFFER")
        return 0 if ok else 1
    GOLDEN.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    print(f"wrote {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
