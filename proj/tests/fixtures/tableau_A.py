"""Closed-form ZOD coefficients of configuration A in 30-digit arithmetic.

Rigid body, contacts at (l_i, -h) from the centre of mass, flat contact
normals. Divided by the mass, so m * ddq = sum of column * force.
Prints C++ initializers for tests/test_model.cpp.
"""
from mpmath import mp, mpf, sin, cos, pi

mp.dps = 30
m, rho, h = mpf("0.594"), mpf("0.143"), mpf("0.1341")
l1, l2 = mpf("-0.0512"), mpf("0.1688")
alpha = mpf(25) * pi / 180
g = mpf("9.81")
r2 = rho * rho


def col_z(li):
    return [(1 + li * l1 / r2) / m, (1 + li * l2 / r2) / m, (h * li / r2) / m]


def col_x():
    return [(h * l1 / r2) / m, (h * l2 / r2) / m, (1 + h * h / r2) / m]


f = m * g
b_ex = [-f * cos(alpha) / m, -f * cos(alpha) / m, f * sin(alpha) / m]
cols = {"b_ex": b_ex, "B1z": col_z(l1), "B2z": col_z(l2), "B1x": col_x(), "B2x": col_x()}
for name, v in cols.items():
    print(f"const Vec3 k{name}({', '.join(mp.nstr(x, 20) for x in v)});")
