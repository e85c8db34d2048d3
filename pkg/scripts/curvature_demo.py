"""Curvature of a few hand-picked connections, computed two ways.

The alternator route lifts the connection jet to a second jet of P and takes
its antisymmetric part; the classical route uses dA + [A, A] directly.
"""
import numpy as np

from gaugejet import connections as cn
from gaugejet import groupoids as gp
from gaugejet import lie
from gaugejet import randomgen as rg
from gaugejet import taylor as tl
from gaugejet.harness import load_ledger

try:
    SIGN = load_ledger("conventions.json").curvature_sign
except Exception:
    SIGN = -1

so3, u1 = lie.make_group("SO3"), lie.make_group("U1")
ex, ey, ez = so3.basis
X0 = u1.basis[0]


def show(label, form, x):
    F = cn.curvature(form, x).F
    ref = cn.classical_curvature(form, x, SIGN)
    body = np.array2string(F[0, 1], precision=4).replace("\n", "\n    ")
    print(f"{label}\n  F(d1,d2) =\n    {body}")
    print(f"  gap to {SIGN:+d}(dA + [A,A]): {np.abs(F - ref).max():.1e}")


show("U(1), A = x dy", cn.ConnectionForm(2, 2, lambda X: tl.stack([0.0 * X[0] * X0, X[0] * X0])),
     [0.3, 0.1])
show("SO(3), constant A = (e_x, e_y)",
     cn.ConnectionForm(2, 3, lambda X: 0.0 * X[0] + np.stack([ex, ey])), [0.0, 0.0])
rng = rg.rng_for(0)
show("SO(3), random quadratic A",
     cn.ConnectionForm(2, 3, rg.random_connection(rng, so3, 2)), [0.2, -0.1])

# gauge-transforming the flat connection gives zero curvature
beta = rg.random_bisection(rng, so3, 2)
u2 = gp.jet_of_bisection(beta, [0.1, 0.1], 2)
zero = cn.ConnectionJet(np.array([0.1, 0.1]), np.zeros((2, 3, 3)), np.zeros((2, 2, 3, 3)))
moved = cn.act_J2G_on_JCP(u2, zero)
print(f"pure gauge: |A| = {np.abs(moved.A).max():.3f}, |F| = {np.abs(cn.curvature_of_jet(moved).F).max():.1e}")
