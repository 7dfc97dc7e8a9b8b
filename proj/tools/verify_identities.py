#!/usr/bin/env python3
"""Symbolic verification of the spectral algebra used by the C++ library.

Checks, with exact symbols, every identity that the mode separation and
inversion code relies on:

  * axial wavenumber / propagation vector invariants,
  * annihilation filters (shear dot, pressure cross),
  * the lateral-FT Green tensor acting on amplitude vectors,
  * the closed forms of the scattering-potential Fourier transforms,
  * the per-mode extraction identities and the coefficient rows
    (d mu-hat, d lambda-hat, d rho-hat) implemented in mode_coefficients().

The measurement-plane phase factors e^{i kappa r_M} cancel pairwise between
assembly and extraction, so the mode identities are checked at r_M = 0; the
nonzero-r_M bookkeeping is covered by the numeric round-trip tests.

Run:  python3 tools/verify_identities.py
Exits nonzero if any identity fails to reduce to zero.
"""

import sympy as sp

# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------
xi1, xi2 = sp.symbols("xi1 xi2", real=True)
ks, kp, mu, omega = sp.symbols("k_s k_p mu omega", positive=True)
s = sp.Symbol("s")  # sign(x3): +1 transmission, -1 reflection (s*s = 1)
dmu, dlam, drho = sp.symbols("dmu_hat dlam_hat drho_hat")  # spectra at locus
as1, as2, ap3 = sp.symbols("a_s1 a_s2 a_p3", real=True)
v1, v2, v3 = sp.symbols("v1 v2 v3")
I = sp.I

# axial wavenumbers kept symbolic; kappa^2 = k^2 - |xi|^2 and s^2 = 1 are
# imposed by polynomial reduction against the ideal below.
kap_s, kap_p = sp.symbols("kappa_s kappa_p")
xi2n = xi1**2 + xi2**2

IDEAL = [kap_s**2 - (ks**2 - xi2n), kap_p**2 - (kp**2 - xi2n), s**2 - 1]
GENS = (kap_s, kap_p, s, xi1, xi2, ks, kp, mu, omega,
        dmu, dlam, drho, as1, as2, ap3, v1, v2, v3)


def reduce_zero(expr):
    num = sp.expand(sp.numer(sp.together(sp.expand(expr))))
    rem = sp.reduced(num, IDEAL, gens=GENS)[1]
    return sp.expand(rem)


def check(name, expr):
    residual = reduce_zero(expr)
    ok = residual == 0
    print(f"  [{'ok' if ok else 'FAIL'}] {name}")
    if not ok:
        print("        residual:", residual)
        raise SystemExit(1)


def check_vec(name, vec):
    residual = [reduce_zero(c) for c in vec]
    ok = all(r == 0 for r in residual)
    print(f"  [{'ok' if ok else 'FAIL'}] {name}")
    if not ok:
        print("        residual:", residual)
        raise SystemExit(1)


def dot(a, b):
    return sum(ai * bi for ai, bi in zip(a, b))  # bilinear, no conjugation


def cross(a, b):
    return sp.Matrix([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


# ---------------------------------------------------------------------------
# propagation vectors and lateral-FT Green tensors
#
# conventions (same as include/edt/spectral.hpp):
#   F_{1,2} f(xi, x3)   = (2 pi)^-1    int e^{-i xi.x} f dx1 dx2
#   F f(y)              = (2 pi)^-3/2  int e^{-i y.x} f dx
# so nabla maps to +i y, and the plane-wave component e^{i(xi.x + kappa x3)}
# travelling away from the source carries the propagation vector
#   q_alpha = i (xi', kappa_alpha * sign(x3))
# ---------------------------------------------------------------------------
e1 = sp.Matrix([1, 0, 0])
e2 = sp.Matrix([0, 1, 0])
e3 = sp.Matrix([0, 0, 1])
xip = sp.Matrix([xi1, xi2, 0])

qs = I * (xip + kap_s * s * e3)
qp = I * (xip + kap_p * s * e3)

Id = sp.eye(3)
Gs = (I / (mu * ks**2 * kap_s)) * (ks**2 * Id + qs * qs.T)
Gp = (-I / (mu * ks**2 * kap_p)) * (qp * qp.T)

As = sp.Matrix([as1, as2, 0])          # shear amplitude, orthogonal to e3
Ap = sp.Matrix([0, 0, ap3])            # pressure amplitude, along e3

print("propagation vector and Green tensor invariants:")
check("qs.qs = -ks^2", dot(qs, qs) + ks**2)
check("qp.qp = -kp^2", dot(qp, qp) + kp**2)
v = sp.Matrix([v1, v2, v3])
check("qs . (Gs v) = 0", dot(qs, Gs * v))
check_vec("qp x (Gp v) = 0", list(cross(qp, Gp * v)))
check_vec("Gs symmetric", list(Gs - Gs.T))
check_vec("Gp symmetric", list(Gp - Gp.T))

# ---------------------------------------------------------------------------
# Green tensor acting on the vectors that appear in the potentials
# ---------------------------------------------------------------------------
print("Green tensor action (scalar prefactors as implemented):")
check_vec("Gp Ap = (s/(mu ks^2)) (e3.Ap) qp",
          list(Gp * Ap - (s / (mu * ks**2)) * ap3 * qp))
check_vec("Gp xi' = (|xi|^2/(mu ks^2 kap_p)) qp",
          list(Gp * xip - (xi2n / (mu * ks**2 * kap_p)) * qp))
check_vec("Gp As = ((xi'.As)/(mu ks^2 kap_p)) qp",
          list(Gp * As - (dot(xip, As) / (mu * ks**2 * kap_p)) * qp))
check_vec("Gp e3 = (s/(mu ks^2)) qp",
          list(Gp * e3 - (s / (mu * ks**2)) * qp))
check_vec("Gs As = scale (ks^2 As + i(xi'.As) qs)",
          list(Gs * As - (I / (mu * ks**2 * kap_s)) *
               (ks**2 * As + I * dot(xip, As) * qs)))
check_vec("Gs Ap = scale (ks^2 Ap + i s kap_s (e3.Ap) qs)",
          list(Gs * Ap - (I / (mu * ks**2 * kap_s)) *
               (ks**2 * Ap + I * s * kap_s * ap3 * qs)))
check_vec("Gs e3 = scale (ks^2 e3 + i s kap_s qs)",
          list(Gs * e3 - (I / (mu * ks**2 * kap_s)) *
               (ks**2 * e3 + I * s * kap_s * qs)))
check_vec("Gs xi' = scale (ks^2 xi' + i|xi|^2 qs)",
          list(Gs * xip - (I / (mu * ks**2 * kap_s)) *
               (ks**2 * xip + I * xi2n * qs)))

print("cross-product identities:")
check_vec("qp x qs = -i s (kap_s-kap_p) e3 x qp",
          list(cross(qp, qs) + I * s * (kap_s - kap_p) * cross(e3, qp)))
check_vec("qp x Ap = -(e3.Ap) e3 x qp",
          list(cross(qp, Ap) + ap3 * cross(e3, qp)))
X = xi1 * as2 - xi2 * as1  # (xi' x As).e3
check_vec("qp x As = i X e3 + i s kap_p e3 x As",
          list(cross(qp, As) - I * X * e3 - I * s * kap_p * cross(e3, As)))
check_vec("qp x xi' = s kap_p e3 x qp",
          list(cross(qp, xip) - s * kap_p * cross(e3, qp)))
check_vec("qp x e3 = -(e3 x qp)", list(cross(qp, e3) + cross(e3, qp)))
check("qs.qp = -(|xi|^2 + kap_s kap_p)",
      dot(qs, qp) + xi2n + kap_s * kap_p)

# ---------------------------------------------------------------------------
# scattering potential transforms.
#
# spatial potentials (phase e^{i k_beta x3} peeled off the source):
#   f_s = ks^2 dmu As - i ks div(sigma_s) - omega^2 drho As
#     with sigma_s = dmu (As (x) e3 + e3 (x) As)
#   f_p = kp^2 (dlam + 2 dmu) Ap - i kp div(sigma_p) - omega^2 drho Ap
#     with sigma_p = diag(dlam, dlam, dlam + 2 dmu) ap3
# under F[d_j f] = i y_j F f the transforms at y = (xi, zeta) are:
# ---------------------------------------------------------------------------
zeta = sp.Symbol("zeta")


def ft_fs(z):
    return ((ks**2 + ks * z) * dmu - omega**2 * drho) * As \
        + ks * dot(xip, As) * dmu * e3


def ft_fp(z):
    return ((kp**2 + kp * z) * (dlam + 2 * dmu) - omega**2 * drho) * Ap \
        + kp * ap3 * dlam * xip


print("scattering potential transforms (against componentwise i y_j rule):")
y = sp.Matrix([xi1, xi2, zeta])
sig_s = dmu * (As * e3.T + e3 * As.T)
fs_direct = ks**2 * dmu * As - I * ks * (I * sig_s * y) - omega**2 * drho * As
check_vec("F f_s closed form", list(sp.expand(fs_direct - ft_fs(zeta))))
sig_p = ap3 * sp.diag(dlam, dlam, dlam + 2 * dmu)
fp_direct = kp**2 * (dlam + 2 * dmu) * Ap - I * kp * (I * sig_p * y) \
    - omega**2 * drho * Ap
check_vec("F f_p closed form", list(sp.expand(fp_direct - ft_fp(zeta))))

# ---------------------------------------------------------------------------
# mode extraction identities (at r_M = 0, see module docstring).
#
# single-excitation plane (pressure):
#   M_P = sqrt(pi/2) [ Gs Ffp(xi, s kap_s - kp) + Gp Ffp(xi, s kap_p - kp) ]
# and analogously M_S with Ffs. The extractions below must reproduce the
# coefficient rows used by mode_coefficients().
# ---------------------------------------------------------------------------
print("mode extraction identities:")
pref = sp.sqrt(sp.pi / 2)

MP = pref * (Gs * ft_fp(s * kap_s - kp) + Gp * ft_fp(s * kap_p - kp))
MS = pref * (Gs * ft_fs(s * kap_s - ks) + Gp * ft_fs(s * kap_p - ks))

# PP: f_pp = sqrt(2/pi) (qs.MP) / ((e3.Ap)(qs.qp))
f_pp = sp.sqrt(2 / sp.pi) * dot(qs, MP) / (ap3 * dot(qs, qp))
c_mu_pp = 2 * kp * kap_p / (mu * ks**2)
c_lam_pp = kp**3 / (mu * ks**2 * kap_p)
c_rho_pp = -s * omega**2 / (mu * ks**2)
check("PP row", f_pp - (c_mu_pp * dmu + c_lam_pp * dlam + c_rho_pp * drho))

# PS: f_ps = sqrt(2/pi) (qs.MS) / ((xi'.As)(qs.qp))
f_ps = sp.sqrt(2 / sp.pi) * dot(qs, MS) / (dot(xip, As) * dot(qs, qp))
c_mu_ps = 2 * s / (mu * ks)
c_rho_ps = -omega**2 / (mu * ks**2 * kap_p)
check("PS row (lambda-free)", f_ps - (c_mu_ps * dmu + c_rho_ps * drho))

# SP: f_sp^(i) = sqrt(2/pi) (qp x MP).ei / ((e3.Ap)(e3 x qp).ei)
qsqp = dot(qs, qp)
c_mu_sp = 2 * I * s * kp * qsqp / (mu * ks**2)
c_rho_sp = -I * omega**2 * qsqp / (mu * ks**2 * kap_s)
for i, ei in ((1, e1), (2, e2)):
    f_sp = sp.sqrt(2 / sp.pi) * dot(cross(qp, MP), ei) \
        / (ap3 * dot(cross(e3, qp), ei))
    check(f"SP row, component {i} (lambda-free)",
          f_sp - (c_mu_sp * dmu + c_rho_sp * drho))

# SS: lateral components of qp x MS decompose along (e3 x As) and (e3 x qp):
#   sqrt(2/pi) (qp x MS)_lat = fA (e3 x As) + (xi'.As) fB (e3 x qp)
lhs = sp.sqrt(2 / sp.pi) * cross(qp, MS)
c_mu_A = -ks * kap_p / mu
c_rho_A = s * kap_p * omega**2 / (mu * kap_s)
c_mu_B = (I / (mu * ks**2 * kap_s)) * ((kap_s - kap_p) * ks * kap_s + ks * qsqp)
c_rho_B = -(I / (mu * ks**2 * kap_s)) * s * (kap_s - kap_p) * omega**2
fA = c_mu_A * dmu + c_rho_A * drho
fB = c_mu_B * dmu + c_rho_B * drho
rhs = fA * cross(e3, As) + dot(xip, As) * fB * cross(e3, qp)
check_vec("SS lateral decomposition rows",
          [lhs[0] - rhs[0], lhs[1] - rhs[1]])

# determinant of the SS (mu, rho) block is nonzero wherever qs.qp != 0
det = c_mu_A * c_rho_B - c_rho_A * c_mu_B
det_expect = -(I * s * omega**2 * qsqp * kap_p) / (mu**2 * ks * kap_s**2)
check("SS pair (mu,rho) determinant = -i s w^2 (qs.qp) kap_p/(mu^2 ks kap_s^2)",
      det - det_expect)

print("all identities verified")
