#!/usr/bin/env python3
"""Generate FCIDUMP files for linear hydrogen chains in the STO-3G basis,
symmetrically orthogonalized (Lowdin OAO). Pure numpy; s-type Gaussians only.

Usage: gen_hchain_fcidump.py N R_ANGSTROM OUTPUT_PATH

The files under tests/fixtures/ were produced with this script.
"""

import math
import sys

import numpy as np

BOHR_PER_ANGSTROM = 1.8897259886

# STO-3G hydrogen 1s: exponents and contraction coefficients (normalized primitives)
EXPONENTS = np.array([3.42525091, 0.62391373, 0.16885540])
COEFFS = np.array([0.15432897, 0.53532814, 0.44463454])


def primitive_norm(alpha):
    return (2.0 * alpha / math.pi) ** 0.75


def boys_f0(t):
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


def contracted_coeffs():
    """Contraction coefficients rescaled so the contracted AO has unit norm."""
    c = COEFFS * primitive_norm(EXPONENTS)
    s = 0.0
    for i, a in enumerate(EXPONENTS):
        for j, b in enumerate(EXPONENTS):
            s += c[i] * c[j] * (math.pi / (a + b)) ** 1.5
    return c / math.sqrt(s)


def ao_integrals(centers):
    """Overlap, core Hamiltonian and 2e integrals (chemists') over s-type AOs."""
    n = len(centers)
    c = contracted_coeffs()
    ex = EXPONENTS
    npr = len(ex)

    s_mat = np.zeros((n, n))
    t_mat = np.zeros((n, n))
    v_mat = np.zeros((n, n))
    for mu in range(n):
        for nu in range(n):
            ab2 = np.dot(centers[mu] - centers[nu], centers[mu] - centers[nu])
            for i in range(npr):
                for j in range(npr):
                    a, b = ex[i], ex[j]
                    p = a + b
                    pref = c[i] * c[j] * math.exp(-a * b / p * ab2)
                    s_val = pref * (math.pi / p) ** 1.5
                    s_mat[mu, nu] += s_val
                    t_mat[mu, nu] += a * b / p * (3.0 - 2.0 * a * b / p * ab2) * s_val
                    pc = (a * centers[mu] + b * centers[nu]) / p
                    for atom in centers:
                        r2 = np.dot(pc - atom, pc - atom)
                        v_mat[mu, nu] -= pref * 2.0 * math.pi / p * boys_f0(p * r2)

    eri = np.zeros((n, n, n, n))
    for mu in range(n):
        for nu in range(mu + 1):
            ab2 = np.dot(centers[mu] - centers[nu], centers[mu] - centers[nu])
            for lam in range(n):
                for sig in range(lam + 1):
                    if (mu * (mu + 1) // 2 + nu) < (lam * (lam + 1) // 2 + sig):
                        continue
                    cd2 = np.dot(centers[lam] - centers[sig], centers[lam] - centers[sig])
                    val = 0.0
                    for i in range(npr):
                        for j in range(npr):
                            a, b = ex[i], ex[j]
                            p = a + b
                            kab = math.exp(-a * b / p * ab2)
                            pp = (a * centers[mu] + b * centers[nu]) / p
                            for k in range(npr):
                                for l in range(npr):
                                    g, d = ex[k], ex[l]
                                    q = g + d
                                    kcd = math.exp(-g * d / q * cd2)
                                    qq = (g * centers[lam] + d * centers[sig]) / q
                                    pq2 = np.dot(pp - qq, pp - qq)
                                    val += (c[i] * c[j] * c[k] * c[l] * kab * kcd
                                            * 2.0 * math.pi ** 2.5
                                            / (p * q * math.sqrt(p + q))
                                            * boys_f0(p * q / (p + q) * pq2))
                    for (m1, n1) in ((mu, nu), (nu, mu)):
                        for (l1, s1) in ((lam, sig), (sig, lam)):
                            eri[m1, n1, l1, s1] = val
                            eri[l1, s1, m1, n1] = val
    return s_mat, t_mat + v_mat, eri


def lowdin(s_mat):
    evals, evecs = np.linalg.eigh(s_mat)
    if evals.min() < 1e-10:
        raise RuntimeError("AO overlap is near-singular")
    return evecs @ np.diag(evals ** -0.5) @ evecs.T


def main():
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    n = int(sys.argv[1])
    r_angstrom = float(sys.argv[2])
    out_path = sys.argv[3]

    r = r_angstrom * BOHR_PER_ANGSTROM
    centers = [np.array([0.0, 0.0, k * r]) for k in range(n)]
    e_nuc = sum(1.0 / np.linalg.norm(centers[a] - centers[b])
                for a in range(n) for b in range(a))

    s_mat, h_core, eri = ao_integrals(centers)
    x = lowdin(s_mat)
    h_oao = x.T @ h_core @ x
    g_oao = np.einsum("mnls,mp,nq,lr,st->pqrt", eri, x, x, x, x, optimize=True)

    with open(out_path, "w") as f:
        f.write(f"&FCI NORB={n},NELEC={n},MS2=0,\n")
        f.write("  ORBSYM=" + "1," * n + "\n")
        f.write("  ISYM=1,\n")
        f.write(" &END\n")
        for p in range(n):
            for q in range(p + 1):
                for rr in range(p + 1):
                    smax = q if rr == p else rr
                    for ss in range(smax + 1):
                        v = g_oao[p, q, rr, ss]
                        if abs(v) > 1e-12:
                            f.write(f"{v:23.16E} {p+1:3d} {q+1:3d} {rr+1:3d} {ss+1:3d}\n")
        for p in range(n):
            for q in range(p + 1):
                v = h_oao[p, q]
                if abs(v) > 1e-12:
                    f.write(f"{v:23.16E} {p+1:3d} {q+1:3d}   0   0\n")
        f.write(f"{e_nuc:23.16E}   0   0   0   0\n")
    print(f"wrote {out_path}: n={n} R={r_angstrom} A, E_nuc={e_nuc:.10f}")


if __name__ == "__main__":
    main()
