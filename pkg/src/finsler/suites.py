"""Identity-verification suites.

Each suite maps a prepared :class:`~finsler.engine.ChartJets` to a dict
of named normalized residuals.  Suite keys double as the config-file
vocabulary of the command-line tool; the identity keys inside each suite
name what is being checked.

Residuals are normalized by the magnitude of the largest participating
term (floored at 1) so that identities mixing scales remain comparable.
"""

from __future__ import annotations

import numpy as np

from .engine import ChartJets
from .jets import d_y

# ---------------------------------------------------------------------------
# helpers


def _mx(arr):
    return float(np.abs(np.asarray(arr)).max()) if np.size(arr) else 0.0


def _rel(diff, *refs):
    scale = max([1.0] + [_mx(r) for r in refs])
    return _mx(diff) / scale


def _d2(cj, field_jet):
    """Intrinsic second vertical derivative layout: the differentiation
    direction moved to the FIRST slot (storage appends it last)."""
    arr = d_y(field_jet).value()
    return np.moveaxis(arr, -1, 0)


# ---------------------------------------------------------------------------
# suites


def suite_lemma21(cj: ChartJets):
    """Structural-frame identities: pairings with the direction vector,
    horizontal constancy of L and ell, fiber derivatives of L, ell, phi,
    and the projector's action on ell and hbar."""
    y = cj.p.y
    L = cj.L.value()
    ell = cj.ell.value()
    g = cj.g.value()
    phi = cj.phi.value()
    hbar = cj.hbar.value()
    n = cj.n
    res = {
        "ell_pairs_to_L": _rel(ell @ y - L, L),
        "phi_kills_direction": _rel(phi @ y, phi),
        "hbar_kills_direction": _rel(hbar @ y, hbar),
        "metric_splits": _rel(g - (hbar + np.outer(ell, ell)), g),
        "phi_trace": _rel(np.trace(phi) - (n - 1), n - 1),
        "project_ell_vanishes": _rel(phi.T @ ell, ell),
        "project_hbar_fixed": _rel(phi.T @ hbar @ phi - hbar, hbar),
    }
    # horizontal constancy
    res["horizontal_L"] = _rel(cj.h_cov(cj.L).value(), L)
    res["horizontal_ell"] = _rel(cj.h_cov(cj.ell).value(), ell)
    # fiber derivatives
    res["fiber_L_is_ell"] = _rel(d_y(cj.L).value() - ell, ell)
    res["fiber_ell_is_hbar"] = _rel(d_y(cj.ell).value() - hbar / L, hbar / L)
    dphi = d_y(cj.phi).value()  # [i, j, c], c the direction
    pred = -(np.einsum("jc,i->ijc", hbar, y)
             + L * np.einsum("ic,j->ijc", phi, ell)) / (L * L)
    res["fiber_phi"] = _rel(dphi - pred, dphi, pred)
    return res


def suite_lemma22(cj: ChartJets):
    """Properties of the first curvature-derivative form C."""
    y = cj.p.y
    C = cj.C.value()
    phi = cj.phi.value()
    D2C = _d2(cj, cj.C)  # [direction X, argument Y]
    scale = max(1.0, _mx(C))
    return {
        "C_kills_direction": _mx(C @ y) / scale,
        "C_is_indicatory": _rel(phi.T @ C - C, C),
        "fiber_C_direction_first": _mx(y @ D2C) / scale,
        "fiber_C_direction_second": _mx(D2C @ y + C) / scale,
    }


def suite_lemma23(cj: ChartJets):
    """Properties of the second curvature-derivative form B."""
    y = cj.p.y
    L = cj.L.value()
    C = cj.C.value()
    B = cj.B.value()
    ell = cj.ell.value()
    phi = cj.phi.value()
    D2C = _d2(cj, cj.C)
    D2B = _d2(cj, cj.B)  # [X=direction, Y, Z]
    scale = max(1.0, _mx(B), _mx(C))
    return {
        "B_kills_direction": _mx(B @ y) / scale,
        "B_is_indicatory": _rel(phi.T @ B @ phi - B, B),
        "fiber_B_direction_first": _mx(np.einsum("x,xyz->yz", y, D2B))
        / scale,
        "B_from_C": _mx(B - (L * D2C + np.outer(C, ell))) / scale,
        "B_symmetric": _mx(B - B.T) / scale,
        "fiber_B_direction_mid": _mx(
            np.einsum("xyz,y->xz", D2B, y) + B) / scale,
        "fiber_B_direction_last": _mx(
            np.einsum("xyz,z->xy", D2B, y) + B) / scale,
    }


def suite_theorem21(cj: ChartJets):
    """Scalar-curvature characterization: the deviation tensor is
    isotropic iff the torsion and full curvature take their special
    forms."""
    y = cj.p.y
    L = cj.L.value()
    k = cj.k.value()
    ell = cj.ell.value()
    phi = cj.phi.value()
    hbar = cj.hbar.value()
    H = cj.H.value()
    Rhat = cj.Rhat.value()
    R = cj.R.value()
    C = cj.C.value()
    B = cj.B.value()

    iso = _mx(H - k * L * L * phi) / max(_mx(H), L * L)

    psi = k * ell + C / 3.0
    tors = L * (np.einsum("iy,x->ixy", phi, psi)
                - np.einsum("ix,y->ixy", phi, psi))
    torsion_form = _rel(tors - Rhat, Rhat, tors)

    brk = B / 3.0 + k * hbar
    t1 = np.einsum("iy,z,x->ixyz", phi, ell, psi)
    t2 = (np.einsum("iy,zx->ixyz", phi, brk)
          + (2.0 / 3.0) * np.einsum("iy,x,z->ixyz", phi, ell, C))
    t3 = (1.0 / 3.0) * np.einsum("x,y,iz->ixyz", ell, C, phi)
    t4 = (1.0 / L) * np.einsum("xz,i,y->ixyz", hbar, y, psi)
    rhs = t1 + t2 + t3 + t4
    rhs = rhs - rhs.transpose(0, 2, 1, 3)
    curvature_form = _rel(rhs - R, R, rhs)

    return {
        "deviation_isotropic": iso,
        "torsion_form": torsion_form,
        "curvature_form": curvature_form,
    }


def suite_corollary21(cj: ChartJets):
    """Symmetry-split identities of the lowered curvature on
    scalar-curvature spaces, in terms of the auxiliary forms N and F."""
    hbar = cj.hbar.value()
    Rl = cj.R_low.value()
    Nt = cj.Ntensor.value()
    F = cj.F.value()

    lhs_a = Rl - Rl.transpose(0, 1, 3, 2)
    rhs_a = (np.einsum("zx,wy->xyzw", hbar, Nt)
             + np.einsum("wy,zx->xyzw", hbar, Nt))
    rhs_a = rhs_a - rhs_a.transpose(1, 0, 2, 3)

    lhs_b = Rl + Rl.transpose(0, 1, 3, 2)
    rhs_b = (np.einsum("wy,zx->xyzw", hbar, F)
             + np.einsum("zy,wx->xyzw", hbar, F)
             + np.einsum("wz,yx->xyzw", hbar, F))
    rhs_b = rhs_b - rhs_b.transpose(1, 0, 2, 3)

    return {
        "antisymmetric_part": _rel(lhs_a - rhs_a, Rl, rhs_a),
        "symmetric_part": _rel(lhs_b - rhs_b, Rl, rhs_b),
    }


def suite_prop21(cj: ChartJets):
    """Projected curvature vs projected N form: both vanish together,
    and the projected curvature has its closed expression in B and k."""
    k = cj.k.value()
    phi = cj.phi.value()
    hbar = cj.hbar.value()
    Rl = cj.R_low.value()
    Nt = cj.Ntensor.value()
    B = cj.B.value()

    PR = np.einsum("ax,by,cz,dw,abcd->xyzw", phi, phi, phi, phi, Rl)
    PN = phi.T @ Nt @ phi
    rhs = np.einsum("yw,zx->xyzw", hbar, B / 3.0 + k * hbar)
    rhs = rhs - rhs.transpose(1, 0, 2, 3)
    return {
        "projected_curvature_form": _rel(PR - rhs, Rl, rhs),
        "projected_N_form": _rel(PN - (B / 3.0 + k * hbar), Nt, B),
        "projected_F_form": _rel(
            phi.T @ cj.F.value() @ phi - B / 3.0, B, cj.F.value()),
    }


def projected_norms(cj: ChartJets):
    """Max-norms of the fully projected curvature and of the projected
    N form (informational: both vanish together on scalar-curvature
    spaces exactly when the projected curvature does)."""
    phi = cj.phi.value()
    Rl = cj.R_low.value()
    Nt = cj.Ntensor.value()
    PR = np.einsum("ax,by,cz,dw,abcd->xyzw", phi, phi, phi, phi, Rl)
    PN = phi.T @ Nt @ phi
    return _mx(PR), _mx(PN)


def suite_lemma31(cj: ChartJets):
    """Third curvature-derivative form A: its expansion in B, and the
    antisymmetry obstruction that forces constancy."""
    L = cj.L.value()
    ell = cj.ell.value()
    C = cj.C.value()
    B = cj.B.value()
    A = cj.A.value()
    hbar = cj.hbar.value()
    D2B = _d2(cj, cj.B)

    expansion = (L * D2B + np.einsum("z,xy->xyz", ell, B)
                 + np.einsum("y,xz->xyz", ell, B))
    M = A + np.einsum("x,yz->xyz", C, hbar)
    scale = max(1.0, _mx(A), _mx(B))
    return {
        "A_from_B": _mx(A - expansion) / scale,
        "constancy_obstruction": _mx(M - M.transpose(1, 0, 2)) / scale,
    }


def suite_bianchi(cj: ChartJets):
    """Universal identities: torsion antisymmetry, reconstruction of the
    torsion from the deviation tensor, contraction of the full curvature
    back to the torsion, and the cyclic (Bianchi-type) identity for the
    horizontal derivative of the torsion."""
    y = cj.p.y
    Rhat = cj.Rhat.value()
    H = cj.H.value()
    R = cj.R.value()
    scale = max(1.0, _mx(Rhat))

    dH = d_y(cj.H).value()  # [i, j, c]
    D2H = dH.transpose(0, 2, 1)  # direction first
    rec = (D2H - D2H.transpose(0, 2, 1)) / 3.0

    hR = cj.h_cov(cj.Rhat, contravariant_first=True).value()
    t = hR.transpose(0, 3, 1, 2)
    cyc = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)

    return {
        "torsion_antisymmetry": _mx(Rhat + Rhat.transpose(0, 2, 1)) / scale,
        "deviation_kills_direction": _mx(H @ y) / scale,
        "torsion_from_deviation": _mx(rec - Rhat) / scale,
        "curvature_contracts_to_torsion": _mx(
            np.einsum("ixyz,z->ixy", R, y) - Rhat) / scale,
        "cyclic_identity": _mx(cyc) / max(1.0, _mx(hR)),
    }


# ---------------------------------------------------------------------------
# registry

SUITES = {
    "lemma21": suite_lemma21,
    "lemma22": suite_lemma22,
    "lemma23": suite_lemma23,
    "theorem21": suite_theorem21,
    "corollary21": suite_corollary21,
    "prop21": suite_prop21,
    "lemma31": suite_lemma31,
    "bianchi": suite_bianchi,
}

# minimum jet orders (px, py) each suite needs
SUITE_ORDERS = {
    "lemma21": (2, 4),
    "lemma22": (2, 6),
    "lemma23": (2, 7),
    "theorem21": (2, 6),
    "corollary21": (2, 6),
    "prop21": (2, 6),
    "lemma31": (2, 7),
    "bianchi": (3, 5),
}

# suites that hold on every Finsler metric (the rest assume the
# scalar-curvature property)
UNIVERSAL_SUITES = ("lemma21", "lemma22", "lemma23", "lemma31", "bianchi")


def orders_for(names):
    px = max(SUITE_ORDERS[s][0] for s in names)
    py = max(SUITE_ORDERS[s][1] for s in names)
    return px, py


def run_suites(metric, points, names):
    """Evaluate the named suites at each point; yields one record
    (suite, identity, point index, residual) per identity per point."""
    names = list(names)
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
    px, py = orders_for(names)
    records = []
    for idx, p in enumerate(points):
        cj = ChartJets(metric, p, px, py)
        for name in names:
            for ident, value in SUITES[name](cj).items():
                records.append({
                    "suite": name,
                    "identity": ident,
                    "sample": idx,
                    "residual": float(value),
                })
    return records
