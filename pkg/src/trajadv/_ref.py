"""Pure-Python reference kernels for planar articulated chains.

These mirror the compiled kernels in ``_core`` exactly (same signatures,
same arithmetic) and are used as the fallback backend when the extension
is not built.  The chain lives in the x-z plane of the inertial frame:
revolute joints rotate from +x toward +z, prismatic joints slide along a
fixed in-plane axis given as an angle in the parent frame.  Gravity acts
along -z with magnitude ``g``.

A "pack" is the flat argument tuple
``(kinds, axang, lengths, coms, masses, inertias, base_angle, g, tracked)``
prepared by :class:`trajadv.dynamics.RobotModel`.
"""

import numpy as np

REV = 0
PRISM = 1


def _geometry(kinds, axang, lengths, coms, base_angle, q):
    """One forward pass over the chain.

    Returns per-joint world quantities: angle before the joint, link angle,
    revolute pivot point, prismatic axis direction, link COM and link tip.
    """
    n = q.shape[0]
    phi_before = np.empty(n)
    phi = np.empty(n)
    pivot = np.zeros((n, 2))
    axis_w = np.zeros((n, 2))
    com = np.empty((n, 2))
    tip = np.empty((n, 2))
    x = 0.0
    z = 0.0
    ang = base_angle
    for j in range(n):
        phi_before[j] = ang
        if kinds[j] == REV:
            pivot[j, 0] = x
            pivot[j, 1] = z
            ang += q[j]
        else:
            aa = ang + axang[j]
            ca, sa = np.cos(aa), np.sin(aa)
            axis_w[j, 0] = ca
            axis_w[j, 1] = sa
            x += q[j] * ca
            z += q[j] * sa
        phi[j] = ang
        c, s = np.cos(ang), np.sin(ang)
        com[j, 0] = x + coms[j] * c
        com[j, 1] = z + coms[j] * s
        x += lengths[j] * c
        z += lengths[j] * s
        tip[j, 0] = x
        tip[j, 1] = z
    return phi_before, phi, pivot, axis_w, com, tip


def _point_jac(kinds, pivot, axis_w, p, depth, n):
    """Planar Jacobian (2 x n) of a point attached to link ``depth``."""
    J = np.zeros((2, n))
    for j in range(depth + 1):
        if kinds[j] == REV:
            J[0, j] = -(p[1] - pivot[j, 1])
            J[1, j] = p[0] - pivot[j, 0]
        else:
            J[0, j] = axis_w[j, 0]
            J[1, j] = axis_w[j, 1]
    return J


def eval_dynamics(kinds, axang, lengths, coms, masses, inertias, base_angle, g,
                  tracked, q, nu):
    """Full per-state evaluation.

    Returns ``(M, C, G, pose6, J6, Jdot6)`` where C comes from the
    Christoffel symbols of M (so that dM/dt - 2C is skew-symmetric), pose6
    is the tracked-link tip pose ``[px, 0, pz, 0, -phi, 0]`` and J6/Jdot6
    are the 6 x n task Jacobian and its total time derivative.
    """
    n = q.shape[0]
    phi_before, phi, pivot, axis_w, com, tip = _geometry(
        kinds, axang, lengths, coms, base_angle, q)

    Jc = [_point_jac(kinds, pivot, axis_w, com[i], i, n) for i in range(n)]
    Jz = [_point_jac(kinds, pivot, axis_w, pivot[j], j - 1, n)
          if kinds[j] == REV else None for j in range(n)]

    M = np.zeros((n, n))
    G = np.zeros(n)
    for i in range(n):
        M += masses[i] * Jc[i].T @ Jc[i]
        w = np.zeros(n)
        for j in range(i + 1):
            if kinds[j] == REV:
                w[j] = 1.0
        M += inertias[i] * np.outer(w, w)
        G += masses[i] * g * Jc[i][1]

    # dM[k] = dM/dq_k from analytic derivatives of the COM Jacobians
    dM = np.zeros((n, n, n))
    for i in range(n):
        Ji = Jc[i]
        for k in range(i + 1):
            D = np.zeros((2, n))
            for j in range(i + 1):
                if kinds[j] == REV:
                    if Jz[j] is not None:
                        vx = Ji[0, k] - Jz[j][0, k]
                        vz = Ji[1, k] - Jz[j][1, k]
                    else:  # pragma: no cover - Jz always built for revolute
                        vx, vz = Ji[0, k], Ji[1, k]
                    D[0, j] = -vz
                    D[1, j] = vx
                elif kinds[k] == REV and k < j:
                    D[0, j] = -axis_w[j, 1]
                    D[1, j] = axis_w[j, 0]
            dM[k] += masses[i] * (D.T @ Ji + Ji.T @ D)

    C = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += 0.5 * (dM[k, i, j] + dM[j, i, k] - dM[i, j, k]) * nu[k]
            C[i, j] = acc

    p = tip[tracked]
    Jp = _point_jac(kinds, pivot, axis_w, p, tracked, n)
    vp = Jp @ nu
    J6 = np.zeros((6, n))
    Jd6 = np.zeros((6, n))
    for j in range(tracked + 1):
        if kinds[j] == REV:
            J6[0, j] = -(p[1] - pivot[j, 1])
            J6[2, j] = p[0] - pivot[j, 0]
            J6[4, j] = -1.0
            vz = _point_jac(kinds, pivot, axis_w, pivot[j], j - 1, n) @ nu
            Jd6[0, j] = -(vp[1] - vz[1])
            Jd6[2, j] = vp[0] - vz[0]
        else:
            J6[0, j] = axis_w[j, 0]
            J6[2, j] = axis_w[j, 1]
            pb = 0.0
            for k in range(j):
                if kinds[k] == REV:
                    pb += nu[k]
            Jd6[0, j] = -pb * axis_w[j, 1]
            Jd6[2, j] = pb * axis_w[j, 0]
    pose = np.array([p[0], 0.0, p[1], 0.0, -phi[tracked], 0.0])
    return M, C, G, pose, J6, Jd6


def potential_energy(kinds, axang, lengths, coms, masses, inertias, base_angle,
                     g, tracked, q):
    """Gravitational potential energy, zero level at the base height."""
    _, _, _, _, com, _ = _geometry(kinds, axang, lengths, coms, base_angle, q)
    return float(np.sum(masses * g * com[:, 1]))


def accel(kinds, axang, lengths, coms, masses, inertias, base_angle, g,
          tracked, q, nu, tau, f6):
    """Generalized acceleration from M nudot = tau + J^T f - (C nu + G)."""
    M, C, G, _, J6, _ = eval_dynamics(
        kinds, axang, lengths, coms, masses, inertias, base_angle, g, tracked,
        q, nu)
    rhs = tau + J6.T @ f6 - (C @ nu + G)
    return np.linalg.solve(M, rhs)


def rk4_step(kinds, axang, lengths, coms, masses, inertias, base_angle, g,
             tracked, q, nu, tau, f6, dt):
    """Classic RK4 step with torque and wrench held constant."""
    args = (kinds, axang, lengths, coms, masses, inertias, base_angle, g,
            tracked)
    a1 = accel(*args, q, nu, tau, f6)
    q2 = q + 0.5 * dt * nu
    v2 = nu + 0.5 * dt * a1
    a2 = accel(*args, q2, v2, tau, f6)
    q3 = q + 0.5 * dt * v2
    v3 = nu + 0.5 * dt * a2
    a3 = accel(*args, q3, v3, tau, f6)
    q4 = q + dt * v3
    v4 = nu + dt * a3
    a4 = accel(*args, q4, v4, tau, f6)
    q_new = q + (dt / 6.0) * (nu + 2.0 * v2 + 2.0 * v3 + v4)
    nu_new = nu + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return q_new, nu_new


def sie_step(kinds, axang, lengths, coms, masses, inertias, base_angle, g,
             tracked, q, nu, tau, f6, dt):
    """Semi-implicit Euler step (velocity first, then position)."""
    args = (kinds, axang, lengths, coms, masses, inertias, base_angle, g,
            tracked)
    nu_new = nu + dt * accel(*args, q, nu, tau, f6)
    q_new = q + dt * nu_new
    return q_new, nu_new
