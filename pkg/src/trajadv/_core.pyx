# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for planar articulated chains.

Mirrors :mod:`trajadv._ref` (same signatures, same arithmetic); see that
module for the chain conventions.  Chains are limited to MAXN joints so all
intermediates live on the stack.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()

cdef enum:
    MAXN = 16

cdef int REV = 0


cdef struct Geo:
    double phi_before[MAXN]
    double phi[MAXN]
    double pivx[MAXN]
    double pivz[MAXN]
    double axwx[MAXN]
    double axwz[MAXN]
    double comx[MAXN]
    double comz[MAXN]
    double tipx[MAXN]
    double tipz[MAXN]


cdef void _geometry(const int* kinds, const double* axang, const double* lengths,
                    const double* coms, double base_angle, const double* q,
                    int n, Geo* geo) noexcept nogil:
    cdef double x = 0.0, z = 0.0, ang = base_angle
    cdef double aa, ca, sa, c, s
    cdef int j
    for j in range(n):
        geo.phi_before[j] = ang
        geo.axwx[j] = 0.0
        geo.axwz[j] = 0.0
        if kinds[j] == REV:
            geo.pivx[j] = x
            geo.pivz[j] = z
            ang += q[j]
        else:
            aa = ang + axang[j]
            ca = cos(aa)
            sa = sin(aa)
            geo.axwx[j] = ca
            geo.axwz[j] = sa
            x += q[j] * ca
            z += q[j] * sa
            geo.pivx[j] = x
            geo.pivz[j] = z
        geo.phi[j] = ang
        c = cos(ang)
        s = sin(ang)
        geo.comx[j] = x + coms[j] * c
        geo.comz[j] = z + coms[j] * s
        x += lengths[j] * c
        z += lengths[j] * s
        geo.tipx[j] = x
        geo.tipz[j] = z


cdef void _point_jac(const int* kinds, Geo* geo, double px, double pz,
                     int depth, int n, double* Jx, double* Jz) noexcept nogil:
    cdef int j
    for j in range(n):
        Jx[j] = 0.0
        Jz[j] = 0.0
    for j in range(depth + 1):
        if kinds[j] == REV:
            Jx[j] = -(pz - geo.pivz[j])
            Jz[j] = px - geo.pivx[j]
        else:
            Jx[j] = geo.axwx[j]
            Jz[j] = geo.axwz[j]


cdef void _mass_coriolis_gravity(const int* kinds, const double* axang,
                                 const double* lengths, const double* coms,
                                 const double* masses, const double* inertias,
                                 double base_angle, double g, const double* q,
                                 const double* nu, int n, Geo* geo,
                                 double* M, double* C, double* G) noexcept nogil:
    cdef double Jcx[MAXN][MAXN]
    cdef double Jcz[MAXN][MAXN]
    cdef double Jzx[MAXN][MAXN]
    cdef double Jzz[MAXN][MAXN]
    cdef double dM[MAXN][MAXN][MAXN]
    cdef double Dx[MAXN]
    cdef double Dz[MAXN]
    cdef int i, j, k, i2
    cdef double m, acc, vx, vz

    _geometry(kinds, axang, lengths, coms, base_angle, q, n, geo)

    for i in range(n):
        _point_jac(kinds, geo, geo.comx[i], geo.comz[i], i, n, Jcx[i], Jcz[i])
    for j in range(n):
        if kinds[j] == REV:
            _point_jac(kinds, geo, geo.pivx[j], geo.pivz[j], j - 1, n,
                       Jzx[j], Jzz[j])

    for i in range(n):
        for j in range(n):
            M[i * n + j] = 0.0
            C[i * n + j] = 0.0
            for k in range(n):
                dM[k][i][j] = 0.0
        G[i] = 0.0

    for i in range(n):
        m = masses[i]
        for j in range(i + 1):
            for k in range(j + 1):
                acc = m * (Jcx[i][j] * Jcx[i][k] + Jcz[i][j] * Jcz[i][k])
                if kinds[j] == REV and kinds[k] == REV:
                    acc += inertias[i]
                M[j * n + k] += acc
                if k != j:
                    M[k * n + j] += acc
            G[j] += m * g * Jcz[i][j]

    for i in range(n):
        m = masses[i]
        for k in range(i + 1):
            for j in range(n):
                Dx[j] = 0.0
                Dz[j] = 0.0
            for j in range(i + 1):
                if kinds[j] == REV:
                    vx = Jcx[i][k] - Jzx[j][k]
                    vz = Jcz[i][k] - Jzz[j][k]
                    Dx[j] = -vz
                    Dz[j] = vx
                elif kinds[k] == REV and k < j:
                    Dx[j] = -geo.axwz[j]
                    Dz[j] = geo.axwx[j]
            for j in range(i + 1):
                for i2 in range(i + 1):
                    dM[k][j][i2] += m * (Dx[j] * Jcx[i][i2] + Jcx[i][j] * Dx[i2]
                                         + Dz[j] * Jcz[i][i2] + Jcz[i][j] * Dz[i2])

    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += 0.5 * (dM[k][i][j] + dM[j][i][k] - dM[i][j][k]) * nu[k]
            C[i * n + j] = acc


cdef void _task_jacobians(const int* kinds, const double* nu, int tracked,
                          int n, Geo* geo, double* J6, double* Jd6,
                          double* pose) noexcept nogil:
    cdef double Jpx[MAXN]
    cdef double Jpz[MAXN]
    cdef double Jqx[MAXN]
    cdef double Jqz[MAXN]
    cdef double px, pz, vpx, vpz, vzx, vzz, pb
    cdef int j, k

    px = geo.tipx[tracked]
    pz = geo.tipz[tracked]
    _point_jac(kinds, geo, px, pz, tracked, n, Jpx, Jpz)
    vpx = 0.0
    vpz = 0.0
    for j in range(n):
        vpx += Jpx[j] * nu[j]
        vpz += Jpz[j] * nu[j]

    for j in range(6 * n):
        J6[j] = 0.0
        Jd6[j] = 0.0
    for j in range(tracked + 1):
        if kinds[j] == REV:
            J6[0 * n + j] = -(pz - geo.pivz[j])
            J6[2 * n + j] = px - geo.pivx[j]
            J6[4 * n + j] = -1.0
            _point_jac(kinds, geo, geo.pivx[j], geo.pivz[j], j - 1, n, Jqx, Jqz)
            vzx = 0.0
            vzz = 0.0
            for k in range(n):
                vzx += Jqx[k] * nu[k]
                vzz += Jqz[k] * nu[k]
            Jd6[0 * n + j] = -(vpz - vzz)
            Jd6[2 * n + j] = vpx - vzx
        else:
            J6[0 * n + j] = geo.axwx[j]
            J6[2 * n + j] = geo.axwz[j]
            pb = 0.0
            for k in range(j):
                if kinds[k] == REV:
                    pb += nu[k]
            Jd6[0 * n + j] = -pb * geo.axwz[j]
            Jd6[2 * n + j] = pb * geo.axwx[j]
    pose[0] = px
    pose[1] = 0.0
    pose[2] = pz
    pose[3] = 0.0
    pose[4] = -geo.phi[tracked]
    pose[5] = 0.0


cdef int _chol_solve(double* A, double* b, int n) noexcept nogil:
    """Solve A x = b in place (b overwritten) for symmetric PD A.

    A is overwritten with its Cholesky factor.  Returns 0 on success,
    1 if a pivot is not strictly positive.
    """
    cdef int i, j, k
    cdef double s
    for j in range(n):
        s = A[j * n + j]
        for k in range(j):
            s -= A[j * n + k] * A[j * n + k]
        if s <= 0.0:
            return 1
        A[j * n + j] = sqrt(s)
        for i in range(j + 1, n):
            s = A[i * n + j]
            for k in range(j):
                s -= A[i * n + k] * A[j * n + k]
            A[i * n + j] = s / A[j * n + j]
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= A[i * n + k] * b[k]
        b[i] = s / A[i * n + i]
    for i in range(n - 1, -1, -1):
        s = b[i]
        for k in range(i + 1, n):
            s -= A[k * n + i] * b[k]
        b[i] = s / A[i * n + i]
    return 0


cdef int _accel(const int* kinds, const double* axang, const double* lengths,
                const double* coms, const double* masses, const double* inertias,
                double base_angle, double g, int tracked, const double* q,
                const double* nu, const double* tau, const double* f6, int n,
                double* out) noexcept nogil:
    cdef Geo geo
    cdef double M[MAXN * MAXN]
    cdef double C[MAXN * MAXN]
    cdef double G[MAXN]
    cdef double J6[6 * MAXN]
    cdef double Jd6[6 * MAXN]
    cdef double pose[6]
    cdef int i, j

    _mass_coriolis_gravity(kinds, axang, lengths, coms, masses, inertias,
                           base_angle, g, q, nu, n, &geo, M, C, G)
    _task_jacobians(kinds, nu, tracked, n, &geo, J6, Jd6, pose)
    for i in range(n):
        out[i] = tau[i] - G[i]
        for j in range(n):
            out[i] -= C[i * n + j] * nu[j]
        for j in range(6):
            out[i] += J6[j * n + i] * f6[j]
    return _chol_solve(M, out, n)


def eval_dynamics(int[::1] kinds, double[::1] axang, double[::1] lengths,
                  double[::1] coms, double[::1] masses, double[::1] inertias,
                  double base_angle, double g, int tracked,
                  double[::1] q, double[::1] nu):
    cdef int n = q.shape[0]
    cdef Geo geo
    M = np.empty((n, n))
    C = np.empty((n, n))
    G = np.empty(n)
    pose = np.empty(6)
    J6 = np.empty((6, n))
    Jd6 = np.empty((6, n))
    cdef double[:, ::1] Mv = M
    cdef double[:, ::1] Cv = C
    cdef double[::1] Gv = G
    cdef double[::1] posev = pose
    cdef double[:, ::1] J6v = J6
    cdef double[:, ::1] Jd6v = Jd6
    _mass_coriolis_gravity(&kinds[0], &axang[0], &lengths[0], &coms[0],
                           &masses[0], &inertias[0], base_angle, g,
                           &q[0], &nu[0], n, &geo, &Mv[0, 0], &Cv[0, 0], &Gv[0])
    _task_jacobians(&kinds[0], &nu[0], tracked, n, &geo, &J6v[0, 0],
                    &Jd6v[0, 0], &posev[0])
    return M, C, G, pose, J6, Jd6


def potential_energy(int[::1] kinds, double[::1] axang, double[::1] lengths,
                     double[::1] coms, double[::1] masses, double[::1] inertias,
                     double base_angle, double g, int tracked, double[::1] q):
    cdef int n = q.shape[0]
    cdef Geo geo
    cdef int i
    cdef double total = 0.0
    _geometry(&kinds[0], &axang[0], &lengths[0], &coms[0], base_angle, &q[0],
              n, &geo)
    for i in range(n):
        total += masses[i] * g * geo.comz[i]
    return total


def accel(int[::1] kinds, double[::1] axang, double[::1] lengths,
          double[::1] coms, double[::1] masses, double[::1] inertias,
          double base_angle, double g, int tracked, double[::1] q,
          double[::1] nu, double[::1] tau, double[::1] f6):
    cdef int n = q.shape[0]
    out = np.empty(n)
    cdef double[::1] outv = out
    if _accel(&kinds[0], &axang[0], &lengths[0], &coms[0], &masses[0],
              &inertias[0], base_angle, g, tracked, &q[0], &nu[0], &tau[0],
              &f6[0], n, &outv[0]):
        raise ValueError("mass matrix is not positive definite")
    return out


def rk4_step(int[::1] kinds, double[::1] axang, double[::1] lengths,
             double[::1] coms, double[::1] masses, double[::1] inertias,
             double base_angle, double g, int tracked, double[::1] q,
             double[::1] nu, double[::1] tau, double[::1] f6, double dt):
    cdef int n = q.shape[0]
    cdef double a1[MAXN]
    cdef double a2[MAXN]
    cdef double a3[MAXN]
    cdef double a4[MAXN]
    cdef double qs[MAXN]
    cdef double vs2[MAXN]
    cdef double vs3[MAXN]
    cdef double vs4[MAXN]
    cdef int i, bad = 0
    q_new = np.empty(n)
    nu_new = np.empty(n)
    cdef double[::1] qn = q_new
    cdef double[::1] vn = nu_new

    bad |= _accel(&kinds[0], &axang[0], &lengths[0], &coms[0], &masses[0],
                  &inertias[0], base_angle, g, tracked, &q[0], &nu[0],
                  &tau[0], &f6[0], n, a1)
    for i in range(n):
        qs[i] = q[i] + 0.5 * dt * nu[i]
        vs2[i] = nu[i] + 0.5 * dt * a1[i]
    bad |= _accel(&kinds[0], &axang[0], &lengths[0], &coms[0], &masses[0],
                  &inertias[0], base_angle, g, tracked, qs, vs2, &tau[0],
                  &f6[0], n, a2)
    for i in range(n):
        qs[i] = q[i] + 0.5 * dt * vs2[i]
        vs3[i] = nu[i] + 0.5 * dt * a2[i]
    bad |= _accel(&kinds[0], &axang[0], &lengths[0], &coms[0], &masses[0],
                  &inertias[0], base_angle, g, tracked, qs, vs3, &tau[0],
                  &f6[0], n, a3)
    for i in range(n):
        qs[i] = q[i] + dt * vs3[i]
        vs4[i] = nu[i] + dt * a3[i]
    bad |= _accel(&kinds[0], &axang[0], &lengths[0], &coms[0], &masses[0],
                  &inertias[0], base_angle, g, tracked, qs, vs4, &tau[0],
                  &f6[0], n, a4)
    if bad:
        raise ValueError("mass matrix is not positive definite")
    for i in range(n):
        qn[i] = q[i] + (dt / 6.0) * (nu[i] + 2.0 * vs2[i] + 2.0 * vs3[i] + vs4[i])
        vn[i] = nu[i] + (dt / 6.0) * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i])
    return q_new, nu_new


def sie_step(int[::1] kinds, double[::1] axang, double[::1] lengths,
             double[::1] coms, double[::1] masses, double[::1] inertias,
             double base_angle, double g, int tracked, double[::1] q,
             double[::1] nu, double[::1] tau, double[::1] f6, double dt):
    cdef int n = q.shape[0]
    cdef double a1[MAXN]
    cdef int i
    q_new = np.empty(n)
    nu_new = np.empty(n)
    cdef double[::1] qn = q_new
    cdef double[::1] vn = nu_new
    if _accel(&kinds[0], &axang[0], &lengths[0], &coms[0], &masses[0],
              &inertias[0], base_angle, g, tracked, &q[0], &nu[0], &tau[0],
              &f6[0], n, a1):
        raise ValueError("mass matrix is not positive definite")
    for i in range(n):
        vn[i] = nu[i] + dt * a1[i]
        qn[i] = q[i] + dt * vn[i]
    return q_new, nu_new
