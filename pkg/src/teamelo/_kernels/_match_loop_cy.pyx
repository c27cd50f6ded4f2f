# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled match-loop kernel; mirrors match_loop.py operation for operation.

Keep the two in lockstep: they must consume the pre-drawn random arrays
in the same order and perform the same floating-point operations so that
results are bit-identical across backends.
"""

from libc.math cimport exp, log, tanh


def run_match_chunk(
    double[::1] ratings,
    int[::1] kinds,
    double[::1] det_x,
    double[::1] thetas,
    double[::1] sigmas,
    double[::1] strengths_flat,
    long[::1] offsets,
    int lineup_size,
    double gamma,
    double nu,
    int kernel_kind,
    double kernel_c,
    double w_max,
    double[:, ::1] u_pair,
    double[::1] u_accept,
    double[::1] u_out,
    double[:, ::1] u_lineup,
    double[:, ::1] z_gauss,
    double[::1] scratch,
):
    """Play one chunk of candidate pairs, mutating ``ratings`` in place."""
    cdef Py_ssize_t n = ratings.shape[0]
    cdef Py_ssize_t n_cand = u_accept.shape[0]
    cdef int m = lineup_size
    cdef double LOG2 = log(2.0)
    cdef Py_ssize_t c, i, j, team, off, mm, idx, t
    cdef int side, k, kind
    cdef double dr, w, u, total, target, cum, acc, tmp
    cdef double x0, x1, pwin, s, delta

    with nogil:
        for c in range(n_cand):
            i = <Py_ssize_t>(u_pair[c, 0] * n)
            j = <Py_ssize_t>(u_pair[c, 1] * (n - 1))
            if j >= i:
                j += 1

            if kernel_kind != 0:
                dr = ratings[i] - ratings[j]
                if kernel_kind == 1:
                    w = 1.0 if (dr <= kernel_c and -dr <= kernel_c) else 0.0
                else:
                    w = exp(LOG2 / (1.0 + dr * dr)) - 1.0
                if not u_accept[c] * w_max < w:
                    continue

            x0 = 0.0
            x1 = 0.0
            for side in range(2):
                team = i if side == 0 else j
                kind = kinds[team]
                if kind == 0:
                    acc = det_x[team]
                elif kind == 1:
                    acc = thetas[team] + sigmas[team] * z_gauss[c, side]
                else:
                    off = offsets[team]
                    mm = offsets[team + 1] - off
                    for t in range(mm):
                        scratch[t] = strengths_flat[off + t]
                    total = 0.0
                    if kind == 3:
                        for t in range(mm):
                            total += scratch[t]
                    acc = 0.0
                    for k in range(m):
                        u = u_lineup[c, side * m + k]
                        if kind == 2:
                            idx = k + <Py_ssize_t>(u * (mm - k))
                        else:
                            target = u * total
                            cum = 0.0
                            idx = mm - 1
                            for t in range(k, mm):
                                cum += scratch[t]
                                if target < cum:
                                    idx = t
                                    break
                            total -= scratch[idx]
                        tmp = scratch[k]
                        scratch[k] = scratch[idx]
                        scratch[idx] = tmp
                        acc += scratch[k]
                if side == 0:
                    x0 = acc
                else:
                    x1 = acc

            pwin = 0.5 * (1.0 + tanh(nu * (x0 - x1)))
            s = 1.0 if u_out[c] < pwin else -1.0
            delta = gamma * (s - tanh(nu * (ratings[i] - ratings[j])))
            ratings[i] += delta
            ratings[j] -= delta
