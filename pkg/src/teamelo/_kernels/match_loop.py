"""Pure-Python match-loop kernel (fallback for the compiled extension).

Consumes pre-drawn uniforms/normals in a fixed order so that this kernel
and the Cython one produce bit-identical rating trajectories; both call
libm's tanh/exp, so even the transcendentals round identically.

Team kinds: 0 = deterministic strength, 1 = Gaussian draw,
2 = uniform line-up subset, 3 = strength-proportional line-up.
Kernel kinds: 0 = all-play-all, 1 = indicator(|dr| <= c), 2 = smooth bump.
"""

from math import exp, log, tanh

LOG2 = log(2.0)


def run_match_chunk(
    ratings,
    kinds,
    det_x,
    thetas,
    sigmas,
    strengths_flat,
    offsets,
    lineup_size,
    gamma,
    nu,
    kernel_kind,
    kernel_c,
    w_max,
    u_pair,
    u_accept,
    u_out,
    u_lineup,
    z_gauss,
    scratch,
):
    """Play one chunk of candidate pairs, mutating ``ratings`` in place."""
    n = len(ratings)
    m = lineup_size
    for c in range(len(u_accept)):
        i = int(u_pair[c, 0] * n)
        j = int(u_pair[c, 1] * (n - 1))
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

        x = [0.0, 0.0]
        for side, team in ((0, i), (1, j)):
            kind = kinds[team]
            if kind == 0:
                x[side] = det_x[team]
            elif kind == 1:
                x[side] = thetas[team] + sigmas[team] * z_gauss[c, side]
            else:
                off = offsets[team]
                mm = offsets[team + 1] - off
                for k in range(mm):
                    scratch[k] = strengths_flat[off + k]
                total = 0.0
                if kind == 3:
                    for k in range(mm):
                        total += scratch[k]
                acc = 0.0
                base = side * m
                for k in range(m):
                    u = u_lineup[c, base + k]
                    if kind == 2:
                        idx = k + int(u * (mm - k))
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
                    scratch[k], scratch[idx] = scratch[idx], scratch[k]
                    acc += scratch[k]
                x[side] = acc

        pwin = 0.5 * (1.0 + tanh(nu * (x[0] - x[1])))
        s = 1.0 if u_out[c] < pwin else -1.0
        delta = gamma * (s - tanh(nu * (ratings[i] - ratings[j])))
        ratings[i] += delta
        ratings[j] -= delta
