"""Stationary periodic Plancherel dynamics on partitions.

The transfer operator at intensity gamma and decay u acts on the Fock space
as a sandwich of Plancherel half-vertices around u^D, with the scalar
prefactor exp(gamma^2 (u-1) (1-t)/(1-q)).  Its matrix elements in the P/Q
bases are weighted path counts in the Young graph (products of one-box Pieri
coefficients), which keeps both an exact mode (gamma formal, everything
rational) and a float mode for sampling.

Finite-dimensional laws of the periodic process are cyclic products of
transfer matrices; the sampler draws the state at time zero from the diagonal
of the full cycle and then walks conditionals, deterministically per seed.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache

from .macdonald import pieri_phi, pieri_psi
from .partitions import add_one_box, contains, partitions_up_to, weight
from .series import SeriesRing, TruncSeries


# ---------------------------------------------------------------------------
# Young-graph path weights
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _dims_cached(kind: str, mu: tuple, lam: tuple, q: Fraction, t: Fraction):
    if mu == lam:
        return Fraction(1)
    if not contains(lam, mu) or weight(mu) >= weight(lam):
        return Fraction(0)
    acc = Fraction(0)
    for nu in add_one_box(mu):
        if not contains(lam, nu):
            continue
        step = pieri_psi(nu, mu, q, t) if kind == "dim" else pieri_phi(nu, mu, q, t)
        acc += step * _dims_cached(kind, nu, lam, q, t)
    return acc


def dims(kind: str, mu: tuple, lam: tuple, q: Fraction, t: Fraction) -> Fraction:
    """Path sums in the Young graph: psi products ("dim"), phi ("dim'")."""
    if kind not in ("dim", "dim'"):
        raise ValueError("kind must be 'dim' or \"dim'\"")
    return _dims_cached(kind, mu, lam, q, t)


_FACT = [1]


def _factorial(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


# ---------------------------------------------------------------------------
# Transfer matrices
# ---------------------------------------------------------------------------


def _entry_power_coeffs(lam: tuple, mu: tuple, u: Fraction, q: Fraction,
                        t: Fraction) -> dict:
    """Rational coefficients c_k with T_{lam,mu} = pref * sum_k c_k xi^k.

    c_k collects u^{|nu|} dim(nu->lam) dim'(nu->mu) / (dl! dm!) over common
    sub-partitions nu with dl + dm = k; xi = gamma (1 - u) is the Plancherel
    parameter.
    """
    out: dict = {}
    wl, wm = weight(lam), weight(mu)
    for nu in partitions_up_to(min(wl, wm)):
        if not (contains(lam, nu) and contains(mu, nu)):
            continue
        dl = wl - weight(nu)
        dm = wm - weight(nu)
        dim_p = dims("dim", nu, lam, q, t)
        dim_q = dims("dim'", nu, mu, q, t)
        if not dim_p or not dim_q:
            continue
        coef = dim_p * dim_q / Fraction(_factorial(dl) * _factorial(dm))
        coef *= u ** weight(nu)
        k = dl + dm
        out[k] = out.get(k, Fraction(0)) + coef
    return out


def transfer_entry_exact(lam: tuple, mu: tuple, gamma: TruncSeries, u: Fraction,
                         q: Fraction, t: Fraction, ring: SeriesRing) -> TruncSeries:
    """T_{lam,mu}(u) with formal gamma: prefactor times the nu sum."""
    c = (1 - t) / (1 - q)
    pref = (gamma * gamma * (c * (u - 1))).exp()
    acc = ring.zero()
    xi = gamma * (1 - u)
    for k, coef in _entry_power_coeffs(lam, mu, Fraction(u), q, t).items():
        acc = acc + (xi ** k) * coef
    return pref * acc


def transfer_entry_float(lam: tuple, mu: tuple, gamma: float, u: float,
                         q: Fraction, t: Fraction) -> float:
    c = float((1 - t) / (1 - q))
    xi = gamma * (1.0 - u)
    acc = 0.0
    wl, wm = weight(lam), weight(mu)
    for nu in partitions_up_to(min(wl, wm)):
        if not (contains(lam, nu) and contains(mu, nu)):
            continue
        dl = wl - weight(nu)
        dm = wm - weight(nu)
        dim_p = dims("dim", nu, lam, q, t)
        dim_q = dims("dim'", nu, mu, q, t)
        acc += (xi ** (dl + dm)) * float(dim_p * dim_q) \
            / (_factorial(dl) * _factorial(dm)) * (u ** weight(nu))
    return math.exp(c * gamma * gamma * (u - 1.0)) * acc


class TransferMatrix:
    """Matrix of the transfer operator over states of weight <= depth."""

    def __init__(self, states, entries, gamma, u, mode: str):
        self.states = states
        self.entries = entries  # dict (lam, mu) -> value, or numpy array
        self.gamma = gamma
        self.u = u
        self.mode = mode


def transfer_matrix(gamma, u, depth: int, q: Fraction, t: Fraction,
                    mode: str = "float", ring: SeriesRing = None,
                    row_states=None, col_states=None) -> TransferMatrix:
    """Build the truncated transfer matrix.

    Exact mode expects ``gamma`` to be a TruncSeries monomial in ``ring``
    (the prefactor exponential is expanded in the same truncated ring, which
    keeps the semigroup identity exact on the safe block).  Float mode uses
    doubles and numpy.  Row/column state lists default to all partitions of
    weight <= depth.
    """
    states = partitions_up_to(depth)
    rows = states if row_states is None else row_states
    cols = states if col_states is None else col_states
    if mode == "exact":
        if ring is None or not isinstance(gamma, TruncSeries):
            raise ValueError("exact mode needs a ring and a formal gamma")
        c = (1 - t) / (1 - q)
        uf = Fraction(u)
        pref = (gamma * gamma * (c * (uf - 1))).exp()
        xi = gamma * (1 - uf)
        xi_pows = [ring.one()]
        for _ in range(2 * depth):
            xi_pows.append(xi_pows[-1] * xi)
        entries = {}
        for lam in rows:
            for mu in cols:
                acc = ring.zero()
                for k, coef in _entry_power_coeffs(lam, mu, uf, q, t).items():
                    acc = acc + xi_pows[k] * coef
                val = pref * acc
                if val:
                    entries[(lam, mu)] = val
        return TransferMatrix(states, entries, gamma, u, "exact")
    import numpy as np

    arr = np.zeros((len(rows), len(cols)))
    for i, lam in enumerate(rows):
        for j, mu in enumerate(cols):
            arr[i, j] = transfer_entry_float(lam, mu, float(gamma), float(u), q, t)
    return TransferMatrix(states, arr, gamma, u, "float")


def spot_check_float_entries(tm: TransferMatrix, q: Fraction, t: Fraction,
                             rng, frac: float = 0.01, tol: float = 1e-9) -> int:
    """Compare a sample of float entries against exact rationals.

    Returns the number of checked entries; raises on disagreement beyond tol.
    """
    states = tm.states
    n = len(states)
    count = max(1, int(frac * n * n))
    ring = SeriesRing([], 0)
    for _ in range(count):
        i = rng.randrange(n)
        j = rng.randrange(n)
        lam, mu = states[i], states[j]
        gf = Fraction(tm.gamma).limit_denominator(10**6)
        uf = Fraction(tm.u).limit_denominator(10**6)
        xi = gf * (1 - uf)
        acc = Fraction(0)
        for nu in partitions_up_to(min(weight(lam), weight(mu))):
            if not (contains(lam, nu) and contains(mu, nu)):
                continue
            dl = weight(lam) - weight(nu)
            dm = weight(mu) - weight(nu)
            acc += xi ** (dl + dm) * dims("dim", nu, lam, q, t) \
                * dims("dim'", nu, mu, q, t) \
                / Fraction(_factorial(dl) * _factorial(dm)) * uf ** weight(nu)
        c = float((1 - t) / (1 - q))
        expect = math.exp(c * float(gf) * float(gf) * (float(uf) - 1.0)) * float(acc)
        got = tm.entries[i, j]
        if abs(got - expect) > tol * max(1.0, abs(expect)):
            raise AssertionError(f"float entry check failed at {lam},{mu}")
    return count


def semigroup_defect(gamma, u, v, depth: int, q, t, reserve: int = 4,
                     mode: str = "exact", ring: SeriesRing = None):
    """Max entrywise defect of T(u) T(v) = T(uv) on the safe block.

    The safe block keeps |lam| + |mu| <= depth - reserve, where the truncated
    sum over intermediate states cannot leak within the gamma truncation
    (missing terms carry gamma degree > 2 depth - |lam| - |mu| >= cutoff+1).
    """
    states = partitions_up_to(depth)
    small = [lam for lam in states if weight(lam) <= depth - reserve]
    if mode == "exact":
        tu = transfer_matrix(gamma, u, depth, q, t, mode=mode, ring=ring,
                             row_states=small)
        tv = transfer_matrix(gamma, v, depth, q, t, mode=mode, ring=ring,
                             col_states=small)
        uvf = Fraction(u) * Fraction(v)
        tuv = transfer_matrix(gamma, uvf, depth, q, t, mode=mode, ring=ring,
                              row_states=small, col_states=small)
        zero = ring.zero()
        worst = zero
        worst_is_zero = True
        for lam in small:
            for mu in small:
                if weight(lam) + weight(mu) > depth - reserve:
                    continue
                acc = ring.zero()
                for kap in states:
                    a = tu.entries.get((lam, kap))
                    b = tv.entries.get((kap, mu))
                    if a is not None and b is not None:
                        acc = acc + a * b
                diff = acc - tuv.entries.get((lam, mu), zero)
                if diff:
                    worst_is_zero = False
                    worst = diff
        return Fraction(0) if worst_is_zero else worst
    import numpy as np

    tu = transfer_matrix(gamma, u, depth, q, t, mode=mode)
    tv = transfer_matrix(gamma, v, depth, q, t, mode=mode)
    tuv = transfer_matrix(gamma, float(u) * float(v), depth, q, t, mode=mode)
    prod = tu.entries @ tv.entries
    worst = 0.0
    idx = {lam: i for i, lam in enumerate(states)}
    for lam in states:
        for mu in states:
            if weight(lam) + weight(mu) > depth - reserve:
                continue
            worst = max(worst, abs(prod[idx[lam], idx[mu]]
                                   - tuv.entries[idx[lam], idx[mu]]))
    return worst


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


class TrajectorySpec:
    def __init__(self, beta: float, gamma: float, times, depth: int,
                 seed: int, count: int):
        times = list(times)
        if not times or times[0] != 0.0:
            raise ValueError("times must start at 0")
        if any(b2 <= b1 for b1, b2 in zip(times, times[1:])) or times[-1] >= beta:
            raise ValueError("times must increase strictly inside [0, beta)")
        self.beta = beta
        self.gamma = gamma
        self.times = times
        self.depth = depth
        self.seed = seed
        self.count = count


def _draw(rng, probs) -> int:
    """Inverse-CDF draw with strict inequality (deterministic per seed)."""
    x = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if x < acc:
            return i
    return len(probs) - 1


def sample_trajectories(spec: TrajectorySpec, q: Fraction, t: Fraction,
                        mass_threshold: float = 1e-12):
    """Yield sampled trajectories [(time, partition), ...] for spec.count runs.

    The cyclic law is proportional to prod_i M_i[lam^i, lam^{i+1}] with
    lam^{n+1} = lam^0 and M_i the transfer matrix over the gap to the next
    time (wrapping to beta).  The first state is drawn from the diagonal of
    the full cycle product, later ones from conditional rows times suffix
    products.
    """
    import numpy as np
    import random as _random

    times = spec.times + [spec.beta]
    gaps = [times[i + 1] - times[i] for i in range(len(spec.times))]
    mats = [transfer_matrix(spec.gamma, math.exp(-g), spec.depth, q, t,
                            mode="float").entries for g in gaps]
    states = partitions_up_to(spec.depth)
    n = len(states)
    # suffix[i] = M_i M_{i+1} ... M_{last}
    suffix = [None] * len(mats)
    acc = None
    for i in range(len(mats) - 1, -1, -1):
        acc = mats[i] if acc is None else mats[i] @ acc
        suffix[i] = acc
    cycle = suffix[0]
    diag = np.maximum(cycle.diagonal(), 0.0)
    total = diag.sum()
    if total < mass_threshold:
        raise ValueError("truncated cycle mass is degenerate; raise depth")
    p0 = diag / total

    for k in range(spec.count):
        rng = _random.Random(spec.seed * 1_000_003 + k)
        i0 = _draw(rng, p0)
        out = [(spec.times[0], states[i0])]
        prev = i0
        for step in range(1, len(spec.times)):
            row = mats[step - 1][prev, :]
            back = suffix[step][:, i0] if step < len(mats) else None
            w = row * back if back is not None else row
            w = np.maximum(w, 0.0)
            s = w.sum()
            if s <= 0:
                raise ValueError("conditional mass vanished; raise depth")
            prev = _draw(rng, w / s)
            out.append((spec.times[step], states[prev]))
        yield out


def single_time_marginal_exact(gamma: float, beta: float, depth: int,
                               q: Fraction, t: Fraction):
    """Normalized truncated diagonal of T(e^-beta): the one-time law."""
    import numpy as np

    tm = transfer_matrix(gamma, math.exp(-beta), depth, q, t, mode="float")
    diag = tm.entries.diagonal().copy()
    return tm.states, diag / diag.sum()


def truncated_trace_float(gamma: float, u: float, depth: int,
                          q: Fraction, t: Fraction) -> float:
    """Trace of the transfer matrix over states of weight <= depth."""
    return sum(transfer_entry_float(lam, lam, gamma, u, q, t)
               for lam in partitions_up_to(depth))


def transfer_cycle_weight(lams, gamma: Fraction, u_list, q: Fraction,
                          t: Fraction) -> Fraction:
    """Cyclic product of transfer entries, scalar prefactors dropped.

    Gap decay factors u_i = e^{-(b_{i+1}-b_i)} are passed directly as exact
    rationals; the dropped exponential prefactors do not depend on the states,
    so this is proportional to the finite-dimensional law at fixed times.
    """
    n = len(lams)
    total = Fraction(1)
    for i in range(n):
        coeffs = _entry_power_coeffs(lams[i], lams[(i + 1) % n],
                                     Fraction(u_list[i]), q, t)
        xi = gamma * (1 - Fraction(u_list[i]))
        total *= sum((c * xi**k for k, c in coeffs.items()), Fraction(0))
    return total


def plancherel_skew_value(kind: str, lam: tuple, mu: tuple, xi: Fraction,
                          q: Fraction, t: Fraction) -> Fraction:
    """Exact one-step skew value xi^d / d! times the Young-graph path sum."""
    if not contains(lam, mu):
        return Fraction(0)
    d = weight(lam) - weight(mu)
    paths = dims("dim" if kind == "P" else "dim'", mu, lam, q, t)
    return xi**d / Fraction(_factorial(d)) * paths


def marginal_process_weight(lams, gamma: Fraction, u_list, q: Fraction,
                            t: Fraction) -> Fraction:
    """Unnormalized periodic-process weight of a tuple of time marginals.

    Builds the cyclic weight with the Plancherel specializations attached to
    the time grid: writing v_i = u_0 ... u_{i-1} (so e^{b_i} = 1/v_i),

        rho^+_0 : gamma (1 - u_n),   rho^+_i : gamma (1 - u_{i-1}) / v_i,
        rho^-_i : gamma v_{i-1} (1 - u_{i-1}),   u = u_0 ... u_n.

    Each inner-partition sum is finite, so the value is exact.
    """
    n1 = len(lams)
    u_list = [Fraction(x) for x in u_list]
    if len(u_list) != n1:
        raise ValueError("need one decay factor per time gap")
    v = [Fraction(1)]
    for x in u_list:
        v.append(v[-1] * x)
    u_total = v[-1]
    xis_plus = [gamma * (1 - u_list[-1])]  # rho^+_0
    for i in range(1, n1):
        xis_plus.append(gamma * (1 - u_list[i - 1]) / v[i])
    xis_minus = [gamma * v[i - 1] * (1 - u_list[i - 1]) for i in range(1, n1 + 1)]
    total = Fraction(1)
    for i in range(1, n1 + 1):
        lam_i = lams[i - 1]
        lam_next = lams[i % n1]
        ubase = u_total if i == n1 else Fraction(1)
        acc = Fraction(0)
        for mu in partitions_up_to(min(weight(lam_i), weight(lam_next))):
            qv = plancherel_skew_value("Q", lam_i, mu, xis_minus[i - 1], q, t)
            if not qv:
                continue
            pv = plancherel_skew_value("P", lam_next, mu, xis_plus[i % n1], q, t)
            if not pv:
                continue
            acc += ubase ** weight(mu) * qv * pv
        total *= acc
    return total


def marginal_chi_square(gamma: float, beta: float, depth: int, q: Fraction,
                        t: Fraction, samples: int, seed: int,
                        min_expected: float = 5.0) -> dict:
    """Goodness-of-fit of sampled single-time states against the exact law.

    Bins with expected count below ``min_expected`` are pooled into a tail
    bin before the chi-square statistic is formed.
    """
    from scipy.stats import chi2 as _chi2

    states, probs = single_time_marginal_exact(gamma, beta, depth, q, t)
    spec = TrajectorySpec(beta, gamma, [0.0], depth, seed, samples)
    counts = {lam: 0 for lam in states}
    for traj in sample_trajectories(spec, q, t):
        counts[traj[0][1]] += 1
    expected = [p * samples for p in probs]
    observed = [counts[lam] for lam in states]
    main = [(o, e) for o, e in zip(observed, expected) if e >= min_expected]
    tail_o = sum(o for o, e in zip(observed, expected) if e < min_expected)
    tail_e = sum(e for o, e in zip(observed, expected) if e < min_expected)
    if tail_e > 0:
        main.append((tail_o, tail_e))
    stat = sum((o - e) ** 2 / e for o, e in main)
    dof = len(main) - 1
    pvalue = float(_chi2.sf(stat, dof))
    top = sorted(zip(states, probs, observed), key=lambda x: -x[1])[:8]
    return {"statistic": stat, "dof": dof, "p_value": pvalue,
            "bins": len(main), "samples": samples,
            "marginals": [{"partition": list(lam), "expected": p,
                           "observed_frequency": o / samples}
                          for lam, p, o in top]}


def trajectories_to_jsonl(trajs) -> str:
    lines = []
    for k, traj in enumerate(trajs):
        for b, lam in traj:
            lines.append(json.dumps(
                {"sample": k, "time": b, "partition": list(lam)}))
    return "\n".join(lines) + "\n"
