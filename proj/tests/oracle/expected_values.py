"""Independent high-precision reference values frozen into the unit tests.

Run with `python3 tests/oracle/expected_values.py`; needs mpmath.
Yields and phase errors are obtained from Poisson-splitting generating
functions instead of composition enumeration, so they do not share code
paths with the C++ implementation.
"""

import itertools

import mpmath as mp

mp.mp.dps = 40


def h(x):
    x = mp.mpf(x)
    return -x * mp.log(x, 2) - (1 - x) * mp.log(1 - x, 2)


def e_delta(m):
    m = mp.mpf(m)
    return mp.pi / m - m**2 / mp.pi**2 * mp.sin(mp.pi / m) ** 3


def gain_avg(a, pd):
    a, pd = mp.mpf(a), mp.mpf(pd)
    return 1 - mp.e ** (-a) + 2 * pd * mp.e ** (-a)


def qber_avg(a, pd, m):
    a, pd = mp.mpf(a), mp.mpf(pd)
    return (pd + a * e_delta(m)) * mp.e ** (-a) / gain_avg(a, pd)


def branch_success(a_l, pd):
    """Success probability of one branch whose surviving photon count is Poisson(a_l)."""
    pd = mp.mpf(pd)
    p0 = mp.e ** (-a_l)
    return p0 * 2 * pd * (1 - pd) + (1 - p0) * (1 - pd)


def gain_phase(virtual, survival, pd):
    virtual = [mp.mpf(v) for v in virtual]
    survival = [mp.mpf(s) for s in survival]
    t = sum(virtual)
    q = mp.mpf(1)
    q_neg = mp.mpf(1)
    for v, s in zip(virtual, survival):
        q *= branch_success(v * s, pd)
        q_neg *= branch_success(-v * s, pd)
    odd = (q - mp.e ** (-2 * t) * q_neg) / 2
    return q, odd / q


def brute_yield(shares, survival, pd, k):
    """Y_k by enumerating every photon's (branch, survives) choice."""
    pd = mp.mpf(pd)
    total = mp.mpf(0)
    choices = [(b, alive) for b in range(len(shares)) for alive in (0, 1)]
    for combo in itertools.product(choices, repeat=k):
        p = mp.mpf(1)
        counts = [0] * len(shares)
        for b, alive in combo:
            p *= mp.mpf(shares[b]) * (survival[b] if alive else 1 - mp.mpf(survival[b]))
            counts[b] += alive
        for n in counts:
            p *= (1 - pd) if n > 0 else 2 * pd * (1 - pd)
        total += p
    return total


def marginal(e, m):
    e = mp.mpf(e)
    return sum(mp.binomial(m - 1, 2 * k + 1) * e ** (2 * k + 1) * (1 - e) ** (m - 2 * k - 2)
               for k in range((m - 2) // 2 + 1))


def rate(n, m, prefactor, a, pd, e_x, f):
    q = gain_avg(a, pd)
    e = qber_avg(a, pd, m)
    worst = max(h(marginal(e, j)) for j in range(2, n + 1))
    return prefactor * q ** (n - 1) * (1 - f * worst - h(e_x))


def y2_closed(nu, om, ta, q, q0):
    """Three-decoy Y2 lower bound for N=3 written out term by term."""
    nu, om, ta = (mp.mpf(x) * 2 for x in (nu, om, ta))
    g = [mp.e ** nu * q[0] - q0, mp.e ** om * q[1] - q0, mp.e ** ta * q[2] - q0]
    # Solve sum w_i u_i^j = delta_{j2} for j = 1..3 exactly.
    a = mp.matrix([[nu, om, ta], [nu**2, om**2, ta**2], [nu**3, om**3, ta**3]])
    w = mp.lu_solve(a, mp.matrix([0, 1, 0]))
    return 2 * sum(w[i] * g[i] for i in range(3))


def main():
    eta50 = mp.mpf("0.65") * mp.mpf(10) ** (-1)
    pd = mp.mpf("7.2e-8")
    out = {}
    out["binary_entropy(0.25)"] = h("0.25")
    out["p_odd(0.2666)"] = mp.e ** (-mp.mpf("0.2666")) * mp.sinh(mp.mpf("0.2666"))
    out["poisson(0.2666,2)"] = mp.e ** (-mp.mpf("0.2666")) * mp.mpf("0.2666") ** 2 / 2
    out["e_delta(13)"] = e_delta(13)
    out["e_delta(17)"] = e_delta(17)
    out["e_delta(1e6)"] = e_delta(10**6)
    out["left_click(0.00866)"] = 1 - mp.e ** (-mp.mpf("0.00866"))
    out["branch_success_gain(0.00866,7.2e-8)"] = (
        (1 - (1 - pd) * mp.e ** (-mp.mpf("0.00866"))) * (1 - pd) + (1 - pd) * mp.e ** (-mp.mpf("0.00866")) * pd)
    out["gain_avg(0.0086645,7.2e-8)"] = gain_avg("0.0086645", pd)
    out["gain_avg(0.01,1e-7)"] = gain_avg("0.01", "1e-7")
    out["qber_avg(0.0086645,7.2e-8,13)"] = qber_avg("0.0086645", pd, 13)
    out["slice_avg_wrong(13)"] = (1 - (mp.sin(mp.pi / 13) / (mp.pi / 13)) ** 3) / 2
    out["Y2(sym,0.065,0)"] = brute_yield([0.5, 0.5], [eta50, eta50], 0, 2)
    out["Y3(sym,0.065,7.2e-8)"] = brute_yield([0.5, 0.5], [eta50, eta50], pd, 3)
    out["Y4(red,0.065,7.2e-8)"] = brute_yield([mp.mpf("0.6"), mp.mpf("0.4")], [eta50 / mp.mpf("1.5"), eta50], pd, 4)
    mu = mp.mpf("0.1333")
    q, ex = gain_phase([mu, mu], [eta50, eta50], pd)
    out["gain(N3,mu0.1333,L50)"] = q
    out["phase_error(N3,mu0.1333,L50)"] = ex
    out["rate(N3,L50,mu0.1333,M13)"] = rate(3, 13, (mp.mpf(2) / 13) ** 2, eta50 * mu, pd, ex, mp.mpf("1.16"))
    mu = mp.mpf("0.1059")
    q, ex = gain_phase([mu * mp.mpf("1.5"), mu], [eta50 / mp.mpf("1.5"), eta50], pd)
    out["gain(reduced,mu0.1059,L50)"] = q
    out["phase_error(reduced,mu0.1059,L50)"] = ex
    out["rate(reduced,L50,mu0.1059,M13)"] = rate(3, 13, (mp.mpf(2) / 13) ** 2, eta50 * mu, pd, ex, mp.mpf("1.16"))
    # Decoy anchor at 150 km.
    eta150 = mp.mpf("0.65") * mp.mpf(10) ** (-3)
    decoys = [mp.mpf("0.0204583"), mp.mpf("0.0182017"), mp.mpf("9.27216e-5")]
    qs = [gain_avg(eta150 * x, pd) ** 2 for x in decoys]
    q0 = (2 * pd * (1 - pd)) ** 2
    y2l = y2_closed(*decoys, qs, q0)
    out["Y2L(anchor)"] = y2l
    mu = mp.mpf("0.104815")
    t = 2 * mu
    qmu = gain_avg(eta150 * mu, pd) ** 2
    exu = 1 - mp.e ** (-t) * q0 / qmu - mp.e ** (-t) * t**2 / 2 * y2l / qmu
    out["EXU(anchor)"] = exu
    out["rate_lower(anchor)"] = rate(3, 13, (mp.mpf(2) / 13) ** 2, eta150 * mu, pd, exu, mp.mpf("1.16"))
    out["Q0(7.2e-8,N3)"] = q0
    out["qber_star(0.00866,1e-7,0.015)"] = (
        (1 - mp.mpf("1e-7")) * mp.e ** (-mp.mpf("0.00866") * (1 - mp.mpf("0.015")))
        * (1 - (1 - mp.mpf("1e-7")) * mp.e ** (-mp.mpf("0.00866") * mp.mpf("0.015")))
        / gain_avg("0.00866", "1e-7"))
    for key, value in out.items():
        print(f"{key:40s} {mp.nstr(value, 17)}")


if __name__ == "__main__":
    main()
