"""Smoke test for the pmdyn_py extension module."""

import math

import pmdyn_py as pm


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    p = pm.SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0, D=1.0)
    close(p.xi, math.sqrt(1.0 + 2.0), 1e-12)
    close(p.eta, math.sqrt(4.0 + 0.81), 1e-12)
    energies = sorted(p.spectrum()["energies"])
    close(energies[0], -p.eta, 1e-10)

    dc = pm.SystemParams.critical_d(1.0, 0.9, 2.0, 1.0)
    close(dc, 1.676305, 1e-6)

    baths = pm.BathParams(T1=1.25, T2=0.75, gamma1=0.01, gamma2=0.01, gamma0_ratio=200)
    close(baths.gamma0, 2.0, 1e-15)
    prop = pm.Propagator(p, baths)
    r = prop.rates()
    assert r["X1"] > 0 and r["Y2"] > 0

    bell = pm.bell_psi_plus()
    close(pm.concurrence(bell), 1.0, 1e-12)
    close(pm.discord(bell, "A"), 1.0, 1e-9)
    rows = prop.trajectory(bell, [0.0, 10.0, prop.settling_time()])
    close(rows[0]["concurrence"], 1.0, 1e-12)

    late = prop.evolve(bell, prop.settling_time())
    steady = prop.asymptotic_state()
    dev = max(abs(late[i][j] - steady[i][j]) for i in range(4) for j in range(4))
    assert dev < 1e-9, dev
    close(sum(steady[k][k].real for k in range(4)), 1.0, 1e-12)

    oracle = pm.integrate(bell, p, baths, [1.0, 5.0])
    closed = prop.evolve(bell, 5.0)
    dev = max(abs(oracle[1][i][j] - closed[i][j]) for i in range(4) for j in range(4))
    assert dev < 1e-8, dev

    equal = pm.Propagator(p, pm.BathParams(1.0, 1.0, 0.3, 0.1, gamma0=5.0))
    gibbs = pm.gibbs_state(p, 1.0)
    steady = equal.asymptotic_state()
    dev = max(abs(gibbs[i][j] - steady[i][j]) for i in range(4) for j in range(4))
    assert dev < 1e-12, dev

    rep = pm.report(pm.werner_psi_plus(0.3))
    assert rep["concurrence"] == 0.0 and rep["discord_A"] > 0.0

    for bad in (lambda: pm.SystemParams(1.0, 1.5, 2.0, 1.0, 1.0), lambda: pm.werner_psi_plus(2.0)):
        try:
            bad()
        except pm.PmdynError:
            pass
        else:
            raise AssertionError("expected PmdynError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
