"""Smoke test for the rectkernel_py extension.

Build and install first, e.g.

    pip install maturin
    maturin develop --release -m crates/python/Cargo.toml

or copy target/release/librectkernel_py.so to rectkernel_py.so on PYTHONPATH.
"""

import cmath
import math

import rectkernel_py as rk


def main() -> None:
    free = rk.PotentialSpec(0.0, 0.0)
    engine = rk.Engine(free)

    # Free thermal kernel in closed form.
    beta, x, xp = 2.0, -1.0, -2.5
    rho = engine.density_matrix(x, xp, beta)
    exact = math.exp(-((x - xp) ** 2) / (4 * beta)) / (2 * math.sqrt(math.pi * beta))
    assert abs(rho.real - exact) < 1e-10, (rho, exact)
    assert rho.mode == "thermal"

    # Free propagator at complex time.
    tau = complex(1.0, -0.3)
    k = engine.propagator_at(x, xp, tau)
    k0 = 0.5 * cmath.sqrt(1 / (1j * math.pi * tau)) * cmath.exp(1j * (x - xp) ** 2 / (4 * tau))
    assert abs(k.value - k0) < 1e-9, (k, k0)

    # Flux conservation for a barrier above its top.
    barrier = rk.PotentialSpec(10.0, 5.0)
    a = rk.amplitudes(20.0, barrier)
    flux = abs(a["r"]) ** 2 + abs(a["t"]) ** 2  # flux-normalised amplitudes
    assert abs(flux - 1.0) < 1e-12, flux

    # Well: bound states from the amplitude denominator agree with the grid.
    well = rk.PotentialSpec(-30.0, 5.0)
    energies = rk.bound_state_energies(well)
    assert len(energies) >= 1 and all(-30 < e < 0 for e in energies), energies

    # Engine continuum vs. finite-difference oracle for a barrier.
    full, continuum, bound = rk.oracle_density(rk.PotentialSpec(10.0, 0.0), 10.0, 0.5, -1.0)
    rho_b = rk.Engine(rk.PotentialSpec(10.0, 0.0)).density_matrix(0.5, -1.0, 10.0).real
    assert bound == 0.0 and abs(rho_b - continuum) < 1e-3 * abs(continuum), (rho_b, continuum)

    # Invalid input raises ValueError.
    try:
        engine.density_matrix(0.0, -1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("point on a step should be rejected")

    rows = rk.sweep_figure(5)
    assert len(rows) == 37 * 40 and all(r[5] is not None for r in rows)

    print("rectkernel_py smoke test passed")


if __name__ == "__main__":
    main()
