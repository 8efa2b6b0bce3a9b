"""Particle swarm optimization with global-best topology.

Constriction-style constant inertia w = 0.7298 (Clerc's constriction
value, a documented fixed internal -- the grid only tunes swarm size
and the two acceleration coefficients).  Velocities are clamped to half
the box width per dimension; positions are clipped to the box and a
clipped coordinate has its velocity zeroed.
"""

import numpy as np

from .base import register, rule_le, uniform_init

__all__ = []

_INERTIA = 0.7298


@register("vanilla_pso", n_init=lambda cfg: cfg["NP"])
def vanilla_pso(tracker, instance, config, rng):
    np_ = config["NP"]
    phi_1 = config["phi_1"]
    phi_2 = config["phi_2"]
    lo = instance.bounds[:, 0]
    hi = instance.bounds[:, 1]
    vmax = 0.5 * (hi - lo)

    pos = uniform_init(rng, instance.bounds, np_)
    vel = rng.uniform(-vmax, vmax, pos.shape)
    fit, viol = tracker.batch(pos)

    pbest = pos.copy()
    pfit = fit.copy()
    pviol = viol.copy()

    def gbest_index():
        feas = pviol <= 0.0
        if feas.any():
            idx = np.flatnonzero(feas)
            return idx[np.argmin(pfit[idx])]
        return np.lexsort((pfit, pviol))[0]

    while True:
        g = gbest_index()
        r1 = rng.random(pos.shape)
        r2 = rng.random(pos.shape)
        vel = (
            _INERTIA * vel
            + phi_1 * r1 * (pbest - pos)
            + phi_2 * r2 * (pbest[g] - pos)
        )
        vel = np.clip(vel, -vmax, vmax)
        pos = pos + vel
        clipped = (pos < lo) | (pos > hi)
        pos = np.clip(pos, lo, hi)
        vel = np.where(clipped, 0.0, vel)

        fit, viol = tracker.batch(pos)
        better = rule_le(fit, viol, pfit, pviol)
        pbest = np.where(better[:, None], pos, pbest)
        pfit = np.where(better, fit, pfit)
        pviol = np.where(better, viol, pviol)
