"""Bolometric self-oscillation and mechanical mode locking thresholds.

Light absorbed by the mirror heats it; the temperature shifts the
mechanical frequency and exerts a thermal force with a lag set by the
thermal decay rate.  The displacement-dependent part of the absorption
then adds (anti)damping: gamma_H0 from the average intensity (red
detuning destabilizes), and the much larger gamma_H1 from the
motion-locked pulse train (blue detuning destabilizes).
"""

import numpy as np

from ringlock import thermomech as tm

omega_m = 2 * np.pi * 4e5
mech = tm.MechParams(m_m=1e-12, omega_m=omega_m, gamma_m=0.005 * omega_m,
                     theta_ph=0.0, theta_fh=-1e-9, kappa_m=0.01 * omega_m)
red = tm.AbsorptionModel(a_h0=1e5, k_a1=+1e4)
blue = tm.AbsorptionModel(a_h0=1e5, k_a1=-1e4)

l_seo = tm.seo_threshold(mech, red)
print(f"self-oscillation threshold (red detuning): L0* = {l_seo:.1f}")
print(f"  (blue detuning: {tm.seo_threshold(mech, blue)} -- stabilizing)")

t_n = 2.0 * omega_m / 4.0e4
l_mml = tm.mml_threshold(mech, blue, t_n)
print(f"mode-locking threshold (blue detuning):    L0* = {l_mml:.2e}")
print(f"  ratio MML/SEO = {l_mml / l_seo:.2e}"
      f"  (~ T_N/(2 w_m) = {t_n / (2 * omega_m):.2e})")

print("\nringdown check against the linear-response formulas at 0.5 L0*:")
l0 = 0.5 * l_seo
dg, dw = tm.linear_response_oracle(mech, red, l0, omega_m)
print(f"  predicted damping shift: {dg:+.1f} 1/s "
      f"(gamma_H0 formula: {tm.gamma_h0(mech, red, l0):+.1f})")
dt = 2 * np.pi / (200 * omega_m)
traj = tm.simulate(mech, red, tm.IntensityDrive.cw(l0), x0=1e-7, v0=0.0,
                   t_end=14.0 / mech.kappa_m + 5.0 / (mech.gamma_m + dg),
                   dt=dt, store_every=2)
keep = traj.time > 14.0 / mech.kappa_m
sliced = tm.MirrorTrajectory(traj.time[keep], traj.x[keep], traj.v[keep],
                             traj.t_r_rel[keep])
w_fit, g_fit = tm.ringdown_extract(sliced)
print(f"  simulated damping: {g_fit:.1f} 1/s vs predicted "
      f"{mech.gamma_m + dg:.1f} 1/s")

print("\nbracketing the SEO threshold (growth above, decay below):")
for fac in (0.95, 1.05):
    traj = tm.simulate(mech, red, tm.IntensityDrive.cw(fac * l_seo),
                       x0=1e-8, v0=0.0, t_end=3.0 / (0.05 * mech.gamma_m),
                       dt=2 * np.pi / (150 * omega_m), store_every=3)
    keep = traj.time > 14.0 / mech.kappa_m
    sliced = tm.MirrorTrajectory(traj.time[keep], traj.x[keep],
                                 traj.v[keep], traj.t_r_rel[keep])
    _, g_fit = tm.ringdown_extract(sliced)
    verdict = "decays" if g_fit > 0 else "grows"
    print(f"  L0 = {fac:.2f} L0*: effective damping {g_fit:+8.1f} 1/s "
          f"-> {verdict}")
