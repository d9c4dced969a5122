"""A universal CV cloner with a thermal ancilla, and why it fails as a meter.

As lambda -> 1 each clone tends to (rho + thermal)/2, mimicking the qubit
depolarizing cloner, yet the separate X and Y measurements on the clones pick
up a second-moment excess growing like 2 lambda/(1 - lambda).
"""
import numpy as np

from clonometry import werner

vac = np.array([1.0])
for lam in (0.9, 0.99):
    th = werner.ThermalWeight(lam, tail=1e-6)
    res = werner.regularized_clone(vac, th, dense=False)
    dev = np.max(np.abs(res.reduced - werner.depolarizing_target(vac, th)))
    print(f"lambda={lam}: nmax={th.nmax}, K={res.k_factor:.5f}, distance to depolarizing form {dev:.2e}")

print("\nlambda   excess <x^2>   (1/8)(1 + 2 lam/(1-lam))   rescaled added noise")
for lam in (0.8, 0.9, 0.95):
    rep = werner.moments_g(lam, vac)
    ex = rep["excess x^2"]
    print(f"{lam:5.2f}   {ex.measured:12.4f}   {ex.target:24.4f}   {rep['rescaled added noise x'].measured:10.3f}")
print("the covariant cloner reaches 1/4; this one does not")

rep = werner.covariance_comparison(0.5, 1.0, 0.5)
print("\nrank of the covariant projector P:", int(rep["rank P"].measured))
print("rank of the symmetric projector S2:", int(rep["rank S2"].measured))
