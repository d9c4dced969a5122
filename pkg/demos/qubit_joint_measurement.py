"""Joint spin measurement from three approximate clones.

Clone a qubit three times, measure sigma_x, sigma_y, sigma_z on the three
outputs and compare the resulting total uncertainty with the spin-coherent
measurement that is optimal for the same task.
"""
import numpy as np

from clonometry import qubit

ket = np.array([np.cos(0.4), np.exp(0.9j) * np.sin(0.4)])

params = qubit.CloneParams(1, 3)
clones = qubit.clone(params, ket)
single = qubit.single_clone(clones, 3)
print("shrinking factor eta(1,3) =", qubit.shrinking_factor(params))
print("input Bloch vector  ", np.round(qubit.bloch_vector(np.outer(ket, ket.conj())), 4))
print("clone Bloch vector  ", np.round(qubit.bloch_vector(single), 4))

print("\nPOVM elements from the clones vs (1/8)[1 + (5/9) m.sigma]:")
for m, element in qubit.derived_povm_family().items():
    dev = np.max(np.abs(element - qubit.closed_form_povm(m)))
    print(f"  m = {m}: max deviation {dev:.1e}")

report = qubit.estimate_moments(ket)
print("\nclone-based total uncertainty:", round(report["<dJ^2>_e"].measured, 12))
povm = qubit.SpinCoherentPovm(0.5)
print("spin-coherent total uncertainty:", round(qubit.coherent_total_uncertainty_quadrature(povm, ket), 12))
print("unphysical ideal POVM min eigenvalue:", round(qubit.ideal_povm_min_eigenvalue(), 6))
