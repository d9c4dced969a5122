"""Two constructions of the same CV cloner.

One uses a three-mode unitary acting on the input and a twin-beam ancilla;
the other uses the beam-splitter projector directly. Their clones agree.
"""
from clonometry import fock
from clonometry.hilbert import trace_distance

lam = 1 / 3
print("twin beam photons:", fock.twin_beam_photons(lam), " gain:", fock.twin_beam_gain(lam))
small, big = fock.FockSpace(10), fock.FockSpace(40)
for alpha in (0.0, 0.5 + 0.3j, 0.8):
    uc, ua = fock.unitary_route_reductions(fock.coherent_state(small, alpha), small, lam)
    out = fock.clone_channel_cv(fock.coherent_state(big, alpha), 1.0, big)
    pc, pa = (r[:11, :11] for r in fock.clone_reductions(out, big))
    print(f"alpha={alpha}: route distance {trace_distance(uc, pc):.1e}, clone asymmetry {trace_distance(uc, ua):.1e}")
