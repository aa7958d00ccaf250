"""How a projective measurement turns a superposition into a mixture.

Run with:  python3 demos/measurement_and_dephasing.py
"""

import numpy as np

from collapselab.measurement import (
    born_distribution,
    dephasing_channel,
    ideal_measurement_unitary,
    ring_momentum_projectors,
    spin_projectors,
)
from collapselab.qlin import (
    PureState,
    TensorSpace,
    evolve,
    partial_trace,
    purity,
    tensor_product,
    DensityMatrix,
)

np.set_printoptions(precision=4, suppress=True)

print("A spin prepared in the superposition (0.6, 0.8):")
rho = PureState(TensorSpace((2,)), np.array([0.6, 0.8])).density()
print(np.asarray(rho.matrix).real)
print(f"purity = {purity(rho):.4f} (pure)")

updown = spin_projectors(0.0)
print("\nBorn probabilities in the up/down basis:")
for outcome in born_distribution(rho, updown):
    print(f"  spin {outcome.label:+d}: p = {outcome.probability:.4f}")

print("\nMeasuring without reading the result applies P rho P for each branch:")
dephased = dephasing_channel(rho, updown)
print(np.asarray(dephased.matrix).real)
print(f"purity = {purity(dephased):.4f} (a mixture now; coherences are gone)")

print("\nThe same channel, derived instead from a pointer that copies the spin:")
u = ideal_measurement_unitary(updown, pointer_dim=2)
print("coupling unitary (a CNOT):")
print(np.asarray(u.matrix).real)
pointer0 = np.zeros((2, 2), dtype=complex)
pointer0[0, 0] = 1.0
joint = DensityMatrix(TensorSpace((2, 2)), tensor_product(rho.matrix, pointer0))
after = partial_trace(evolve(joint, u), keep=(0,))
print("spin state after coupling and forgetting the pointer:")
print(np.asarray(after.matrix).real)
print("identical to the channel output; nothing non-unitary ever happened.")

print("\nA 5-site ring, localized on site 3, measured in the momentum basis:")
site3 = PureState(TensorSpace((5,)), np.eye(5)[2]).density()
for outcome in born_distribution(site3, ring_momentum_projectors(5)):
    print(f"  p(momentum = {outcome.label:.4f}) = {outcome.probability:.4f}")
print("a sharp position means a flat momentum distribution, and vice versa:")
uniform = PureState(TensorSpace((5,)), np.full(5, 5 ** -0.5)).density()
probs = [f"{o.probability:.4f}" for o in born_distribution(uniform, ring_momentum_projectors(5))]
print(f"  uniform superposition -> momentum probabilities {probs}")
