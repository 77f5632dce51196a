"""Cylinder measures and their modular functions.

Two measure families live on the bit space: an i.i.d. product measure with
parameter lambda per site, and a Boltzmann weight for nearest-neighbour
coupling J.  Both report the Radon-Nikodym factor Delta of a flip, which is
what the whole modular theory downstream runs on.
"""

from fractions import Fraction

from flipchain import (
    Bernoulli,
    CylinderFunction,
    GroupoidElement,
    IsingBoltzmann,
    Prefix,
    e,
    integrate,
    inverse,
    ising_transition_energy,
    translation_covariance_check,
)

lam = Fraction(3, 10)
mu = Bernoulli(lam)
print("exact arithmetic:", mu.exact)

# weight of the cylinder fixing the first two bits to (1, 0)
p = Prefix.from_bits([1, 0])
print("weight of [1 0 * * ...] =", mu.cylinder_weight(p))

# flipping site 1 away from a lambda-weighted bit costs (1-lam)/lam
g = GroupoidElement(Prefix.from_bits([1, 0, 0]), e(1))
print("Delta at x1=1, flip {1}:", mu.delta(g))     # 7/3
print("Delta at the inverse:", mu.delta(inverse(g)))  # 3/7

# psi_k is +1 on bit 0, -1 on bit 1; its mean is 2*lam - 1
psi1 = CylinderFunction.psi(1, 3, exact=True)
print("integral of psi_1 =", integrate(mu, psi1), "(expect", 2 * lam - 1, ")")

# the product measure is invariant under every flip after reweighting,
# which is exactly what the covariance report checks
rep = translation_covariance_check(mu, e(2), 4)
print("covariance deviation:", rep["max_rel_deviation"], "exact:", rep["exact_zero"])

# the coupled measure: energy differences instead of ratios
nu = IsingBoltzmann(1.0)
flip2 = GroupoidElement(Prefix(5, 0), e(2))
print("interior flip energy:", ising_transition_energy(1.0, flip2))   # 4J
flip1 = GroupoidElement(Prefix(5, 0), e(1))
print("boundary flip energy:", ising_transition_energy(1.0, flip1))   # 2J
print("Boltzmann Delta of the interior flip:", nu.delta(flip2))

rep = translation_covariance_check(nu, e(3), 6)
print("coupled covariance deviation:", rep["max_rel_deviation"])
