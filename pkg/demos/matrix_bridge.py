"""Finite matrix side: Pauli words, the product state, and the bridge.

The groupoid algebra at horizon n lands in 2^n x 2^n matrices: sigma_1 at
site k goes to the flip unitary V_{e_k}, sigma_3 goes to multiplication by
psi_k.  The product state with weights (lam, 1-lam) per site matches the
canonical weight through that map, which is checked here on random words.
"""

import numpy as np

from flipchain import (
    Bernoulli,
    PauliWord,
    convolve,
    glimm_map,
    gns_compare_random,
    gns_expectation,
    pauli_operator,
    powers_state,
)

lam = 0.3
n = 4

# site 1 is the first kron factor
z1 = pauli_operator(PauliWord.from_map({1: 3}), n)
print("sigma_3 at site 1, diagonal head:", np.diag(z1.entries)[:4].real)

# expectations in the product state
print("<sigma_3(1)> =", powers_state(z1, lam), "(expect", 2 * lam - 1, ")")
x1 = pauli_operator(PauliWord.from_map({1: 1}), n)
print("<sigma_1(1)> =", powers_state(x1, lam), "(off-diagonal, expect 0)")

w = PauliWord.from_map({1: 3, 3: 3})
zz = pauli_operator(w, n)
print("<sigma_3(1) sigma_3(3)> =", powers_state(zz, lam),
      "(expect", (2 * lam - 1) ** 2, ")")

# the same word through the groupoid algebra
mu = Bernoulli(lam)
print("algebra-side expectation:", gns_expectation(w, mu))

# the map is multiplicative word by word
u = PauliWord.from_map({1: 1})
v = PauliWord.from_map({2: 3})
lhs = glimm_map(PauliWord.from_map({1: 1, 2: 3}), mu)
rhs = convolve(glimm_map(u, mu), glimm_map(v, mu))
dev = max(
    float(np.max(np.abs(lhs.term(wd).values - rhs.term(wd).values)))
    for wd in set(lhs.support) | set(rhs.support)
)
print("multiplicativity deviation:", dev)

# the randomized cross-check the acceptance gate runs at scale
rep = gns_compare_random(n=4, trials=50, lam=lam, seed=7)
print("random words, max deviation:", rep["max_abs_deviation"])
