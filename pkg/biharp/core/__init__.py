# Library core: dyadic geometry, Haar expansions, atomic decompositions,
# Pietsch weights and the lattice factorization.
