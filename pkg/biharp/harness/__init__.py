# Ensembles, oracle, suite runner and report emission
