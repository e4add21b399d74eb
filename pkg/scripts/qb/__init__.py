"""qb – spin-chain quantum battery engine (operators, dynamics, observables, sweeps)."""
