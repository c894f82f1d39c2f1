"""Polaron lattice dynamics in the biased triangular-lattice transverse-field Ising antiferromagnet.

Subpackages:

* ``lattice``  -- periodic triangular-lattice geometry and sublattice coloring
* ``model``    -- classical Ising energies, ordered states, domain walls
* ``swtheory`` -- second-order effective Hamiltonian of the two-site wall subspace
* ``ed``       -- dense exact diagonalization of small clusters (validation oracle)
* ``qmc``      -- Suzuki-Trotter path-integral Monte Carlo relaxation dynamics
* ``analysis`` -- reconfiguration rates and temperature-rescaling collapse fits
* ``cli``      -- batch experiment runner (``polaron-tfim`` entry point)
"""

__version__ = "0.1.0"
