"""Second-order effective Hamiltonian of the two-site domain-wall subspace.

Working basis, fixed everywhere: (|-1,-1>, |-1,+1>, |+1,-1>, |+1,+1>) for the
two active sites. Relative to the reference energy of the |-1,+1> / |+1,-1>
pair, the diagonal part is

    H0 = diag(-2 h_z + 2 J Z_h,  0,  0,  2 h_z - 2 J Z_p),

where Z_h and Z_p are caller-supplied local coordination counts of the
emptied and filled site (the two virtual-state gaps are the single-flip
costs in the surrounding frozen spin environment). The transverse field
contributes V with entries -h_x on every single-flip link.

The antisymmetric generator S of the rotation exp(S) that removes V to first
order solves V + [S, H0] = 0 elementwise:

    S_ab = V_ab / (E_a - E_b)        (E_a != E_b; zero on degenerate pairs)

and has the closed form built from

    alpha = h_x / (2 (h_z - J Z_h)),   beta = h_x / (2 (h_z - J Z_p)).

The rotated Hamiltonian to second order is H' = H0 + [S, V] / 2. Its inner
2x2 block carries the pair-exchange element of magnitude

    t = lambda * h_x**2,   lambda = ((1 / (h_z - J Z_h)) + (1 / (-h_z + J Z_p))) / 2,

the effective hopping amplitude of the occupied site, while all elements
linking the pair states to the creation/annihilation states vanish
identically: single flips inside a wall are first-order forbidden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateEnvironmentError, ResonantDenominatorError

#: Basis order used for every 4x4 matrix in this module.
BASIS = ("|-1,-1>", "|-1,+1>", "|+1,-1>", "|+1,+1>")

#: (row, col) positions of the single-flip links carrying -h_x.
_V_LINKS = ((0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2))

#: Positions connecting the degenerate pair to the virtual states; these must
#: carry no first-order (order h_x) element after the rotation.
FIRST_ORDER_POSITIONS = _V_LINKS


@dataclass(frozen=True)
class SWSubspace:
    """The 4-dimensional two-site subspace with its split Hamiltonian.

    ``reference_energy`` is the scalar subtracted from the diagonal so that
    the degenerate pair sits at zero; add it back to recover absolute
    energies of an embedding.
    """

    J: float
    h_z: float
    h_x: float
    Z_h: int
    Z_p: int
    H0: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    reference_energy: float = 0.0

    @property
    def gap_h(self) -> float:
        """Virtual-state cost of emptying the occupied site."""
        return -2.0 * self.h_z + 2.0 * self.J * self.Z_h

    @property
    def gap_p(self) -> float:
        """Virtual-state cost of filling the empty site."""
        return 2.0 * self.h_z - 2.0 * self.J * self.Z_p


@dataclass(frozen=True)
class SWResult:
    """Bundle of the rotation outputs for one parameter point."""

    alpha: float
    beta: float
    lam: float
    S: np.ndarray = field(repr=False)
    Hprime: np.ndarray = field(repr=False)
    t: float = 0.0


def build_subspace(J: float, h_z: float, h_x: float, Z_h: int, Z_p: int,
                   reference_energy: float = 0.0) -> SWSubspace:
    """Populate H0 and V for the given couplings and coordination counts."""
    if J <= 0:
        raise ValueError(f"J must be positive, got {J}")
    if h_x < 0:
        raise ValueError(f"h_x must be non-negative, got {h_x}")
    _check_resonance(J, h_z, Z_h, Z_p)

    H0 = np.zeros((4, 4))
    H0[0, 0] = -2.0 * h_z + 2.0 * J * Z_h
    H0[3, 3] = 2.0 * h_z - 2.0 * J * Z_p
    V = np.zeros((4, 4))
    for a, b in _V_LINKS:
        V[a, b] = -h_x
    return SWSubspace(J=J, h_z=h_z, h_x=h_x, Z_h=Z_h, Z_p=Z_p,
                      H0=H0, V=V, reference_energy=reference_energy)


def solve_generator_numeric(sub: SWSubspace) -> np.ndarray:
    """Solve V + [S, H0] = 0 elementwise from the H0 spectrum.

    Independent of the closed forms: uses only the matrix entries.
    """
    energies = np.diag(sub.H0)
    S = np.zeros((4, 4))
    for a in range(4):
        for b in range(4):
            if sub.V[a, b] == 0.0:
                continue
            gap = energies[a] - energies[b]
            if gap == 0.0:
                raise ResonantDenominatorError(
                    f"states {a} and {b} are degenerate but coupled by V; "
                    "the rotation generator is undefined"
                )
            S[a, b] = sub.V[a, b] / gap
    return S


def closed_form_alpha_beta(sub: SWSubspace) -> tuple[float, float]:
    """The two generator amplitudes alpha (annihilation) and beta (creation)."""
    _check_resonance(sub.J, sub.h_z, sub.Z_h, sub.Z_p)
    alpha = sub.h_x / (2.0 * (sub.h_z - sub.J * sub.Z_h))
    beta = sub.h_x / (2.0 * (sub.h_z - sub.J * sub.Z_p))
    return alpha, beta


def closed_form_generator(sub: SWSubspace) -> np.ndarray:
    """The generator assembled from alpha and beta in its fixed sign pattern."""
    alpha, beta = closed_form_alpha_beta(sub)
    return np.array([
        [0.0, alpha, alpha, 0.0],
        [-alpha, 0.0, 0.0, beta],
        [-alpha, 0.0, 0.0, beta],
        [0.0, -beta, -beta, 0.0],
    ])


def effective_hamiltonian(sub: SWSubspace) -> np.ndarray:
    """H' = H0 + [S, V] / 2 with the numerically solved generator."""
    S = solve_generator_numeric(sub)
    return sub.H0 + 0.5 * (S @ sub.V - sub.V @ S)


def closed_form_effective_hamiltonian(sub: SWSubspace) -> np.ndarray:
    """The second-order block lambda * h_x**2 * (fixed pattern).

    This is the rotated Hamiltonian with the H0 diagonal left out; add
    ``sub.H0`` to compare against :func:`effective_hamiltonian`. Undefined
    when Z_h == Z_p (the pattern's diagonal has a Z_h - Z_p denominator).
    """
    if sub.Z_h == sub.Z_p:
        raise DegenerateEnvironmentError(
            f"Z_h == Z_p == {sub.Z_h}: closed-form diagonal is undefined; "
            "use effective_hamiltonian for the numeric result"
        )
    lam = sw_lambda(sub.J, sub.h_z, sub.Z_h, sub.Z_p)
    d = sub.J * (sub.Z_h - sub.Z_p)
    top = 2.0 * (-sub.h_z + sub.J * sub.Z_p) / d
    bottom = 2.0 * (sub.h_z - sub.J * sub.Z_h) / d
    pattern = np.array([
        [top, 0.0, 0.0, -1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0, bottom],
    ])
    return lam * sub.h_x ** 2 * pattern


def sw_lambda(J: float, h_z: float, Z_h: int, Z_p: int) -> float:
    """Hopping prefactor: mean of the inverse virtual-state denominators."""
    _check_resonance(J, h_z, Z_h, Z_p)
    return 0.5 * (1.0 / (h_z - J * Z_h) + 1.0 / (-h_z + J * Z_p))


def effective_hopping(J: float, h_z: float, Z_h: int, Z_p: int, h_x: float) -> float:
    """Pair-exchange amplitude t = lambda * h_x**2."""
    return sw_lambda(J, h_z, Z_h, Z_p) * h_x ** 2


def sw_transform(sub: SWSubspace) -> SWResult:
    """Run the full rotation and collect every derived quantity."""
    alpha, beta = closed_form_alpha_beta(sub)
    lam = sw_lambda(sub.J, sub.h_z, sub.Z_h, sub.Z_p)
    return SWResult(
        alpha=alpha,
        beta=beta,
        lam=lam,
        S=solve_generator_numeric(sub),
        Hprime=effective_hamiltonian(sub),
        t=lam * sub.h_x ** 2,
    )


def commutator_residual(sub: SWSubspace, S: np.ndarray) -> float:
    """max |(V + [S, H0])_ab| over the off-degenerate-block positions.

    Zero (to rounding) certifies that S solves the generator equation.
    """
    energies = np.diag(sub.H0)
    R = sub.V + (S @ sub.H0 - sub.H0 @ S)
    mask = np.abs(energies[:, None] - energies[None, :]) > 0.0
    return float(np.max(np.abs(R[mask]))) if mask.any() else 0.0


def _check_resonance(J: float, h_z: float, Z_h: int, Z_p: int) -> None:
    for name, z in (("Z_h", Z_h), ("Z_p", Z_p)):
        if h_z == J * z:
            raise ResonantDenominatorError(
                f"h_z == J * {name} (= {h_z}): virtual-state gap vanishes"
            )
