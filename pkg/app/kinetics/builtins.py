"""
Code-constructed models.

The three experiment models (toggle switch, dimerization/isomerization, reaction-diffusion
chain) plus the small networks used by the validation oracles.
"""

from typing import Dict, List, Sequence

from app.kinetics.networks import Reaction, ReactionNetwork
from app.kinetics.propensities import Constant, HillRepression, MassAction, ScaledLinear


AVOGADRO = 6.02214076e23

TOGGLE = 'toggle'
DIMER_ISO = 'dimer_iso'
RDME_CHAIN = 'rdme_chain'

PAPER_MODELS = (TOGGLE, DIMER_ISO, RDME_CHAIN)


def _stoich(size: int, changes: Dict[int, int]) -> List[int]:
    column = [0] * size
    for index, value in changes.items():
        column[index] += value
    return column


def build_toggle(a: float = 3000.0, b: float = 11000.0, mu: float = 1e-3) -> ReactionNetwork:
    """
    Two mutually repressing gene products X and Y; the volume is fixed to 1.
    """
    x, y = 0, 1
    reactions = (
        Reaction(HillRepression(a, b, repressor_index=y), _stoich(2, {x: -1}), 'production X'),
        Reaction(HillRepression(a, b, repressor_index=x), _stoich(2, {y: -1}), 'production Y'),
        Reaction(ScaledLinear(mu, x), _stoich(2, {x: 1}), 'degradation X'),
        Reaction(ScaledLinear(mu, y), _stoich(2, {y: 1}), 'degradation Y'),
    )
    return ReactionNetwork(('X', 'Y'), reactions, 1.0, TOGGLE)


def build_dimer_isomerization(epsilon: float = 1e-3) -> ReactionNetwork:
    """
    Fast dimerization `X1+X1 <-> X2+X2`, `Y2+Y2 <-> Y1+Y1` coupled by slow isomerization `X2 <-> Y2`.

    Species are ordered `[X1, X2, Y1, Y2]`.
    """
    x1, x2, y1, y2 = 0, 1, 2, 3
    fast = 1.0 / epsilon
    reactions = (
        Reaction(MassAction(fast, (x1, x1)), _stoich(4, {x1: 2, x2: -2}), 'X1+X1 -> X2+X2'),
        Reaction(MassAction(fast, (x2, x2)), _stoich(4, {x2: 2, x1: -2}), 'X2+X2 -> X1+X1'),
        Reaction(MassAction(1.0, (x2,)), _stoich(4, {x2: 1, y2: -1}), 'X2 -> Y2'),
        Reaction(MassAction(1.0, (y2,)), _stoich(4, {y2: 1, x2: -1}), 'Y2 -> X2'),
        Reaction(MassAction(fast, (y2, y2)), _stoich(4, {y2: 2, y1: -2}), 'Y2+Y2 -> Y1+Y1'),
        Reaction(MassAction(fast, (y1, y1)), _stoich(4, {y1: 2, y2: -2}), 'Y1+Y1 -> Y2+Y2'),
    )
    return ReactionNetwork(('X1', 'X2', 'Y1', 'Y2'), reactions, 1.0, DIMER_ISO)


def rdme_cell_volume(n_omega: int, cells: int = 5) -> float:
    """
    Volume of one cell in liters; the whole chain holds `1e-15 * n_omega / 25` liters.
    """
    return 1e-15 * n_omega / 25 / cells


def build_rdme_chain(
    n_omega: int = 25,
    cells: int = 5,
    k_a: float = 1e8,
    k_d: float = 10.0,
    diffusion: float = 1e-10,
) -> ReactionNetwork:
    """
    Reversible association `X + Y <-> Z` in a 1-D chain of cells with nearest neighbour diffusion,
    inflow of X into the first cell, inflow of Y into the last one and outflow of Z at both ends.

    Species are ordered cell by cell as `[X1, Y1, Z1, X2, Y2, Z2, ...]`. Volumes are in liters
    and the bimolecular rate constant is in `M^-1 s^-1`, so it is divided by Avogadro's number.
    """
    if int(n_omega) != n_omega or n_omega <= 0:
        raise ValueError('The reaction-diffusion chain requires a positive integer N_Omega.')

    omega = rdme_cell_volume(n_omega, cells)
    h = (omega * 1e-3) ** (1.0 / 3.0)
    jump = diffusion / h ** 2
    size = 3 * cells

    def X(i):
        return 3 * i

    def Y(i):
        return 3 * i + 1

    def Z(i):
        return 3 * i + 2

    names = []
    for i in range(cells):
        names.extend([f'X{i + 1}', f'Y{i + 1}', f'Z{i + 1}'])

    reactions = []
    for i in range(cells):
        reactions.append(Reaction(
            MassAction(k_a / AVOGADRO, (X(i), Y(i))),
            _stoich(size, {X(i): 1, Y(i): 1, Z(i): -1}),
            f'X{i + 1}+Y{i + 1} -> Z{i + 1}',
        ))
        reactions.append(Reaction(
            MassAction(k_d, (Z(i),)),
            _stoich(size, {Z(i): 1, X(i): -1, Y(i): -1}),
            f'Z{i + 1} -> X{i + 1}+Y{i + 1}',
        ))

    for i in range(cells - 1):
        for label, index in (('X', X), ('Y', Y), ('Z', Z)):
            for source, target in ((i, i + 1), (i + 1, i)):
                reactions.append(Reaction(
                    ScaledLinear(jump, index(source)),
                    _stoich(size, {index(source): 1, index(target): -1}),
                    f'{label}{source + 1} -> {label}{target + 1}',
                ))

    last = cells - 1
    inflow = diffusion * n_omega / h ** 2
    reactions.extend([
        Reaction(Constant(inflow), _stoich(size, {X(0): -1}), '0 -> X1'),
        Reaction(ScaledLinear(jump, Z(0)), _stoich(size, {Z(0): 1}), 'Z1 -> 0'),
        Reaction(Constant(inflow), _stoich(size, {Y(last): -1}), f'0 -> Y{cells}'),
        Reaction(ScaledLinear(jump, Z(last)), _stoich(size, {Z(last): 1}), f'Z{cells} -> 0'),
    ])

    return ReactionNetwork(tuple(names), tuple(reactions), omega, RDME_CHAIN)


def build_birth_death(birth: float = 5.0, death: float = 1.0) -> ReactionNetwork:
    """
    `0 -> A` at rate `birth` and `A -> 0` at rate `death * a`.
    """
    reactions = (
        Reaction(Constant(birth), (-1,), '0 -> A'),
        Reaction(ScaledLinear(death, 0), (1,), 'A -> 0'),
    )
    return ReactionNetwork(('A',), reactions, 1.0, 'birth_death')


def build_pure_birth(birth: float = 5.0) -> ReactionNetwork:
    reactions = (Reaction(Constant(birth), (-1,), '0 -> A'),)
    return ReactionNetwork(('A',), reactions, 1.0, 'pure_birth')


def build_isomerization(omega: float = 1.0, k_forward: float = 1.0, k_backward: float = 1.0) -> ReactionNetwork:
    """
    Density dependent `A <-> B` with unimolecular mass action channels.
    """
    reactions = (
        Reaction(MassAction(k_forward, (0,)), (1, -1), 'A -> B'),
        Reaction(MassAction(k_backward, (1,)), (-1, 1), 'B -> A'),
    )
    return ReactionNetwork(('A', 'B'), reactions, float(omega), 'isomerization')


def build_paper_model(name: str, **params) -> ReactionNetwork:
    """
    Build one of the experiment models by name.
    """
    if name == TOGGLE:
        return build_toggle(**params)

    if name == DIMER_ISO:
        return build_dimer_isomerization(**params)

    if name == RDME_CHAIN:
        return build_rdme_chain(**params)

    raise ValueError(f'Model {name} is not supported.')


def initial_state(name: str, **params) -> List[float]:
    """
    Default initial data of an experiment model.
    """
    if name == TOGGLE:
        return [200.0, 50.0]

    if name == DIMER_ISO:
        return [15.0, 5.0, 30.0, 10.0]

    if name == RDME_CHAIN:
        n_omega = float(params.get('n_omega', 25))
        cells = int(params.get('cells', 5))
        return [n_omega, n_omega, 0.0] * cells

    raise ValueError(f'Model {name} is not supported.')


def isomerization_state(omega: float) -> Sequence[float]:
    """
    Start of the Omega-scaling family: all molecules in A.
    """
    return [float(round(omega)), 0.0]
