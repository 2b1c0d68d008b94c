import numpy as np

from django.test import TestCase

from app.exceptions import InvalidStateError
from app.kinetics.builtins import build_birth_death, build_dimer_isomerization, build_isomerization, build_rdme_chain
from app.kinetics.networks import (
    Reaction, ReactionNetwork, conservation_laws, dependency_sets, total_intensity,
)
from app.kinetics.propensities import Constant, MassAction, ScaledLinear


class TestReactionNetwork(TestCase):
    """ Test the `ReactionNetwork` structure """

    def test_sign_convention(self):
        """
        Test firing the decay `A -> 0` with column `[+1]` takes 5 molecules to 4.
        """
        reaction = Reaction(ScaledLinear(1.0, 0), (1,))

        actual = reaction.apply([5.0])
        expected = [4.0]
        self.assertEqual(actual, expected)

    def test_stoichiometry_shape(self):
        net = build_dimer_isomerization()

        actual = net.stoichiometry.shape
        expected = (4, 6)
        self.assertEqual(actual, expected)

    def test_stoich_length_mismatch(self):
        with self.assertRaises(ValueError):
            ReactionNetwork(('A', 'B'), (Reaction(Constant(1.0), (-1,)),))

    def test_species_index_out_of_range(self):
        with self.assertRaises(ValueError):
            ReactionNetwork(('A',), (Reaction(ScaledLinear(1.0, 1), (1,)),))

    def test_non_positive_volume(self):
        with self.assertRaises(ValueError):
            ReactionNetwork(('A',), (), volume=0.0)

    def test_propensities_reject_non_finite_state(self):
        with self.assertRaises(InvalidStateError):
            build_birth_death().propensities([np.inf])

    def test_scaled(self):
        net = build_birth_death(birth=5.0, death=1.0).scaled(1.01)

        actual = net.propensities([3.0]).tolist()
        expected = [5.0 * 1.01, 3.0 * 1.01]
        self.assertEqual(actual, expected)


class TestTotalIntensity(TestCase):
    """ Test the `total_intensity` method """

    def test_birth_death(self):
        actual = total_intensity(build_birth_death(birth=5.0, death=1.0), [3.0])
        expected = 8.0
        self.assertEqual(actual, expected)

    def test_zero_state_without_inflow(self):
        actual = total_intensity(build_isomerization(), [0.0, 0.0])
        expected = 0.0
        self.assertEqual(actual, expected)

    def test_dimer_initial_data(self):
        """
        Test the six channel values at `[15, 5, 30, 10]` with epsilon `1e-3`.
        """
        actual = total_intensity(build_dimer_isomerization(1e-3), [15.0, 5.0, 30.0, 10.0])
        expected = 1000.0 * (15 * 14 + 5 * 4 + 10 * 9 + 30 * 29) + 5.0 + 10.0
        self.assertEqual(actual, expected)


class TestDependencySets(TestCase):
    """ Test the `dependency_sets` method """

    def test_single_inflow(self):
        """
        Test `0 -> A` only affects itself and the channels reading A.
        """
        net = ReactionNetwork(('A', 'B'), (
            Reaction(Constant(1.0), (-1, 0)),
            Reaction(ScaledLinear(1.0, 0), (1, 0)),
            Reaction(ScaledLinear(1.0, 1), (0, 1)),
        ))

        actual = dependency_sets(net)[0]
        expected = frozenset({0, 1})
        self.assertEqual(actual, expected)

    def test_isomerization(self):
        actual = dependency_sets(build_isomerization())
        expected = (frozenset({0, 1}), frozenset({0, 1}))
        self.assertEqual(actual, expected)

    def test_every_set_contains_its_channel(self):
        for r, channels in enumerate(dependency_sets(build_rdme_chain())):
            self.assertIn(r, channels)

    def test_diffusion_locality(self):
        """
        Test a jump of X from cell 2 to cell 3 only touches X-reading channels of cells 2 and 3.
        """
        net = build_rdme_chain()
        r = next(i for i, reaction in enumerate(net.reactions) if reaction.name == 'X2 -> X3')

        actual = set()
        for s in dependency_sets(net)[r]:
            actual |= {net.species_names[i] for i in net.reactions[s].reads}
        expected = {'X2', 'Y2', 'X3', 'Y3'}
        self.assertEqual(actual, expected)

    def test_reads_include_consumed_species(self):
        reaction = Reaction(MassAction(1.0), (1, 0))

        actual = reaction.reads
        expected = frozenset({0})
        self.assertEqual(actual, expected)


class TestConservationLaws(TestCase):
    """ Test the `conservation_laws` method """

    def test_dimer_total_count(self):
        laws = conservation_laws(build_dimer_isomerization())

        actual = laws.shape[0]
        expected = 1
        self.assertEqual(actual, expected)

        direction = laws[0] / laws[0][0]
        np.testing.assert_allclose(direction, [1.0, 1.0, 1.0, 1.0], atol=1e-12)
