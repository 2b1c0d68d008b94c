from django.test import TestCase

from app.exceptions import BoxViolationError, InvalidStateError
from app.fine.thinning import BoundingBox, channel_bounds, thinning_propagate
from app.kinetics.builtins import build_birth_death, build_isomerization, build_pure_birth
from app.noise.streams import IntervalNoise


class TestBoundingBox(TestCase):
    """ Test the `BoundingBox` structure """

    def test_contains(self):
        box = BoundingBox((0, 0), (10, 5))

        self.assertTrue(box.contains([10, 0]))
        self.assertFalse(box.contains([11, 0]))
        self.assertFalse(box.contains([0, -1]))

    def test_invalid_bounds(self):
        with self.assertRaises(ValueError):
            BoundingBox((0,), (1, 2))

        with self.assertRaises(ValueError):
            BoundingBox((3,), (2,))

    def test_negative_lower_bound(self):
        with self.assertRaises(ValueError):
            BoundingBox((-1, 0), (5, 5))


class TestChannelBounds(TestCase):
    """ Test the `channel_bounds` method """

    def test_birth_death(self):
        actual = channel_bounds(build_birth_death(birth=5.0, death=2.0), BoundingBox((0,), (40,)))
        expected = [5.0, 85.0]
        self.assertEqual(actual, expected)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            channel_bounds(build_birth_death(), BoundingBox((0, 0), (1, 1)))


class TestThinningPropagate(TestCase):
    """ Test the `thinning_propagate` method """

    def test_deterministic_for_fixed_noise(self):
        net, box = build_birth_death(), BoundingBox((0,), (40,))

        first = thinning_propagate(net, [5.0], 2.0, box, IntervalNoise(3, 1))
        second = thinning_propagate(net, [5.0], 2.0, box, IntervalNoise(3, 1))

        self.assertEqual(first.offsets, second.offsets)
        self.assertEqual(first.final_state, second.final_state)

    def test_stays_in_box(self):
        box = BoundingBox((0,), (40,))
        traj = thinning_propagate(build_birth_death(), [5.0], 5.0, box, IntervalNoise(6, 1))

        for state in traj.states:
            self.assertTrue(box.contains(state))

    def test_accepted_events_never_exceed_candidates(self):
        traj = thinning_propagate(build_birth_death(), [5.0], 2.0, BoundingBox((0,), (40,)), IntervalNoise(1, 1))

        gaps, marks = traj.channel_draws
        self.assertEqual(gaps, marks + 1)
        self.assertLessEqual(traj.event_count, marks)

    def test_isomerization_conserves_mass(self):
        box = BoundingBox((0, 0), (20, 20))
        traj = thinning_propagate(build_isomerization(), [20.0, 0.0], 3.0, box, IntervalNoise(2, 1))

        for state in traj.states:
            self.assertEqual(sum(state), 20.0)

    def test_leaving_the_box(self):
        with self.assertRaises(BoxViolationError):
            thinning_propagate(build_pure_birth(50.0), [0.0], 10.0, BoundingBox((0,), (3,)), IntervalNoise(0, 1))

    def test_start_outside_the_box(self):
        with self.assertRaises(BoxViolationError):
            thinning_propagate(build_birth_death(), [50.0], 1.0, BoundingBox((0,), (40,)), IntervalNoise(0, 1))

    def test_integer_start_state(self):
        with self.assertRaises(InvalidStateError):
            thinning_propagate(build_birth_death(), [2.5], 1.0, BoundingBox((0,), (40,)), IntervalNoise(0, 1))
