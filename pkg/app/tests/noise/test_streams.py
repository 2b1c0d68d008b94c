from django.test import TestCase

from app.noise.streams import BLOCK_SIZE, IntervalNoise, NoiseKey, NoiseSource, StreamClass, uniform_at


class TestUniformAt(TestCase):
    """ Test the `uniform_at` method """

    def test_deterministic(self):
        key = NoiseKey(7, 3, 1)

        actual = [uniform_at(key, i) for i in (0, 5, 1000)]
        expected = [uniform_at(NoiseKey(7, 3, 1), i) for i in (0, 5, 1000)]
        self.assertEqual(actual, expected)

    def test_open_unit_interval(self):
        key = NoiseKey(0, 1, 0)

        for i in range(2 * BLOCK_SIZE):
            value = uniform_at(key, i)
            self.assertGreater(value, 0.0)
            self.assertLess(value, 1.0)

    def test_keys_are_independent(self):
        """
        Test changing any single key component changes the stream.
        """
        base = [uniform_at(NoiseKey(1, 2, 3), i) for i in range(8)]

        for key in (
            NoiseKey(2, 2, 3),
            NoiseKey(1, 3, 3),
            NoiseKey(1, 2, 4),
            NoiseKey(1, 2, 3, StreamClass.THINNING_MARK),
        ):
            self.assertNotEqual([uniform_at(key, i) for i in range(8)], base)


class TestNoiseSource(TestCase):
    """ Test the `NoiseSource` sequential reader """

    def test_matches_random_access_across_blocks(self):
        key = NoiseKey(11, 4, 2)
        source = NoiseSource(key)

        actual = [source.uniform() for _ in range(BLOCK_SIZE + 10)]
        expected = [uniform_at(key, i) for i in range(BLOCK_SIZE + 10)]
        self.assertEqual(actual, expected)

    def test_counter_advances(self):
        source = NoiseSource(NoiseKey(0, 1, 0))
        source.uniform()
        source.exponential_gap()

        actual = source.counter
        expected = 2
        self.assertEqual(actual, expected)

    def test_resume_from_counter(self):
        key = NoiseKey(5, 1, 0)

        actual = NoiseSource(key, counter=BLOCK_SIZE - 1).uniform()
        expected = uniform_at(key, BLOCK_SIZE - 1)
        self.assertEqual(actual, expected)

    def test_exponential_gaps_are_positive(self):
        source = NoiseSource(NoiseKey(3, 1, 0))

        for _ in range(100):
            self.assertGreater(source.exponential_gap(), 0.0)


class TestIntervalNoise(TestCase):
    """ Test the `IntervalNoise` stream family """

    def test_key(self):
        actual = IntervalNoise(9, 4).key(2, StreamClass.THINNING_GAP)
        expected = NoiseKey(9, 4, 2, StreamClass.THINNING_GAP)
        self.assertEqual(actual, expected)

    def test_one_source_per_channel(self):
        sources = IntervalNoise(9, 4).sources(3)

        actual = [source.key.channel_index for source in sources]
        expected = [0, 1, 2]
        self.assertEqual(actual, expected)

    def test_mean_of_many_draws(self):
        source = IntervalNoise(0, 1).sources(1)[0]

        actual = sum(source.uniform() for _ in range(100000)) / 100000
        self.assertAlmostEqual(actual, 0.5, delta=0.005)
