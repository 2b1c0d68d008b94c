import json
import os
import tempfile

from django.test import TestCase, override_settings

from app.coarse.steppers import LinearizedBackwardEuler
from app.exceptions import SpecificationError
from app.fine.propagators import EXACT, FineMode
from app.io.specs import apply_overrides, load_spec_file, resolve_spec


class TestResolveSpec(TestCase):
    """ Test the `resolve_spec` method """

    def test_builtin_toggle(self):
        spec = resolve_spec({'model': {'builtin': 'toggle'}})

        self.assertEqual(spec.model_name, 'toggle')
        self.assertEqual(spec.initial_state, [200.0, 50.0])
        self.assertEqual(spec.config.final_time, 5e6)
        self.assertEqual(spec.config.intervals, 50)
        self.assertEqual(spec.config.fine_mode, EXACT)

    def test_builtin_run_defaults(self):
        spec = resolve_spec({'model': {'builtin': 'dimer_iso'}, 'run': {'intervals': 10}})

        self.assertEqual(spec.config.intervals, 10)
        self.assertEqual(spec.config.final_time, 10.0)
        self.assertEqual(spec.config.fine_mode, FineMode(0.5))
        self.assertEqual(spec.config.coarse, LinearizedBackwardEuler())

    def test_builtin_params(self):
        spec = resolve_spec({'model': {'builtin': 'rdme_chain', 'params': {'n_omega': 4}}})

        self.assertEqual(spec.initial_state, [4.0, 4.0, 0.0] * 5)

    def test_inline_network(self):
        spec = resolve_spec({
            'model': {
                'network': {
                    'name': 'decay',
                    'species': ['A'],
                    'reactions': [{
                        'propensity': {'form': 'scaled_linear', 'params': {'coefficient': 1.0, 'species_index': 0}},
                        'stoichiometry': [1],
                    }],
                },
                'initial_state': [10],
            },
            'run': {'final_time': 1.0, 'intervals': 4, 'executor': 'threads', 'threads': 2},
            'outputs': {'directory': '/tmp/decay', 'iterates': True},
        })

        self.assertEqual(spec.model_name, 'decay')
        self.assertEqual(spec.initial_state, [10.0])
        self.assertEqual(spec.executor, 'threads')
        self.assertEqual(spec.threads, 2)
        self.assertEqual(spec.output_dir, '/tmp/decay')
        self.assertTrue(spec.write_iterates)

    @override_settings(SIMULATION={'OUTPUT_DIR': '/tmp/default-output', 'EXECUTOR': 'serial'})
    def test_default_output_directory(self):
        spec = resolve_spec({'model': {'builtin': 'toggle'}})

        self.assertEqual(spec.output_dir, '/tmp/default-output')
        self.assertEqual(spec.echo()['executor'], 'serial')

    def test_unknown_builtin(self):
        with self.assertRaises(SpecificationError):
            resolve_spec({'model': {'builtin': 'lotka_volterra'}})

    def test_bad_builtin_params(self):
        with self.assertRaisesMessage(SpecificationError, 'model.params'):
            resolve_spec({'model': {'builtin': 'toggle', 'params': {'speed': 3}}})

    def test_initial_state_length(self):
        with self.assertRaisesMessage(SpecificationError, 'model.initial_state'):
            resolve_spec({'model': {'builtin': 'toggle', 'initial_state': [1, 2, 3]}})

    def test_missing_final_time(self):
        with self.assertRaisesMessage(SpecificationError, 'run.final_time'):
            resolve_spec({'model': {'builtin': 'birth_death'}, 'run': {'intervals': 4}})

    def test_echo(self):
        spec = resolve_spec({'model': {'builtin': 'birth_death'}, 'run': {'final_time': 2.0, 'intervals': 4}})
        echo = spec.echo()

        self.assertEqual(echo['model'], 'birth_death')
        self.assertEqual(echo['species'], ['A'])
        self.assertEqual(echo['run']['intervals'], 4)
        json.dumps(echo)


class TestApplyOverrides(TestCase):
    """ Test the `apply_overrides` method """

    def test_run_options(self):
        document = {'model': {'builtin': 'toggle'}, 'run': {'final_time': 10.0}}

        actual = apply_overrides(document, {'T': 20.0, 'N': 5, 'homogenize': 'off', 'seed': None})
        expected = {'model': {'builtin': 'toggle'}, 'run': {'final_time': 20.0, 'intervals': 5, 'homogenize': None}}
        self.assertEqual(actual, expected)
        self.assertEqual(document['run'], {'final_time': 10.0})

    def test_model_replaces_block(self):
        document = {'model': {'builtin': 'toggle', 'params': {'a': 1.0}}}

        actual = apply_overrides(document, {'model': 'dimer_iso'})
        expected = {'model': {'builtin': 'dimer_iso'}}
        self.assertEqual(actual, expected)

    def test_output_directory(self):
        actual = apply_overrides({}, {'out': '/tmp/run'})
        expected = {'outputs': {'directory': '/tmp/run'}}
        self.assertEqual(actual, expected)


class TestLoadSpecFile(TestCase):
    """ Test the `load_spec_file` method """

    def test_load(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'spec.json')
            with open(path, 'w') as handle:
                json.dump({'model': {'builtin': 'toggle'}}, handle)

            actual = load_spec_file(path)

        expected = {'model': {'builtin': 'toggle'}}
        self.assertEqual(actual, expected)

    def test_missing_file(self):
        with self.assertRaises(SpecificationError):
            load_spec_file('/nonexistent/spec.json')

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'spec.json')
            with open(path, 'w') as handle:
                handle.write('{"model": ')

            with self.assertRaises(SpecificationError):
                load_spec_file(path)

    def test_top_level_list(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'spec.json')
            with open(path, 'w') as handle:
                json.dump([1, 2], handle)

            with self.assertRaises(SpecificationError):
                load_spec_file(path)
