"""
Schema of model and run specification files.

Every serializer rejects fields it does not declare. Validation errors are flattened into one
`SpecificationError` whose message names the offending field paths.
"""

from collections.abc import Mapping
from dataclasses import asdict
from rest_framework import serializers
from typing import Dict, List

from app.exceptions import SpecificationError
from app.kinetics.networks import Reaction, ReactionNetwork
from app.kinetics.propensities import (
    PROPENSITY_FORMS, Constant, HillRepression, MassAction, PropensityForm, ScaledLinear,
)


COARSE_CHOICES = ('be', 'lbe', 'adaptive')
EXECUTOR_CHOICES = ('serial', 'threads', 'celery')


class StrictSerializer(serializers.Serializer):
    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({name: ['Unknown field.'] for name in unknown})

        return super().to_internal_value(data)


class MassActionSerializer(StrictSerializer):
    rate_constant = serializers.FloatField(min_value=0)
    reactant_indices = serializers.ListField(
        child=serializers.IntegerField(min_value=0), max_length=2, required=False, default=list,
    )


class HillRepressionSerializer(StrictSerializer):
    a = serializers.FloatField(min_value=0)
    b = serializers.FloatField()
    repressor_index = serializers.IntegerField(min_value=0)

    def validate_b(self, value):
        if not value > 0:
            raise serializers.ValidationError('Ensure this value is positive.')
        return value


class ScaledLinearSerializer(StrictSerializer):
    coefficient = serializers.FloatField(min_value=0)
    species_index = serializers.IntegerField(min_value=0)


class ConstantSerializer(StrictSerializer):
    value = serializers.FloatField(min_value=0)


PARAMS_SERIALIZERS = {
    MassAction.tag: MassActionSerializer,
    HillRepression.tag: HillRepressionSerializer,
    ScaledLinear.tag: ScaledLinearSerializer,
    Constant.tag: ConstantSerializer,
}


class PropensitySerializer(StrictSerializer):
    form = serializers.ChoiceField(choices=sorted(PROPENSITY_FORMS))
    params = serializers.DictField()

    def validate(self, attrs):
        params = PARAMS_SERIALIZERS[attrs['form']](data=attrs['params'])
        if not params.is_valid():
            raise serializers.ValidationError({'params': params.errors})

        values = dict(params.validated_data)
        if 'reactant_indices' in values:
            values['reactant_indices'] = tuple(values['reactant_indices'])

        return PROPENSITY_FORMS[attrs['form']](**values)


class ReactionSerializer(StrictSerializer):
    name = serializers.CharField(required=False, allow_blank=True, default='')
    propensity = PropensitySerializer()
    stoichiometry = serializers.ListField(child=serializers.IntegerField(), allow_empty=False)


class NetworkSerializer(StrictSerializer):
    name = serializers.CharField(required=False, allow_blank=True, default='')
    species = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    volume = serializers.FloatField(required=False, default=1.0)
    reactions = ReactionSerializer(many=True)

    def validate_volume(self, value):
        if not value > 0:
            raise serializers.ValidationError('Ensure this value is positive.')
        return value

    def validate(self, attrs):
        size = len(attrs['species'])
        errors = {}
        for r, reaction in enumerate(attrs['reactions']):
            if len(reaction['stoichiometry']) != size:
                errors[f'reactions[{r}].stoichiometry'] = [f'Expected {size} entries.']

            species = reaction['propensity'].species
            if any(i >= size for i in species):
                errors[f'reactions[{r}].propensity'] = [f'Species index outside [0, {size}).']

        if errors:
            raise serializers.ValidationError(errors)

        return attrs

    def create(self, validated_data) -> ReactionNetwork:
        reactions = tuple(
            Reaction(item['propensity'], tuple(item['stoichiometry']), item['name'])
            for item in validated_data['reactions']
        )
        return ReactionNetwork(
            tuple(validated_data['species']), reactions, validated_data['volume'], validated_data['name'],
        )


class ModelSpecSerializer(StrictSerializer):
    builtin = serializers.CharField(required=False)
    params = serializers.DictField(required=False, default=dict)
    network = NetworkSerializer(required=False)
    initial_state = serializers.ListField(child=serializers.FloatField(), required=False)

    def validate(self, attrs):
        if ('builtin' in attrs) == ('network' in attrs):
            raise serializers.ValidationError('Exactly one of `builtin` and `network` is required.')

        if 'network' in attrs and 'initial_state' not in attrs:
            raise serializers.ValidationError({'initial_state': ['Required for an inline network.']})

        return attrs


class RunSerializer(StrictSerializer):
    final_time = serializers.FloatField(required=False)
    intervals = serializers.IntegerField(min_value=1, required=False)
    max_iterations = serializers.IntegerField(min_value=1, required=False)
    residual_tolerance = serializers.FloatField(required=False)
    coarse = serializers.ChoiceField(choices=COARSE_CHOICES, required=False)
    coarse_rtol = serializers.FloatField(required=False)
    coarse_atol = serializers.FloatField(required=False)
    seed = serializers.IntegerField(min_value=0, required=False)
    homogenize = serializers.FloatField(required=False, allow_null=True)
    event_cap = serializers.IntegerField(min_value=1, required=False)
    executor = serializers.ChoiceField(choices=EXECUTOR_CHOICES, required=False)
    threads = serializers.IntegerField(min_value=1, required=False)

    def validate(self, attrs):
        errors = {}
        for name in ('final_time', 'residual_tolerance', 'coarse_rtol', 'coarse_atol'):
            if name in attrs and not attrs[name] > 0:
                errors[name] = ['Ensure this value is positive.']

        homogenize = attrs.get('homogenize')
        if homogenize is not None and not 0 < homogenize <= 1:
            errors['homogenize'] = ['Ensure this value lies in (0, 1].']

        if errors:
            raise serializers.ValidationError(errors)

        return attrs


class OutputsSerializer(StrictSerializer):
    directory = serializers.CharField(required=False)
    trajectories = serializers.ListField(
        child=serializers.IntegerField(min_value=0), required=False, default=list,
    )
    iterates = serializers.BooleanField(required=False, default=False)
    paths = serializers.BooleanField(required=False, default=False)


class ScalingSerializer(StrictSerializer):
    omegas = serializers.ListField(
        child=serializers.FloatField(min_value=1), required=False, default=lambda: [1e2, 1e3, 1e4],
    )
    replicas = serializers.IntegerField(min_value=2, required=False, default=200)
    time = serializers.FloatField(required=False, default=1.0)
    sizes = serializers.ListField(
        child=serializers.IntegerField(min_value=1), required=False, default=lambda: [25, 100, 400],
    )


class SpecSerializer(StrictSerializer):
    model = ModelSpecSerializer()
    run = RunSerializer(required=False, default=dict)
    outputs = OutputsSerializer(required=False, default=dict)
    scaling = ScalingSerializer(required=False)


def _flatten(detail, prefix: str = '') -> List[str]:
    if isinstance(detail, Mapping):
        messages = []
        for key, value in detail.items():
            if key == 'non_field_errors':
                path = prefix
            elif str(key).startswith('['):
                path = f'{prefix}{key}'
            else:
                path = f'{prefix}.{key}' if prefix else str(key)
            messages.extend(_flatten(value, path))
        return messages

    if isinstance(detail, list):
        if all(isinstance(item, str) for item in detail):
            return [f'{prefix or "spec"}: {item}' for item in detail]

        messages = []
        for index, item in enumerate(detail):
            if item:
                messages.extend(_flatten(item, f'{prefix}[{index}]'))
        return messages

    return [f'{prefix or "spec"}: {detail}']


def validated(serializer: serializers.Serializer) -> Dict:
    """
    Run a serializer and convert its errors into a `SpecificationError`.
    """
    if not serializer.is_valid():
        raise SpecificationError('; '.join(_flatten(serializer.errors)))

    return serializer.validated_data


def propensity_to_payload(form: PropensityForm) -> Dict:
    params = asdict(form)
    if 'reactant_indices' in params:
        params['reactant_indices'] = list(params['reactant_indices'])

    return {'form': form.tag, 'params': params}


def network_to_payload(net: ReactionNetwork) -> Dict:
    return {
        'name': net.name,
        'species': list(net.species_names),
        'volume': net.volume,
        'reactions': [
            {
                'name': reaction.name,
                'propensity': propensity_to_payload(reaction.propensity),
                'stoichiometry': list(reaction.stoich_column),
            }
            for reaction in net.reactions
        ],
    }


def network_from_payload(payload: Dict) -> ReactionNetwork:
    serializer = NetworkSerializer(data=payload)
    validated(serializer)
    return serializer.save()
