from django.conf import settings
from rest_framework import serializers
from sympy import Rational
from sympy.ntheory import isprime

from .exceptions import NilpotentOrbitError
from .localfield import LocalField, to_field_element
from .reports import ReportConfig, parse_field_token


def validate_odd_prime(value):
    if value == 2 or not isprime(value):
        raise serializers.ValidationError(f"p = {value} is not an odd prime.")
    return value


class ReportConfigSerializer(serializers.Serializer):
    """
    Validates the report configuration shared by the command line and the API.
    """
    p = serializers.IntegerField(validators=[validate_odd_prime], help_text="An odd prime; the field is Q_p.")
    group = serializers.ChoiceField(choices=['sl', 'sp'], default='sp')
    n = serializers.IntegerField(min_value=1, default=2, help_text="SL_n matrix size, or the rank n of Sp_2n.")
    r_multiplier = serializers.CharField(
        default='1/2',
        help_text="Rational c with r = c*sqrt(2) in (0, 1), e.g. '1/2'.",
    )
    format = serializers.ChoiceField(choices=['json', 'markdown'], default='json')
    seed = serializers.IntegerField(default=0)

    def validate_r_multiplier(self, value):
        try:
            c = to_field_element(value)
        except NilpotentOrbitError as exc:
            raise serializers.ValidationError(str(exc))
        if c <= 0 or 2 * c * c >= 1:
            raise serializers.ValidationError(f"r = {c}*sqrt(2) must lie strictly between 0 and 1.")
        return c

    def validate(self, attrs):
        if attrs.get('group') == 'sl' and attrs.get('n', 2) < 2:
            raise serializers.ValidationError({"n": "SL_n needs n >= 2."})
        return attrs

    def build_config(self) -> ReportConfig:
        data = self.validated_data
        return ReportConfig(
            p=data['p'],
            group=data['group'],
            n=data['n'],
            r_multiplier=Rational(data['r_multiplier']),
            format=data['format'],
            seed=data['seed'],
            max_attempts=settings.NILPOTENT_ORBITS['FACET_MAX_ATTEMPTS'],
        )


class MatrixClassifySerializer(serializers.Serializer):
    """
    A nilpotent matrix with rational entries given as strings, e.g. [["0", "1"], ["0", "0"]].
    """
    p = serializers.IntegerField(validators=[validate_odd_prime])
    group = serializers.ChoiceField(choices=['sl', 'sp'])
    matrix = serializers.ListField(child=serializers.ListField(child=serializers.CharField()), allow_empty=False)

    def validate_matrix(self, rows):
        size = len(rows)
        if any(len(row) != size for row in rows):
            raise serializers.ValidationError("Matrix must be square.")
        try:
            return [[to_field_element(v) for v in row] for row in rows]
        except NilpotentOrbitError as exc:
            raise serializers.ValidationError(str(exc))

    def validate(self, attrs):
        if attrs['group'] == 'sp' and len(attrs['matrix']) % 2:
            raise serializers.ValidationError({"matrix": "Symplectic matrices have even size."})
        return attrs


class QuadraticFormSerializer(serializers.Serializer):
    """
    Diagonal entries of a quadratic form; tokens eps, pi and eps*pi are accepted.
    """
    p = serializers.IntegerField(validators=[validate_odd_prime])
    entries = serializers.ListField(child=serializers.CharField(), allow_empty=True)

    def validate(self, attrs):
        field = LocalField.for_prime(attrs['p'])
        try:
            entries = [parse_field_token(field, token) for token in attrs['entries']]
        except NilpotentOrbitError as exc:
            raise serializers.ValidationError({"entries": str(exc)})
        if any(a == 0 for a in entries):
            raise serializers.ValidationError({"entries": "Diagonal entries must be nonzero."})
        attrs['entries'] = entries
        attrs['field'] = field
        return attrs


class HilbertSymbolSerializer(serializers.Serializer):
    p = serializers.IntegerField(validators=[validate_odd_prime])
    a = serializers.CharField()
    b = serializers.CharField()

    def validate(self, attrs):
        field = LocalField.for_prime(attrs['p'])
        try:
            a, b = parse_field_token(field, attrs['a']), parse_field_token(field, attrs['b'])
        except NilpotentOrbitError as exc:
            raise serializers.ValidationError(str(exc))
        if a == 0 or b == 0:
            raise serializers.ValidationError("The Hilbert symbol is undefined at zero.")
        attrs.update(a=a, b=b, field=field)
        return attrs


# --- Output shapes ---

class EqualitySerializer(serializers.Serializer):
    root = serializers.CharField()
    offset = serializers.IntegerField()


class FacetSerializer(serializers.Serializer):
    equalities = EqualitySerializer(many=True)
    dim = serializers.IntegerField()


class OrbitRowSerializer(serializers.Serializer):
    """
    One orbit of a report. The class payload is published under the key 'class'.
    """
    id = serializers.CharField()
    partition = serializers.CharField()
    facet = FacetSerializer()
    triple_ok = serializers.BooleanField()

    def get_fields(self):
        fields = super().get_fields()
        ordered = {}
        for name in ('id', 'partition'):
            ordered[name] = fields[name]
        ordered['class'] = serializers.DictField()
        for name in ('facet', 'triple_ok'):
            ordered[name] = fields[name]
        return ordered


class FieldSerializer(serializers.Serializer):
    p = serializers.IntegerField()
    epsilon = serializers.IntegerField()


class OrbitDocumentSerializer(serializers.Serializer):
    field = FieldSerializer()
    group = serializers.CharField()
    n = serializers.IntegerField()
    orbits = OrbitRowSerializer(many=True)
