"""
JSON report schema.

The same serializers render reports (``Serializer(instance).data``) and
validate reports read back from disk (``Serializer(data=...).is_valid()``).
"""

from django.conf import settings
from rest_framework import serializers

STATUSES = ["reflexible", "chiral", "pre-polytopal", "not-polytopal"]
SELF_DUALITY = ["none", "self-dual", "properly", "improperly"]
COMMANDS = ["check", "mix", "catalog", "search"]


class JobSerializer(serializers.Serializer):
    command = serializers.ChoiceField(choices=COMMANDS)
    inputs = serializers.ListField(child=serializers.CharField(), allow_empty=True)
    params = serializers.DictField(required=False, default=dict)


class GroupFingerprintSerializer(serializers.Serializer):
    order = serializers.IntegerField(min_value=1)
    abelian = serializers.BooleanField()
    perfect = serializers.BooleanField()
    name = serializers.CharField(allow_null=True)


class IntersectionCheckSerializer(serializers.Serializer):
    left = serializers.ListField(child=serializers.IntegerField())
    right = serializers.ListField(child=serializers.IntegerField())
    orders = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=3, max_length=3)
    expected = serializers.IntegerField(min_value=1)
    holds = serializers.BooleanField()


class IntersectionSerializer(serializers.Serializer):
    holds = serializers.BooleanField()
    witness = IntersectionCheckSerializer(allow_null=True)
    checks = IntersectionCheckSerializer(many=True)


class FacesSerializer(serializers.Serializer):
    f_vector = serializers.ListField(child=serializers.IntegerField(min_value=1))
    flags = serializers.IntegerField(min_value=1)
    diamond = serializers.BooleanField()
    violations = serializers.ListField(child=serializers.CharField(), allow_empty=True)


class SchemaVersionMixin:
    def validate_schema_version(self, value):
        if value != settings.REPORT_SCHEMA_VERSION:
            raise serializers.ValidationError(
                f"Unsupported schema version {value}, expected {settings.REPORT_SCHEMA_VERSION}"
            )
        return value


class ReportSerializer(SchemaVersionMixin, serializers.Serializer):
    """One classified system (check, mix and catalog jobs)."""

    schema_version = serializers.CharField()
    job = JobSerializer()
    name = serializers.CharField(allow_null=True)
    rank = serializers.IntegerField(min_value=2)
    order = serializers.IntegerField(min_value=1)
    type = serializers.ListField(child=serializers.IntegerField(min_value=1))
    degenerate = serializers.ListField(child=serializers.IntegerField(), allow_empty=True)
    status = serializers.ChoiceField(choices=STATUSES)
    polytopal = serializers.BooleanField()
    reflexible = serializers.BooleanField()
    self_duality = serializers.ChoiceField(choices=SELF_DUALITY)
    kappa = serializers.IntegerField(min_value=1, allow_null=True)
    totally_chiral = serializers.BooleanField(allow_null=True)
    chirality_group = GroupFingerprintSerializer(allow_null=True)
    method_agreement = serializers.BooleanField(allow_null=True)
    intersection = IntersectionSerializer()
    faces = FacesSerializer(allow_null=True, required=False)
    full_order = serializers.IntegerField(allow_null=True, required=False)
    period_witness = serializers.CharField(allow_null=True, required=False)
    direct_product = serializers.BooleanField(allow_null=True, required=False)
    components = serializers.ListField(child=serializers.IntegerField(), allow_null=True, required=False)
    metadata = serializers.DictField(required=False, default=dict)
    notes = serializers.ListField(child=serializers.CharField(), allow_empty=True)

    def validate(self, attrs):
        if attrs["status"] in ("reflexible", "chiral") and not attrs["intersection"]["holds"]:
            raise serializers.ValidationError("Polytopal status without the intersection property")
        if attrs["kappa"] is not None and (attrs["kappa"] == 1) != attrs["reflexible"]:
            raise serializers.ValidationError("kappa and reflexibility disagree")
        return attrs


class SearchResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    order = serializers.IntegerField(min_value=1)
    type = serializers.ListField(child=serializers.IntegerField(min_value=1))
    generators = serializers.ListField(child=serializers.CharField())
    reflexible = serializers.BooleanField()
    intersection_property = serializers.BooleanField()


class SearchGroupSerializer(serializers.Serializer):
    name = serializers.CharField()
    order = serializers.IntegerField(min_value=1)
    degree = serializers.IntegerField(min_value=1)


class SearchReportSerializer(SchemaVersionMixin, serializers.Serializer):
    """A census of generating tuples."""

    schema_version = serializers.CharField()
    job = JobSerializer()
    group = SearchGroupSerializer()
    type = serializers.ListField(child=serializers.IntegerField(min_value=2))
    count = serializers.IntegerField(min_value=0)
    results = SearchResultSerializer(many=True)

    def validate(self, attrs):
        if attrs["count"] != len(attrs["results"]):
            raise serializers.ValidationError("count does not match the number of results")
        return attrs
