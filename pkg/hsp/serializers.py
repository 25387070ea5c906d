"""
This module contains classes to define serialization of flags and reports.
"""

from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from . import constants, linalg


class FlagSerializer(serializers.Serializer):
    """
    Serializer for a Flag: the reduced basis of every member, as lists of
    encoded vectors, largest member first.
    """
    n = serializers.IntegerField(read_only=True)
    members = serializers.SerializerMethodField()

    def get_members(self, obj):
        return [[linalg.encode(v) for v in U.basis] for U in obj.subspaces]


class SolveReportSerializer(serializers.Serializer):
    """
    Serializer for a SolveReport. `wall_time` is only included when the
    `timing` context flag is set.
    """
    n = serializers.IntegerField(read_only=True)
    p = serializers.IntegerField(read_only=True)
    r = serializers.IntegerField(read_only=True)
    mode = serializers.CharField(read_only=True)
    seed = serializers.IntegerField(read_only=True, allow_null=True)
    success = serializers.BooleanField(read_only=True)
    error = serializers.CharField(read_only=True, allow_null=True)
    flag = FlagSerializer(read_only=True, allow_null=True)
    rounds_per_level = serializers.ListField(child=serializers.IntegerField(),
                                             read_only=True)
    rounds_total = serializers.IntegerField(read_only=True)
    oracle_queries = serializers.IntegerField(read_only=True)
    certification_queries = serializers.IntegerField(read_only=True)
    prep_failures = serializers.IntegerField(read_only=True)
    verify_failures = serializers.IntegerField(read_only=True)
    wall_time = serializers.FloatField(read_only=True, allow_null=True)

    def to_representation(self, instance):
        data = super(SolveReportSerializer, self).to_representation(instance)
        if not self.context.get('timing'):
            data.pop('wall_time')
        return data


class SummarySerializer(serializers.Serializer):
    """
    Serializer for the aggregate of a batch of solves.
    """
    n = serializers.IntegerField()
    p = serializers.IntegerField()
    r = serializers.IntegerField()
    mode = serializers.ChoiceField(choices=constants.MODES)
    trials = serializers.IntegerField()
    success_rate = serializers.FloatField()
    mean_rounds = serializers.FloatField()
    mean_top_level_rounds = serializers.FloatField()
    mean_queries = serializers.FloatField()
    predicted_rounds = serializers.FloatField()


def summarize(reports, field, n, mode, predicted):
    """
    Aggregates solve reports into the dictionary `SummarySerializer` reads.
    """
    trials = len(reports)
    return {
        'n': n,
        'p': field.p,
        'r': field.r,
        'mode': mode,
        'trials': trials,
        'success_rate': sum(report.success for report in reports) / trials,
        'mean_rounds': sum(report.rounds_total for report in reports) / trials,
        'mean_top_level_rounds': sum(report.top_level_rounds
                                     for report in reports) / trials,
        'mean_queries': sum(report.queries for report in reports) / trials,
        'predicted_rounds': predicted,
    }


def render(data):
    """
    Renders serialized data as indented JSON bytes.
    """
    return JSONRenderer().render(data, renderer_context={'indent': 2})
