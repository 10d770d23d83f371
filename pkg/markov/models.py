# ErgoCert markov/models.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from django.db import models


class ScenarioRun(models.Model):
    """One invocation of the scenario runner, kept as a ledger row."""
    OK = 'ok'
    NO_CERTIFICATE = 'no_certificate'
    ERROR = 'error'
    STATUS_CHOICES = (
        (OK, 'ok'),
        (NO_CERTIFICATE, 'no certificate'),
        (ERROR, 'error'),
    )

    # sha256 of the scenario file bytes
    digest = models.CharField(max_length=64, db_index=True)
    analysis = models.CharField(max_length=32)
    status = models.CharField(max_length=16, choices=STATUS_CHOICES)
    exit_code = models.IntegerField()
    seed = models.IntegerField(default=0)
    out_dir = models.CharField(max_length=500)
    report = models.TextField(blank=True)
    created = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return 'ScenarioRun {} ({}, {})'.format(self.id, self.analysis, self.status)

    class Meta:
        ordering = ('-created', '-id')
