from django.db import models


class RunManifest(models.Model):
    COMMAND_RUN = 'run'
    COMMAND_REFERENCE = 'reference'
    COMMAND_VALIDATE = 'validate'
    COMMAND_SCALING = 'scaling'
    COMMAND_CHOICES = (
        (COMMAND_RUN, 'Run'),
        (COMMAND_REFERENCE, 'Reference'),
        (COMMAND_VALIDATE, 'Validate'),
        (COMMAND_SCALING, 'Scaling'),
    )
    command = models.CharField(max_length=16, choices=COMMAND_CHOICES)

    model_name = models.CharField(max_length=64)
    config = models.JSONField(default=dict)
    seed = models.BigIntegerField(default=0)
    version = models.CharField(max_length=32)
    timings = models.JSONField(default=dict)
    stop_reason = models.CharField(max_length=32, blank=True, default='')
    output_dir = models.CharField(max_length=512, blank=True, default='')

    is_success = models.BooleanField(default=False)
    created_at = models.DateTimeField(auto_now_add=True)
