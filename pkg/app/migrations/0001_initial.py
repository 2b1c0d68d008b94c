# Generated by Django 4.2.13 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunManifest',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('run', 'Run'), ('reference', 'Reference'), ('validate', 'Validate'), ('scaling', 'Scaling')], max_length=16)),
                ('model_name', models.CharField(max_length=64)),
                ('config', models.JSONField(default=dict)),
                ('seed', models.BigIntegerField(default=0)),
                ('version', models.CharField(max_length=32)),
                ('timings', models.JSONField(default=dict)),
                ('stop_reason', models.CharField(blank=True, default='', max_length=32)),
                ('output_dir', models.CharField(blank=True, default='', max_length=512)),
                ('is_success', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
        ),
    ]
