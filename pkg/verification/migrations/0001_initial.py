# Generated by Django 6.0.1 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('check_id', models.CharField(db_index=True, max_length=64, verbose_name='Check')),
                ('status', models.CharField(choices=[('pass', 'Pass'), ('fail', 'Fail')], db_index=True, max_length=10, verbose_name='Status')),
                ('steps', models.JSONField(blank=True, default=list, help_text='List of {description, expression, expected, outcome, passed}', verbose_name='Steps')),
                ('engine_stats', models.JSONField(blank=True, default=dict, verbose_name='Engine Statistics')),
                ('options', models.JSONField(blank=True, default=dict, help_text='Order, bound and seed the run was made with', verbose_name='Options')),
                ('elapsed_ms', models.FloatField(default=0, verbose_name='Elapsed (ms)')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Created At')),
            ],
            options={
                'verbose_name': 'Verification Run',
                'verbose_name_plural': 'Verification Runs',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['check_id', '-created_at'], name='verification_check_created_idx')],
            },
        ),
    ]
