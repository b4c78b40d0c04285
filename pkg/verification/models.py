from django.db import models
from django.utils.translation import gettext_lazy as _


class VerificationRun(models.Model):
    """One check run, stored when `verify --save` is given."""

    class Status(models.TextChoices):
        PASS = 'pass', _('Pass')
        FAIL = 'fail', _('Fail')

    check_id = models.CharField(_("Check"), max_length=64, db_index=True)
    status = models.CharField(
        _("Status"),
        max_length=10,
        choices=Status.choices,
        db_index=True
    )
    steps = models.JSONField(
        _("Steps"),
        default=list,
        blank=True,
        help_text=_("List of {description, expression, expected, outcome, passed}")
    )
    engine_stats = models.JSONField(_("Engine Statistics"), default=dict, blank=True)
    options = models.JSONField(
        _("Options"),
        default=dict,
        blank=True,
        help_text=_("Order, bound and seed the run was made with")
    )
    elapsed_ms = models.FloatField(_("Elapsed (ms)"), default=0)

    # Timestamps
    created_at = models.DateTimeField(_("Created At"), auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        verbose_name = _("Verification Run")
        verbose_name_plural = _("Verification Runs")
        indexes = [
            models.Index(fields=['check_id', '-created_at'], name='verification_check_created_idx'),
        ]

    def __str__(self):
        return f"{self.check_id} ({self.get_status_display()})"

    def __repr__(self):
        return f"<VerificationRun: {self.check_id} - {self.status}>"

    @property
    def passed(self) -> bool:
        return self.status == self.Status.PASS
