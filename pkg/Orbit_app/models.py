from django.db import models


class OrbitSnapshot(models.Model):
    """
    A stored row of an orbit report: one rational nilpotent orbit of SL_n or
    Sp_2n over Q_p together with its facet data. Used as a regression snapshot.
    """
    GROUP_CHOICES = [('sl', 'SL_n'), ('sp', 'Sp_2n')]

    group = models.CharField(max_length=2, choices=GROUP_CHOICES)
    p = models.PositiveIntegerField(help_text="Residual characteristic of Q_p.")
    n = models.PositiveIntegerField()
    orbit_id = models.CharField(max_length=255, help_text="Stable id, e.g. sp:[2,2]:Q2=det:-1,hasse:+1")
    partition = models.CharField(max_length=100)
    class_label = models.JSONField(default=dict)
    facet_dim = models.IntegerField()
    equalities = models.JSONField(default=list)
    triple_ok = models.BooleanField(default=False)

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['group', 'p', 'n', 'orbit_id']
        unique_together = ('group', 'p', 'orbit_id')

    def __str__(self):
        return self.orbit_id

    def as_row(self) -> dict:
        """The report row this snapshot was stored from."""
        return {
            "id": self.orbit_id,
            "partition": self.partition,
            "class": self.class_label,
            "facet": {"equalities": self.equalities, "dim": self.facet_dim},
            "triple_ok": self.triple_ok,
        }
