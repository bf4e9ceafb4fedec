from django.contrib import admin

from .models import OrbitSnapshot


@admin.register(OrbitSnapshot)
class OrbitSnapshotAdmin(admin.ModelAdmin):
    list_display = ('orbit_id', 'group', 'p', 'n', 'facet_dim', 'triple_ok', 'updated_at')
    list_filter = ('group', 'p', 'triple_ok')
    search_fields = ('orbit_id', 'partition')
