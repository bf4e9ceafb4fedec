from django.apps import AppConfig


class OrbitAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'Orbit_app'
    verbose_name = 'Nilpotent orbits'
