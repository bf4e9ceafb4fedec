"""
URL configuration for the Nilpotent project.

The orbit API lives under /api/; Swagger and ReDoc documentation are served by
drf-yasg at /docs/ and /redoc/.
"""
from django.contrib import admin
from django.urls import path
from drf_yasg import openapi
from drf_yasg.views import get_schema_view
from rest_framework import permissions

from Orbit_app import api

schema_view = get_schema_view(
   openapi.Info(
      title="Nilpotent Orbits API",
      default_version='v1.0',
      description="Rational nilpotent orbits of SL_n and Sp_2n over Q_p and their facet data",
      license=openapi.License(name="BSD License"),
   ),
   public=True,
   permission_classes=(permissions.AllowAny,),
)


urlpatterns = [
    path('admin/', admin.site.urls),
    path('docs/', schema_view.with_ui('swagger', cache_timeout=0), name='schema-swagger-ui'),
    path('redoc/', schema_view.with_ui('redoc', cache_timeout=0), name='schema-redoc'),

    path('api/orbits/', api.orbit_report, name='orbit-report'),
    path('api/classify/', api.classify_matrix, name='classify-matrix'),
    path('api/forms/', api.quadratic_form, name='quadratic-form'),
    path('api/hilbert/', api.hilbert_symbol, name='hilbert-symbol'),
    path('api/tables/', api.orbit_tables, name='orbit-tables'),
]
