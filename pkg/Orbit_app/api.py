import json
import logging

from drf_yasg.utils import swagger_auto_schema
from rest_framework import status
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from sympy import Matrix

from .exceptions import NilpotentOrbitError
from .lie_core import jacobson_morozov
from .localfield import LocalField
from .quadform import QuadraticForm, invariants, minimal_representative, witt_split
from .reports import matrix_rows, orbit_document, render_tables, to_serializable
from .serializers import (
    HilbertSymbolSerializer,
    MatrixClassifySerializer,
    OrbitDocumentSerializer,
    QuadraticFormSerializer,
    ReportConfigSerializer,
)
from .sl_orbits import classify_sl
from .sp_orbits import classify_sp

logger = logging.getLogger(__name__)


def _library_error(exc: NilpotentOrbitError) -> Response:
    return Response(
        {"error": exc.__class__.__name__, "details": str(exc)},
        status=status.HTTP_400_BAD_REQUEST,
    )


def _server_error(exc: Exception) -> Response:
    logger.exception("Unexpected error while serving an orbit request")
    return Response(
        {"error": "An unexpected server error occurred.", "details": str(exc)},
        status=status.HTTP_500_INTERNAL_SERVER_ERROR,
    )


@swagger_auto_schema(method='post', request_body=ReportConfigSerializer, responses={200: OrbitDocumentSerializer})
@api_view(['POST'])
@permission_classes([AllowAny])
def orbit_report(request):
    """
    Enumerates the rational nilpotent orbits of SL_n or Sp_2n over Q_p together with
    their facet data.

    Example:
    {
        "p": 5,
        "group": "sp",
        "n": 2
    }
    """
    # 1. Validate the incoming request data
    serializer = ReportConfigSerializer(data=request.data)
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

    try:
        # 2. Build the orbit document
        document = orbit_document(serializer.build_config())

        # 3. Shape it through the output serializer; to_serializable covers sympy scalars
        response_data = json.loads(json.dumps(OrbitDocumentSerializer(document).data, default=to_serializable))
        return Response(response_data, status=status.HTTP_200_OK)

    except NilpotentOrbitError as e:
        return _library_error(e)
    except Exception as e:
        return _server_error(e)


@swagger_auto_schema(method='post', request_body=MatrixClassifySerializer)
@api_view(['POST'])
@permission_classes([AllowAny])
def classify_matrix(request):
    """
    Classifies a nilpotent matrix: its Jordan type, the rational orbit it lies in and
    a Lie triple through it.

    Example:
    {
        "p": 5,
        "group": "sl",
        "matrix": [["0", "5"], ["0", "0"]]
    }
    """
    serializer = MatrixClassifySerializer(data=request.data)
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

    data = serializer.validated_data
    try:
        field = LocalField.for_prime(data['p'])
        X = Matrix(data['matrix'])
        symplectic = data['group'] == 'sp'
        orbit = classify_sp(field, X) if symplectic else classify_sl(field, X)
        triple = jacobson_morozov(X, symplectic=symplectic)

        response_data = {
            "id": orbit.orbit_id,
            "partition": orbit.lam.label(),
            "class": orbit.class_data(),
            "triple": {"X": matrix_rows(triple.X), "H": matrix_rows(triple.H), "Y": matrix_rows(triple.Y)},
        }
        return Response(json.loads(json.dumps(response_data, default=to_serializable)), status=status.HTTP_200_OK)

    except NilpotentOrbitError as e:
        return _library_error(e)
    except Exception as e:
        return _server_error(e)


@swagger_auto_schema(method='post', request_body=QuadraticFormSerializer)
@api_view(['POST'])
@permission_classes([AllowAny])
def quadratic_form(request):
    """
    Invariants, Witt decomposition and minimal representative of a diagonal form.

    Example:
    {
        "p": 5,
        "entries": ["1", "eps", "pi"]
    }
    """
    serializer = QuadraticFormSerializer(data=request.data)
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

    data = serializer.validated_data
    try:
        field = data['field']
        Q = QuadraticForm.from_entries(data['entries'])
        m, kernel = witt_split(field, Q)
        response_data = {
            "form": str(Q),
            "invariants": invariants(field, Q).as_dict(),
            "witt_index": m,
            "anisotropic_kernel": str(kernel),
            "minimal_representative": matrix_rows(minimal_representative(field, Q)),
        }
        return Response(response_data, status=status.HTTP_200_OK)

    except NilpotentOrbitError as e:
        return _library_error(e)
    except Exception as e:
        return _server_error(e)


@swagger_auto_schema(method='post', request_body=HilbertSymbolSerializer)
@api_view(['POST'])
@permission_classes([AllowAny])
def hilbert_symbol(request):
    """
    The Hilbert symbol (a, b) over Q_p; a and b may be rationals or eps, pi, eps*pi.
    """
    serializer = HilbertSymbolSerializer(data=request.data)
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

    data = serializer.validated_data
    try:
        value = data['field'].hilbert_symbol(data['a'], data['b'])
        return Response(
            {"a": str(data['a']), "b": str(data['b']), "p": data['p'], "value": value},
            status=status.HTTP_200_OK,
        )
    except NilpotentOrbitError as e:
        return _library_error(e)
    except Exception as e:
        return _server_error(e)


@swagger_auto_schema(method='post', request_body=ReportConfigSerializer)
@api_view(['POST'])
@permission_classes([AllowAny])
def orbit_tables(request):
    """
    The orbit table of the group together with the quadratic form tables over Q_p,
    as markdown and as row data.
    """
    serializer = ReportConfigSerializer(data=request.data)
    if not serializer.is_valid():
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

    try:
        markdown, tables = render_tables(serializer.build_config())
        return Response({"markdown": markdown, "tables": tables}, status=status.HTTP_200_OK)
    except NilpotentOrbitError as e:
        return _library_error(e)
    except Exception as e:
        return _server_error(e)
