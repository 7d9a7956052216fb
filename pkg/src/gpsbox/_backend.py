"""Select compiled kernels when built, otherwise the pure-Python fallbacks."""

try:
    from gpsbox._lobatto import legendre_with_derivative
    from gpsbox._numerov import shoot
    BACKEND = "cython"
except ImportError:  # extension not built
    from gpsbox._lobatto_py import legendre_with_derivative
    from gpsbox._numerov_py import shoot
    BACKEND = "python"

__all__ = ["BACKEND", "legendre_with_derivative", "shoot"]
