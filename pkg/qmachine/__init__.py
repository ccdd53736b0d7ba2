"""
qmachine - hidden-measurement model of spin one-half and its quantum axiomatics.
"""

__version__ = '0.1.0'

from . import compound
from . import exceptions
from . import hilbert
from . import lattice
from . import machine
from . import spa

__all__ = [
    'compound',
    'exceptions',
    'hilbert',
    'lattice',
    'machine',
    'spa'
]
