"""
qmachine - hidden-measurement model of spin one-half and its quantum axiomatics.
"""
import sys

from .cli import main

if __name__ == '__main__':
    sys.exit(main())
