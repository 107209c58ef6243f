"""A workbench for the operational side of computability's cornerstones:
program specialisation, self-interpretation, and programs that compute
with their own text, over two machine models with exact step counting.
"""

__version__ = "0.1.0"
