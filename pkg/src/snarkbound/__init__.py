"""
snarkbound: exact cycle, colouring and oddness computations for cubic
graphs built by substituting a snark into a 4-regular frame.

Certifies shortness-coefficient and oddness-growth bounds for such families
and constructs long cycles in concrete members.
"""

__version__ = "0.1.0"
