"""Exact computations in a family of 2-generated pro-p groups.

The group G = <x, y> is an extension of an elementary abelian pro-p group Z
by the pro-p wreath product C_p wr Z_p.  Everything here is computed exactly
in finite windows: GF(p) linear algebra (fplin), the canonical basis of Z
(zbasis), symbolic collection in G (gsymb), finite wreath quotients as a
brute-force oracle (gfin), filtration series restricted to Z (filtser),
Hausdorff-dimension density tables for finitely generated subgroups (hdim),
and a machine check of the odd-p grid combinatorics (appverify).
"""

__version__ = "0.1.0"
