"""finrep: a finite-model workbench for representation structures.

Carriers and relations live in `fset` and `rel`; representation-level
machinery in `represent`, `morphism`, `reduction`; relation liftings and
indexed families in `functors` and `naturality`; the higher-order layer in
`hor` and `kleene`; the document format and command driver in `document`,
`report`, `cli`.
"""

__version__ = "0.1.0"
