"""chemserve: a self-contained cheminformatics toolkit and service.

Molecular graphs, SMILES/molfile/SDF handling, fingerprint and
substructure search, an ORM-style record store, a REST service, a lazy
caching client, and naive-Bayes target prediction.
"""

__version__ = "0.1.0"
