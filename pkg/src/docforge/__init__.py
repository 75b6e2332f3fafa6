"""docforge: deterministic synthesis of annotated document-understanding corpora.

Generates translated page renderings, diacritic-controlled Arabic text crops,
HTML-grounded tables, and annotated charts, plus the evaluation metrics
(WER/CER, TEDS) used to score models against such corpora.
"""

__version__ = "0.1.0"

GENERATOR_VERSION = __version__
