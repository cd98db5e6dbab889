"""evigraph: graph-based claim verification over SRL-parsed evidence."""

__version__ = "0.1.0"
