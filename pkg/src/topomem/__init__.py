"""Single-shot encoding, storage and decoding of a qubit in topological CSS codes."""

__version__ = "0.1.0"
