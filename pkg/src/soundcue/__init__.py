"""Sound-effect cue generation for story text: tag-based trigger retrieval
plus a context-aware classifier deciding which triggers should fire."""

__version__ = "0.1.0"
