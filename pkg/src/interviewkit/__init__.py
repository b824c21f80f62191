"""Self-hosted interview practice engine.

Document ingestion, vector retrieval, interview session orchestration,
alignment metrics, and the HTTP/WebSocket service that ties them together.
"""

__version__ = "0.1.0"
