from .audit import AUDIT_KINDS, GLOBAL_STREAM, AuditEvent, AuditLog, payload_digest
from .app import ServiceRuntime, create_app

__all__ = [
    "AUDIT_KINDS",
    "GLOBAL_STREAM",
    "AuditEvent",
    "AuditLog",
    "payload_digest",
    "ServiceRuntime",
    "create_app",
]
