"""UTC timestamps at millisecond resolution, with RFC 3339 text form."""

from __future__ import annotations

from datetime import datetime, timezone


def now() -> datetime:
    """Current UTC time truncated to whole milliseconds."""
    t = datetime.now(timezone.utc)
    return t.replace(microsecond=(t.microsecond // 1000) * 1000)


def to_rfc3339(t: datetime) -> str:
    if t.tzinfo is None:
        t = t.replace(tzinfo=timezone.utc)
    t = t.astimezone(timezone.utc)
    return t.strftime("%Y-%m-%dT%H:%M:%S.") + f"{t.microsecond // 1000:03d}Z"


def from_rfc3339(s: str) -> datetime:
    t = datetime.fromisoformat(s.replace("Z", "+00:00"))
    if t.tzinfo is None:
        t = t.replace(tzinfo=timezone.utc)
    t = t.astimezone(timezone.utc)
    return t.replace(microsecond=(t.microsecond // 1000) * 1000)


def to_epoch_ms(t: datetime) -> int:
    return int(t.timestamp() * 1000)


def from_epoch_ms(ms: int) -> datetime:
    return datetime.fromtimestamp(ms / 1000, timezone.utc)
