"""
Timestamp helpers for reports.

Report timestamps are ISO 8601 in the local timezone.
"""

from datetime import datetime
from typing import Optional

from dateutil.tz import tzlocal


def report_timestamp(now: Optional[datetime] = None) -> str:
    """
    Format a report timestamp.

    Args:
        now: Time to format; the current local time when None. Naive values
            are taken to be local time.

    Returns:
        ISO 8601 string with seconds precision and UTC offset
    """
    if now is None:
        now = datetime.now(tzlocal())
    elif now.tzinfo is None:
        now = now.replace(tzinfo=tzlocal())
    return now.isoformat(timespec='seconds')
