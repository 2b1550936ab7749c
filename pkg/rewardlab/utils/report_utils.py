from datetime import datetime, timezone


def format_timestamp(timestamp=None) -> str:
    """Format a run timestamp for the CSV timestamp column (UTC, ISO-8601, seconds)"""
    try:
        if timestamp is None:
            timestamp = datetime.now(timezone.utc)
        elif isinstance(timestamp, str):
            timestamp = datetime.fromisoformat(timestamp)
        if timestamp.tzinfo is None:
            timestamp = timestamp.replace(tzinfo=timezone.utc)
        return timestamp.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    except ValueError as e:
        print(f"Error formatting timestamp: {str(e)}")
        return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
