"""Table, CSV and JSON emission and markdown run reports."""
