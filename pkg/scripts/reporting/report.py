#!/usr/bin/env python3
"""
Markdown summaries of a run, written to outputs/reports/.
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Tuple

import pandas as pd

from scripts.config import REPORTS_DIR
from scripts.counting.kappa import KappaTable
from scripts.reporting.emit import format_value

logger = logging.getLogger(__name__)

Section = Tuple[str, object]


def _section_lines(heading: str, content) -> list:
    lines = [f"## {heading}", ""]
    if isinstance(content, KappaTable):
        content = content.wide_frame()
    if isinstance(content, pd.DataFrame):
        if content.empty:
            lines.append("_(no rows)_")
        else:
            shown = content.copy()
            for column in shown.columns:
                shown[column] = [format_value(v) for v in shown[column]]
            lines.append("```")
            lines.append(shown.to_string(index=False))
            lines.append("```")
    elif isinstance(content, Mapping):
        for key, value in content.items():
            lines.append(f"- **{key}:** {format_value(value)}")
    elif isinstance(content, str):
        lines.append(content)
    else:
        lines.extend(f"- {item}" for item in content)
    lines.append("")
    return lines


def generate_report(title: str, sections: Sequence[Section], name: str,
                    directory: Path = None, timestamp: bool = True) -> Path:
    """Write `<name>.md` with one section per (heading, content) pair and return its path."""
    output_file = Path(directory or REPORTS_DIR) / f'{name}.md'
    output_file.parent.mkdir(parents=True, exist_ok=True)
    report = [f"# {title}", ""]
    if timestamp:
        report.append(f"**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        report.append("")
    for heading, content in sections:
        report.extend(_section_lines(heading, content))
    with open(output_file, 'w', encoding='utf-8') as f:
        f.write('\n'.join(report))
    logger.info("Report saved to %s", output_file)
    return output_file


def write_run_report(title: str, sections: Iterable[Section], name: str,
                     directory: Path = None) -> Optional[Path]:
    """generate_report for the command line: a failed report never fails the run."""
    try:
        return generate_report(title, list(sections), name, directory)
    except Exception as e:
        print(f"Error writing report {name}: {e}", file=sys.stderr)
        return None


if __name__ == '__main__':
    from scripts.counting.kappa import load_reference_table
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    table = load_reference_table('quartic')
    path = generate_report("Quartic map counts", [
        ("Setup", {'valences': '2, 4', 'vertex cap': table.vertex_cap, 'genus max': table.genus_max}),
        ("Counting numbers", table),
    ], 'quartic_reference')
    print(f"Report saved to {path}")
