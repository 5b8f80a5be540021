#!/usr/bin/env python3
"""
Report Generator
Renders lab results as JSON, CSV or markdown and saves them to disk.
"""

import dataclasses
import json
import logging
from datetime import datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from errors import BadParam
from lab_config import get_config

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "markdown")
SAFE_INT = 1 << 53


def to_jsonable(value: Any) -> Any:
    """
    Plain JSON data for any lab result: integers outside the exactly
    representable double range become decimal strings, rationals become "p/q".
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        value = int(value)
        return value if -SAFE_INT < value < SAFE_INT else str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, pd.DataFrame):
        return [to_jsonable(row) for row in value.to_dict(orient="records")]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if hasattr(value, "to_json") and callable(value.to_json):
        return to_jsonable(value.to_json())
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def _as_frame(result: Any) -> pd.DataFrame:
    if isinstance(result, pd.DataFrame):
        return result
    if hasattr(result, "to_frame"):
        return result.to_frame()
    data = to_jsonable(result)
    if isinstance(data, list):
        return pd.DataFrame(data)
    if isinstance(data, dict):
        return pd.DataFrame([data])
    return pd.DataFrame({"value": [data]})


def _csv_cell(value: Any) -> Any:
    """Nested values are written as JSON text inside the cell."""
    data = to_jsonable(value)
    return json.dumps(data) if isinstance(data, (list, dict)) else data


class ReportGenerator:
    """
    Turns results from every module into machine-readable output or a
    short markdown report
    """

    def __init__(self):
        self.config = get_config()

    def render(self, result: Any, fmt: str = None, title: str = "posetlab result") -> str:
        """
        Render a result in one of the supported formats

        Args:
            result: any lab result (dataclass, dict, DataFrame, ...)
            fmt: "json", "csv" or "markdown"; defaults to settings.default_format
            title: heading for markdown output

        Returns:
            Rendered text
        """
        fmt = fmt or self.config["settings"]["default_format"]
        if fmt == "json":
            return self.to_json(result)
        if fmt == "csv":
            return self.to_csv(result)
        if fmt == "markdown":
            return self.create_report(title, result)
        raise BadParam(f"unknown format '{fmt}', expected one of {FORMATS}")

    def to_json(self, result: Any) -> str:
        return json.dumps(to_jsonable(result), indent=2, ensure_ascii=False)

    def to_csv(self, result: Any) -> str:
        frame = _as_frame(result).apply(lambda column: column.map(_csv_cell))
        return frame.to_csv(index=False, lineterminator="\n")

    def markdown_table(self, frame: pd.DataFrame) -> str:
        if frame.empty:
            return "_no rows_\n"
        header = "| " + " | ".join(str(c) for c in frame.columns) + " |\n"
        rule = "|" + "|".join("---" for _ in frame.columns) + "|\n"
        body = ""
        for row in frame.itertuples(index=False):
            body += "| " + " | ".join(str(to_jsonable(v)) for v in row) + " |\n"
        return header + rule + body

    def create_report(self, title: str, result: Any) -> str:
        """Markdown report: summary bullets for scalar fields, tables for row data."""
        logger.info("Creating report: %s", title)
        report = f"# {title}\n\n"
        report += f"**Generated by:** {self.config['project']['name']} {self.config['project']['version']}  \n"
        report += f"**Date:** {datetime.now().strftime('%Y-%m-%d')}\n\n"

        if isinstance(result, pd.DataFrame):
            report += "## Results\n\n" + self.markdown_table(result)
            if result.attrs:
                report += "\n## Summary\n\n" + self._bullets(result.attrs)
            return report

        data = to_jsonable(result)
        if isinstance(data, list):
            return report + "## Results\n\n" + self.markdown_table(pd.DataFrame(data))
        if not isinstance(data, dict):
            return report + f"{data}\n"
        scalars = {k: v for k, v in data.items() if not isinstance(v, (list, dict))}
        report += "## Summary\n\n" + self._bullets(scalars)
        for key, value in data.items():
            if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
                report += f"\n## {key}\n\n" + self.markdown_table(pd.DataFrame(value))
            elif isinstance(value, (list, dict)):
                report += f"\n## {key}\n\n```\n{json.dumps(value)}\n```\n"
        return report

    def _bullets(self, values: Dict[str, Any]) -> str:
        return "".join(f"- **{k}:** {to_jsonable(v)}\n" for k, v in values.items())

    def save_report(self, content: str, filename: str, fmt: str = "markdown") -> str:
        """
        Save rendered content, adding the format's extension when missing

        Returns:
            Status message
        """
        suffix = {"json": ".json", "csv": ".csv", "markdown": ".md"}.get(fmt)
        if suffix is None:
            raise BadParam(f"unknown format '{fmt}', expected one of {FORMATS}")
        path = Path(filename)
        if path.suffix != suffix:
            path = path.with_name(path.name + suffix)
        try:
            path.write_text(content, encoding="utf-8")
        except OSError as e:
            logger.error("could not save report to %s: %s", path, e)
            return f"Error saving report: {e}"
        return f"Report saved as {fmt}: {path}"

    def summary_rows(self, results: Dict[str, Any]) -> List[Dict[str, Any]]:
        """One row per named result, scalar fields only, for comparison tables."""
        rows = []
        for name, result in results.items():
            data = to_jsonable(result)
            row = {"name": name}
            if isinstance(data, dict):
                row.update({k: v for k, v in data.items() if not isinstance(v, (list, dict))})
            else:
                row["value"] = data
            rows.append(row)
        return rows


def main():
    """Demo function"""
    generator = ReportGenerator()
    result = {"poset": "diamond:4", "e": 3, "x": 3, "count": 3 ** 40, "lubell": Fraction(7, 3)}
    print(generator.render(result, "json"))
    print(generator.render(result, "markdown", "Parameters of diamond:4"))


if __name__ == "__main__":
    main()
