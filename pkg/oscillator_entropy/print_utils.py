"""
Printing utilities for entropy records: rich tables for people, CSV and JSON lines for tools.
"""
import csv
import json
import sys
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Optional, TextIO

try:
    from rich.console import Console
    from rich.table import Table
except ImportError:
    Console = None
    Table = None

if TYPE_CHECKING:
    from .cli import OutputRecord, VerifyRow

console = Console() if Console else None

CSV_FIELDS = ["D", "ns", "alpha", "S_position", "S_momentum", "S_sum", "energy", "abs_error"]
ORACLE_FIELDS = ["S_oracle", "oracle_delta"]
VERIFY_FIELDS = ["n", "alpha", "S_formula", "S_oracle", "delta", "ok"]

HUMAN_DIGITS = 7
MACHINE_DIGITS = 17


def _sig(value: Optional[float], digits: int) -> str:
    if value is None:
        return ""
    return f"{value:.{digits}g}"


def record_fields(record: "OutputRecord") -> Dict[str, Any]:
    """The CSV/JSON field mapping of one record, values unformatted."""
    state, report = record.state, record.report
    fields: Dict[str, Any] = {
        "D": state.dims,
        "ns": list(state.occupations),
        "alpha": state.alpha,
        "S_position": report.position_entropy,
        "S_momentum": report.momentum_entropy,
        "S_sum": report.uncertainty_sum,
        "energy": report.energy,
        "abs_error": report.abs_error_estimate,
    }
    if record.oracle_value is not None:
        fields["S_oracle"] = record.oracle_value
        fields["oracle_delta"] = record.oracle_delta
    return fields


def print_records_table(
    records: Iterable["OutputRecord"],
    momentum: bool = True,
    uncertainty: bool = True,
    title: Optional[str] = None,
) -> None:
    records = list(records)
    with_oracle = any(r.oracle_value is not None for r in records)
    headers = ["D", "ns", "alpha", "S_position (nats)"]
    if momentum:
        headers.append("S_momentum (nats)")
    if uncertainty:
        headers.append("S_sum (nats)")
    headers += ["energy (a.u.)", "abs_error"]
    if with_oracle:
        headers += ["S_oracle (nats)", "oracle_delta"]

    rows: List[List[str]] = []
    for record in records:
        f = record_fields(record)
        row = [str(f["D"]), ",".join(str(n) for n in f["ns"]), _sig(f["alpha"], HUMAN_DIGITS),
               _sig(f["S_position"], HUMAN_DIGITS)]
        if momentum:
            row.append(_sig(f["S_momentum"], HUMAN_DIGITS))
        if uncertainty:
            row.append(_sig(f["S_sum"], HUMAN_DIGITS))
        row += [_sig(f["energy"], HUMAN_DIGITS), _sig(f["abs_error"], 2)]
        if with_oracle:
            row += [_sig(f.get("S_oracle"), HUMAN_DIGITS), _sig(f.get("oracle_delta"), 2)]
        rows.append(row)
    _print_table(headers, rows, title)


def print_verify_table(rows: Iterable["VerifyRow"], tol: float) -> None:
    body = [
        [str(r.n), _sig(r.alpha, HUMAN_DIGITS), _sig(r.formula, HUMAN_DIGITS + 3),
         _sig(r.oracle, HUMAN_DIGITS + 3), _sig(r.delta, 2), "ok" if r.ok else "FAIL"]
        for r in rows
    ]
    headers = ["n", "alpha", "S_formula (nats)", "S_oracle (nats)", "delta", f"<= {tol:g}"]
    _print_table(headers, body, "closed form vs quadrature")


def _print_table(headers: List[str], rows: List[List[str]], title: Optional[str]) -> None:
    # Without rich fall back to a tab separated dump
    if console is None or Table is None:
        if title:
            print(title)
        print("\t".join(headers))
        for row in rows:
            print("\t".join(row))
        return
    table = Table(title=title)
    for i, header in enumerate(headers):
        table.add_column(header, justify="left" if i < 2 else "right")
    for row in rows:
        table.add_row(*row)
    console.print(table)


def write_records_csv(records: Iterable["OutputRecord"], stream: TextIO = None) -> None:
    stream = stream or sys.stdout
    records = list(records)
    fields = list(CSV_FIELDS)
    if any(r.oracle_value is not None for r in records):
        fields += ORACLE_FIELDS
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for record in records:
        f = record_fields(record)
        out = []
        for name in fields:
            value = f.get(name)
            if name == "ns":
                out.append(",".join(str(n) for n in value))
            elif isinstance(value, float):
                out.append(_sig(value, MACHINE_DIGITS))
            else:
                out.append("" if value is None else str(value))
        writer.writerow(out)


def write_records_json(records: Iterable["OutputRecord"], stream: TextIO = None) -> None:
    """One JSON object per line; floats are written with their shortest round-trip repr."""
    stream = stream or sys.stdout
    for record in records:
        stream.write(json.dumps(record_fields(record)) + "\n")


def write_verify_csv(rows: Iterable["VerifyRow"], stream: TextIO = None) -> None:
    stream = stream or sys.stdout
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(VERIFY_FIELDS)
    for r in rows:
        writer.writerow([r.n, _sig(r.alpha, MACHINE_DIGITS), _sig(r.formula, MACHINE_DIGITS),
                         _sig(r.oracle, MACHINE_DIGITS), _sig(r.delta, MACHINE_DIGITS), int(r.ok)])


def write_verify_json(rows: Iterable["VerifyRow"], stream: TextIO = None) -> None:
    stream = stream or sys.stdout
    for r in rows:
        stream.write(json.dumps({
            "n": r.n, "alpha": r.alpha, "S_formula": r.formula,
            "S_oracle": r.oracle, "delta": r.delta, "ok": r.ok,
        }) + "\n")
