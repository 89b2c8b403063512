import csv
import io
from typing import Iterable, Sequence


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        # 17 significant digits; adding 0.0 folds -0.0 into 0.0
        return f"{float(value) + 0.0:.17g}"
    return str(value)


def format_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Render rows with full double precision; ``None`` becomes an empty field."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()
