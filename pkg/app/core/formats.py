"""JSON and CSV point-set files, and plain-text verification reports."""
import csv
import io
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from app.core.errors import PointSetFormatError
from app.models.certificate import Certificate
from app.models.pointset import PointSetFile
from app.models.run import OutputFormat

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# header keys in CSV order; "size" and the certificate fields are derived
_CSV_KEYS = ("dim", "n", "prime", "form", "mode", "version", "seed")
_CERTIFICATE_KEYS = ("status", "max_hyperplane_incidence", "max_quadric_incidence")


def dumps_json(data: PointSetFile) -> str:
    return data.model_dump_json(indent=2) + "\n"


def _encode_form(rows: list[list[int]]) -> str:
    return ";".join(",".join(str(x) for x in row) for row in rows)


def _decode_form(text: str) -> list[list[int]]:
    if not text:
        return []
    return [[int(x) for x in part.split(",")] for part in text.split(";")]


def dumps_csv(data: PointSetFile) -> str:
    buffer = io.StringIO()
    header = data.model_dump(mode="json")
    for key in _CSV_KEYS:
        value = header[key]
        if key == "form":
            value = _encode_form(value)
        buffer.write(f"# {key}={'' if value is None else value}\n")
    buffer.write(f"# size={data.size}\n")
    for key in _CERTIFICATE_KEYS:
        if data.certificate is not None:
            value = data.certificate.get(key)
            buffer.write(f"# {key}={'' if value is None else value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(data.points)
    return buffer.getvalue()


def dumps(data: PointSetFile, fmt: OutputFormat) -> str:
    return dumps_csv(data) if fmt == OutputFormat.CSV else dumps_json(data)


def write_point_file(data: PointSetFile, path: PathLike, fmt: Optional[OutputFormat] = None) -> Path:
    """Write a point-set file; the format defaults to the file suffix."""
    path = Path(path)
    fmt = fmt or guess_format(path)
    path.write_text(dumps(data, fmt), encoding="utf-8")
    logger.info(f"Wrote {data.size} points to {path} ({fmt.value})")
    return path


def guess_format(path: PathLike) -> OutputFormat:
    return OutputFormat.CSV if Path(path).suffix.lower() == ".csv" else OutputFormat.JSON


def loads_json(text: str) -> PointSetFile:
    try:
        return PointSetFile.model_validate_json(text)
    except ValidationError as e:
        raise PointSetFormatError(f"invalid point-set file: {e}") from e


def loads_csv(text: str) -> PointSetFile:
    header: dict[str, str] = {}
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise PointSetFormatError(f"malformed header line {line!r}")
            header[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)

    try:
        points = [[int(x) for x in row] for row in csv.reader(body)]
        fields = {key: header[key] for key in _CSV_KEYS if header.get(key)}
        fields["form"] = _decode_form(header.get("form", ""))
        certificate = None
        if header.get("status"):
            certificate = {key: _optional_int(header.get(key)) for key in _CERTIFICATE_KEYS[1:]}
            certificate["status"] = header["status"]
        data = PointSetFile(points=points, certificate=certificate, **fields)
    except (ValueError, ValidationError) as e:
        raise PointSetFormatError(f"invalid point-set file: {e}") from e

    if "size" in header and int(header["size"]) != data.size:
        raise PointSetFormatError(f"header declares {header['size']} points, file has {data.size}")
    return data


def _optional_int(value: Optional[str]) -> Optional[int]:
    return int(value) if value else None


def read_point_file(path: PathLike) -> PointSetFile:
    """Read a JSON or CSV point-set file.

    Raises:
        PointSetFormatError: unreadable or inconsistent file
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise PointSetFormatError(f"cannot read {path}: {e}") from e
    if text.lstrip().startswith("{"):
        return loads_json(text)
    return loads_csv(text)


def render_report(certificate: Certificate, form: str) -> str:
    """Human-readable verification report."""
    lines = [
        f"status: {certificate.status.value}",
        f"arithmetic: {certificate.arithmetic}",
        f"form: {form}",
        f"dim: {certificate.dim}",
        f"points: {certificate.num_points}",
        f"subsets tested: {certificate.subsets_tested} "
        f"({certificate.hyperplane_subsets} hyperplane, {certificate.quadric_subsets} quadric)",
    ]
    qualifier = "" if certificate.incidence_exact else " (lower bound)"
    if certificate.max_hyperplane_incidence is not None:
        lines.append(f"max hyperplane incidence: {certificate.max_hyperplane_incidence}{qualifier}")
    if certificate.max_quadric_incidence is not None:
        lines.append(f"max quadric incidence: {certificate.max_quadric_incidence}{qualifier}")
    if certificate.violation is not None:
        v = certificate.violation
        lines.append(f"violating subset ({v.kind.value}): {v.subset}")
        lines.append(f"witness coefficients: {v.witness}")
        lines.append(f"determinant: {v.determinant}")
    return "\n".join(lines) + "\n"
