"""
seqdesign I/O utilities.
"""

import hashlib
import io
import os
import sys
from contextlib import contextmanager
from typing import Iterator, Optional, IO

import puremagic  # type: ignore

from .warnings import IngestionError

# Container and document formats that are sometimes handed over instead of
# the exported delimited text.
BINARY_TYPES = frozenset(
    (
        ".7z",
        ".bz2",
        ".doc",
        ".docx",
        ".gz",
        ".jpg",
        ".ods",
        ".parquet",
        ".pdf",
        ".png",
        ".xls",
        ".xlsx",
        ".xz",
        ".zip",
    )
)


def sniff_file_type(data: bytes) -> Optional[str]:
    try:
        file_type = puremagic.from_string(data)
    except (puremagic.PureError, ValueError):
        return None
    return str(file_type) if file_type else None


@contextmanager
def open_table_source(infile_name: Optional[str]) -> Iterator[IO[bytes]]:
    # Set up input
    infile: IO[bytes]
    if infile_name is not None and infile_name != "-":
        try:
            infile = open(infile_name, "rb")  # pylint: disable=consider-using-with
        except OSError as exc:
            raise IngestionError(f"cannot open input file {infile_name}") from exc
    else:
        infile = os.fdopen(sys.stdin.fileno(), "rb", closefd=False)

    # Slurp infile into a seekable BytesIO
    try:
        data = infile.read()
    finally:
        infile.close()

    # Find type of input
    file_type = sniff_file_type(data[:4096])
    if file_type in BINARY_TYPES:
        raise IngestionError(
            f"incompatible file type `{file_type}' for {infile_name or 'standard input'}"
        )

    source = io.BytesIO(data)
    try:
        yield source
    finally:
        source.close()


def data_digest(data: bytes) -> str:
    return f"sha256:{hashlib.sha256(data).hexdigest()}"


@contextmanager
def open_output(outfile_name: Optional[str]) -> Iterator[IO[str]]:
    # Set up output
    if outfile_name is None or outfile_name == "-":
        yield sys.stdout
        return
    try:
        outfile = open(  # pylint: disable=consider-using-with
            outfile_name, "w", encoding="utf-8", newline=""
        )
    except OSError as exc:
        raise IngestionError(f"cannot open output file {outfile_name}") from exc
    try:
        yield outfile
    finally:
        outfile.close()
