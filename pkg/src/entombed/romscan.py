"""Wildcard byte signatures and corpus scanning for ROM images.

The PRNG routine's opcode sequence is distinctive, but each game that
reused the code kept its four state cells at different zero-page
addresses. A signature therefore mixes fixed bytes with named wildcard
slots; every position sharing a slot name must match the same byte, which
pins down each game's cell assignment as a side effect of matching.

Scanning is an exact byte-level sliding window over the raw image (no
instruction-flow analysis). Files are identified by MD5 so results can be
tied to a specific dump without distributing it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .cpu import assemble, prng_routine

Element = Union[int, str]


@dataclass(frozen=True)
class SignatureTemplate:
    """An ordered mix of fixed bytes and named wildcard slots."""

    elements: Tuple[Element, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("signature must not be empty")
        fixed = 0
        for el in self.elements:
            if isinstance(el, int):
                if not 0 <= el <= 0xFF:
                    raise ValueError(f"fixed byte out of range: {el!r}")
                fixed += 1
            elif isinstance(el, str):
                if not el:
                    raise ValueError("slot name must be non-empty")
            else:
                raise ValueError(f"element must be int or str, got {el!r}")
        if fixed == 0:
            raise ValueError("signature needs at least one fixed byte")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def slot_order(self) -> Tuple[str, ...]:
        """Slot names in order of first appearance."""
        seen: List[str] = []
        for el in self.elements:
            if isinstance(el, str) and el not in seen:
                seen.append(el)
        return tuple(seen)

    @property
    def slot_count(self) -> int:
        """Number of wildcard positions (not distinct names)."""
        return sum(1 for el in self.elements if isinstance(el, str))

    def match_at(self, buf: bytes, offset: int) -> Optional[Dict[str, int]]:
        """Bindings if the template matches ``buf`` at ``offset``, else None."""
        if offset < 0 or offset + len(self.elements) > len(buf):
            return None
        bindings: Dict[str, int] = {}
        for i, el in enumerate(self.elements):
            b = buf[offset + i]
            if isinstance(el, int):
                if b != el:
                    return None
            else:
                bound = bindings.get(el)
                if bound is None:
                    bindings[el] = b
                elif bound != b:
                    return None
        return bindings

    def instantiate(self, bindings: Dict[str, int]) -> bytes:
        """Concrete bytes with every slot filled from ``bindings``."""
        out = bytearray()
        for el in self.elements:
            if isinstance(el, int):
                out.append(el)
            else:
                if el not in bindings:
                    raise ValueError(f"no binding for slot {el!r}")
                value = bindings[el]
                if not 0 <= value <= 0xFF:
                    raise ValueError(f"binding {el!r}={value!r} out of byte range")
                out.append(value)
        return bytes(out)

    def to_text(self) -> str:
        """Serialize as whitespace-separated ``hh`` / ``?name`` tokens."""
        return " ".join(
            f"{el:02x}" if isinstance(el, int) else f"?{el}" for el in self.elements
        )

    @classmethod
    def from_text(cls, text: str) -> "SignatureTemplate":
        """Parse the :meth:`to_text` format."""
        elements: List[Element] = []
        for token in text.split():
            if token.startswith("?"):
                if len(token) < 2:
                    raise ValueError("slot token must be ?name")
                elements.append(token[1:])
            elif len(token) == 2:
                try:
                    elements.append(int(token, 16))
                except ValueError:
                    raise ValueError(f"bad hex byte token: {token!r}") from None
            else:
                raise ValueError(f"token must be two hex digits or ?name: {token!r}")
        return cls(tuple(elements))


def prng_signature(include_rts: bool = True) -> SignatureTemplate:
    """The PRNG routine as a signature with W/X/Y/Z cell slots.

    37 bytes with the terminating RTS (14 of them wildcards), 36 without.
    RTS is included by default: it is part of the routine and sharpens
    the pattern.
    """
    elements = tuple(assemble(prng_routine("W", "X", "Y", "Z")))
    if not include_rts:
        elements = elements[:-1]
    return SignatureTemplate(elements)


@dataclass(frozen=True)
class ScanHit:
    """One match location and the byte each slot was bound to."""

    source: str
    offset: int
    bindings: Dict[str, int]

    def bindings_distinct(self) -> bool:
        """Whether all slots bound to pairwise different bytes."""
        values = list(self.bindings.values())
        return len(set(values)) == len(values)

    def bindings_consecutive(self) -> bool:
        """Whether the bound cells sit at consecutive addresses (in some order)."""
        values = sorted(self.bindings.values())
        return len(values) > 0 and all(
            values[i + 1] == values[i] + 1 for i in range(len(values) - 1)
        )


def scan_bytes(buf: bytes, sig: SignatureTemplate, source: str = "<bytes>") -> List[ScanHit]:
    """Every offset where the signature matches, in ascending order.

    Overlapping matches are all reported. Candidate offsets are anchored
    on the signature's first fixed byte; this is a pure speedup, the
    result is identical to trying every offset.
    """
    hits: List[ScanHit] = []
    window = len(sig.elements)
    if window > len(buf):
        return hits
    anchor_index = next(i for i, el in enumerate(sig.elements) if isinstance(el, int))
    anchor_byte = sig.elements[anchor_index]
    pos = buf.find(anchor_byte, anchor_index)
    while pos != -1:
        offset = pos - anchor_index
        if offset + window > len(buf):
            break
        bindings = sig.match_at(buf, offset)
        if bindings is not None:
            hits.append(ScanHit(source=source, offset=offset, bindings=bindings))
        pos = buf.find(anchor_byte, pos + 1)
    return hits


def md5_of(buf: bytes) -> str:
    """Lowercase hex MD5 digest of a byte buffer."""
    return hashlib.md5(buf).hexdigest()


@dataclass
class CorpusReport:
    """Outcome of scanning a set of files for one signature."""

    files_scanned: int
    hits: List[ScanHit]
    checksums: Dict[str, str]
    errors: Dict[str, str]


def scan_corpus(paths: Iterable[str], sig: SignatureTemplate) -> CorpusReport:
    """Scan each file, recording hits, MD5s, and per-file read errors.

    Unreadable files are reported in ``errors`` and do not abort the scan.
    Hits come back ordered by (path, offset) regardless of input order.
    """
    hits: List[ScanHit] = []
    checksums: Dict[str, str] = {}
    errors: Dict[str, str] = {}
    scanned = 0
    for path in paths:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            errors[str(path)] = str(exc)
            continue
        scanned += 1
        checksums[str(path)] = md5_of(data)
        hits.extend(scan_bytes(data, sig, source=str(path)))
    hits.sort(key=lambda h: (h.source, h.offset))
    return CorpusReport(files_scanned=scanned, hits=hits, checksums=checksums, errors=errors)
