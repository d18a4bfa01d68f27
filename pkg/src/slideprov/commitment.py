"""Keccak-256 commitments over canonical record bytes and storage keys.

The registry stores commitments as 0x-prefixed lowercase hex text;
storage keys hash the packed 64-byte (lecture_id, slide_id) encoding,
matching ``keccak256(abi.encodePacked(uint256, uint256))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .keccak import keccak256
from .records import ProvenanceRecord, SlideKey, canonical_bytes

# A storage key is exactly 32 bytes.
StorageKey = bytes

_HEX_COMMITMENT = re.compile(r"^0x[0-9a-fA-F]{64}$")


@dataclass(frozen=True)
class Commitment:
    """32-byte Keccak-256 digest with its canonical hex form."""

    digest: bytes

    def __post_init__(self) -> None:
        if len(self.digest) != 32:
            raise ValueError("commitment digest must be exactly 32 bytes")

    @property
    def hex(self) -> str:
        return "0x" + self.digest.hex()

    def matches_hex(self, text: str) -> bool:
        """Case-insensitive comparison against stored hex text."""
        return isinstance(text, str) and text.lower() == self.hex


def commit(data: bytes) -> Commitment:
    """Commitment over an arbitrary byte sequence (empty allowed)."""
    return Commitment(keccak256(data))


def commit_record(record: ProvenanceRecord) -> Commitment:
    """Commitment over a record's canonical bytes."""
    return commit(canonical_bytes(record))


def parse_commitment(text: str) -> Commitment:
    """Parse 0x-hex commitment text (either case) back to a Commitment."""
    if not isinstance(text, str) or not _HEX_COMMITMENT.match(text):
        raise ValueError(f"not a 0x-prefixed 32-byte hex commitment: {text!r}")
    return Commitment(bytes.fromhex(text[2:]))


def storage_key(key: SlideKey) -> StorageKey:
    """Keccak-256 over lecture_id and slide_id packed as 32-byte big-endian ints."""
    packed = key.lecture_id.to_bytes(32, "big") + key.slide_id.to_bytes(32, "big")
    return keccak256(packed)
