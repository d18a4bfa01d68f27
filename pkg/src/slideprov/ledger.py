"""Deterministic in-process slide registry with development-chain behavior.

Replicates the registry contract's observable semantics (validated ids,
reject-on-duplicate, zeroed-struct reads) plus the execution model of a
single-node dev chain: one block sealed per transaction, monotonically
increasing modeled timestamps, a multiplicative base-fee adjustment per
block, and a parametric near-constant gas model per registration.

Fee arithmetic uses exact rationals so replays are bit-identical across
platforms; nothing here touches a real network.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .commitment import StorageKey, storage_key
from .errors import AlreadyRegistered, CorruptLedgerFile, InvalidLecture, InvalidSlide
from .keccak import keccak256
from .records import SlideKey

LEDGER_FORMAT = "slideprov-ledger/v1"

# Empirical per-registration gas for the canonical input shape
# (66-char hash, 30-char uri) under the default GasConfig.
CANONICAL_REGISTRATION_GAS = 231_430

GWEI = Fraction(1, 10**9)  # ETH per gwei

_ACCOUNT_COUNT = 20


@lru_cache(maxsize=1)
def _dev_account_set() -> tuple[bytes, ...]:
    return tuple(
        keccak256(f"slideprov dev account {i}".encode())[12:] for i in range(_ACCOUNT_COUNT)
    )


def dev_accounts() -> list[bytes]:
    """The fixed set of 20 deterministic 20-byte account identifiers."""
    return list(_dev_account_set())


def account_hex(account: bytes) -> str:
    return "0x" + account.hex()


def _as_fraction(value: object) -> Fraction:
    # floats go through str() so 0.77 becomes 77/100, not its binary expansion
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)  # type: ignore[arg-type]


@dataclass(frozen=True)
class GasConfig:
    """Linear calldata gas model, calibrated to the empirical constant.

    gas = intrinsic + 16*nonzero_bytes + 4*zero_bytes + exec_base, where
    calldata is modeled as a 4-byte selector, six 32-byte overhead words
    (four head words plus one length word per string, each counted as one
    nonzero and 31 zero bytes), the UTF-8 string contents (nonzero), and
    their pad-to-32 zero bytes.  exec_base is solved so the canonical
    registration costs exactly CANONICAL_REGISTRATION_GAS.
    """

    intrinsic: int = 21_000
    nonzero_byte: int = 16
    zero_byte: int = 4
    exec_base: int = 207_862


_SELECTOR_BYTES = 4
_OVERHEAD_WORDS = 6  # 4 head words + 2 string length words


def estimate_gas(slide_hash: str, uri: str, cfg: GasConfig | None = None) -> int:
    """Gas for registering the exact texts ``slide_hash`` and ``uri``."""
    cfg = cfg or GasConfig()
    h_len = len(slide_hash.encode("utf-8"))
    u_len = len(uri.encode("utf-8"))
    nonzero = h_len + u_len + _SELECTOR_BYTES + _OVERHEAD_WORDS
    zero = (-h_len) % 32 + (-u_len) % 32 + _OVERHEAD_WORDS * 31
    return cfg.intrinsic + cfg.nonzero_byte * nonzero + cfg.zero_byte * zero + cfg.exec_base


WEI_PER_GWEI = 10**9


@dataclass(frozen=True)
class FeeConfig:
    """Chain fee parameters.

    Base fee and tip are held to 1-wei resolution and the per-block
    adjustment uses integer floor division, matching on-chain fee
    arithmetic.  Defaults are calibrated so that per-registration cost
    starts near $1.23, decays toward the $0.69 tip-only floor, and a
    1,117-slide batch lands near $780 total at $3000/ETH.
    """

    initial_base_fee: Fraction = Fraction(77, 100)  # gwei
    priority_tip: Fraction = Fraction(1)            # gwei
    target_gas: int = 15_000_000
    decay_denominator: int = 8
    eth_usd_rate: Fraction = Fraction(3000)
    block_interval: int = 1                          # seconds
    genesis_time: int = 0

    @classmethod
    def create(
        cls,
        initial_base_fee: object = Fraction(77, 100),
        priority_tip: object = Fraction(1),
        target_gas: int = 15_000_000,
        decay_denominator: int = 8,
        eth_usd_rate: object = Fraction(3000),
        block_interval: int = 1,
        genesis_time: int = 0,
    ) -> "FeeConfig":
        """Build a FeeConfig coercing numeric-ish inputs to exact rationals."""
        cfg = cls(
            initial_base_fee=_as_fraction(initial_base_fee),
            priority_tip=_as_fraction(priority_tip),
            target_gas=int(target_gas),
            decay_denominator=int(decay_denominator),
            eth_usd_rate=_as_fraction(eth_usd_rate),
            block_interval=int(block_interval),
            genesis_time=int(genesis_time),
        )
        if cfg.initial_base_fee_wei < 1 or cfg.priority_tip_wei < 1:
            raise ValueError("fees must be at least 1 wei")
        if cfg.target_gas <= 0 or cfg.decay_denominator <= 0 or cfg.block_interval <= 0:
            raise ValueError("chain parameters must be positive")
        if cfg.eth_usd_rate <= 0:
            raise ValueError("eth_usd_rate must be positive")
        return cfg

    @property
    def initial_base_fee_wei(self) -> int:
        return int(self.initial_base_fee * WEI_PER_GWEI)

    @property
    def priority_tip_wei(self) -> int:
        return int(self.priority_tip * WEI_PER_GWEI)

    def next_base_fee_wei(self, base_fee_wei: int, gas_used: int) -> int:
        """Base fee (wei) of the following block given this block's gas.

        base' = base * (1 + (gas_used - target) / (denominator * target)),
        floored to whole wei; under-target blocks decay the base fee
        toward zero.
        """
        t = self.target_gas
        return base_fee_wei * ((self.decay_denominator - 1) * t + gas_used) // (
            self.decay_denominator * t
        )


@dataclass(frozen=True)
class SlideRecord:
    """Stored registry entry; timestamp > 0 once registered."""

    lecture_id: int
    slide_id: int
    slide_hash: str
    uri: str
    timestamp: int
    registrant: bytes


@dataclass(frozen=True)
class SlideRegisteredEvent:
    lecture_id: int
    slide_id: int
    slide_hash: str
    uri: str
    registrant: bytes
    timestamp: int


@dataclass(frozen=True)
class RegistrationReceipt:
    lecture_id: int
    slide_id: int
    gas_used: int
    effective_gas_price: Fraction  # gwei
    block_number: int
    timestamp: int
    tx_cost_eth: Fraction
    tx_cost_usd: Fraction


@dataclass
class BatchSummary:
    attempted: int = 0
    registered: int = 0
    failures: list[tuple[SlideKey, str]] = field(default_factory=list)
    min_gas: int = 0
    max_gas: int = 0
    total_gas: int = 0
    total_cost_eth: Fraction = Fraction(0)
    total_cost_usd: Fraction = Fraction(0)
    elapsed_seconds: int = 0
    throughput: float = 0.0

    @property
    def mean_gas(self) -> Fraction:
        return Fraction(self.total_gas, self.registered) if self.registered else Fraction(0)


def canonical_uri(key: SlideKey) -> str:
    """Canonical off-chain URI recorded alongside a commitment."""
    return f"Lecture {key.lecture_id}/Slide{key.slide_id}.json"


class Ledger:
    """Append-only slide registry with single-writer mutation.

    Reads never mutate; registrations must be serialized by the caller
    (the CLI and batch helpers do).  ``wall_clock=True`` stamps blocks
    with real time instead of modeled genesis + i * interval.
    """

    def __init__(
        self,
        fee_config: FeeConfig | None = None,
        gas_config: GasConfig | None = None,
        wall_clock: bool = False,
    ) -> None:
        self.fee_config = fee_config or FeeConfig()
        self.gas_config = gas_config or GasConfig()
        self.wall_clock = wall_clock
        self.records: dict[StorageKey, SlideRecord] = {}
        self.events: list[SlideRegisteredEvent] = []
        self.next_block_number = 1
        self.next_timestamp = self.fee_config.genesis_time + self.fee_config.block_interval
        self.base_fee_wei = self.fee_config.initial_base_fee_wei
        self._last_timestamp = self.fee_config.genesis_time

    @property
    def base_fee(self) -> Fraction:
        """Current base fee in gwei."""
        return Fraction(self.base_fee_wei, WEI_PER_GWEI)

    # -- reads ---------------------------------------------------------

    def get_slide(self, key: SlideKey) -> SlideRecord | None:
        return self.records.get(storage_key(key))

    def is_registered(self, key: SlideKey) -> bool:
        return storage_key(key) in self.records

    # -- writes ----------------------------------------------------------

    def _block_timestamp(self) -> int:
        if self.wall_clock:
            return max(int(time.time()), self._last_timestamp + 1)
        return self.next_timestamp

    def register_slide(
        self,
        key: SlideKey,
        slide_hash: str,
        uri: str,
        registrant: bytes | None = None,
    ) -> RegistrationReceipt:
        """Register one slide, seal one block, and return the receipt.

        Raises InvalidLecture/InvalidSlide for non-positive ids and
        AlreadyRegistered when the storage key exists; failed calls leave
        the state untouched.
        """
        if key.lecture_id < 1:
            raise InvalidLecture("lectureId must be > 0")
        if key.slide_id < 1:
            raise InvalidSlide("slideId must be > 0")
        skey = storage_key(key)
        if skey in self.records:
            raise AlreadyRegistered(f"slide already registered: {key}")
        if registrant is None:
            registrant = _dev_account_set()[0]
        if not isinstance(registrant, bytes) or len(registrant) != 20:
            raise ValueError("registrant must be a 20-byte account identifier")

        gas_used = estimate_gas(slide_hash, uri, self.gas_config)
        block_number = self.next_block_number
        timestamp = self._block_timestamp()
        price = Fraction(self.base_fee_wei + self.fee_config.priority_tip_wei, WEI_PER_GWEI)

        record = SlideRecord(key.lecture_id, key.slide_id, slide_hash, uri, timestamp, registrant)
        self.records[skey] = record
        self.events.append(
            SlideRegisteredEvent(key.lecture_id, key.slide_id, slide_hash, uri, registrant, timestamp)
        )

        # seal the block and move the chain cursor
        self.next_block_number += 1
        self.next_timestamp = timestamp + self.fee_config.block_interval
        self._last_timestamp = timestamp
        self.base_fee_wei = self.fee_config.next_base_fee_wei(self.base_fee_wei, gas_used)

        cost_eth = gas_used * price * GWEI
        return RegistrationReceipt(
            lecture_id=key.lecture_id,
            slide_id=key.slide_id,
            gas_used=gas_used,
            effective_gas_price=price,
            block_number=block_number,
            timestamp=timestamp,
            tx_cost_eth=cost_eth,
            tx_cost_usd=cost_eth * self.fee_config.eth_usd_rate,
        )

    def batch_register(
        self,
        items: list[tuple[SlideKey, str, str]],
        registrant: bytes | None = None,
        halt_on_error: bool = False,
    ) -> tuple[list[RegistrationReceipt], BatchSummary]:
        """Register (key, slide_hash, uri) items sequentially in input order."""
        receipts: list[RegistrationReceipt] = []
        summary = BatchSummary(attempted=len(items))
        for key, slide_hash, uri in items:
            try:
                receipts.append(self.register_slide(key, slide_hash, uri, registrant))
            except (InvalidLecture, InvalidSlide, AlreadyRegistered) as exc:
                if halt_on_error:
                    raise
                summary.failures.append((key, str(exc)))

        summary.registered = len(receipts)
        if receipts:
            gases = [r.gas_used for r in receipts]
            summary.min_gas = min(gases)
            summary.max_gas = max(gases)
            summary.total_gas = sum(gases)
            summary.total_cost_eth = sum((r.tx_cost_eth for r in receipts), Fraction(0))
            summary.total_cost_usd = sum((r.tx_cost_usd for r in receipts), Fraction(0))
            interval = self.fee_config.block_interval
            summary.elapsed_seconds = (len(receipts) - 1) * interval
            summary.throughput = len(receipts) / max(summary.elapsed_seconds, interval)
        return receipts, summary

    # -- persistence -----------------------------------------------------

    def to_document(self) -> dict:
        fee = self.fee_config
        gas = self.gas_config
        return {
            "format": LEDGER_FORMAT,
            "chain": {
                "next_block_number": self.next_block_number,
                "next_timestamp": self.next_timestamp,
                "last_timestamp": self._last_timestamp,
                "base_fee_wei": self.base_fee_wei,
                "wall_clock": self.wall_clock,
            },
            "fee_config": {
                "initial_base_fee_gwei": str(fee.initial_base_fee),
                "priority_tip_gwei": str(fee.priority_tip),
                "target_gas": fee.target_gas,
                "decay_denominator": fee.decay_denominator,
                "eth_usd_rate": str(fee.eth_usd_rate),
                "block_interval": fee.block_interval,
                "genesis_time": fee.genesis_time,
            },
            "gas_config": {
                "intrinsic": gas.intrinsic,
                "nonzero_byte": gas.nonzero_byte,
                "zero_byte": gas.zero_byte,
                "exec_base": gas.exec_base,
            },
            "records": [
                {
                    "lectureId": r.lecture_id,
                    "slideId": r.slide_id,
                    "slideHash": r.slide_hash,
                    "uri": r.uri,
                    "timestamp": r.timestamp,
                    "registrant": account_hex(r.registrant),
                }
                for r in sorted(self.records.values(), key=lambda r: (r.lecture_id, r.slide_id))
            ],
            "events": [
                {
                    "lectureId": e.lecture_id,
                    "slideId": e.slide_id,
                    "slideHash": e.slide_hash,
                    "uri": e.uri,
                    "registrant": account_hex(e.registrant),
                    "timestamp": e.timestamp,
                }
                for e in self.events
            ],
        }

    def export_bytes(self) -> bytes:
        """Canonical UTF-8 JSON export; identical states give identical bytes."""
        doc = self.to_document()
        return (json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")

    @classmethod
    def from_document(cls, doc: object) -> "Ledger":
        if not isinstance(doc, dict) or doc.get("format") != LEDGER_FORMAT:
            raise CorruptLedgerFile("unrecognized ledger format")
        try:
            fee_doc = doc["fee_config"]
            gas_doc = doc["gas_config"]
            chain = doc["chain"]
            fee = FeeConfig(
                initial_base_fee=Fraction(fee_doc["initial_base_fee_gwei"]),
                priority_tip=Fraction(fee_doc["priority_tip_gwei"]),
                target_gas=int(fee_doc["target_gas"]),
                decay_denominator=int(fee_doc["decay_denominator"]),
                eth_usd_rate=Fraction(fee_doc["eth_usd_rate"]),
                block_interval=int(fee_doc["block_interval"]),
                genesis_time=int(fee_doc["genesis_time"]),
            )
            gas = GasConfig(
                intrinsic=int(gas_doc["intrinsic"]),
                nonzero_byte=int(gas_doc["nonzero_byte"]),
                zero_byte=int(gas_doc["zero_byte"]),
                exec_base=int(gas_doc["exec_base"]),
            )
            ledger = cls(fee, gas, wall_clock=bool(chain["wall_clock"]))
            ledger.next_block_number = int(chain["next_block_number"])
            ledger.next_timestamp = int(chain["next_timestamp"])
            ledger._last_timestamp = int(chain["last_timestamp"])
            ledger.base_fee_wei = int(chain["base_fee_wei"])
            for entry in doc["records"]:
                record = SlideRecord(
                    lecture_id=int(entry["lectureId"]),
                    slide_id=int(entry["slideId"]),
                    slide_hash=str(entry["slideHash"]),
                    uri=str(entry["uri"]),
                    timestamp=int(entry["timestamp"]),
                    registrant=_parse_account(entry["registrant"]),
                )
                if record.timestamp <= 0:
                    raise CorruptLedgerFile("registered record with non-positive timestamp")
                key = SlideKey(record.lecture_id, record.slide_id)
                ledger.records[storage_key(key)] = record
            for entry in doc["events"]:
                ledger.events.append(
                    SlideRegisteredEvent(
                        lecture_id=int(entry["lectureId"]),
                        slide_id=int(entry["slideId"]),
                        slide_hash=str(entry["slideHash"]),
                        uri=str(entry["uri"]),
                        registrant=_parse_account(entry["registrant"]),
                        timestamp=int(entry["timestamp"]),
                    )
                )
        except CorruptLedgerFile:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CorruptLedgerFile(f"ledger document does not match schema: {exc}") from exc
        return ledger

    def save(self, path: Path | str) -> None:
        from .reports import _atomic_write

        _atomic_write(Path(path), self.export_bytes())

    @classmethod
    def load(cls, path: Path | str) -> "Ledger":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptLedgerFile(f"cannot read ledger file {path}: {exc}") from exc
        return cls.from_document(doc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ledger):
            return NotImplemented
        return (
            self.fee_config == other.fee_config
            and self.gas_config == other.gas_config
            and self.wall_clock == other.wall_clock
            and self.records == other.records
            and self.events == other.events
            and self.next_block_number == other.next_block_number
            and self.next_timestamp == other.next_timestamp
            and self.base_fee_wei == other.base_fee_wei
        )


def _parse_account(text: object) -> bytes:
    if not isinstance(text, str) or not text.startswith("0x") or len(text) != 42:
        raise CorruptLedgerFile(f"bad account identifier: {text!r}")
    return bytes.fromhex(text[2:])
