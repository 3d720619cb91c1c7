"""
Data loader - reads the catalog data files, checks them against the
manifest digests and validates them into typed records.
"""

import hashlib
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional

import orjson
from pydantic import BaseModel, ValidationError

from .schemas import DATASET_SCHEMAS, ManifestFile
from .shared.config import get_config
from .shared.errors import CorruptData
from .shared.utils import execution_tracker, setup_logging

logger = setup_logging("data_loader")

MANIFEST_FILE = "manifest.json"


def file_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


class CatalogDataLoader:
    """Loads and validates the catalog JSON files"""

    data_files = {
        "table1": "table1.json",
        "table2": "table2.json",
        "table3": "table3.json",
        "descent_cases": "descent_cases.json",
        "kurihara": "kurihara.json",
        "lemma_km": "lemma_km.json",
        "errata": "errata.json",
        "method2": "method2.json",
        "elliptic_quotients": "elliptic_quotients.json",
    }

    def __init__(self, data_dir: Optional[Path] = None, verify_checksums: Optional[bool] = None):
        config = get_config()
        self.data_dir = Path(data_dir) if data_dir is not None else config.data_dir
        self.verify_checksums = config.verify_checksums if verify_checksums is None else verify_checksums
        self._cache: Dict[str, BaseModel] = {}
        self._manifest: Optional[ManifestFile] = None

    def _read(self, filename: str) -> bytes:
        path = self.data_dir / filename
        if not path.exists():
            raise CorruptData(f"data file not found: {path}")
        return path.read_bytes()

    def manifest(self) -> ManifestFile:
        """The checksum manifest, read once"""
        if self._manifest is None:
            try:
                self._manifest = ManifestFile.model_validate(orjson.loads(self._read(MANIFEST_FILE)))
            except (orjson.JSONDecodeError, ValidationError) as e:
                raise CorruptData(f"unreadable manifest: {e}") from e
        return self._manifest

    def _check_digest(self, filename: str, raw: bytes) -> None:
        expected = self.manifest().files.get(filename)
        if expected is None:
            raise CorruptData(f"{filename} is not listed in the manifest")
        actual = file_digest(raw)
        if actual != expected:
            logger.error("checksum_mismatch", file=filename, expected=expected, actual=actual)
            raise CorruptData(f"checksum mismatch for {filename}")

    @execution_tracker("data_loader", "load_data_from_files")
    def load_data_from_files(self) -> Dict[str, BaseModel]:
        """Load every data file; raises CorruptData on the first bad one"""
        for data_type, filename in self.data_files.items():
            if data_type not in self._cache:
                self._cache[data_type] = self._load_single_file(data_type, filename)
        logger.info("data_loaded", files=len(self._cache), data_dir=str(self.data_dir))
        return dict(self._cache)

    def _load_single_file(self, data_type: str, filename: str) -> BaseModel:
        raw = self._read(filename)
        if self.verify_checksums:
            self._check_digest(filename, raw)
        try:
            payload = orjson.loads(raw)
        except orjson.JSONDecodeError as e:
            raise CorruptData(f"{filename} is not valid JSON: {e}") from e
        try:
            record = DATASET_SCHEMAS[data_type].model_validate(payload)
        except ValidationError as e:
            raise CorruptData(f"{filename} failed validation: {e.error_count()} error(s)\n{e}") from e
        logger.debug("file_loaded", data_type=data_type, file=filename)
        return record

    def get_data(self, data_type: str) -> BaseModel:
        """One dataset by name, loaded on first access"""
        if data_type not in self.data_files:
            raise KeyError(f"unknown dataset {data_type!r}")
        if data_type not in self._cache:
            self._cache[data_type] = self._load_single_file(data_type, self.data_files[data_type])
        return self._cache[data_type]

    def build_manifest(self) -> Dict[str, object]:
        """Manifest contents for the files currently on disk"""
        return {
            "version": 1,
            "algorithm": "sha256",
            "files": {name: file_digest(self._read(name)) for name in self.data_files.values()},
        }


@lru_cache(maxsize=1)
def get_data_loader() -> CatalogDataLoader:
    """Process-wide loader over the configured data directory"""
    return CatalogDataLoader()
